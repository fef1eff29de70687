"""Command-line front end: spectra, verification runs and level tables.

Output is JSON (schema_version "1") or CSV on stdout, diagnostics go to
stderr. Exit codes: 0 success, 1 usage or validation error, 2 a
verification fell outside tolerance. Every float is written with 17
significant digits so the output round-trips bit for bit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__
from .analytic_spectra import energy, j_r_closed_form, j_theta_closed_form, solve_level
from .contour_numerics import NotApplicable, level_contour_actions
from .errors import QHJError
from .potentials import (
    Hartmann,
    PotentialSpec,
    QuantumNumbers,
    UnitSystem,
    a_from_angular_quantization,
    b_from_m,
    mu_squared,
    potential_from_name,
)
from .residue_engine import assemble_j_r, assemble_j_theta
from .schrodinger_oracle import full_level_check

SCHEMA_VERSION = "1"
CSV_HEADER = ("n_r", "n_theta", "m", "a", "b", "l_squared", "energy")

CONTOUR_ATOL = 1e-6
ORACLE_RTOL = 1e-6
RESIDUE_RTOL = 1e-12

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --- serialization ----------------------------------------------------------


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return "%.17g" % x


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written as %.17g."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --- argument helpers -------------------------------------------------------


def parse_range(text: str) -> List[int]:
    """'2' -> [2], '0:2' -> [0, 1, 2] (inclusive), '0,3' -> [0, 3]."""
    values: List[int] = []
    try:
        for part in text.split(","):
            if ":" in part:
                lo, hi = (int(s) for s in part.split(":"))
                values.extend(range(lo, hi + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise UsageError(f"bad range {text!r}; use N, LO:HI or comma lists")
    if not values:
        raise UsageError(f"range {text!r} is empty")
    return sorted(set(values))


def _potential(args) -> PotentialSpec:
    return potential_from_name(args.potential, args.alpha, args.beta)


def _levels_from_ranges(args) -> List[QuantumNumbers]:
    levels = [
        QuantumNumbers(nr, nt, m)
        for nr in parse_range(args.nr)
        for nt in parse_range(args.ntheta)
        for m in parse_range(args.m)
        if args.max_sum is None or nr + nt <= args.max_sum
    ]
    if not levels:
        raise UsageError("the level selection is empty")
    return levels


def enumerate_levels(potential: PotentialSpec, units: UnitSystem, max_energy: float,
                     min_energy: float = -math.inf) -> List[QuantumNumbers]:
    """All (n_r, n_theta, m >= 0) with min_energy <= E <= max_energy.

    The cutoff must make the set finite: any value for the ring oscillator,
    a negative one for the Hartmann potential (its levels accumulate at 0).
    """
    hbar = units.hbar
    if isinstance(potential, Hartmann):
        if not max_energy < 0:
            raise UsageError("Hartmann levels accumulate at E = 0; --max-energy must be negative")
        # E <= max  <=>  n_r + n_theta + mu + 1 <= |alpha| / (2 hbar sqrt(-max))
        bound = abs(potential.alpha) / (2 * hbar * math.sqrt(-max_energy))
    else:
        # E <= max  <=>  2 n_r + n_theta + mu + 3/2 <= max / (2 hbar sqrt(alpha))
        bound = max_energy / (2 * hbar * math.sqrt(potential.alpha))
    found = []
    m = 0
    while math.sqrt(mu_squared(m, potential.beta, units)) <= bound:
        for n_r in range(int(bound) + 1):
            for n_t in range(int(bound) + 1):
                qn = QuantumNumbers(n_r, n_t, m)
                e = energy(potential, qn, units)
                if min_energy <= e <= max_energy:
                    found.append((e, (n_r, n_t, m), qn))
        m += 1
    found.sort(key=lambda item: (item[0], item[1]))
    return [qn for _, _, qn in found]


# --- records ----------------------------------------------------------------


def level_row(potential: PotentialSpec, qn: QuantumNumbers, units: UnitSystem) -> Dict:
    record = solve_level(potential, qn, units)
    return {
        "n_r": qn.n_r,
        "n_theta": qn.n_theta,
        "m": qn.m,
        "a": record.constants.a,
        "b": record.constants.b,
        "l_squared": record.l_squared,
        "energy": record.energy,
        "j_theta": record.j_theta,
        "j_r": record.j_r,
    }


def output_record(potential: PotentialSpec, units: UnitSystem, levels: List[Dict], **extra) -> Dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "potential": {"name": potential.name, "alpha": float(potential.alpha), "beta": float(potential.beta)},
        "hbar": float(units.hbar),
        "units": UnitSystem.mass_convention,
        "levels": levels,
    }
    out.update(extra)
    return out


def _contour_leg(estimate, expected: float) -> Dict:
    if isinstance(estimate, NotApplicable):
        return {"status": "not-applicable", "reason": estimate.reason}
    value = estimate.value
    abs_err = abs(value.real - expected)
    ok = estimate.converged and abs_err < CONTOUR_ATOL and abs(value.imag) < 1e-8
    return {
        "j_re": value.real,
        "j_im": value.imag,
        "expected": expected,
        "abs_err": abs_err,
        "converged": estimate.converged,
        "n_samples": estimate.n_samples,
        "ok": ok,
    }


def verify_contour(potential, qn, units, e_check) -> Dict:
    radial, angular = level_contour_actions(potential, qn, units, e_check)
    hbar = units.hbar
    block = {"radial": _contour_leg(radial, hbar * qn.n_r),
             "angular": _contour_leg(angular, hbar * qn.n_theta)}
    block["ok"] = all(leg.get("ok", True) for leg in block.values())
    return block


def verify_oracle(potential, qn, units, e_check) -> Dict:
    cmp = full_level_check(potential, qn, units, tolerance=ORACLE_RTOL, energy_override=e_check)
    return {
        "e_analytic": cmp.e_analytic,
        "e_numeric": cmp.e_numeric,
        "rel_err": cmp.rel_err,
        "l2_analytic": cmp.l2_analytic,
        "l2_numeric": cmp.l2_numeric,
        "l2_rel_err": cmp.l2_rel_err,
        "flags": list(cmp.flags),
        "ok": cmp.ok,
    }


def _rel(x: float, y: float, scale: float) -> float:
    return abs(x - y) / max(abs(y), scale)


def verify_residues(potential, qn, units, e_check) -> Dict:
    """Assembled residues against the closed forms, and both against hbar*n."""
    hbar = units.hbar
    a = a_from_angular_quantization(qn.n_theta, qn.m, potential.beta, units)
    b = b_from_m(qn.m, units)
    jt_res = assemble_j_theta(a, b, potential.beta, units)
    jt_cf = j_theta_closed_form(a, b, potential.beta, units)
    jr_res = assemble_j_r(potential, e_check, a, units)
    jr_cf = j_r_closed_form(potential, e_check, a, units)
    # the actions are differences of O(scale) terms; measure errors on that scale
    scale = max(hbar, math.sqrt(a + hbar * hbar / 4))
    if isinstance(potential, Hartmann):
        r_scale = max(scale, abs(potential.alpha) / (2 * math.sqrt(-e_check)))
    else:
        r_scale = max(scale, e_check / (2 * math.sqrt(potential.alpha)))
    errs = {
        "j_theta_rel_err": _rel(jt_res, jt_cf, scale),
        "j_r_rel_err": _rel(jr_res, jr_cf, r_scale),
        "j_theta_quantization_err": abs(jt_res - hbar * qn.n_theta) / scale,
        "j_r_quantization_err": abs(jr_res - hbar * qn.n_r) / r_scale,
    }
    out = {"j_theta_assembled": jt_res, "j_theta_closed_form": jt_cf,
           "j_r_assembled": jr_res, "j_r_closed_form": jr_cf}
    out.update(errs)
    out["ok"] = all(v < RESIDUE_RTOL for v in errs.values())
    return out


VERIFIERS = {"contour": verify_contour, "oracle": verify_oracle, "residues": verify_residues}


# --- commands ---------------------------------------------------------------


def cmd_spectrum(args, units: UnitSystem, out) -> int:
    potential = _potential(args)
    selectors = (args.nr, args.ntheta, args.m)
    if all(s is not None for s in selectors):
        levels = [QuantumNumbers(args.nr, args.ntheta, args.m)]
    elif any(s is not None for s in selectors):
        raise UsageError("give all of --nr, --ntheta, --m, or none together with --max-energy")
    else:
        if args.max_energy is None:
            raise UsageError("enumeration needs --max-energy")
        min_energy = -math.inf if args.min_energy is None else args.min_energy
        levels = enumerate_levels(potential, units, args.max_energy, min_energy)
    rows = [level_row(potential, qn, units) for qn in levels]
    out.write(dumps(output_record(potential, units, rows)) + "\n")
    return EXIT_OK


def cmd_verify(args, units: UnitSystem, out) -> int:
    potential = _potential(args)
    verifier = VERIFIERS[args.mode]
    rows = []
    all_ok = True
    for qn in _levels_from_ranges(args):
        row = level_row(potential, qn, units)
        e_check = row["energy"] * (1.0 + args.perturb_energy)
        block = verifier(potential, qn, units, e_check)
        row["verification"] = {args.mode: block}
        all_ok &= block["ok"]
        rows.append(row)
    extra = {"mode": args.mode, "ok": all_ok}
    if args.perturb_energy:
        extra["perturb_energy"] = args.perturb_energy
    out.write(dumps(output_record(potential, units, rows, **extra)) + "\n")
    if not all_ok:
        print(f"verification failed ({args.mode})", file=sys.stderr)
    return EXIT_OK if all_ok else EXIT_VERIFY


def cmd_table(args, units: UnitSystem, out) -> int:
    potential = _potential(args)
    rows = [level_row(potential, qn, units) for qn in _levels_from_ranges(args)]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([row["n_r"], row["n_theta"], row["m"]]
                            + [format_float(row[k]) for k in CSV_HEADER[3:]])
        out.write(buf.getvalue())
    else:
        slim = [{k: row[k] for k in CSV_HEADER} for row in rows]
        out.write(dumps(output_record(potential, units, slim)) + "\n")
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qhj-spectra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--hbar", type=float, default=1.0, help="value of hbar (units 2mu = 1)")
    # repeated on each subcommand so it can follow the subcommand name
    common = _Parser(add_help=False)
    common.add_argument("--hbar", type=float, default=argparse.SUPPRESS)
    common.add_argument("--alpha", type=float, required=True,
                        help="coupling; < 0 for hartmann, > 0 for ring")
    common.add_argument("--beta", type=float, default=0.0, help="strength of beta/(r sin theta)**2, >= 0")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", parents=[common], help="energy of one level or all levels in a window")
    sp.add_argument("potential", choices=("hartmann", "ring"))
    sp.add_argument("--nr", type=int)
    sp.add_argument("--ntheta", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--max-energy", type=float, help="enumerate levels with E <= this")
    sp.add_argument("--min-energy", type=float, help="and E >= this")
    sp.set_defaults(func=cmd_spectrum)

    ranges = _Parser(add_help=False)
    ranges.add_argument("--nr", default="0", help="N, LO:HI or comma list")
    ranges.add_argument("--ntheta", default="0")
    ranges.add_argument("--m", default="0")
    ranges.add_argument("--max-sum", type=int, help="keep only n_r + n_theta <= this")

    vp = sub.add_parser("verify", parents=[common, ranges], help="check levels numerically")
    vp.add_argument("potential", choices=("hartmann", "ring"))
    vp.add_argument("--mode", choices=tuple(VERIFIERS), default="oracle")
    vp.add_argument("--perturb-energy", type=float, default=0.0, metavar="REL",
                    help="test harness: scale the checked energy by 1 + REL")
    vp.set_defaults(func=cmd_verify)

    tp = sub.add_parser("table", parents=[common, ranges], help="tabulate levels as JSON or CSV")
    tp.add_argument("--potential", choices=("hartmann", "ring"), required=True)
    tp.add_argument("--format", choices=("json", "csv"), default="json")
    tp.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        units = UnitSystem(args.hbar)
        return args.func(args, units, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QHJError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
