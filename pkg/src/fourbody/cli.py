"""Command-line front end (``fourbody``)."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import bo, reduced, spectra
from .config import MAX_N, SUITE_NAMES, VARIANT_CHOICES, RunConfig, load_config
from .errors import BadLimit, ConfigError, FlagViolation, FourBodyError, NegativeRoot, NoConvergence
from .geometry import (cayley_menger_v4_squared, cometric, det_identity_check, domain_check,
                       gauge_factor_and_veff, v4_squared)
from .exact import det
from .oscillator import (SpecialModel, build_h_es, check_limit_gauge,
                         forward_spring_map, ground_energy_from_map, inverse_spring_map,
                         special_ground_energy)
from .report import FAIL, dumps, jsonable, rational_str
from .suites import rand_interior_point, run_suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_COMPUTE = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2) + "\n"


def _require_json(cfg: RunConfig, command: str) -> None:
    if cfg.format != "json":
        raise ConfigError(f"{command} writes JSON only; csv is available for spectrum tables")


# ------------------------------------------------------------------ commands

def cmd_verify(cfg: RunConfig) -> int:
    _require_json(cfg, "verify")
    checks = run_suites(cfg)
    _emit(dumps(checks), cfg.out)
    return EXIT_FAIL if any(c.status == FAIL for c in checks) else EXIT_OK


def _spectrum_operator(cfg: RunConfig):
    gp, d = cfg.gauge_params, cfg.d
    if cfg.variant in ("generic", "equal"):
        mc = cfg.mass_config
        return build_h_es(mc, gp, d), ground_energy_from_map(mc, gp, d), "n"
    model = cfg.model
    if len(model.classical) != len(model.classical_vars):
        model = SpecialModel.with_classical(cfg.variant, cfg.light_mass, [0] * len(model.classical_vars))
    try:
        check_limit_gauge(model, gp)
    except BadLimit as exc:
        raise ConfigError(str(exc)) from None
    op = spectra.special_operator(model, gp, d)
    point = [model.classical_values().get(k, 0) for k in range(6)]
    return op, special_ground_energy(model, gp, d).eval(point), "k"


def _spectrum_rows(cfg: RunConfig) -> tuple[list[str], list[list]]:
    if cfg.representation == "P":
        header = ["N", "energy_numerator", "energy_denominator", "multiplicity", "laguerre_residual_zero"]
        rows = []
        for lvl in reduced.es_spectrum(cfg.d, cfg.omega, cfg.N):
            rows.append([lvl.N, lvl.energy.numerator, lvl.energy.denominator, 1, lvl.ok])
        return header, rows
    op, e0, letter = _spectrum_operator(cfg)
    table = spectra.spectrum(op, cfg.N, charpoly_check=False)
    labels = [f"{letter}{k}" for k in range(1, op.nvars + 1)]
    exact = all(isinstance(e, Fraction) for e in table.energies)
    if exact:
        header = labels + ["energy_numerator", "energy_denominator", "total_numerator", "total_denominator", "multiplicity"]
    else:
        header = labels + ["energy", "residual", "total", "multiplicity"]
    rows = []
    for lvl in table.levels:
        q = list(lvl.quantum_numbers) if lvl.quantum_numbers else [""] * op.nvars
        if exact:
            total = e0 + lvl.energy
            rows.append(q + [lvl.energy.numerator, lvl.energy.denominator, total.numerator, total.denominator,
                             lvl.multiplicity])
        else:
            rows.append(q + [repr(float(lvl.energy)), repr(table.frequencies.residual),
                             repr(float(e0) + float(lvl.energy)), lvl.multiplicity])
    return header, rows


def cmd_spectrum(cfg: RunConfig) -> int:
    header, rows = _spectrum_rows(cfg)
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        _emit(buf.getvalue(), cfg.out)
    else:
        _emit(_json({"variant": cfg.variant, "representation": cfg.representation, "N": cfg.N,
                     "columns": header, "rows": rows}), cfg.out)
    return EXIT_OK


def cmd_springs(cfg: RunConfig) -> int:
    _require_json(cfg, "springs")
    mc = cfg.mass_config
    if cfg.direction == "forward":
        nu = forward_spring_map(mc, cfg.gauge_params)
        _emit(_json({"direction": "forward", "masses": mc.to_strings(),
                     "nu": {k: rational_str(v) for k, v in nu.as_dict().items()}}), cfg.out)
        return EXIT_OK
    if cfg.nu is None:
        raise ConfigError("the inverse map needs 'nu' in the config")
    base = {"direction": "inverse", "masses": mc.to_strings()}
    try:
        res = inverse_spring_map(mc, list(cfg.nu), cfg.omega,
                                 seed=[float(g) if g > 0 else 1.0 for g in cfg.gauge_params.values])
    except NegativeRoot as exc:
        _emit(_json({**base, "verdict": "NegativeRoot", "root": list(map(float, exc.root)),
                     "residual": exc.residual, "positive": False}), cfg.out)
        return EXIT_OK
    except NoConvergence as exc:
        last = None if exc.last_iterate is None else [float(v) for v in exc.last_iterate]
        _emit(_json({**base, "verdict": "NoConvergence", "last_iterate": last, "residual": exc.residual}), cfg.out)
        return EXIT_COMPUTE
    names = ("a", "b", "c", "e", "f", "g")
    _emit(_json({**base, "verdict": "converged", "gauge": dict(zip(names, map(float, res.gauge))),
                 "residual": res.residual, "iterations": res.iterations, "positive": res.positive}), cfg.out)
    return EXIT_OK


def cmd_geometry(cfg: RunConfig) -> int:
    _require_json(cfg, "geometry")
    x = list(cfg.rho) if cfg.rho is not None else rand_interior_point(random.Random(f"{cfg.seed}:geometry-point"))
    out = {"rho": x, "domain": domain_check(x), "v4_squared": v4_squared(x),
           "cayley_menger_v4_squared": cayley_menger_v4_squared(x)}
    mc = cfg.mass_config
    out["masses"] = mc.to_strings()
    out["cometric_det"] = det(cometric(mc, x))
    if mc.is_finite:
        chk = det_identity_check(mc, x)
        out["factorized_det"] = chk.rhs
        out["det_identity_holds"] = chk.equal
        if out["domain"] == "interior":
            cmp = gauge_factor_and_veff(mc, cfg.d, x)
            out["veff"] = {"chain_rule": cmp.oracle, "readings": cmp.readings, "matching": cmp.matching()}
    _emit(_json(out), cfg.out)
    return EXIT_OK


def cmd_prep(cfg: RunConfig) -> int:
    """Write a complete config file (defaults merged with the given flags)."""
    _require_json(cfg, "prep")
    data = cfg.to_json()
    data.pop("out")
    _emit(json.dumps(data, indent=2) + "\n", cfg.out)
    return EXIT_OK


def cmd_bo(cfg: RunConfig) -> int:
    _require_json(cfg, "bo")
    gp = cfg.gauge_params
    if gp.a <= 0:
        raise ConfigError("the Born-Oppenheimer comparison needs a > 0")
    exp = bo.bo_gap_expansion_check(gp, cfg.d, [Fraction(v) for v in cfg.m_values])
    _emit(_json({"m_values": exp.m_values, "gaps": exp.gaps, "leading": exp.leading,
                 "leading_expected": exp.leading_expected, "leading_rel_error": exp.leading_rel_error,
                 "second": exp.second, "second_expected": exp.second_expected, "gap_ratio": exp.ratio}), cfg.out)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "spectrum": cmd_spectrum, "springs": cmd_springs,
            "geometry": cmd_geometry, "prep": cmd_prep, "bo": cmd_bo}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--seed", type=int, help="seed for randomized checks")
    common.add_argument("--variant", choices=VARIANT_CHOICES)
    common.add_argument("--N", type=int, help=f"polynomial degree (at most {MAX_N})")
    parser = argparse.ArgumentParser(prog="fourbody", description="Four-body oscillator operator algebra.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run verification suites").add_argument(
        "--suite", action="append", choices=SUITE_NAMES, dest="suites", help="restrict to a suite (repeatable)")
    sp = sub.add_parser("spectrum", parents=[common], help="spectrum table on the degree-N space")
    sp.add_argument("--representation", choices=("rho", "P"))
    sg = sub.add_parser("springs", parents=[common], help="gauge parameters <-> spring constants")
    sg.add_argument("direction", nargs="?", choices=("forward", "inverse"))
    sub.add_parser("geometry", parents=[common], help="geometric quantities at one point")
    sub.add_parser("prep", parents=[common], help="write a complete config file")
    sub.add_parser("bo", parents=[common], help="Born-Oppenheimer gap expansion")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {"out": args.out, "format": args.format, "seed": args.seed, "variant": args.variant, "N": args.N,
                 "suites": tuple(args.suites) if getattr(args, "suites", None) else None,
                 "representation": getattr(args, "representation", None),
                 "direction": getattr(args, "direction", None)}
    try:
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"fourbody: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FlagViolation as exc:
        print(f"fourbody: flag violation: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except FourBodyError as exc:
        print(f"fourbody: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
