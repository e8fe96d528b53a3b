"""Command-line interface: ``nldist <subcommand> ...``.

Exit status is 0 on success, 1 when ``verify`` finds a failing check and 2
for usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from contextlib import contextmanager

from . import io
from .analysis import SweepGrid, efficiency_curve, region_map
from .boxes import DEFAULT_TOL, ORACLE_TOL, make_box, validate_nonsignaling
from .cglmp import cglmp_value
from .distillation import (
    Family,
    MixtureParams,
    NoisyParams,
    Protocol,
    build_mixture,
    build_noisy,
    distill_iterate,
    distill_noisy,
    distill_once,
)
from .verify import SUITES, run_suites
from .wiring import WIRINGS, named_wiring, wire

log = logging.getLogger("nldist")


def _dim(text: str):
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimension must be an integer >= 2 or 'inf', got {text!r}")
    if d < 2:
        raise argparse.ArgumentTypeError(f"dimension must be >= 2, got {d}")
    return d


def _unit(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"value must lie in [0, 1], got {text}")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be > 0, got {text}")
    return v


@contextmanager
def _out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fp:
            yield fp


def _box_summary(box) -> dict:
    rep = cglmp_value(box)
    return {"d": box.d, "cglmp": rep.value, "correlators": rep.correlators.tolist()}


def _result_dict(res) -> dict:
    dec = res.final_decomposition
    out = {
        "initial_cglmp": res.initial_cglmp,
        "final_cglmp": res.final_cglmp,
        "closed_form_prediction": res.closed_form_prediction,
        "oracle_residual": res.oracle_residual,
    }
    if res.input_epsilon is not None:
        out["epsilon"] = res.input_epsilon
        out["epsilon_final"] = res.predicted_epsilon
    if dec is not None:
        out["final_decomposition"] = {
            "nl": dec.c_nl, "lc": dec.c_lc, "ld": dec.c_ld, "mixed": dec.c_mix, "residual": dec.residual,
        }
    return out


def _finite(parser, d):
    if math.isinf(d):
        parser.error("--d inf is only accepted by 'sweep' and 'region'")
    return d


def cmd_gen(args, parser):
    d = _finite(parser, args.d)
    if args.xi is not None or args.gamma is not None:
        if args.family not in ("lc", "ld"):
            parser.error("--xi/--gamma need --family lc or ld")
        box = build_noisy(NoisyParams(args.xi or 0.0, args.gamma or 0.0, Family(args.family), d))
    elif args.epsilon is not None:
        if args.family not in ("lc", "ld"):
            parser.error("--epsilon needs --family lc or ld")
        box = build_mixture(MixtureParams(args.epsilon, Family(args.family), d))
    else:
        box = make_box(args.family, d)
    with _out(args.output) as fp:
        io.dump_box(box, fp)
    return 0


def _load(path):
    with open(path) as fp:
        return io.load_box(fp)


def cmd_cglmp(args, parser):
    box = _load(args.box)
    report = validate_nonsignaling(box, args.invariant_tol)
    if not report.ok:
        log.warning("box is not a valid nonsignaling box: %s violation %.3g", report.family, report.worst)
    out = _box_summary(box)
    out["valid"] = report.ok
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_distill(args, parser):
    protocol = Protocol(args.protocol)
    if args.box:
        box = _load(args.box)
    else:
        if args.family is None or args.epsilon is None or args.d is None:
            parser.error("give --box FILE or all of --family, --epsilon, --d")
        box = build_mixture(MixtureParams(args.epsilon, Family(args.family), _finite(parser, args.d)))
    box.checked(args.invariant_tol)
    if args.wiring:
        spec = _wiring(args.wiring, box.d)
        final = wire(box, box, spec)
        out = {"initial_cglmp": cglmp_value(box).value, "final_cglmp": cglmp_value(final).value}
    else:
        res = distill_once(box, protocol)
        final = res.final_box
        out = _result_dict(res)
        out["protocol"] = protocol.value
    if args.box_out:
        with open(args.box_out, "w") as fp:
            io.dump_box(final, fp)
    with _out(args.output) as fp:
        json.dump(out, fp, indent=2)
        fp.write("\n")
    residual = out.get("oracle_residual")
    if residual is not None and residual > args.oracle_tol:
        log.error("oracle residual %.3g exceeds %.3g", residual, args.oracle_tol)
        return 1
    return 0


def _wiring(name_or_path, d):
    if name_or_path in WIRINGS:
        return named_wiring(name_or_path, d)
    with open(name_or_path) as fp:
        spec = io.wiring_from_dict(json.load(fp))
    if spec.d != d:
        raise ValueError(f"wiring dimension {spec.d} does not match box dimension {d}")
    return spec


def cmd_iterate(args, parser):
    params = MixtureParams(args.epsilon, Family(args.family), _finite(parser, args.d))
    traj = distill_iterate(params, Protocol(args.protocol), args.rounds)
    with _out(args.output) as fp:
        io.write_csv(fp, io.TRAJECTORY_HEADER,
                     ((t.round, t.epsilon, t.cglmp, t.copies, t.oracle_residual) for t in traj))
    return 0


def cmd_noisy(args, parser):
    params = NoisyParams(args.xi, args.gamma, Family(args.family), _finite(parser, args.d))
    res = distill_noisy(params)
    out = _result_dict(res)
    out.update(xi=params.xi, gamma=params.gamma, mu=params.mu, family=params.local_family.value,
               protocol="B" if params.local_family is Family.LD else "A")
    with _out(args.output) as fp:
        json.dump(out, fp, indent=2)
        fp.write("\n")
    if res.oracle_residual > 1e-10:
        log.error("oracle residual %.3g exceeds 1e-10", res.oracle_residual)
        return 1
    return 0


def cmd_sweep(args, parser):
    grid = SweepGrid.uniform(args.d, args.steps, args.protocol)
    rows = efficiency_curve(grid)
    with _out(args.output) as fp:
        io.write_csv(fp, io.EFFICIENCY_HEADER,
                     ((r.protocol.value, r.d, r.epsilon, r.cglmp_initial, r.cglmp_final) for r in rows))
    return 0


def cmd_region(args, parser):
    with _out(args.output) as fp:
        io.write_csv(fp, io.REGION_HEADER,
                     ((p.xi, p.gamma, p.d, p.cglmp_initial, p.cglmp_final, p.works)
                      for p in region_map(args.n, args.d)))
    return 0


def cmd_verify(args, parser):
    checks = run_suites(tuple(args.suite), seed=args.seed, oracle_tol=args.oracle_tol,
                        invariant_tol=args.invariant_tol)
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--invariant-tol", type=_positive, default=DEFAULT_TOL)
    common.add_argument("--oracle-tol", type=_positive, default=ORACLE_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="nldist", description="Nonsignaling box distillation toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", parents=[common], help="write a box as JSON")
    p.add_argument("--family", required=True, choices=["nl", "lc", "ld", "mixed"])
    p.add_argument("--d", type=_dim, required=True)
    p.add_argument("--epsilon", type=_unit, help="nonlocal weight of eps*nl + (1-eps)*family")
    p.add_argument("--xi", type=_unit, help="noisy box: nonlocal weight")
    p.add_argument("--gamma", type=_unit, help="noisy box: local weight")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cglmp", parents=[common], help="evaluate the CGLMP value of a box file")
    p.add_argument("box")
    p.set_defaults(func=cmd_cglmp)

    p = sub.add_parser("distill", parents=[common], help="one distillation round")
    p.add_argument("--protocol", choices=["A", "B"], default="A")
    p.add_argument("--box", help="input box JSON")
    p.add_argument("--family", choices=["lc", "ld"])
    p.add_argument("--epsilon", type=_unit)
    p.add_argument("--d", type=_dim)
    p.add_argument("--wiring", help=f"wiring JSON file or one of {sorted(WIRINGS)}")
    p.add_argument("--box-out", help="write the composed box here")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("iterate", parents=[common], help="repeated distillation trajectory (CSV)")
    p.add_argument("--protocol", choices=["A", "B"], required=True)
    p.add_argument("--family", choices=["lc", "ld"], required=True)
    p.add_argument("--epsilon", type=_unit, required=True)
    p.add_argument("--d", type=_dim, required=True)
    p.add_argument("--rounds", type=int, default=10)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("noisy", parents=[common], help="distill xi*nl + gamma*local + mu*mixed")
    p.add_argument("--xi", type=_unit, required=True)
    p.add_argument("--gamma", type=_unit, required=True)
    p.add_argument("--family", choices=["lc", "ld"], default="ld")
    p.add_argument("--d", type=_dim, required=True)
    p.set_defaults(func=cmd_noisy)

    p = sub.add_parser("sweep", parents=[common], help="efficiency curves (CSV)")
    p.add_argument("--protocol", nargs="+", choices=["A", "B"], default=["A", "B"])
    p.add_argument("--d", type=_dim, nargs="+", default=[2, 3, 5, 10, 50])
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("region", parents=[common], help="works-region map for noisy ld boxes (CSV)")
    p.add_argument("--d", type=_dim, default=math.inf)
    p.add_argument("--n", type=int, default=200, help="lattice resolution")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("verify", parents=[common], help="brute-force versus closed-form checks")
    p.add_argument("--suite", nargs="+", default=["all"], choices=["all", *SUITES])
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    for flag in ("rounds", "steps", "n"):
        if getattr(args, flag, 1) is not None and getattr(args, flag, 1) < (0 if flag == "rounds" else 1):
            parser.error(f"--{flag} out of range")
    try:
        return args.func(args, parser)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
