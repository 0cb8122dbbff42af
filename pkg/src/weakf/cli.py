"""Command-line interface.

Subcommands:

    validate     axiom residuals for a built-in example
    classify     taxonomy flags (closedness, normality, Killing fields)
    check        run one named identity check (or all of them)
    nullity-fit  least-squares (kappa, mu) for the nullity condition
    suite        full verification run, JSON report to a file

Exit codes: 0 = everything passed, 1 = at least one check failed,
2 = bad configuration or usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from .checks import CHECKS, SampleSet, nullity_fit
from .errors import ConfigError, HypothesisUnmet, WeakfError
from .examples import RunConfig, build_structure, run_suite
from .reporting import ReportDocument, summary_lines


def _add_example_args(p):
    p.add_argument("--example", default="paper", choices=["paper", "t1flat"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--tol", action="append", default=[], metavar="NAME=VAL",
        help="tolerance override, e.g. --tol identity=1e-7",
    )


def _config_from_args(args, checks=("all",)):
    tols = {}
    for item in args.tol:
        if "=" not in item:
            raise ConfigError(f"bad --tol {item!r}; expected NAME=VAL")
        k, v = item.split("=", 1)
        tols[k] = float(v)
    return RunConfig(
        example=args.example, n=args.n, s=args.s, beta=args.beta,
        samples=args.samples, seed=args.seed, checks=tuple(checks),
        tolerances=tols,
    )


def cmd_validate(args):
    cfg = _config_from_args(args)
    S = build_structure(cfg)
    samples = SampleSet.make(S.chart, seed=cfg.seed, count=cfg.samples)
    res = S.validate(samples.points)
    tol = cfg.tolerances.get("axiom", 1e-9)
    worst = max(res.values())
    for k, v in res.items():
        print(f"{k:<22} {v:.3e}")
    ok = worst <= tol
    print(f"axioms: {'pass' if ok else 'fail'} (max {worst:.3e}, tol {tol:.1e})")
    return 0 if ok else 1


def cmd_classify(args):
    cfg = _config_from_args(args)
    S = build_structure(cfg)
    samples = SampleSet.make(S.chart, seed=cfg.seed, count=cfg.samples)
    for name, (ok, res) in S.classify(samples.points).items():
        print(f"{name:<18} {'yes' if ok else 'no':<4} residual={res:.3e}")
    return 0


def cmd_check(args):
    cfg = _config_from_args(args)
    S = build_structure(cfg)
    samples = SampleSet.make(S.chart, seed=cfg.seed, count=cfg.samples)
    names = list(CHECKS) if args.name == "all" else [args.name]
    if any(n not in CHECKS for n in names):
        raise ConfigError(f"unknown check {args.name!r}; choose from {sorted(CHECKS)} or 'all'")
    doc = ReportDocument(version="1", config=cfg.to_dict())
    for n in names:
        doc.checks.extend(CHECKS[n](S, samples))
    for line in summary_lines(doc):
        print(line)
    return 0 if doc.overall == "pass" else 1


def cmd_nullity_fit(args):
    cfg = _config_from_args(args)
    S = build_structure(cfg)
    samples = SampleSet.make(S.chart, seed=cfg.seed, count=cfg.samples)
    try:
        fit = nullity_fit(S, samples)
    except HypothesisUnmet as exc:
        print(f"skipped: {exc}")
        return 0
    print(f"kappa={fit.kappa:.12g} mu={fit.mu:.12g} "
          f"residual={fit.residual:.3e} mu_identifiable={fit.mu_identifiable}")
    return 0


def cmd_suite(args):
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = RunConfig.from_dict(json.load(fh))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    else:
        cfg = RunConfig()
    doc = run_suite(cfg)
    if args.out:
        doc.write(args.out)
    for line in summary_lines(doc):
        print(line)
    return 0 if doc.overall == "pass" else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="weakf",
        description="numerical verification of weak metric f-structures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="axiom residuals for an example")
    _add_example_args(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("classify", help="taxonomy flags for an example")
    _add_example_args(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("check", help="run one named check (or 'all')")
    p.add_argument("name")
    _add_example_args(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("nullity-fit", help="least-squares (kappa, mu)")
    _add_example_args(p)
    p.set_defaults(fn=cmd_nullity_fit)

    p = sub.add_parser("suite", help="full verification run")
    p.add_argument("--config", help="JSON file with run configuration")
    p.add_argument("--out", help="path for the JSON report")
    p.set_defaults(fn=cmd_suite)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except WeakfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
