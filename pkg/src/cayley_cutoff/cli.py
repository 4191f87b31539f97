"""Command-line interface for the experiment harness.

Subcommands: spectrum, tv-curve, cutoff-profile, gap-scan, entropic, verify,
cheeger.  Flags override a flat key=value config file, which overrides
defaults; the seed is always explicit (no environment entropy).
"""

from __future__ import annotations

import argparse
import sys

from .experiments import RUNNERS, ExperimentConfig, run_verify
from .groups import parse_group


def _parse_alphas(text: str) -> tuple[float, ...]:
    return tuple(float(a) for a in text.split(",") if a.strip())


def load_config_file(path: str) -> dict:
    """Read a flat key=value file; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayley-cutoff",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    commands = ("spectrum", "tv-curve", "cutoff-profile", "gap-scan", "entropic",
                "verify", "cheeger")
    for name in commands:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--group", help='comma-separated moduli, e.g. "4,9,25"')
        p.add_argument("--k", type=int)
        p.add_argument("--model", choices=("undirected", "directed"))
        p.add_argument("--alpha", help="comma-separated alpha list")
        p.add_argument("--t-grid", dest="t_grid", help="lo:hi:points (log-spaced)")
        p.add_argument("--replicates", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"))
        p.add_argument("--only", help="verify: run a single named check")
        p.add_argument("--jobs", type=int)
        p.add_argument("--force", action="store_true",
                       help="override the work-budget refusal")
        if name == "verify":
            p.add_argument("--self-test-fail", action="store_true",
                           help=argparse.SUPPRESS)  # negative-control hook
    return parser


_DEFAULTS = {
    "group": None, "k": None, "model": "undirected", "alpha": None,
    "t_grid": None, "replicates": "1", "samples": "1000", "seed": None,
    "out": None, "fmt": "csv", "only": None, "jobs": "1", "force": None,
}


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    merged = dict(_DEFAULTS)
    if args.config:
        merged.update(load_config_file(args.config))
    for key in ("group", "k", "model", "alpha", "t_grid", "replicates", "samples",
                "seed", "out", "fmt", "only", "jobs"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if getattr(args, "force", False):
        merged["force"] = "1"

    needs_group = args.command != "verify"
    if needs_group and not merged["group"]:
        raise SystemExit("--group is required")
    if merged["seed"] is None:
        raise SystemExit("--seed is required (seeds are always explicit)")
    moduli = parse_group(str(merged["group"])).moduli if merged["group"] else ()
    return ExperimentConfig(
        command=args.command,
        moduli=moduli,
        k=int(merged["k"]) if merged["k"] is not None else 0,
        model=str(merged["model"]),
        alphas=_parse_alphas(str(merged["alpha"])) if merged["alpha"] else (),
        t_grid=str(merged["t_grid"]) if merged["t_grid"] else None,
        replicates=int(merged["replicates"]),
        samples=int(merged["samples"]),
        base_seed=int(merged["seed"]),
        out=str(merged["out"]) if merged["out"] else None,
        fmt=str(merged["fmt"]),
        only=str(merged["only"]) if merged["only"] else None,
        force=bool(merged["force"]),
        jobs=int(merged["jobs"]),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = make_config(args)
    if args.command == "verify":
        extra = None
        if getattr(args, "self_test_fail", False):
            from .lemmas import CheckReport
            extra = {"self_test": lambda: CheckReport(
                name="self_test", passed=False,
                worst_case="forced failure (negative control)", max_violation=1.0)}
        text, status = run_verify(config, extra_checks=extra)
        sys.stdout.write(text)
        return status
    runner = RUNNERS[args.command]
    text, _ = runner(config)
    if not config.out:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
