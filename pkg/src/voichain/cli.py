"""Command line front end.

Subcommands: ``estimate``, ``bounds``, ``sweep``, ``verify``.

Settings come from three layers, later ones winning: built-in defaults, a
JSON ``--config`` file (keys are the long option names with dashes replaced
by underscores), then explicit flags.  All randomness derives from ``--seed``.

Exit codes: 0 ok, 1 numerical failure or increment violation, 2 usage error.
"""
from __future__ import annotations

import argparse
import datetime
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from voichain import matio
from voichain.chaining import gamma_bounds
from voichain.errors import MatrixFormatError, VoiError
from voichain.experiments import CSV_HEADER, SweepConfig, records_to_csv, run_sweep, sweep_summary
from voichain.gaussian_env import (
    PosteriorOperator, SpectralBand, compute_posterior_operator, random_bounded_operator)
from voichain.geometry import FINITE, L2, LINF, ActionSet
from voichain.increments import check_increments, random_pairs
from voichain.voi import estimate_voi, perfect_info_upper, voi_sandwich

log = logging.getLogger("voichain")

DEFAULTS = {
    "seed": 0,
    "threads": None,
    "n": 100_000,
    "nodes": 512,
    "replicates": 1,
    "pairs": "random:16",
    "normalize": True,
    "antithetic": None,
    "deterministic": False,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with default settings")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--deterministic", action="store_true", default=None,
                   help="omit the timestamp so identical runs give identical bytes")
    p.add_argument("-v", "--verbose", action="store_true", default=None)


def _add_operator(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("posterior operator (pick one)")
    g.add_argument("--cov", help="joint covariance file (header 'd k')")
    g.add_argument("--w", help="posterior operator W as a matrix file")
    g.add_argument("--identity", action="store_true", default=None, help="W = I_d")
    g.add_argument("--band", help="random W with eigenvalues in LO,HI")
    g.add_argument("--d", type=int, help="dimension for --identity / --band")
    g.add_argument("--no-normalize", dest="normalize", action="store_false", default=None,
                   help="do not require diag(Sigma_theta) = 1 in --cov files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voichain",
        description="Value of information bounds for Gaussian decision problems.",
        epilog="Precedence: flags > --config file > defaults.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="Monte Carlo value of information")
    _add_common(p)
    _add_operator(p)
    p.add_argument("--set", dest="set_kind", choices=("l1", "l2", "linf", "finite"))
    p.add_argument("--points", help="matrix file of actions for --set finite")
    p.add_argument("--n", type=int)
    p.add_argument("--antithetic", dest="antithetic", action="store_true", default=None)
    p.add_argument("--no-antithetic", dest="antithetic", action="store_false")

    p = sub.add_parser("bounds", help="entropy lower bound, MC estimate, upper bound")
    _add_common(p)
    _add_operator(p)
    p.add_argument("--set", dest="set_kind", choices=("l2", "linf"))
    p.add_argument("--n", type=int)
    p.add_argument("--nodes", type=int, help="quadrature nodes for the Dudley integral")

    p = sub.add_parser("sweep", help="dimension sweep with log-log slope fits")
    _add_common(p)
    p.add_argument("--dims", help="comma separated ascending dimensions")
    p.add_argument("--band", help="eigenvalue band LO,HI")
    p.add_argument("--set", dest="set_kind", choices=("l2", "linf"))
    p.add_argument("--n", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--nodes", type=int)
    p.add_argument("--summary", help="JSON summary path for csv output (default: <out>.json)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="csv records plus a JSON summary (default), or one JSON document")

    p = sub.add_parser("verify", help="check sub-Gaussian increments")
    _add_common(p)
    _add_operator(p)
    p.add_argument("--pairs", help="random:K")
    p.add_argument("--n", type=int)
    return parser


def resolve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            cfg.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k != "config"})
    return cfg


def _operator(cfg: dict, parser) -> PosteriorOperator:
    sources = [k for k in ("cov", "w", "identity", "band") if cfg.get(k)]
    if len(sources) != 1:
        parser.error("give exactly one of --cov, --w, --identity, --band")
    src = sources[0]
    if src == "cov":
        return compute_posterior_operator(matio.read_joint(cfg["cov"], cfg["normalize"]))
    if src == "w":
        return PosteriorOperator.from_matrix(matio.read_matrix(cfg["w"]))
    d = cfg.get("d")
    if not d or d < 1:
        parser.error(f"--{src} needs --d")
    if src == "identity":
        return PosteriorOperator.from_matrix(np.eye(d))
    return random_bounded_operator(d, _band(cfg, parser), cfg["seed"])


def _band(cfg, parser) -> SpectralBand:
    try:
        return SpectralBand.parse(str(cfg["band"]))
    except (KeyError, ValueError) as exc:
        parser.error(f"bad --band: {exc}")


def _emit(cfg: dict, payload: dict) -> None:
    if not cfg["deterministic"]:
        payload["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.get("out"):
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)


def _require(cfg, parser, *keys):
    for k in keys:
        if cfg.get(k) is None:
            parser.error(f"--{k.replace('_kind', '').replace('_', '-')} is required")


def cmd_estimate(cfg: dict, parser) -> int:
    _require(cfg, parser, "set_kind")
    op = _operator(cfg, parser)
    if cfg["set_kind"] == FINITE:
        _require(cfg, parser, "points")
        A = ActionSet.finite(matio.read_matrix(cfg["points"]))
    else:
        A = ActionSet(cfg["set_kind"], op.dim)
    est = estimate_voi(op, A, cfg["n"], cfg["seed"], cfg["antithetic"], cfg["threads"])
    _emit(cfg, {"d": op.dim, "set_kind": A.kind, **est.to_json()})
    return 0


def cmd_bounds(cfg: dict, parser) -> int:
    _require(cfg, parser, "set_kind")
    op = _operator(cfg, parser)
    A = ActionSet(cfg["set_kind"], op.dim)
    rep = voi_sandwich(op, A, cfg["n"], cfg["seed"], cfg["nodes"], cfg["threads"])
    gb = gamma_bounds(A, op, cfg["nodes"], upper=None if A.kind == L2 else perfect_info_upper(op))
    _emit(cfg, {**rep.to_json(), "gamma_bounds": gb.to_json()})
    return 0


def cmd_sweep(cfg: dict, parser) -> int:
    _require(cfg, parser, "dims", "band", "set_kind")
    try:
        dims = [int(v) for v in str(cfg["dims"]).split(",")] if not isinstance(cfg["dims"], list) \
            else [int(v) for v in cfg["dims"]]
        sweep_cfg = SweepConfig(dims, _band(cfg, parser), cfg["set_kind"], cfg["n"], cfg["seed"],
                                cfg["replicates"], cfg["nodes"], cfg["threads"])
    except ValueError as exc:
        parser.error(str(exc))
    records = run_sweep(sweep_cfg)
    summary = sweep_summary(sweep_cfg, records)
    if not cfg["deterministic"]:
        summary["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    summary_text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    out = cfg.get("out")
    if cfg.get("format") == "json":
        payload = {"summary": summary, "records": [
            dict(zip(CSV_HEADER, (r.d, r.replicate, r.seed, r.mc, r.stderr, r.lower, r.upper,
                                  r.lambda_min_realized, r.lambda_max_realized)))
            for r in records if not r.failed]}
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        csv_text = records_to_csv(records)
        if out:
            Path(out).write_text(csv_text)
        else:
            sys.stdout.write(csv_text)
        summary_path = cfg.get("summary") or (os.path.splitext(out)[0] + ".json" if out else None)
        if summary_path:
            Path(summary_path).write_text(summary_text)
        else:
            sys.stderr.write(summary_text)
    return 1 if summary["failures"] else 0


def cmd_verify(cfg: dict, parser) -> int:
    op = _operator(cfg, parser)
    spec = str(cfg["pairs"])
    if not spec.startswith("random:"):
        parser.error("--pairs must look like random:K")
    try:
        count = int(spec.split(":", 1)[1])
    except ValueError:
        parser.error("--pairs must look like random:K")
    pairs = random_pairs(op.dim, count, cfg["seed"])
    reports = check_increments(op, pairs, cfg["n"], cfg["seed"], cfg["threads"])
    total = sum(r.violations for r in reports)
    _emit(cfg, {"d": op.dim, "n": cfg["n"], "seed": cfg["seed"], "violations": total,
                "reports": [r.to_json() for r in reports]})
    return 1 if total else 0


COMMANDS = {"estimate": cmd_estimate, "bounds": cmd_bounds, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = resolve(args, parser)
    logging.basicConfig(level=logging.INFO if cfg.get("verbose") else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    sub = parser._subparsers._group_actions[0].choices[cfg["command"]]
    try:
        return COMMANDS[cfg["command"]](cfg, sub)
    except (OSError, MatrixFormatError) as exc:
        print(f"voichain: input error: {exc}", file=sys.stderr)
        return 2
    except (VoiError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"voichain: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
