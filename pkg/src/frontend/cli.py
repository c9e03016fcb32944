# src/frontend/cli.py

from __future__ import annotations

import sys
from pathlib import Path

# ---- Make project root importable when run as a script ----
ROOT_DIR = Path(__file__).resolve().parents[2]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))
# -----------------------------------------------------------

import argparse
import json
import logging
from typing import Any, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from src.backend.bispec.construct import construct_operator
from src.backend.bispec.diffop import verify_bispectral
from src.backend.bispec.search import algebra_search
from src.backend.blockop.banded import ad_condition_check, banded_from_bidiag, intertwine_check
from src.backend.blockop.tridiag import darboux
from src.backend.mop.polys import polys_from_recurrence
from src.backend.mop.recurrence import recurrence_from_moments
from src.backend.pipeline.workflow import run_acceptance, summary_frame
from src.backend.weights.moments import moments
from src.shared.bundles import BundleKind, bundle_path
from src.shared.codec import (
    banded_to_model,
    bidiag_to_model,
    diffop_to_model,
    dumps,
    family_to_model,
    load_alpha0,
    load_banded,
    load_diffop,
    load_eigen,
    load_operator,
    load_weight,
    moments_to_model,
    search_to_model,
    tridiag_to_model,
    write_json,
)
from src.shared.errors import MvopError
from src.shared.schemas import Report, inputs_hash
from src.shared.settings import Settings, configure_logging, load_settings

_logger = logging.getLogger("mvop.cli")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


# =========================
# Input / output helpers
# =========================

def resolve_input(arg: str, kind: BundleKind, settings: Settings) -> Path:
    """An existing file path, or the name of a bundled example (e.g. "example1")."""
    path = Path(arg)
    if path.is_file():
        return path
    return bundle_path(arg, kind, settings.bundle_dir)


def _hash_files(paths: Sequence[Path]) -> str:
    return inputs_hash(*[json.loads(p.read_text(encoding="utf-8")) for p in paths])


def _emit(payload: Any, out: Optional[str]) -> None:
    if out:
        write_json(out, payload)
    else:
        sys.stdout.write(dumps(payload))


def _finish(report: Report, paths: Sequence[Path], out: Optional[str]) -> int:
    report.meta.inputs_hash = _hash_files(paths)
    _emit(report.to_json_dict(), out)
    return EXIT_PASS if report.passed else EXIT_FAIL


# =========================
# Subcommands
# =========================

def cmd_moments(args: argparse.Namespace, settings: Settings) -> int:
    w = load_weight(resolve_input(args.weight, "weight", settings), args.delta_sign)
    _emit(moments_to_model(moments(w, args.count)).model_dump(mode="json"), args.out)
    return EXIT_PASS


def cmd_recurrence(args: argparse.Namespace, settings: Settings) -> int:
    w = load_weight(resolve_input(args.weight, "weight", settings), args.delta_sign)
    l = recurrence_from_moments(moments(w, 2 * args.levels + 1), args.levels)
    _emit(tridiag_to_model(l).model_dump(mode="json", exclude_none=True), args.out)
    if args.polys_out:
        write_json(args.polys_out, family_to_model(polys_from_recurrence(l, args.levels)).model_dump(mode="json"))
    return EXIT_PASS


def cmd_darboux(args: argparse.Namespace, settings: Settings) -> int:
    l0 = load_operator(resolve_input(args.op, "op", settings))
    pair, l = darboux(l0, load_alpha0(resolve_input(args.alpha0, "alpha0", settings)))
    _emit(tridiag_to_model(l).model_dump(mode="json", exclude_none=True), args.out)
    if args.pair_out:
        write_json(args.pair_out, bidiag_to_model(pair).model_dump(mode="json"))
    if args.beta_out:
        beta = banded_from_bidiag(pair, "beta")
        write_json(args.beta_out, banded_to_model(beta).model_dump(mode="json", exclude_none=True))
    return EXIT_PASS


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    paths = [
        resolve_input(args.op, "op", settings),
        resolve_input(args.diffop, "diffop", settings),
        resolve_input(args.eigen, "eigen", settings),
    ]
    l = load_operator(paths[0])
    report = verify_bispectral(l, load_diffop(paths[1]), load_eigen(paths[2]), args.n)
    return _finish(report, paths, args.report)


def cmd_search(args: argparse.Namespace, settings: Settings) -> int:
    l = load_operator(resolve_input(args.op, "op", settings))
    n_verify = args.n_verify if args.n_verify is not None else settings.n_verify
    result = algebra_search(l, args.max_order, n_train=args.n_train, n_verify=n_verify)
    table = pd.DataFrame(
        [{"order": s, "dimension": result.dimension(s), "new": result.new(s)} for s in range(len(result.dims))]
    )
    sys.stderr.write(table.to_string(index=False) + "\n")
    sys.stderr.write(f"minimal nontrivial order: {result.minimal_order}\n")
    _emit(search_to_model(result).model_dump(mode="json"), args.report)
    return EXIT_FAIL if result.verify_failures else EXIT_PASS


def cmd_adcheck(args: argparse.Namespace, settings: Settings) -> int:
    paths = [resolve_input(args.op, "op", settings), resolve_input(args.eigen, "eigen", settings)]
    l = load_operator(paths[0])
    if args.levels is not None:
        l = l.truncate(args.levels)
    lam = load_eigen(paths[1])
    report = ad_condition_check(l, [lam.at(n) for n in range(l.levels)], args.power)
    return _finish(report, paths, args.report)


def cmd_construct(args: argparse.Namespace, settings: Settings) -> int:
    l = load_operator(resolve_input(args.op, "op", settings))
    d = construct_operator(l, load_eigen(resolve_input(args.eigen, "eigen", settings)), args.order)
    _emit(diffop_to_model(d).model_dump(mode="json", exclude_none=True), args.out)
    return EXIT_PASS


def cmd_intertwine(args: argparse.Namespace, settings: Settings) -> int:
    paths = [Path(args.u), resolve_input(args.l0, "op", settings), resolve_input(args.l, "op", settings)]
    report = intertwine_check(load_banded(paths[0]), load_operator(paths[1]), load_operator(paths[2]))
    return _finish(report, paths, args.report)


def cmd_suite(args: argparse.Namespace, settings: Settings) -> int:
    state = run_acceptance(quick=not args.full, n_verify=settings.n_verify)
    sys.stderr.write(summary_frame(state).to_string(index=False) + "\n")
    if not state.complete:
        sys.stderr.write(f"quick run: {state.coverage()}\n")
    _emit(state.to_json_dict(), args.report)
    return EXIT_PASS if state.passed else EXIT_FAIL


# =========================
# Parser
# =========================

def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvop",
        description="Exact matrix Darboux process, matrix orthogonal polynomials and bispectral checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="exact block moments of a weight")
    p.add_argument("weight", help="weight file or bundle name")
    p.add_argument("--count", type=int, required=True, help="number of moments mu_0..mu_{count-1}")
    p.add_argument("--delta-sign", type=int, choices=(-1, 1), default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("recurrence", help="B_n, A_n from the moments of a weight")
    p.add_argument("weight", help="weight file or bundle name")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--delta-sign", type=int, choices=(-1, 1), default=None)
    p.add_argument("--out")
    p.add_argument("--polys-out", help="also write the monic MOPs P_0..P_{levels-1}")
    p.set_defaults(func=cmd_recurrence)

    p = sub.add_parser("darboux", help="factor L_0 = alpha beta and return L = beta alpha")
    p.add_argument("op", help="operator file or bundle name")
    p.add_argument("alpha0", help="alpha0 file or bundle name")
    p.add_argument("--out")
    p.add_argument("--pair-out", help="also write the bidiagonal factors here")
    p.add_argument("--beta-out", help="also write beta as a banded matrix (input U of intertwine)")
    p.set_defaults(func=cmd_darboux)

    p = sub.add_parser("verify", help="check P_n D = Lambda_n P_n")
    p.add_argument("op")
    p.add_argument("diffop")
    p.add_argument("eigen")
    p.add_argument("--n", type=int, default=11, help="check n = 0..N-1")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="dimension of the operator algebra by order")
    p.add_argument("op")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--n-train", type=int, default=None)
    p.add_argument("--n-verify", type=int, default=None)
    p.add_argument("--report")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("adcheck", help="check (ad L)^p (Lambda) = 0 on the exact window")
    p.add_argument("op")
    p.add_argument("eigen")
    p.add_argument("--power", type=int, required=True)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--report")
    p.set_defaults(func=cmd_adcheck)

    p = sub.add_parser("construct", help="build D from L and Lambda")
    p.add_argument("op")
    p.add_argument("eigen")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("intertwine", help="check U L_0 = L U")
    p.add_argument("u", help="banded matrix file")
    p.add_argument("l0")
    p.add_argument("l")
    p.add_argument("--report")
    p.set_defaults(func=cmd_intertwine)

    p = sub.add_parser("suite", help="run the acceptance suite")
    p.add_argument("--full", action="store_true", help="include the slow order-8 searches")
    p.add_argument("--report")
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    try:
        settings = load_settings()
        configure_logging(settings)
        _logger.info("mvop %s", args.command)
        return args.func(args, settings)
    except (MvopError, ValidationError, OSError) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
