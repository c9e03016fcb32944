# src/shared/codec.py
# Converters between the wire models in schemas.py and the exact domain types.
# Every converter is total on validated models; malformed values surface as
# BundleError with the offending file named.

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, List, Type, TypeVar

from pydantic import BaseModel, ValidationError

from src.backend.bispec.diffop import EigenSeq, RightDiffOp
from src.backend.bispec.search import SearchResult
from src.backend.blockop.banded import BandedBlock
from src.backend.blockop.tridiag import BidiagPair, BlockTridiag, darboux
from src.backend.exact.matpoly import MatPoly
from src.backend.exact.matrix import MatrixR
from src.backend.exact.polyn import polyn_from_json
from src.backend.exact.rational import parse_rational
from src.backend.mop.polys import MopFamily
from src.backend.mop.recurrence import recurrence_from_moments
from src.backend.weights.darboux_gegenbauer02 import wtilde_weight
from src.backend.weights.gegenbauer02 import gegenbauer02_recurrence
from src.backend.weights.moments import moments
from src.backend.weights.weight import MomentSeq, Weight, make_deltas
from src.shared.errors import BundleError, MvopError, UnsupportedKind
from src.shared.schemas import (
    AlphaModel,
    BandedBlockModel,
    BandedEntryModel,
    BidiagPairModel,
    BlockTridiagModel,
    EigenSeqModel,
    MomentSeqModel,
    MopFamilyModel,
    OperatorFileModel,
    OperatorRecipeModel,
    OrderRow,
    RightDiffOpModel,
    SearchResultModel,
    WeightModel,
)

_logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


# =========================
# Files
# =========================

def parse_json_to_model(raw: str, model_cls: Type[ModelT], source: str = "<input>") -> ModelT:
    """Parse JSON text into a pydantic model, with friendlier errors."""
    if raw is None or not raw.strip():
        raise BundleError(f"{source}: empty {model_cls.__name__} file")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise BundleError(
            f"{source}: invalid JSON ({exc.msg} at line {exc.lineno}, column {exc.colno})"
        ) from exc
    try:
        return model_cls.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ())) or "<root>"
        raise BundleError(f"{source}: {model_cls.__name__} at {where}: {first.get('msg')}") from exc


def read_model(path: Path | str, model_cls: Type[ModelT]) -> ModelT:
    path = Path(path)
    return parse_json_to_model(path.read_text(encoding="utf-8"), model_cls, source=str(path))


def dumps(payload: Any) -> str:
    """Deterministic, human-readable JSON (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path | str, payload: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    _logger.info("wrote %s", path)


def _wrap(source: str, fn, *args):
    """Run a converter, turning stray ValueErrors (bad rationals, shapes) into BundleError."""
    try:
        return fn(*args)
    except MvopError:
        raise
    except ValueError as exc:
        raise BundleError(f"{source}: {exc}") from exc


# =========================
# Matrices and polynomials
# =========================

def matrix_from_json(rows: List[List[str]]) -> MatrixR:
    return MatrixR.from_rows([[parse_rational(v) for v in row] for row in rows])


def matpoly_from_json(size: int, coeffs: List[List[List[str]]]) -> MatPoly:
    return MatPoly(size, tuple(matrix_from_json(c) for c in coeffs))


# =========================
# Operators
# =========================

def tridiag_to_model(l: BlockTridiag, comment: str | None = None) -> BlockTridiagModel:
    return BlockTridiagModel(
        block_size=l.block_size,
        diag=[b.to_json() for b in l.diag],
        sub=[a.to_json() for a in l.sub],
        comment=comment,
    )


def materialize_recipe(recipe: OperatorRecipeModel) -> BlockTridiag:
    """Build the operator a recipe describes (closed-form recurrence or moments)."""
    if recipe.family == "gegenbauer02":
        if recipe.lambda_ is None:
            raise BundleError("gegenbauer02 recipe needs 'lambda'")
        l0 = gegenbauer02_recurrence(parse_rational(recipe.lambda_), recipe.levels)
        if recipe.alpha0 is None:
            return l0
        _, transformed = darboux(l0, matrix_from_json(recipe.alpha0))
        return transformed
    if recipe.family == "moments":
        if recipe.weight is None:
            raise BundleError("moments recipe needs 'weight'")
        mu = moments(weight_from_model(recipe.weight), 2 * recipe.levels + 1)
        return recurrence_from_moments(mu, recipe.levels)
    raise UnsupportedKind(f"unknown operator recipe {recipe.family!r}")


def tridiag_from_model(model: OperatorFileModel) -> BlockTridiag:
    if model.recipe is not None:
        return materialize_recipe(model.recipe)
    return BlockTridiag(
        model.block_size,  # type: ignore[arg-type]
        tuple(matrix_from_json(b) for b in model.diag),  # type: ignore[union-attr]
        tuple(matrix_from_json(a) for a in model.sub),  # type: ignore[union-attr]
    )


def load_operator(path: Path | str) -> BlockTridiag:
    return _wrap(str(path), tridiag_from_model, read_model(path, OperatorFileModel))


def bidiag_to_model(pair: BidiagPair) -> BidiagPairModel:
    return BidiagPairModel(
        block_size=pair.block_size,
        alphas=[a.to_json() for a in pair.alphas],
        betas=[b.to_json() for b in pair.betas],
    )


def banded_to_model(x: BandedBlock, comment: str | None = None) -> BandedBlockModel:
    return BandedBlockModel(
        block_size=x.block_size,
        levels=x.levels,
        lower=x.lower,
        upper=x.upper,
        exact_window=x.exact_window,
        blocks=[BandedEntryModel(row=r, col=c, block=m.to_json()) for (r, c), m in sorted(x.blocks.items())],
        comment=comment,
    )


def banded_from_model(model: BandedBlockModel) -> BandedBlock:
    return BandedBlock(
        block_size=model.block_size,
        levels=model.levels,
        lower=model.lower,
        upper=model.upper,
        blocks={(e.row, e.col): matrix_from_json(e.block) for e in model.blocks},
        exact_window=model.exact_window,
    )


def load_banded(path: Path | str) -> BandedBlock:
    return _wrap(str(path), banded_from_model, read_model(path, BandedBlockModel))


def load_alpha0(path: Path | str) -> MatrixR:
    model = read_model(path, AlphaModel)
    return _wrap(str(path), matrix_from_json, model.alpha0)


# =========================
# Weights and moments
# =========================

def weight_from_model(model: WeightModel) -> Weight:
    def rational(value: str | None):
        return parse_rational(value) if value is not None else None

    if model.kind == "darboux_gegenbauer02":
        if model.lambda_ is None or model.alpha0 is None:
            raise BundleError("darboux_gegenbauer02 weight needs 'lambda' and 'alpha0'")
        if model.deltas:
            raise BundleError("darboux_gegenbauer02 weight derives its point mass; 'deltas' must be empty")
        return wtilde_weight(parse_rational(model.lambda_), matrix_from_json(model.alpha0), model.delta_sign)

    deltas = make_deltas(model.block_size, [(parse_rational(d.point), matrix_from_json(d.mass)) for d in model.deltas])
    return Weight(
        kind=model.kind,
        block_size=model.block_size,
        lam=rational(model.lambda_),
        alpha=rational(model.alpha),
        beta=rational(model.beta),
        deltas=deltas,
        normalization=model.normalization,
    )


def load_weight(path: Path | str, delta_sign: int | None = None) -> Weight:
    """`delta_sign` overrides the file's sign of the derived point mass."""
    model = read_model(path, WeightModel)
    if delta_sign is not None:
        model = model.model_copy(update={"delta_sign": delta_sign})
    return _wrap(str(path), weight_from_model, model)


def moments_to_model(mu: MomentSeq) -> MomentSeqModel:
    return MomentSeqModel(block_size=mu.block_size, mus=[m.to_json() for m in mu.mus], normalization=mu.normalization)


def moments_from_model(model: MomentSeqModel) -> MomentSeq:
    return MomentSeq(model.block_size, tuple(matrix_from_json(m) for m in model.mus), model.normalization)


def family_to_model(family: MopFamily) -> MopFamilyModel:
    return MopFamilyModel(block_size=family.block_size, polys=[p.to_json() for p in family.polys])


# =========================
# Differential operators and eigenvalues
# =========================

def diffop_to_model(d: RightDiffOp, comment: str | None = None) -> RightDiffOpModel:
    return RightDiffOpModel(block_size=d.block_size, coeffs=[f.to_json() for f in d.coeffs], comment=comment)


def diffop_from_model(model: RightDiffOpModel) -> RightDiffOp:
    return RightDiffOp(model.block_size, tuple(matpoly_from_json(model.block_size, c) for c in model.coeffs))


def load_diffop(path: Path | str) -> RightDiffOp:
    return _wrap(str(path), diffop_from_model, read_model(path, RightDiffOpModel))


def eigen_to_model(lam: EigenSeq, comment: str | None = None) -> EigenSeqModel:
    return EigenSeqModel(
        explicit=[m.to_json() for m in lam.explicit] if lam.explicit is not None else None,
        poly_in_n=[[p.to_json() for p in row] for row in lam.poly_in_n] if lam.poly_in_n is not None else None,
        comment=comment,
    )


def eigen_from_model(model: EigenSeqModel) -> EigenSeq:
    explicit = tuple(matrix_from_json(m) for m in model.explicit) if model.explicit is not None else None
    grid = (
        tuple(tuple(polyn_from_json(p) for p in row) for row in model.poly_in_n)
        if model.poly_in_n is not None
        else None
    )
    if grid is not None:
        size = len(grid)
    elif explicit:
        size = explicit[0].n_rows
    else:
        raise BundleError("empty eigenvalue list")
    return EigenSeq(size, explicit=explicit, poly_in_n=grid)


def load_eigen(path: Path | str) -> EigenSeq:
    return _wrap(str(path), eigen_from_model, read_model(path, EigenSeqModel))


# =========================
# Search results
# =========================

def search_to_model(result: SearchResult) -> SearchResultModel:
    return SearchResultModel(
        block_size=result.block_size,
        max_order=result.max_order,
        n_train=result.n_train,
        n_verify=result.n_verify,
        rows=[OrderRow(order=s, dimension=result.dims[s], new=result.new(s)) for s in range(len(result.dims))],
        minimal_order=result.minimal_order,
        basis={str(s): [diffop_to_model(d) for d in ops] for s, ops in sorted(result.basis.items())},
        verify_failures=list(result.verify_failures),
    )
