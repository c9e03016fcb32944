# src/shared/schemas.py
# NOTE:
# This module defines the JSON contracts shared between:
# - the CLI (src/frontend/cli.py)
# - the acceptance pipeline (src/backend/pipeline/*)
# - the bundled example files (evaluation/bundles/*.json)
#
# Models here hold wire values only (rationals as "p/q" strings, matrices as
# row arrays). Conversion to the exact domain types lives in src/shared/codec.py.
# Treat these models as STABLE contracts: every emitted file must re-parse.

from __future__ import annotations

import hashlib
import json
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


MatrixJSON = List[List[str]]
MatPolyJSON = List[MatrixJSON]
PolyNJSON = List[str]


# =========================
# Canonical JSON + hashing
# =========================

def canonical_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, no whitespace, UTF-8."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def inputs_hash(*payloads: Any) -> str:
    return sha256_hex(canonical_json(list(payloads)))


# =========================
# Verification reports
# =========================

class ReportDetail(BaseModel):
    """
    One failing location of a check, e.g.

    {
      "location": "n=3 x^1 (0,1)",
      "expected": "0",
      "actual": "-4/5"
    }
    """

    location: str
    expected: str
    actual: str


class ReportMeta(BaseModel):
    inputs_hash: str = ""
    levels: Optional[int] = None
    counts: Dict[str, Any] = Field(default_factory=dict)


class Report(BaseModel):
    """
    Machine-readable result of one check. `pass` is a Python keyword, so the
    attribute is `passed` and the JSON key is "pass".
    """

    model_config = ConfigDict(populate_by_name=True)

    check: str
    passed: bool = Field(alias="pass")
    details: List[ReportDetail] = Field(default_factory=list)
    meta: ReportMeta = Field(default_factory=ReportMeta)
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _pass_iff_no_details(self) -> "Report":
        if self.passed != (not self.details):
            raise ValueError(f"report {self.check!r}: pass must be true exactly when details is empty")
        return self

    @classmethod
    def build(
        cls,
        check: str,
        details: List[ReportDetail],
        *,
        levels: Optional[int] = None,
        counts: Optional[Dict[str, Any]] = None,
        inputs: Any = None,
        notes: Optional[List[str]] = None,
    ) -> "Report":
        meta = ReportMeta(
            inputs_hash=inputs_hash(inputs) if inputs is not None else "",
            levels=levels,
            counts=counts or {},
        )
        return cls(check=check, passed=not details, details=details, meta=meta, notes=notes or [])

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True, mode="json")


# =========================
# Operators
# =========================

class BlockTridiagModel(BaseModel):
    """
    {"block_size": N, "diag": [B_0, ..., B_{K-1}], "sub": [A_1, ..., A_{K-1}]}
    The superdiagonal is the identity and is not stored.
    """

    block_size: int
    diag: List[MatrixJSON]
    sub: List[MatrixJSON]
    comment: Optional[str] = None


class BidiagPairModel(BaseModel):
    block_size: int
    alphas: List[MatrixJSON]
    betas: List[MatrixJSON]


class BandedEntryModel(BaseModel):
    row: int
    col: int
    block: MatrixJSON


class BandedBlockModel(BaseModel):
    block_size: int
    levels: int
    lower: int
    upper: int
    exact_window: int
    blocks: List[BandedEntryModel] = Field(default_factory=list)
    comment: Optional[str] = None


class OperatorRecipeModel(BaseModel):
    """
    Compact operator description materialized on load:

    {"family": "gegenbauer02", "lambda": "5/2", "levels": 12, "alpha0": [["5","2"],["3","1"]]}
    {"family": "moments", "weight": {...}, "levels": 20}
    """

    model_config = ConfigDict(populate_by_name=True)

    family: Literal["gegenbauer02", "moments"]
    levels: int
    lambda_: Optional[str] = Field(default=None, alias="lambda")
    alpha0: Optional[MatrixJSON] = None
    weight: Optional["WeightModel"] = None


class OperatorFileModel(BaseModel):
    """An operator file holds either explicit blocks or a recipe."""

    block_size: Optional[int] = None
    diag: Optional[List[MatrixJSON]] = None
    sub: Optional[List[MatrixJSON]] = None
    recipe: Optional[OperatorRecipeModel] = None
    comment: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one_form(self) -> "OperatorFileModel":
        explicit = self.diag is not None
        if explicit == (self.recipe is not None):
            raise ValueError("operator file needs either 'diag'/'sub' blocks or a 'recipe', not both")
        if explicit and (self.block_size is None or self.sub is None):
            raise ValueError("explicit operator file needs 'block_size', 'diag' and 'sub'")
        return self


# =========================
# Weights and moments
# =========================

class DeltaModel(BaseModel):
    point: str
    mass: MatrixJSON


class WeightModel(BaseModel):
    """
    {"kind": "gegenbauer02" | "jacobi" | "darboux_gegenbauer02",
     "lambda": "5/2", "alpha": "0", "beta": "0",
     "alpha0": matrix, "delta_sign": -1,
     "deltas": [{"point": "1", "mass": matrix}], "block_size": 2}
    """

    model_config = ConfigDict(populate_by_name=True)

    kind: Literal["gegenbauer02", "jacobi", "darboux_gegenbauer02"]
    block_size: int = 2
    lambda_: Optional[str] = Field(default=None, alias="lambda")
    alpha: Optional[str] = None
    beta: Optional[str] = None
    alpha0: Optional[MatrixJSON] = None
    delta_sign: Literal[-1, 1] = -1
    deltas: List[DeltaModel] = Field(default_factory=list)
    normalization: Literal["absolute", "relative", "auto"] = "auto"
    comment: Optional[str] = None


class MomentSeqModel(BaseModel):
    block_size: int
    mus: List[MatrixJSON]
    normalization: Literal["absolute", "relative"]


class MopFamilyModel(BaseModel):
    block_size: int
    polys: List[MatPolyJSON]


# =========================
# Differential operators and eigenvalues
# =========================

class RightDiffOpModel(BaseModel):
    """{"block_size": N, "coeffs": [F_0, F_1, ...]} with F_i a matrix polynomial."""

    block_size: int
    coeffs: List[MatPolyJSON]
    comment: Optional[str] = None


class EigenSeqModel(BaseModel):
    """{"explicit": [Lambda_0, ...]} or {"poly_in_n": [[polyN, ...], ...]}."""

    explicit: Optional[List[MatrixJSON]] = None
    poly_in_n: Optional[List[List[PolyNJSON]]] = None
    comment: Optional[str] = None

    @model_validator(mode="after")
    def _some_form(self) -> "EigenSeqModel":
        if self.explicit is None and self.poly_in_n is None:
            raise ValueError("eigenvalue file needs 'explicit' or 'poly_in_n'")
        return self


class AlphaModel(BaseModel):
    alpha0: MatrixJSON
    comment: Optional[str] = None


# =========================
# Algebra search
# =========================

class OrderRow(BaseModel):
    order: int
    dimension: int
    new: int


class SearchResultModel(BaseModel):
    block_size: int
    max_order: int
    n_train: int
    n_verify: int
    rows: List[OrderRow]
    minimal_order: Optional[int] = None
    basis: Dict[str, List[RightDiffOpModel]] = Field(default_factory=dict)
    verify_failures: List[int] = Field(default_factory=list)


# =========================
# Acceptance pipeline state
# =========================

class SuiteState(BaseModel):
    """
    State passed between the acceptance stages (src/backend/pipeline/steps.py).
    Each stage appends its reports; `passed` is derived from them.
    """

    quick: bool = True
    reports: List[Report] = Field(default_factory=list)
    skipped: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when every report that ran passed; says nothing about skipped stages."""
        return all(r.passed for r in self.reports)

    @property
    def complete(self) -> bool:
        return not self.skipped

    def coverage(self) -> str:
        if self.complete:
            return "all claims checked"
        return f"pass covers only the stages that ran; not checked: {', '.join(self.skipped)}"

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "pass": self.passed,
            "complete": self.complete,
            "coverage": self.coverage(),
            "quick": self.quick,
            "reports": [r.to_json_dict() for r in self.reports],
            "skipped": list(self.skipped),
        }


OperatorRecipeModel.model_rebuild()
OperatorFileModel.model_rebuild()
