# src/backend/weights/moments.py

from __future__ import annotations

import logging
from fractions import Fraction

from src.backend.weights.base_family import BaseWeightFamily
from src.backend.weights.darboux_gegenbauer02 import DarbouxGegenbauer02Family
from src.backend.weights.gegenbauer02 import Gegenbauer02Family
from src.backend.weights.jacobi import JacobiFamily
from src.backend.weights.weight import MomentSeq, Weight
from src.shared.errors import InvalidCount, UnsupportedKind

_logger = logging.getLogger(__name__)


def make_family(weight: Weight) -> BaseWeightFamily:
    """
    Factory that returns the family object for weight.kind.

    Raises UnsupportedKind for anything else.
    """
    kind = weight.kind
    if kind == "gegenbauer02":
        return Gegenbauer02Family(weight)
    if kind == "jacobi":
        return JacobiFamily(weight)
    if kind == "darboux_gegenbauer02":
        return DarbouxGegenbauer02Family(weight)
    raise UnsupportedKind(f"unsupported weight kind: {kind!r}")


def moments(w: Weight, count: int) -> MomentSeq:
    """
    Exact block moments mu_0..mu_{count-1}.

    Density part from the family's scalar core, then point^k * mass for
    every delta. Relative mode divides the density by c_0 and is refused
    with deltas present.
    """
    if count < 1:
        raise InvalidCount(f"count must be >= 1, got {count}")
    family = make_family(w)
    relative = family.resolve_relative()
    core = family.scalar_core(count + 1, relative)

    mus = []
    for k in range(count):
        mu = family.assemble(core, k)
        for delta in w.deltas:
            mu = mu + delta.mass.scale(Fraction(delta.point) ** k)
        mus.append(mu)

    _logger.info("%s: %d moments (%s)", w.kind, count, "relative" if relative else "absolute")
    return MomentSeq(w.block_size, tuple(mus), "relative" if relative else "absolute")
