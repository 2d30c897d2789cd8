"""CASCADE block vocabulary and level ranks."""

from __future__ import annotations

import enum
from typing import Optional


class CascadeBlock(str, enum.Enum):
    """Argumentation block a node belongs to. Values are casefile tokens."""

    TOP_CLAIM = "top_claim"
    GENERIC = "generic"
    WHITE_HAT_ASSETS = "white_hat.assets"
    WHITE_HAT_DECOMP = "white_hat.decomp"
    WHITE_HAT_GOALS = "white_hat.goals"
    BLACK_HAT_THREATS = "black_hat.threats"
    BLACK_HAT_PATHS = "black_hat.paths"
    RESOLVER_TREATMENT = "resolver.treatment"
    RESOLVER_REQUIREMENTS = "resolver.requirements"
    EVIDENCE = "evidence"
    QUALITY_COMPLETENESS = "quality.completeness"
    QUALITY_CONFIDENCE = "quality.confidence"

    @property
    def is_quality(self) -> bool:
        return self in (CascadeBlock.QUALITY_COMPLETENESS, CascadeBlock.QUALITY_CONFIDENCE)


_RANKS = {
    CascadeBlock.TOP_CLAIM: 0,
    CascadeBlock.WHITE_HAT_ASSETS: 1,
    CascadeBlock.WHITE_HAT_DECOMP: 2,
    CascadeBlock.WHITE_HAT_GOALS: 3,
    CascadeBlock.BLACK_HAT_THREATS: 4,
    CascadeBlock.BLACK_HAT_PATHS: 5,
    CascadeBlock.RESOLVER_TREATMENT: 6,
    CascadeBlock.RESOLVER_REQUIREMENTS: 7,
    CascadeBlock.EVIDENCE: 8,
}


def rank_of(block: CascadeBlock) -> Optional[int]:
    """Level of a block in the top-down argument flow; None for Generic and Quality.*."""
    return _RANKS.get(block)
