"""
Homology pipeline: diagram -> generalized complex -> specialization or
splitting-degree blocks -> table.
"""

from typing import Optional

from khovanov.core.coeff import NEGATE_ALL, SDeg, SpecVariant
from khovanov.core.complex import (
    GradedComplex,
    build_complex,
    sdeg_blocks,
    specialize_complex,
    twist_complex,
)
from khovanov.core.diagram import Diagram
from khovanov.core.homology import compute_homology
from khovanov.exceptions import InputError
from khovanov.models.schemas import HomologyTable
from khovanov.observability.logfire_config import log_warning, timed


def enforce_limit(d: Diagram, limit: int, allow_large: bool = False) -> None:
    """Refuse diagrams above the crossing limit unless explicitly allowed."""
    if d.n <= limit:
        return
    if not allow_large:
        raise InputError(
            f"diagram has {d.n} crossings, above the limit of {limit}; "
            "pass --allow-large to proceed"
        )
    log_warning("crossing_limit_exceeded", crossings=d.n, limit=limit)


def specialized(c: GradedComplex, variant: SpecVariant) -> GradedComplex:
    """
    Specialization of a generalized complex. The negated variant goes
    through the automorphism X, Y, Z -> -X, -Y, -Z followed by the even map.
    """
    if variant is SpecVariant.GENERALIZED:
        return c
    if variant is SpecVariant.NEGATED:
        twisted = specialize_complex(twist_complex(c, NEGATE_ALL), SpecVariant.EVEN)
        return GradedComplex(
            SpecVariant.NEGATED, twisted.generators, twisted.differentials
        )
    return specialize_complex(c, variant)


def compute_table(
    d: Diagram,
    variant: SpecVariant,
    complex_: Optional[GradedComplex] = None,
) -> HomologyTable:
    if variant is SpecVariant.GENERALIZED:
        raise InputError("the generalized variant is reported per block; use --blocks")
    with timed("table_computed", variant=variant.value, crossings=d.n) as extra:
        c = complex_ if complex_ is not None else build_complex(d)
        table = compute_homology(specialized(c, variant))
        extra["entries"] = len(table.entries)
    return table


def block_range(low: int, high: int) -> list[SDeg]:
    return [SDeg(a, b) for b in range(low, high + 1) for a in (0, 1)]


def block_tables(
    d: Diagram,
    low: int,
    high: int,
    complex_: Optional[GradedComplex] = None,
) -> list[HomologyTable]:
    """Unified homology of every block (a, b) with a in {0, 1} and low <= b <= high."""
    if low > high:
        raise InputError(f"empty block range {low}..{high}")
    c = complex_ if complex_ is not None else build_complex(d)
    blocks = sdeg_blocks(c, block_range(low, high))
    return [compute_homology(blocks[b]) for b in sorted(blocks)]
