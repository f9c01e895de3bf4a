"""
Pydantic models for homology tables, verification reports, corpus entries
and CLI jobs.
"""

from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

VALID_CHECKS = (
    "relations",
    "dsquared",
    "duality",
    "decomposition",
    "invariance",
    "euler",
    "mod2",
)

VALID_VARIANTS = ("even", "odd", "unified", "mod2", "generalized", "negated")


class HomologyEntry(BaseModel):
    """Homology group at bidegree (i, q): Z^free plus cyclic torsion."""

    i: int = Field(..., description="Homological degree")
    q: int = Field(..., description="Quantum degree")
    free: int = Field(default=0, ge=0, description="Free rank")
    torsion: list[int] = Field(
        default_factory=list,
        description="Orders of the cyclic torsion summands, prime powers, sorted",
    )

    @field_validator("torsion")
    @classmethod
    def validate_torsion(cls, v: list[int]) -> list[int]:
        if any(t <= 1 for t in v):
            raise ValueError("torsion orders must be > 1")
        return sorted(v)


class InvolutionEntry(BaseModel):
    """Rational eigenspace ranks of pi on unified homology at (i, q)."""

    i: int
    q: int
    plus: int = Field(default=0, description="Rank of the +1 eigenspace")
    minus: int = Field(default=0, description="Rank of the -1 eigenspace")


class HomologyTable(BaseModel):
    """Homology of one complex, one entry per nonzero bidegree."""

    variant: str = Field(..., description="Coefficient specialization")
    block: Optional[tuple[int, int]] = Field(
        default=None, description="Splitting-degree block (parity, depth), if any"
    )
    entries: list[HomologyEntry] = Field(default_factory=list)
    involution: list[InvolutionEntry] = Field(
        default_factory=list,
        description="pi-action descriptor, unified tables only",
    )
    specializations: dict[str, list[HomologyEntry]] = Field(
        default_factory=dict,
        description="Homology after pi -> +1 ('even') and pi -> -1 ('odd'), unified tables only",
    )

    def groups(self) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
        """{(i, q): (free, torsion)} for comparisons that ignore variant and block."""
        return {(e.i, e.q): (e.free, tuple(e.torsion)) for e in self.entries}


class CheckResult(BaseModel):
    """Outcome of one verification check."""

    name: str = Field(..., description="Check name, e.g. 'duality'")
    passed: bool
    details: list[str] = Field(
        default_factory=list, description="Failing items or short notes"
    )


class VerifyReport(BaseModel):
    """All checks run against one diagram."""

    diagram: str = Field(..., description="Name or PD text of the diagram")
    checks: list[CheckResult] = Field(default_factory=list)
    passed: bool = True

    @model_validator(mode="after")
    def aggregate(self) -> "VerifyReport":
        self.passed = all(c.passed for c in self.checks)
        return self


class CorpusEntry(BaseModel):
    """A bundled PD file with its metadata header."""

    name: str
    path: str
    pd: str = Field(..., description="PD text without the header")
    crossings: int = Field(..., ge=0)
    components: int = Field(..., ge=1)
    circles: int = Field(default=0, ge=0, description="Crossing-free circles")
    expected: dict[str, list[HomologyEntry]] = Field(
        default_factory=dict,
        description="Fixture tables keyed by variant",
    )


class Job(BaseModel):
    """A parsed CLI invocation."""

    pd: Optional[str] = None
    file: Optional[str] = None
    corpus: Optional[str] = None
    variant: str = Field(default="even")
    checks: list[str] = Field(default_factory=list)
    output: str = Field(default="text", description="'text' or 'json'")
    arrows: Optional[str] = Field(
        default=None, description="Arrow override as a bit string, one bit per crossing"
    )
    dump_complex: bool = False
    dump_cube: bool = False
    blocks: Optional[tuple[int, int]] = Field(
        default=None, description="Depth range of splitting-degree blocks to report"
    )
    seed: int = 0
    allow_large: bool = False

    @field_validator("variant")
    @classmethod
    def validate_variant(cls, v: str) -> str:
        v = v.lower()
        if v not in VALID_VARIANTS:
            raise ValueError(f"variant must be one of {list(VALID_VARIANTS)}")
        return v

    @field_validator("checks")
    @classmethod
    def validate_checks(cls, v: list[str]) -> list[str]:
        unknown = [c for c in v if c not in VALID_CHECKS]
        if unknown:
            raise ValueError(f"unknown checks {unknown}; valid: {list(VALID_CHECKS)}")
        return v

    @field_validator("arrows")
    @classmethod
    def validate_arrows(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and set(v) - {"0", "1"}:
            raise ValueError("arrows must be a string of 0s and 1s")
        return v

    @model_validator(mode="after")
    def exactly_one_source(self) -> "Job":
        sources = [s for s in (self.pd, self.file, self.corpus) if s is not None]
        if len(sources) != 1:
            raise ValueError("exactly one of --pd, --file or --corpus is required")
        return self
