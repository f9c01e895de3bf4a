"""
Verification suites run by ``verify``.

Each suite returns a CheckResult; a failed check is a result, not an
exception. ConsistencyError from the core still propagates.
"""

import random
from typing import Callable, Optional, Sequence


from khovanov.core.bracket import jones_polynomial, mirror_jones
from khovanov.core.coeff import (
    NEGATE_ALL,
    SWAP_XY,
    SpecVariant,
    RingElem,
    X_UNIT,
    Y_UNIT,
    Z_UNIT,
    unit_quotients,
)
from khovanov.core.complex import (
    GradedComplex,
    block_action,
    build_complex,
    change_of_parameters_map,
    check_gradings,
    d_squared_failures,
    double_dual_iso,
    dual_complex,
    duality_map,
    is_chain_map,
    sdeg_blocks,
    twist_complex,
)
from khovanov.core.cube import build_cube, sign_assignment, vertex_gauge
from khovanov.core.diagram import (
    Diagram,
    add_bigon,
    add_kink,
    mirror,
    renumber,
    with_arrows,
)
from khovanov.core.frobenius import (
    TensorElem,
    TensorWord,
    composite_closed_surface,
    disjoint_tori,
    elementary_merge,
    elementary_split,
    embed,
    transpose,
)
from khovanov.core.homology import (
    check_duality,
    compute_homology,
    euler_characteristic,
    f2_from_integral,
    homology_f2,
    table_euler,
)
from khovanov.models.schemas import CheckResult, HomologyTable, VerifyReport
from khovanov.observability.logfire_config import log_event, timed
from khovanov.services.compute import block_range, compute_table, specialized


SPECIALIZATIONS = (
    SpecVariant.EVEN,
    SpecVariant.ODD,
    SpecVariant.UNIFIED,
    SpecVariant.MOD2,
    SpecVariant.NEGATED,
)


def relation_checks() -> list[tuple[str, bool]]:
    """Chronological relations and closed surfaces, at map level."""
    m, s = elementary_merge(), elementary_split()
    merge, split = m.matrix, s.matrix
    z_merge_split = split.compose(merge).scale(Z_UNIT)
    sequential = disjoint_tori()
    interleaved = disjoint_tori(interleaved=True)
    dual_split = transpose(split)
    dual_merge = transpose(merge)
    return [
        ("merge_degree", merge.chron_shift() == m.degree),
        ("split_degree", split.chron_shift() == s.degree),
        (
            "merge_associativity_X",
            merge.compose(embed(m, 0, 1)) == merge.compose(embed(m, 1, 0)).scale(X_UNIT),
        ),
        (
            "split_coassociativity_Y",
            embed(s, 0, 1).compose(split) == embed(s, 1, 0).compose(split).scale(Y_UNIT),
        ),
        ("merge_split_Z_left", embed(m, 0, 1).compose(embed(s, 1, 0)) == z_merge_split),
        ("merge_split_Z_right", embed(m, 1, 0).compose(embed(s, 0, 1)) == z_merge_split),
        ("sphere_zero", composite_closed_surface("sphere") == 0),
        ("torus_Z(X+Y)", composite_closed_surface("torus") == RingElem.parse("X*Z + Y*Z")),
        ("disjoint_tori", sequential == RingElem.parse("2*Z^2 + 2*X*Y*Z^2")),
        ("interleaved_tori_unit_ratio", bool(unit_quotients(interleaved, sequential))),
        (
            "dual_split",
            dual_split(TensorWord("+-")) == TensorElem.basis(TensorWord("+"), RingElem.parse("Y*Z")),
        ),
        (
            "dual_merge",
            dual_merge(TensorWord("-"))
            == TensorElem.basis(TensorWord("+-")) + TensorElem.basis(TensorWord("-+"), RingElem.parse("X*Z")),
        ),
    ]


def _bigon_is_local(d: Diagram, crossing: int, slot: int) -> bool:
    """Both pushed arcs must leave towards other crossings."""
    arcs = d.crossings[crossing].arcs
    x, y = arcs[slot], arcs[(slot + 1) % 4]
    if x == y:
        return False
    ends = d.arc_ends()
    return all(o[0] != crossing for arc in (x, y) for o in ends[arc] if o != (crossing, arcs.index(arc)))


def _tables_equal(a: HomologyTable, b: HomologyTable) -> bool:
    return a.groups() == b.groups()


class VerificationService:
    """Runs the named check suites against one diagram."""

    def __init__(self, seed: int = 0, block_depths: tuple[int, int] = (-3, 3)):
        """
        Args:
            seed: Seed for the randomized crossing renumbering
            block_depths: Depth range of blocks compared in the decomposition suite
        """
        self.seed = seed
        self.block_depths = block_depths
        self._complex: dict[str, GradedComplex] = {}

    def _generalized(self, d: Diagram) -> GradedComplex:
        key = d.render() + "|" + d.arrows
        if key not in self._complex:
            self._complex[key] = build_complex(d)
        return self._complex[key]

    def suites(self) -> dict[str, Callable[[Diagram], CheckResult]]:
        return {
            "relations": self.check_relations,
            "dsquared": self.check_dsquared,
            "duality": self.check_duality,
            "decomposition": self.check_decomposition,
            "invariance": self.check_invariance,
            "euler": self.check_euler,
            "mod2": self.check_mod2,
        }

    def run(
        self,
        d: Diagram,
        checks: Sequence[str],
        name: str,
        equivalents: Sequence[Diagram] = (),
    ) -> VerifyReport:
        suites = self.suites()
        results = []
        for check in checks:
            with timed("check_timed", diagram=name, check=check):
                if check == "invariance":
                    result = self.check_invariance(d, equivalents)
                else:
                    result = suites[check](d)
            results.append(result)
            log_event("check_finished", diagram=name, check=check, passed=result.passed)
        return VerifyReport(diagram=name, checks=results)

    def check_relations(self, d: Optional[Diagram] = None) -> CheckResult:
        failed = [name for name, ok in relation_checks() if not ok]
        return CheckResult(name="relations", passed=not failed, details=failed)

    def check_dsquared(self, d: Diagram) -> CheckResult:
        c = self._generalized(d)
        details = [f"grading: {p}" for p in check_gradings(c)]
        for variant in SPECIALIZATIONS:
            for i in d_squared_failures(specialized(c, variant)):
                details.append(f"{variant.value}: d^2 != 0 at degree {i}")
        return CheckResult(name="dsquared", passed=not details, details=details)

    def check_duality(self, d: Diagram) -> CheckResult:
        details: list[str] = []
        dm = duality_map(d)
        for variant in (SpecVariant.ODD, SpecVariant.UNIFIED, SpecVariant.EVEN):
            if not dm.is_chain_map(variant):
                details.append(f"duality map is not a chain map over {variant.value}")
        details.extend(f"gauge mismatch off ladybug face {f}" for f in dm.gauge_failures)
        c, cm = self._generalized(d), self._generalized(mirror(d))
        if not is_chain_map(c, dual_complex(dual_complex(c)), double_dual_iso(c)):
            details.append("double dual is not identified with the complex")
        for variant in (SpecVariant.EVEN, SpecVariant.ODD):
            uct = check_duality(compute_table(mirror(d), variant, cm), compute_table(d, variant, c))
            details.extend(f"{variant.value}: {x}" for x in uct.details)
        notes = [f"ladybug gauge defects: {len(dm.gauge_defects)}"] if dm.gauge_defects else []
        return CheckResult(name="duality", passed=not details, details=details or notes)

    def check_decomposition(self, d: Diagram) -> CheckResult:
        c = self._generalized(d)
        details: list[str] = []
        unified = compute_table(d, SpecVariant.UNIFIED, c)
        low, high = self.block_depths
        blocks = sdeg_blocks(c, block_range(low, high))
        for b, block in sorted(blocks.items()):
            if not _tables_equal(compute_homology(block), unified):
                details.append(f"block {b} homology differs from unified homology")
            for gen in ("X", "Z"):
                action = block_action(c, b, gen)
                target = blocks.get(action.target) or sdeg_blocks(c, [action.target])[action.target]
                if not is_chain_map(block, target, action.matrices):
                    details.append(f"{gen}: block {b} -> {action.target} is not a chain map")
        for label, phi in (("negate_all", NEGATE_ALL), ("swap_xy", SWAP_XY)):
            if not is_chain_map(c, twist_complex(c, phi), change_of_parameters_map(c, phi)):
                details.append(f"change of parameters {label} is not a chain map")
        if not _tables_equal(compute_table(d, SpecVariant.NEGATED, c), compute_table(d, SpecVariant.EVEN, c)):
            details.append("negated homology differs from even homology")
        return CheckResult(name="decomposition", passed=not details, details=details)

    def variants_of(self, d: Diagram) -> list[tuple[str, Diagram]]:
        """Presentations that must give identical homology."""
        rng = random.Random(self.seed)
        order = list(range(d.n))
        rng.shuffle(order)
        out = []
        if d.n:
            out.append(("arrows_flipped", with_arrows(d, "1" * d.n)))
            out.append(("renumbered", renumber(d, order)))
            out.append(("kink", add_kink(d, min(d.arcs), "under_positive")))
            out.append(("kink_negative", add_kink(d, min(d.arcs), "under_negative")))
            if _bigon_is_local(d, 0, 0):
                out.append(("bigon", add_bigon(d, 0, 0)))
        return out

    def check_invariance(self, d: Diagram, equivalents: Sequence[Diagram] = ()) -> CheckResult:
        details: list[str] = []
        reference = {v: compute_table(d, v, self._generalized(d)) for v in (SpecVariant.EVEN, SpecVariant.ODD)}

        if d.n:
            cube = build_cube(d)
            first = sign_assignment(cube)
            second = sign_assignment(cube, list(reversed(range(d.n))))
            _, bad = vertex_gauge(cube, first, second)
            if bad:
                details.append(f"sign assignments are not gauge equivalent on {len(bad)} edges")
            resolved = build_complex(d, order=list(reversed(range(d.n))), cube=cube)
            for v, table in reference.items():
                if not _tables_equal(compute_table(d, v, resolved), table):
                    details.append(f"{v.value}: re-solved sign assignment changes homology")

        candidates = self.variants_of(d) + [(f"equivalent_{k}", e) for k, e in enumerate(equivalents)]
        for label, other in candidates:
            c = self._generalized(other)
            for v, table in reference.items():
                if not _tables_equal(compute_table(other, v, c), table):
                    details.append(f"{v.value}: {label} changes homology")
        return CheckResult(name="invariance", passed=not details, details=details)

    def check_euler(self, d: Diagram) -> CheckResult:
        c = self._generalized(d)
        jones = jones_polynomial(d)
        details = []
        if euler_characteristic(c) != jones:
            details.append("chain-level Euler characteristic differs from the Jones polynomial")
        for v in (SpecVariant.EVEN, SpecVariant.ODD):
            if table_euler(compute_table(d, v, c)) != jones:
                details.append(f"{v.value}: homology Euler characteristic differs from the Jones polynomial")
        if jones_polynomial(mirror(d)) != mirror_jones(jones):
            details.append("mirror Jones polynomial is not q -> 1/q")
        return CheckResult(name="euler", passed=not details, details=details)

    def check_mod2(self, d: Diagram) -> CheckResult:
        c = self._generalized(d)
        even_f2 = homology_f2(specialized(c, SpecVariant.EVEN))
        odd_f2 = homology_f2(specialized(c, SpecVariant.ODD))
        details = []
        if even_f2.groups() != odd_f2.groups():
            details.append("even and odd F_2 dimensions differ")
        direct = compute_homology(specialized(c, SpecVariant.MOD2))
        if direct.groups() != even_f2.groups():
            details.append("mod2 specialization differs from even reduced mod 2")
        predicted = f2_from_integral(compute_table(d, SpecVariant.EVEN, c))
        if predicted != {k: v[0] for k, v in even_f2.groups().items()}:
            details.append("F_2 dimensions disagree with the universal coefficient prediction")
        return CheckResult(name="mod2", passed=not details, details=details)
