"""
The graded generalized Khovanov complex and the constructions on it:
specialization, splitting-degree blocks, duals, the mirror duality map and
changes of parameters.

Differentials are stored per homological degree as sparse matrices
``{(row, col): coefficient}`` where ``col`` indexes C^i and ``row``
indexes C^{i+1}. Coefficients are RingElem, ZPi or int depending on the
variant.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

import structlog

from khovanov.core.coeff import (
    ONE,
    XY_UNIT,
    RingAutomorphism,
    RingElem,
    SDeg,
    SpecVariant,
    Unit,
    X_UNIT,
    Y_UNIT,
    Z_UNIT,
    ZPi,
    specialize,
)
from khovanov.core.cube import (
    Cube,
    EdgeKey,
    SignAssignment,
    Vertex,
    build_cube,
    flip,
    sign_assignment,
    unit_ratios,
    vertex_label,
    vertex_shift,
)
from khovanov.core.diagram import Diagram, mirror
from khovanov.core.frobenius import TensorElem, TensorMap, TensorWord, all_words, sdeg, transpose
from khovanov.exceptions import ConsistencyError

logger = structlog.get_logger(__name__)

Coefficient = Union[RingElem, ZPi, int]
Matrix = dict[tuple[int, int], Coefficient]


@dataclass(frozen=True, slots=True)
class Generator:
    vertex: Vertex
    word: TensorWord
    hom_deg: int
    q_deg: int
    sdeg: SDeg
    dual: bool = False

    @property
    def label(self) -> str:
        star = "*" if self.dual else ""
        return f"{vertex_label(self.vertex)}|{self.word}{star}"


@dataclass(frozen=True)
class GradedComplex:
    variant: SpecVariant
    generators: Mapping[int, tuple[Generator, ...]]
    differentials: Mapping[int, Matrix]
    block: Optional[SDeg] = None
    modulus: Optional[int] = None

    def degrees(self) -> list[int]:
        return sorted(i for i, gens in self.generators.items() if gens)

    def rank(self, i: int) -> int:
        return len(self.generators.get(i, ()))

    def d(self, i: int) -> Matrix:
        return dict(self.differentials.get(i, {}))

    def ranks(self) -> dict[int, int]:
        return {i: self.rank(i) for i in self.degrees()}

    def q_degrees(self) -> list[int]:
        return sorted({g.q_deg for gens in self.generators.values() for g in gens})


def sparse_product(left: Matrix, right: Matrix, modulus: Optional[int] = None) -> Matrix:
    """left @ right for dict-of-entries matrices."""
    by_row: dict[int, list[tuple[int, Coefficient]]] = defaultdict(list)
    for (m, c), v in right.items():
        by_row[m].append((c, v))
    acc: dict[tuple[int, int], Coefficient] = {}
    for (r, m), u in left.items():
        for c, v in by_row.get(m, ()):
            key = (r, c)
            acc[key] = acc[key] + u * v if key in acc else u * v
    if modulus:
        return {k: v % modulus for k, v in acc.items() if v % modulus}  # type: ignore[operator]
    return {k: v for k, v in acc.items() if v}


def _clean(m: Matrix) -> Matrix:
    return {k: v for k, v in m.items() if v}


def d_squared_failures(c: GradedComplex) -> list[int]:
    """Degrees i where d^{i+1} d^i != 0."""
    return [
        i
        for i in c.degrees()
        if sparse_product(c.d(i + 1), c.d(i), c.modulus)
    ]


def check_gradings(c: GradedComplex) -> list[str]:
    """Entries that break q- or sdeg-preservation (generalized complexes only)."""
    problems = []
    for i, matrix in sorted(c.differentials.items()):
        src, tgt = c.generators.get(i, ()), c.generators.get(i + 1, ())
        for (row, col), coeff in sorted(matrix.items()):
            u, w = src[col], tgt[row]
            if u.q_deg != w.q_deg:
                problems.append(f"q: {u.label} -> {w.label}")
            if isinstance(coeff, RingElem):
                for mono, _ in coeff.items():
                    if w.sdeg + mono.sdeg != u.sdeg:
                        problems.append(f"sdeg: {u.label} -> {w.label} via {coeff}")
                        break
    return problems


EdgeSigns = Union[SignAssignment, Mapping[EdgeKey, Unit]]


def assemble_complex(d: Diagram, cube: Cube, signs: EdgeSigns) -> GradedComplex:
    """Generators and corrected differential of F Kh(D) from a finished cube."""
    n_minus, n_plus = d.n_minus, d.n_plus
    gens: dict[int, list[Generator]] = defaultdict(list)
    where: dict[tuple[Vertex, TensorWord], tuple[int, int]] = {}
    for xi in cube.vertices():
        shift = vertex_shift(cube, signs, xi)  # type: ignore[arg-type]
        weight = sum(xi)
        i = weight - n_minus
        for w in all_words(len(cube.resolutions[xi])):
            g = Generator(
                xi,
                w,
                i,
                w.q_weight + weight + n_plus - 2 * n_minus,
                sdeg(w) - shift,
            )
            where[(xi, w)] = (i, len(gens[i]))
            gens[i].append(g)

    diffs: dict[int, Matrix] = defaultdict(dict)
    for key in sorted(cube.edges):
        edge = cube.edges[key]
        eps = signs[key]
        for src_w, tgt_w, coeff in edge.map.entries():
            i, col = where[(edge.source, src_w)]
            _, row = where[(edge.target, tgt_w)]
            diffs[i][(row, col)] = coeff.scale(eps)

    return GradedComplex(
        SpecVariant.GENERALIZED,
        {i: tuple(g) for i, g in sorted(gens.items())},
        {i: m for i, m in sorted(diffs.items())},
    )


def _validated(c: GradedComplex, what: str) -> GradedComplex:
    bad = d_squared_failures(c)
    if bad:
        raise ConsistencyError("d^2 != 0", complex=what, degree=bad[0])
    problems = check_gradings(c)
    if problems:
        raise ConsistencyError("differential breaks a grading", complex=what, entry=problems[0])
    return c


def build_complex(
    d: Diagram,
    order: Optional[Sequence[int]] = None,
    cube: Optional[Cube] = None,
) -> GradedComplex:
    cube = cube or build_cube(d)
    signs = sign_assignment(cube, order)
    c = _validated(assemble_complex(d, cube, signs), "generalized")
    logger.debug("complex_built", ranks=c.ranks())
    return c


def specialize_complex(c: GradedComplex, v: SpecVariant) -> GradedComplex:
    """Entrywise specialization; unified complexes accept even/odd/mod2 (pi -> +-1)."""
    if c.variant is SpecVariant.UNIFIED:
        if v is SpecVariant.UNIFIED:
            return c
        pi = {SpecVariant.EVEN: 1, SpecVariant.MOD2: 1, SpecVariant.ODD: -1}.get(v)
        if pi is None:
            raise ValueError(f"cannot specialize a unified complex to {v.value}")
        fn: Callable[[Coefficient], Coefficient] = lambda z: z.at(pi)  # type: ignore[union-attr]
    elif c.variant is SpecVariant.GENERALIZED:
        fn = lambda r: specialize(r, v)  # type: ignore[arg-type]
    else:
        raise ValueError(f"cannot specialize a {c.variant.value} complex")
    modulus = 2 if v is SpecVariant.MOD2 else None
    diffs = {}
    for i, matrix in c.differentials.items():
        entries = {k: fn(x) for k, x in matrix.items()}
        if modulus:
            entries = {k: x % modulus for k, x in entries.items()}  # type: ignore[operator]
        diffs[i] = _clean(entries)
    return GradedComplex(v, c.generators, diffs, c.block, modulus)


def block_normalizer(g: Generator, block: SDeg) -> Unit:
    """X^{(a - a_u) mod 2} Z^{b_u - b}: moves generator u into block (a, b)."""
    return X_UNIT ** ((block.parity - g.sdeg.parity) % 2) * Z_UNIT ** (g.sdeg.depth - block.depth)


def native_generators(c: GradedComplex, block: SDeg) -> list[Generator]:
    return [g for i in c.degrees() for g in c.generators[i] if g.sdeg == block]


def block_complex(c: GradedComplex, block: SDeg) -> GradedComplex:
    """The splitting-degree block (a, b) of a generalized complex as a complex over Z_pi."""
    if c.variant is not SpecVariant.GENERALIZED:
        raise ValueError("blocks are taken from the generalized complex")
    diffs: dict[int, Matrix] = {}
    for i, matrix in c.differentials.items():
        src, tgt = c.generators[i], c.generators[i + 1]
        entries: Matrix = {}
        for (row, col), coeff in matrix.items():
            scale = block_normalizer(src[col], block) / block_normalizer(tgt[row], block)
            rescaled = coeff.scale(scale)  # type: ignore[union-attr]
            if rescaled.homogeneous_sdeg() != SDeg():
                raise ConsistencyError(
                    "differential entry mixes splitting-degree blocks",
                    source=src[col].label,
                    target=tgt[row].label,
                )
            entries[(row, col)] = specialize(rescaled, SpecVariant.UNIFIED)
        diffs[i] = _clean(entries)
    gens = {
        i: tuple(
            Generator(g.vertex, g.word, g.hom_deg, g.q_deg, block, g.dual) for g in gs
        )
        for i, gs in c.generators.items()
    }
    return GradedComplex(SpecVariant.UNIFIED, gens, diffs, block)


def sdeg_blocks(
    c: GradedComplex, blocks: Optional[Sequence[SDeg]] = None
) -> dict[SDeg, GradedComplex]:
    """Blocks keyed by splitting degree; defaults to the degrees carried by generators."""
    if blocks is None:
        blocks = sorted({g.sdeg for i in c.degrees() for g in c.generators[i]})
    return {b: block_complex(c, b) for b in blocks}


ACTION_TARGETS: dict[str, Callable[[SDeg], SDeg]] = {
    "X": lambda b: b + SDeg(1, 0),
    "Y": lambda b: b + SDeg(1, 0),
    "Z": lambda b: b + SDeg(0, -1),
}
ACTION_UNITS = {"X": X_UNIT, "Y": Y_UNIT, "Z": Z_UNIT}


@dataclass(frozen=True)
class BlockAction:
    generator: str
    source: SDeg
    target: SDeg
    matrices: Mapping[int, Matrix]


def block_action(c: GradedComplex, source: SDeg, generator: str) -> BlockAction:
    """Multiplication by X, Y or Z from block ``source`` into the block it lands in."""
    target = ACTION_TARGETS[generator](source)
    unit = ACTION_UNITS[generator]
    matrices: dict[int, Matrix] = {}
    for i in c.degrees():
        entries: Matrix = {}
        for idx, g in enumerate(c.generators[i]):
            ratio = unit * block_normalizer(g, source) / block_normalizer(g, target)
            if ratio.sdeg != SDeg():
                raise ConsistencyError(
                    "action does not land in the expected block",
                    generator=generator,
                    block=str(source),
                )
            entries[(idx, idx)] = specialize(ratio.to_elem(), SpecVariant.UNIFIED)
        matrices[i] = entries
    return BlockAction(generator, source, target, matrices)


def is_chain_map(
    src: GradedComplex,
    tgt: GradedComplex,
    f: Mapping[int, Matrix],
    modulus: Optional[int] = None,
) -> bool:
    degrees = set(src.degrees()) | set(tgt.degrees())
    for i in sorted(degrees):
        lhs = sparse_product(f.get(i + 1, {}), src.d(i), modulus)
        rhs = sparse_product(tgt.d(i), f.get(i, {}), modulus)
        if lhs != rhs:
            return False
    return True


def dual_complex(c: GradedComplex) -> GradedComplex:
    """
    (C*)^j = Hom(C^{-j}, R) with d*^j = (-1)^j (d^{-j-1})^T.

    dual(dual(c)) has differential -d; u -> (-1)^i u identifies it with c.
    """
    gens = {
        -i: tuple(
            Generator(g.vertex, g.word, -g.hom_deg, -g.q_deg, -g.sdeg, not g.dual)
            for g in gs
        )
        for i, gs in c.generators.items()
    }
    diffs: dict[int, Matrix] = {}
    for i, matrix in c.differentials.items():
        j = -(i + 1)
        sign = -1 if j % 2 else 1
        diffs[j] = {(col, row): (v if sign == 1 else -v) for (row, col), v in matrix.items()}  # type: ignore[operator]
    return GradedComplex(c.variant, dict(sorted(gens.items())), dict(sorted(diffs.items())), c.block, c.modulus)


def double_dual_iso(c: GradedComplex) -> dict[int, Matrix]:
    """u -> (-1)^i u from c to dual(dual(c))."""
    return {
        i: {(k, k): (1 if i % 2 == 0 else -1) * _one_like(c) for k in range(c.rank(i))}
        for i in c.degrees()
    }


def _one_like(c: GradedComplex) -> Coefficient:
    if c.variant is SpecVariant.GENERALIZED:
        return RingElem.one()
    if c.variant is SpecVariant.UNIFIED:
        return ZPi(1, 0)
    return 1


@dataclass(frozen=True)
class DualityMap:
    """Phi: F Kh(mirror D) -> F Kh(D)^* together with the data it was built from."""

    source: GradedComplex
    target: GradedComplex
    matrices: Mapping[int, Matrix]
    edge_units: Mapping[EdgeKey, Unit]
    gauge_defects: list[str] = field(default_factory=list)
    gauge_failures: list[str] = field(default_factory=list)

    def is_bijective(self) -> bool:
        for i in set(self.source.degrees()) | set(self.target.degrees()):
            matrix = self.matrices.get(i, {})
            rows = sorted(r for r, _ in matrix)
            cols = sorted(c for _, c in matrix)
            n = self.source.rank(i)
            if n != self.target.rank(i) or rows != list(range(n)) or cols != list(range(n)):
                return False
        return True

    def is_chain_map(self, variant: SpecVariant = SpecVariant.GENERALIZED) -> bool:
        if variant is SpecVariant.GENERALIZED:
            return is_chain_map(self.source, self.target, self.matrices)
        src = specialize_complex(self.source, variant)
        tgt = specialize_complex(self.target, variant)
        modulus = 2 if variant is SpecVariant.MOD2 else None
        f = {
            i: _clean({k: specialize(v, variant) for k, v in m.items()})  # type: ignore[arg-type]
            for i, m in self.matrices.items()
        }
        return is_chain_map(src, tgt, f, modulus)


def _phi_map(k: int) -> TensorMap:
    """w -> (XY)^{a(w)} flip(w)*, a(w) the parity of sdeg w."""

    def column(w: TensorWord) -> TensorElem:
        unit = XY_UNIT if sdeg(w).parity else ONE
        return TensorElem.basis(w.flip(), unit)

    return TensorMap.from_function(k, k, column)


def duality_map(d: Diagram) -> DualityMap:
    """
    Build Phi vertex by vertex, transport the sign assignment along it and
    verify the result is a bijective chain map into the dual complex.
    """
    n = d.n
    cube_o = build_cube(d)
    signs_o = sign_assignment(cube_o)
    original = _validated(assemble_complex(d, cube_o, signs_o), "original")
    dual = dual_complex(original)

    md = mirror(d)
    cube_m = build_cube(md)
    signs_m = sign_assignment(cube_m)

    def complement(xi: Vertex) -> Vertex:
        return tuple(1 - b for b in xi)

    units: dict[EdgeKey, Unit] = {}
    override: dict[EdgeKey, Unit] = {}
    for key in sorted(cube_m.edges):
        zeta, i = key
        edge_m = cube_m.edges[key]
        top = complement(zeta)
        orig_key = (flip(top, i), i)
        edge_o = cube_o.edges[orig_key]
        k_src = len(cube_m.resolutions[zeta])
        k_tgt = len(cube_m.resolutions[edge_m.target])
        lhs = transpose(edge_o.map).compose(_phi_map(k_src))
        rhs = _phi_map(k_tgt).compose(edge_m.map)
        found = unit_ratios(lhs, rhs)
        if not found:
            raise ConsistencyError(
                "duality map is not proportional to a chain map on edge",
                edge=f"{vertex_label(zeta)}:{i + 1}",
            )
        unit = next((u for u in found if u.mono.y_exp == 0), found[0])
        units[key] = unit
        j = -(sum(top) - d.n_minus)
        sign = Unit(-1 if j % 2 else 1)
        override[key] = sign * signs_o[orig_key] * unit

    source = _validated(assemble_complex(md, cube_m, override), "mirror")

    index_t = {
        (g.vertex, g.word): idx for i in dual.degrees() for idx, g in enumerate(dual.generators[i])
    }
    matrices: dict[int, Matrix] = {}
    for i in source.degrees():
        entries: Matrix = {}
        for col, g in enumerate(source.generators[i]):
            image = (complement(g.vertex), g.word.flip())
            if image not in index_t:
                raise ConsistencyError("duality map misses a generator", generator=g.label)
            target_gen = dual.generators[i][index_t[image]]
            if target_gen.q_deg != g.q_deg or target_gen.hom_deg != g.hom_deg:
                raise ConsistencyError("duality map breaks gradings", generator=g.label)
            unit = XY_UNIT if sdeg(g.word).parity else ONE
            entries[(index_t[image], col)] = unit.to_elem()
        matrices[i] = entries

    defects: list[str] = []
    failures: list[str] = []
    rho = {key: override[key] / signs_m[key] for key in override}
    for (xi, i, j), face in sorted(cube_m.faces.items()):
        delta = rho[(flip(xi, i), j)] * rho[(xi, i)] / (rho[(flip(xi, j), i)] * rho[(xi, j)])
        if delta.is_one():
            continue
        label = f"{vertex_label(xi)}:{i + 1},{j + 1}"
        if face.ladybug and delta == XY_UNIT:
            defects.append(label)
        else:
            failures.append(label)

    dm = DualityMap(source, dual, matrices, units, defects, failures)
    if not dm.is_bijective() or not dm.is_chain_map():
        raise ConsistencyError("duality map is not a chain isomorphism", crossings=n)
    logger.debug("duality_map_built", crossings=n, gauge_defects=len(defects))
    return dm


def twist_complex(c: GradedComplex, phi: RingAutomorphism) -> GradedComplex:
    """Apply a ring automorphism to every coefficient of a generalized complex."""
    if c.variant is not SpecVariant.GENERALIZED:
        raise ValueError("only generalized complexes can be twisted")
    diffs = {i: _clean({k: phi(v) for k, v in m.items()}) for i, m in c.differentials.items()}  # type: ignore[arg-type]
    return GradedComplex(c.variant, c.generators, diffs, c.block)


def change_of_parameters_map(c: GradedComplex, phi: RingAutomorphism) -> dict[int, Matrix]:
    """u -> (phi(X)/X)^a (phi(Z)/Z)^b u with (a, b) = sdeg u; a chain iso c -> twist_complex(c, phi)."""
    return {
        i: {
            (idx, idx): phi.generator_scale(g.sdeg).to_elem()
            for idx, g in enumerate(c.generators[i])
        }
        for i in c.degrees()
    }


def complex_to_json(c: GradedComplex) -> dict:
    degrees = []
    for i in c.degrees():
        degrees.append(
            {
                "i": i,
                "generators": [
                    {
                        "vertex": vertex_label(g.vertex),
                        "word": str(g.word),
                        "q": g.q_deg,
                        "sdeg": [g.sdeg.parity, g.sdeg.depth],
                    }
                    for g in c.generators[i]
                ],
                "differential": [
                    [row, col, str(v)] for (row, col), v in sorted(c.d(i).items())
                ],
            }
        )
    payload: dict = {"variant": c.variant.value, "degrees": degrees}
    if c.block is not None:
        payload["block"] = [c.block.parity, c.block.depth]
    return payload
