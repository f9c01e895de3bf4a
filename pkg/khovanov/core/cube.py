"""
Cube of resolutions over R.

Builds the saddle map on every edge, measures the face scalars psi by
comparing the two composites around each square, repairs the XY
ambiguity on ladybug faces so that psi is a cocycle, and solves for a
sign assignment epsilon with delta(epsilon) = -psi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Optional, Sequence

import structlog

from khovanov.core.coeff import (
    MINUS_ONE,
    ONE,
    XY_UNIT,
    SDeg,
    Unit,
    RingElem,
    unit_quotients,
)
from khovanov.core.diagram import Diagram, Resolution, resolve
from khovanov.core.frobenius import (
    TensorElem,
    TensorMap,
    TensorWord,
    elementary_merge,
    elementary_split,
    embed_word,
    tau_word,
)
from khovanov.exceptions import ConsistencyError

logger = structlog.get_logger(__name__)

Vertex = tuple[int, ...]
EdgeKey = tuple[Vertex, int]
FaceKey = tuple[Vertex, int, int]


def flip(xi: Vertex, i: int) -> Vertex:
    return xi[:i] + (1 - xi[i],) + xi[i + 1 :]


def vertex_label(xi: Vertex) -> str:
    return "".join(str(b) for b in xi)


def all_vertices(n: int) -> list[Vertex]:
    return sorted(product((0, 1), repeat=n), key=lambda v: (sum(v), v))


@dataclass(frozen=True)
class CubeEdge:
    source: Vertex
    direction: int
    kind: str
    positions: tuple[int, int]
    source_circles: int
    orient_reversed: bool
    map: TensorMap
    shift: SDeg

    @property
    def target(self) -> Vertex:
        return flip(self.source, self.direction)

    @property
    def key(self) -> EdgeKey:
        return (self.source, self.direction)


@dataclass(frozen=True)
class FaceScalar:
    face: FaceKey
    value: Unit
    ladybug: bool = False


@dataclass(frozen=True)
class SignAssignment:
    eps: Mapping[EdgeKey, Unit]
    order: tuple[int, ...]

    def __getitem__(self, key: EdgeKey) -> Unit:
        return self.eps[key]


@dataclass(frozen=True)
class Cube:
    diagram: Diagram
    resolutions: Mapping[Vertex, Resolution]
    edges: Mapping[EdgeKey, CubeEdge]
    faces: Mapping[FaceKey, FaceScalar] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.diagram.n

    def vertices(self) -> list[Vertex]:
        return all_vertices(self.n)

    def psi(self, xi: Vertex, i: int, j: int) -> Unit:
        return self.faces[(xi, i, j)].value

    def ladybug_faces(self) -> list[FaceKey]:
        return [k for k, f in sorted(self.faces.items()) if f.ladybug]


def _apply_taus(unit: Unit, word: TensorWord, positions: Iterable[int]) -> tuple[Unit, TensorWord]:
    for p in positions:
        u, word = tau_word(word, p)
        unit = unit * u
    return unit, word


def build_edge(d: Diagram, src: Resolution, tgt: Resolution, i: int) -> CubeEdge:
    """Saddle map for the edge flipping crossing ``i`` from ``src`` to ``tgt``."""
    crossing = d.crossings[i]
    a, b, c, _ = crossing.arcs
    k = len(src)
    src_sets, tgt_sets = src.arc_sets(), tgt.arc_sets()
    pa, pb = src.position_of_arc(a), src.position_of_arc(b)

    if pa != pb:
        p, q = min(pa, pb), max(pa, pb)
        tail_arc = crossing.arcs[crossing.tail_zero_strand()[0]]
        reversed_ = src.position_of_arc(tail_arc) == q
        expected = list(src_sets)
        expected[p - 1] = src_sets[p - 1] | src_sets[q - 1]
        del expected[q - 1]
        if expected != tgt_sets:
            raise ConsistencyError(
                "inconsistent circle matching", edge=vertex_label(src.xi), crossing=i + 1
            )
        merge = elementary_merge(reversed_)
        lift = range(q - 1, p, -1)

        def column(w: TensorWord) -> TensorElem:
            unit, moved = _apply_taus(ONE, w, lift)
            return embed_word(merge, k - p - 1, p - 1, moved).scale(unit)

        edge_map = TensorMap.from_function(k, k - 1, column)
        kind, positions = "merge", (p, q)
    else:
        p = pa
        c1_pos = tgt.position_of_arc(min(src.circles[p - 1]))
        first, second = tgt.position_of_arc(a), tgt.position_of_arc(c)
        q2 = second if first == c1_pos else first
        if c1_pos != p or q2 <= p or {first, second} != {p, q2}:
            raise ConsistencyError(
                "inconsistent circle matching", edge=vertex_label(src.xi), crossing=i + 1
            )
        expected = list(src_sets)
        del expected[p - 1]
        expected.insert(p - 1, tgt_sets[p - 1])
        expected.insert(q2 - 1, tgt_sets[q2 - 1])
        if expected != tgt_sets or tgt_sets[p - 1] | tgt_sets[q2 - 1] != src_sets[p - 1]:
            raise ConsistencyError(
                "inconsistent circle matching", edge=vertex_label(src.xi), crossing=i + 1
            )
        tail_arc = crossing.arcs[crossing.tail_one_strand()[0]]
        reversed_ = tgt.position_of_arc(tail_arc) == q2
        split = elementary_split(reversed_)
        lower = range(p + 1, q2)

        def column(w: TensorWord) -> TensorElem:
            acc: dict[TensorWord, RingElem] = {}
            for out, coeff in embed_word(split, k - p, p - 1, w).items():
                unit, moved = _apply_taus(ONE, out, lower)
                acc[moved] = coeff.scale(unit)
            return TensorElem(acc)

        edge_map = TensorMap.from_function(k, k + 1, column)
        kind, positions = "split", (p, q2)

    try:
        shift = edge_map.sdeg_shift()
    except ValueError as exc:
        raise ConsistencyError(
            "edge map is not sdeg-homogeneous", edge=vertex_label(src.xi), crossing=i + 1
        ) from exc
    assert shift is not None
    return CubeEdge(src.xi, i, kind, positions, k, reversed_, edge_map, shift)


def edge_map(d: Diagram, xi: Sequence[int], i: int) -> TensorMap:
    """Matrix of the saddle along direction ``i`` out of vertex ``xi``."""
    xi = tuple(xi)
    if xi[i]:
        raise ValueError(f"crossing {i} is already resolved as 1 at {vertex_label(xi)}")
    return build_edge(d, resolve(d, xi), resolve(d, flip(xi, i)), i).map


def edge_sdeg_formula(edge: CubeEdge) -> SDeg:
    """Splitting-degree shift of an edge predicted from its shape alone."""
    k = edge.source_circles
    p, q = edge.positions
    if edge.kind == "merge":
        shift = SDeg((q - 1 - p) + (k - p - 1), 0)
    else:
        # the new letter lands at position p + 1 and every factor above it moves up one
        shift = SDeg(q - 2, -1 - k)
    if edge.orient_reversed:
        shift = shift + SDeg(1, 0)
    return shift


def unit_ratios(a: TensorMap, b: TensorMap) -> list[Unit]:
    """All units c with a == c * b, in a deterministic order."""
    if b.is_zero():
        return [ONE] if a.is_zero() else []
    src = min(b.columns)
    tgt, cb = next(b.columns[src].items())
    return [u for u in unit_quotients(a(src).coefficient(tgt), cb) if b.scale(u) == a]


def _measure_face(cube_edges: Mapping[EdgeKey, CubeEdge], xi: Vertex, i: int, j: int) -> FaceScalar:
    first_i = cube_edges[(flip(xi, i), j)].map.compose(cube_edges[(xi, i)].map)
    first_j = cube_edges[(flip(xi, j), i)].map.compose(cube_edges[(xi, j)].map)
    found = unit_ratios(first_i, first_j)
    face = (xi, i, j)
    if len(found) == 1:
        return FaceScalar(face, found[0])
    if len(found) == 2 and found[0] * XY_UNIT == found[1]:
        preferred = next(u for u in found if u.mono.y_exp == 0)
        return FaceScalar(face, preferred, ladybug=True)
    raise ConsistencyError(
        "face composites are not proportional by a unique unit",
        face=f"{vertex_label(xi)}:{i + 1},{j + 1}",
        candidates=len(found),
    )


def three_cubes(n: int) -> list[tuple[Vertex, int, int, int]]:
    result = []
    for zeta in all_vertices(n):
        free = [t for t in range(n) if zeta[t] == 0]
        for a, b, c in combinations(free, 3):
            result.append((zeta, a, b, c))
    return result


def cocycle_defect(faces: Mapping[FaceKey, FaceScalar], zeta: Vertex, a: int, b: int, c: int) -> Unit:
    """Ratio of the two ways of reversing a triple of saddles; 1 for a cocycle."""

    def psi(xi: Vertex, i: int, j: int) -> Unit:
        return faces[(xi, i, j)].value

    path1 = psi(zeta, b, c) * psi(flip(zeta, b), a, c) * psi(zeta, a, b)
    path2 = psi(flip(zeta, c), a, b) * psi(zeta, a, c) * psi(flip(zeta, a), b, c)
    return path1 / path2


def _cube_faces(zeta: Vertex, a: int, b: int, c: int) -> list[FaceKey]:
    return [
        (zeta, b, c),
        (flip(zeta, b), a, c),
        (zeta, a, b),
        (flip(zeta, c), a, b),
        (zeta, a, c),
        (flip(zeta, a), b, c),
    ]


def solve_gf2(equations: Sequence[tuple[int, int]]) -> Optional[int]:
    """
    Solve a GF(2) system given as (bitmask, rhs) rows.

    Free variables are set to 0. Returns the solution bitmask or None if
    the system is inconsistent.
    """
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in equations:
        while mask:
            top = mask.bit_length() - 1
            if top not in pivots:
                pivots[top] = (mask, rhs)
                break
            pm, pr = pivots[top]
            mask ^= pm
            rhs ^= pr
        else:
            if rhs:
                return None
    solution = 0
    for top in sorted(pivots):
        pm, pr = pivots[top]
        rest = pm & ~(1 << top) & solution
        if pr ^ (bin(rest).count("1") & 1):
            solution |= 1 << top
    return solution


def repair_ladybugs(n: int, faces: dict[FaceKey, FaceScalar]) -> int:
    """
    Rescale ladybug faces by XY where needed so psi becomes a cocycle.

    Returns the number of flipped faces.
    """
    ambiguous = [k for k in sorted(faces) if faces[k].ladybug]
    if not ambiguous:
        return 0
    index = {k: idx for idx, k in enumerate(ambiguous)}
    equations: list[tuple[int, int]] = []
    for zeta, a, b, c in three_cubes(n):
        defect = cocycle_defect(faces, zeta, a, b, c)
        if defect.is_one():
            rhs = 0
        elif defect == XY_UNIT:
            rhs = 1
        else:
            raise ConsistencyError(
                "face scalars fail the cocycle condition",
                cube=f"{vertex_label(zeta)}:{a + 1},{b + 1},{c + 1}",
                defect=str(defect),
            )
        mask = 0
        for key in _cube_faces(zeta, a, b, c):
            if key in index:
                mask ^= 1 << index[key]
        if mask or rhs:
            equations.append((mask, rhs))
    solution = solve_gf2(equations)
    if solution is None:
        raise ConsistencyError("no consistent choice on ladybug faces", faces=len(ambiguous))
    flipped = 0
    for key, idx in index.items():
        if solution >> idx & 1:
            old = faces[key]
            faces[key] = FaceScalar(key, old.value * XY_UNIT, ladybug=True)
            flipped += 1
    return flipped


def build_cube(d: Diagram) -> Cube:
    n = d.n
    resolutions = {xi: resolve(d, xi) for xi in all_vertices(n)}
    edges: dict[EdgeKey, CubeEdge] = {}
    for xi, res in resolutions.items():
        for i in range(n):
            if xi[i] == 0:
                edges[(xi, i)] = build_edge(d, res, resolutions[flip(xi, i)], i)

    faces: dict[FaceKey, FaceScalar] = {}
    for xi in resolutions:
        free = [t for t in range(n) if xi[t] == 0]
        for i, j in combinations(free, 2):
            faces[(xi, i, j)] = _measure_face(edges, xi, i, j)

    flipped = repair_ladybugs(n, faces)
    for zeta, a, b, c in three_cubes(n):
        if not cocycle_defect(faces, zeta, a, b, c).is_one():
            raise ConsistencyError(
                "face scalars fail the cocycle condition",
                cube=f"{vertex_label(zeta)}:{a + 1},{b + 1},{c + 1}",
            )
    logger.debug(
        "cube_built",
        crossings=n,
        edges=len(edges),
        faces=len(faces),
        ladybug_faces=sum(1 for f in faces.values() if f.ladybug),
        ladybug_flips=flipped,
    )
    return Cube(d, resolutions, edges, faces)


def face_scalar(cube: Cube, face: FaceKey) -> Unit:
    return cube.faces[face].value


def _ratio(cube: Cube, zeta: Vertex, u: int, v: int) -> Unit:
    """Unit r with (first u, then v) = r * (first v, then u) at ``zeta``."""
    if u < v:
        return cube.psi(zeta, u, v)
    return cube.psi(zeta, v, u).inverse()


def sign_assignment(cube: Cube, order: Optional[Sequence[int]] = None) -> SignAssignment:
    """
    epsilon = epsilon_0 * eta along the crossing priority ``order``.

    epsilon_0 counts earlier set bits; eta straightens the path
    "canonical(xi) then i" into canonical(xi + e_i), one face per
    transposition.
    """
    n = cube.n
    order = tuple(range(n)) if order is None else tuple(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"{order!r} is not a permutation of the crossings")
    rank = {c: pos for pos, c in enumerate(order)}
    eps: dict[EdgeKey, Unit] = {}
    for xi, i in cube.edges:
        members = [t for t in range(n) if xi[t]]
        earlier = sum(1 for t in members if rank[t] < rank[i])
        unit = MINUS_ONE if earlier % 2 else ONE
        for s in members:
            if rank[s] > rank[i]:
                zeta = tuple(1 if (xi[t] and rank[t] < rank[s]) else 0 for t in range(n))
                unit = unit * _ratio(cube, zeta, s, i).inverse()
        eps[(xi, i)] = unit

    signs = SignAssignment(eps, order)
    bad = failing_faces(cube, signs)
    if bad:
        xi, i, j = bad[0]
        raise ConsistencyError(
            "no valid sign assignment",
            face=f"{vertex_label(xi)}:{i + 1},{j + 1}",
            failures=len(bad),
        )
    logger.debug("sign_assignment_solved", crossings=n, order=list(order))
    return signs


def failing_faces(cube: Cube, signs: Mapping[EdgeKey, Unit] | SignAssignment) -> list[FaceKey]:
    """Faces where epsilon(top) * psi != -epsilon(bottom)."""
    eps = signs.eps if isinstance(signs, SignAssignment) else signs
    bad = []
    for (xi, i, j), face in sorted(cube.faces.items()):
        top = eps[(flip(xi, i), j)] * eps[(xi, i)] * face.value
        bottom = eps[(flip(xi, j), i)] * eps[(xi, j)]
        if top != -bottom:
            bad.append((xi, i, j))
    return bad


def edge_shift(cube: Cube, signs: SignAssignment, key: EdgeKey) -> SDeg:
    return cube.edges[key].shift + signs[key].sdeg


def vertex_shift(cube: Cube, signs: SignAssignment, xi: Sequence[int]) -> SDeg:
    """Sum of edge shifts along the path setting bits of ``xi`` in increasing index order."""
    current = tuple(0 for _ in range(cube.n))
    total = SDeg()
    for i, bit in enumerate(xi):
        if bit:
            total = total + edge_shift(cube, signs, (current, i))
            current = flip(current, i)
    return total


def path_shift(cube: Cube, signs: SignAssignment, path: Sequence[int]) -> SDeg:
    """Shift accumulated along an arbitrary monotone path from 0...0."""
    current = tuple(0 for _ in range(cube.n))
    total = SDeg()
    for i in path:
        total = total + edge_shift(cube, signs, (current, i))
        current = flip(current, i)
    return total


def vertex_gauge(
    cube: Cube, first: SignAssignment, second: SignAssignment
) -> tuple[dict[Vertex, Unit], list[EdgeKey]]:
    """
    0-cochain nu with second = delta(nu) * first, built along canonical paths.

    Returns nu together with the edges where it fails (empty when the two
    assignments are gauge equivalent).
    """
    nu: dict[Vertex, Unit] = {}
    for xi in cube.vertices():
        if not any(xi):
            nu[xi] = ONE
            continue
        i = max(t for t in range(cube.n) if xi[t])
        prev = flip(xi, i)
        nu[xi] = nu[prev] * second[(prev, i)] / first[(prev, i)]
    bad = [
        key
        for key in sorted(cube.edges)
        if nu[flip(key[0], key[1])] / nu[key[0]] != second[key] / first[key]
    ]
    return nu, bad


def arrow_rescale(edge_a: CubeEdge, edge_b: CubeEdge) -> Optional[Unit]:
    """The unit relating the same edge built under two arrow choices."""
    found = unit_ratios(edge_b.map, edge_a.map)
    if len(found) != 1:
        return None
    return found[0]


def cube_to_json(cube: Cube, signs: Optional[SignAssignment] = None) -> dict:
    """Debug dump: vertices, circle counts, edge kinds, psi and epsilon."""
    vertices = [
        {
            "xi": vertex_label(xi),
            "circles": [list(c) for c in cube.resolutions[xi].circles],
        }
        for xi in cube.vertices()
    ]
    edges = []
    for key in sorted(cube.edges):
        edge = cube.edges[key]
        entry = {
            "source": vertex_label(edge.source),
            "crossing": edge.direction + 1,
            "kind": edge.kind,
            "positions": list(edge.positions),
            "reversed": edge.orient_reversed,
            "sdeg": [edge.shift.parity, edge.shift.depth],
        }
        if signs is not None:
            entry["eps"] = str(signs[key])
        edges.append(entry)
    faces = [
        {
            "vertex": vertex_label(xi),
            "i": i + 1,
            "j": j + 1,
            "psi": str(face.value),
            "ladybug": face.ladybug,
        }
        for (xi, i, j), face in sorted(cube.faces.items())
    ]
    return {"crossings": cube.n, "vertices": vertices, "edges": edges, "faces": faces}
