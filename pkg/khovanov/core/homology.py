"""
Integer linear algebra for homology: Smith normal form, integral and F_2
homology per bidegree, unified homology over Z_pi, universal-coefficient
comparisons and the graded Euler characteristic.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Optional

import sympy

from khovanov.core.bracket import Q
from khovanov.core.coeff import SpecVariant, ZPi
from khovanov.core.complex import GradedComplex, Matrix, specialize_complex
from khovanov.models.schemas import (
    CheckResult,
    HomologyEntry,
    HomologyTable,
    InvolutionEntry,
)


IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[1 if r == c else 0 for c in range(n)] for r in range(n)]


def matmul(a: IntMatrix, b: IntMatrix, inner: Optional[int] = None) -> IntMatrix:
    inner = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    return [
        [sum(row[k] * b[k][c] for k in range(inner)) for c in range(cols)]
        for row in a
    ]


@dataclass(frozen=True)
class SmithForm:
    """U A V = S with U, V unimodular and S diagonal, d_1 | d_2 | ..."""

    u: Optional[IntMatrix]
    s: IntMatrix
    v: Optional[IntMatrix]

    @property
    def diagonal(self) -> list[int]:
        return [self.s[k][k] for k in range(min(len(self.s), len(self.s[0]) if self.s else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x)

    @property
    def invariant_factors(self) -> list[int]:
        return [x for x in self.diagonal if x]

    def verify(self, a: IntMatrix) -> bool:
        """Recompute U A V and check the divisibility chain."""
        if self.u is None or self.v is None:
            raise ValueError("smith form was computed without transforms")
        rows, cols = len(a), len(a[0]) if a else 0
        if rows == 0 or cols == 0:
            return True
        product = matmul(matmul(self.u, a), self.v)
        if product != self.s:
            return False
        for r in range(rows):
            for c in range(cols):
                if r != c and self.s[r][c]:
                    return False
        factors = self.diagonal
        for k in range(len(factors) - 1):
            if factors[k] < 0:
                return False
            if factors[k] == 0 and factors[k + 1] != 0:
                return False
            if factors[k] and factors[k + 1] % factors[k]:
                return False
        return True


def _find_pivot(s: IntMatrix, t: int) -> Optional[tuple[int, int]]:
    best: Optional[tuple[int, int]] = None
    best_abs = 0
    for r in range(t, len(s)):
        row = s[r]
        for c in range(t, len(row)):
            x = abs(row[c])
            if x and (best is None or x < best_abs):
                best, best_abs = (r, c), x
    return best


def smith(a: IntMatrix, transforms: bool = True) -> SmithForm:
    """
    Smith normal form by pivoting on the smallest nonzero magnitude
    (ties broken row-major). Transforms are tracked only on request.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    s = [list(row) for row in a]
    u = identity(rows) if transforms else None
    v = identity(cols) if transforms else None

    def swap_rows(i: int, j: int) -> None:
        s[i], s[j] = s[j], s[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in s:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, factor: int) -> None:
        s[target] = [x + factor * y for x, y in zip(s[target], s[source])]
        if u is not None:
            u[target] = [x + factor * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        for row in s:
            row[target] += factor * row[source]
        if v is not None:
            for row in v:
                row[target] += factor * row[source]

    t = 0
    while t < min(rows, cols):
        pivot = _find_pivot(s, t)
        if pivot is None:
            break
        while True:
            r, c = pivot
            if r != t:
                swap_rows(t, r)
            if c != t:
                swap_cols(t, c)
            p = s[t][t]
            clean = True
            for i in range(t + 1, rows):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
                    clean = clean and not s[i][t]
            for j in range(t + 1, cols):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
                    clean = clean and not s[t][j]
            if not clean:
                pivot = _find_pivot(s, t)
                continue
            bad_row = next(
                (
                    i
                    for i in range(t + 1, rows)
                    if any(s[i][j] % p for j in range(t + 1, cols))
                ),
                None,
            )
            if bad_row is None:
                break
            add_row(t, bad_row, 1)
            pivot = (t, t)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        t += 1
    return SmithForm(u, s, v)


def prime_power_orders(n: int) -> list[int]:
    return sorted(p**e for p, e in sympy.factorint(n).items())


def rank_f2(rows: list[int]) -> int:
    """Rank over F_2 of a matrix given as row bitmasks."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in pivots:
                pivots[top] = r
                break
            r ^= pivots[top]
    return len(pivots)


def _q_index(qdegs: Mapping[int, list[int]], graded_by_q: bool) -> dict[int, dict[int, list[int]]]:
    """{i: {q: [generator indices]}}."""
    out: dict[int, dict[int, list[int]]] = {}
    for i, qs in qdegs.items():
        groups: dict[int, list[int]] = defaultdict(list)
        for idx, q in enumerate(qs):
            groups[q if graded_by_q else 0].append(idx)
        out[i] = dict(groups)
    return out


def _submatrix(matrix: Mapping[tuple[int, int], int], rows: list[int], cols: list[int]) -> IntMatrix:
    row_pos = {r: k for k, r in enumerate(rows)}
    col_pos = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rows]
    for (r, c), x in matrix.items():
        if r in row_pos and c in col_pos:
            dense[row_pos[r]][col_pos[c]] = x
    return dense


def _integral_entries(
    qdegs: Mapping[int, list[int]],
    diffs: Mapping[int, Mapping[tuple[int, int], int]],
    graded_by_q: bool = True,
) -> list[HomologyEntry]:
    index = _q_index(qdegs, graded_by_q)
    outgoing: dict[tuple[int, int], SmithForm] = {}
    for i, groups in index.items():
        for q, cols in groups.items():
            rows = index.get(i + 1, {}).get(q, [])
            if rows and cols:
                outgoing[(i, q)] = smith(_submatrix(diffs.get(i, {}), rows, cols), transforms=False)

    entries = []
    for i in sorted(index):
        for q in sorted(index[i]):
            dim = len(index[i][q])
            out = outgoing.get((i, q))
            inc = outgoing.get((i - 1, q))
            free = dim - (out.rank if out else 0) - (inc.rank if inc else 0)
            torsion: list[int] = []
            if inc:
                for f in inc.invariant_factors:
                    if f > 1:
                        torsion.extend(prime_power_orders(f))
            if free or torsion:
                entries.append(HomologyEntry(i=i, q=q, free=free, torsion=sorted(torsion)))
    return entries


def _qdegs(c: GradedComplex) -> dict[int, list[int]]:
    return {i: [g.q_deg for g in c.generators[i]] for i in c.degrees()}


def _block_label(c: GradedComplex) -> Optional[tuple[int, int]]:
    return None if c.block is None else (c.block.parity, c.block.depth)


def homology_z(c: GradedComplex, graded_by_q: bool = True) -> HomologyTable:
    """Integral homology per (i, q); with graded_by_q=False everything is reported at q = 0."""
    if c.variant not in (SpecVariant.EVEN, SpecVariant.ODD, SpecVariant.NEGATED):
        raise ValueError(f"homology_z needs an integral complex, got {c.variant.value}")
    entries = _integral_entries(_qdegs(c), c.differentials, graded_by_q)  # type: ignore[arg-type]
    return HomologyTable(variant=c.variant.value, block=_block_label(c), entries=entries)


def homology_f2(c: GradedComplex) -> HomologyTable:
    """F_2 dimensions per (i, q) by bitset elimination."""
    if c.variant in (SpecVariant.GENERALIZED, SpecVariant.UNIFIED):
        c = specialize_complex(c, SpecVariant.MOD2)
    index = _q_index(_qdegs(c), True)
    ranks: dict[tuple[int, int], int] = {}
    for i, groups in index.items():
        matrix = c.d(i)
        for q, cols in groups.items():
            rows = index.get(i + 1, {}).get(q, [])
            if not rows:
                continue
            col_bit = {col: k for k, col in enumerate(cols)}
            masks: dict[int, int] = defaultdict(int)
            row_set = set(rows)
            for (r, col), x in matrix.items():
                if r in row_set and col in col_bit and x % 2:  # type: ignore[operator]
                    masks[r] ^= 1 << col_bit[col]
            ranks[(i, q)] = rank_f2(list(masks.values()))
    entries = []
    for i in sorted(index):
        for q in sorted(index[i]):
            dim = len(index[i][q]) - ranks.get((i, q), 0) - ranks.get((i - 1, q), 0)
            if dim:
                entries.append(HomologyEntry(i=i, q=q, free=dim))
    return HomologyTable(variant=SpecVariant.MOD2.value, block=_block_label(c), entries=entries)


def expand_unified(c: GradedComplex) -> tuple[dict[int, list[int]], dict[int, dict[tuple[int, int], int]]]:
    """A free Z_pi complex as a Z complex on the basis e, pi*e."""
    qdegs = {i: [q for q in qs for _ in (0, 1)] for i, qs in _qdegs(c).items()}
    diffs: dict[int, dict[tuple[int, int], int]] = {}
    for i, matrix in c.differentials.items():
        entries: dict[tuple[int, int], int] = {}
        for (r, col), z in matrix.items():
            assert isinstance(z, ZPi)
            for dr, dc, x in ((0, 0, z.a), (1, 1, z.a), (0, 1, z.b), (1, 0, z.b)):
                if x:
                    entries[(2 * r + dr, 2 * col + dc)] = x
        diffs[i] = entries
    return qdegs, diffs


def homology_unified(c: GradedComplex) -> HomologyTable:
    """
    Unified homology as abelian groups, plus the pi-eigenspace ranks and
    the two specializations pi -> +1 and pi -> -1.
    """
    if c.variant is not SpecVariant.UNIFIED:
        raise ValueError(f"homology_unified needs a unified complex, got {c.variant.value}")
    qdegs, diffs = expand_unified(c)
    entries = _integral_entries(qdegs, diffs)
    even = homology_z(specialize_complex(c, SpecVariant.EVEN)).entries
    odd = homology_z(specialize_complex(c, SpecVariant.ODD)).entries
    plus = {(e.i, e.q): e.free for e in even}
    minus = {(e.i, e.q): e.free for e in odd}
    involution = [
        InvolutionEntry(i=i, q=q, plus=plus.get((i, q), 0), minus=minus.get((i, q), 0))
        for i, q in sorted(set(plus) | set(minus))
    ]
    return HomologyTable(
        variant=SpecVariant.UNIFIED.value,
        block=_block_label(c),
        entries=entries,
        involution=involution,
        specializations={"even": even, "odd": odd},
    )


def compute_homology(c: GradedComplex) -> HomologyTable:
    if c.variant is SpecVariant.UNIFIED:
        return homology_unified(c)
    if c.variant is SpecVariant.MOD2:
        return homology_f2(c)
    if c.variant is SpecVariant.GENERALIZED:
        raise ValueError("generalized complexes are computed through their blocks or a specialization")
    return homology_z(c)


def check_duality(mirror: HomologyTable, original: HomologyTable) -> CheckResult:
    """
    Universal-coefficient duality: free ranks swap i -> -i, torsion moves
    from -i+1 to i, q -> -q.
    """
    m, o = mirror.groups(), original.groups()
    bidegrees = set(m) | {(-i, -q) for i, q in o} | {(-i + 1, -q) for i, q in o}
    failures = []
    for i, q in sorted(bidegrees):
        free_m, tors_m = m.get((i, q), (0, ()))
        free_o = o.get((-i, -q), (0, ()))[0]
        tors_o = o.get((-i + 1, -q), (0, ()))[1]
        if free_m != free_o:
            failures.append(f"free rank at ({i},{q}): {free_m} != {free_o}")
        if tors_m != tors_o:
            failures.append(f"torsion at ({i},{q}): {list(tors_m)} != {list(tors_o)}")
    return CheckResult(name="duality_uct", passed=not failures, details=failures)


def f2_from_integral(table: HomologyTable) -> dict[tuple[int, int], int]:
    """F_2 dimensions predicted from an integral table (cohomological indexing)."""
    g = table.groups()
    bidegrees = set(g) | {(i - 1, q) for i, q in g}

    def even_torsion(i: int, q: int) -> int:
        return sum(1 for t in g.get((i, q), (0, ()))[1] if t % 2 == 0)

    dims = {}
    for i, q in sorted(bidegrees):
        dim = g.get((i, q), (0, ()))[0] + even_torsion(i, q) + even_torsion(i + 1, q)
        if dim:
            dims[(i, q)] = dim
    return dims


def euler_characteristic(c: GradedComplex) -> sympy.Expr:
    """Sum of (-1)^i q^{q_deg} over generators; i may be negative."""
    return sympy.expand(
        sum(
            (-1) ** (i % 2) * Q ** g.q_deg
            for i in c.degrees()
            for g in c.generators[i]
        )
    )


def table_euler(table: HomologyTable) -> sympy.Expr:
    return sympy.expand(sum((-1) ** (e.i % 2) * e.free * Q ** e.q for e in table.entries))


def _cell(entry: HomologyEntry, mod2: bool) -> str:
    parts = []
    if entry.free:
        base = "F" if mod2 else "Z"
        parts.append(base if entry.free == 1 else f"{base}^{entry.free}")
    for order, count in sorted(_count(entry.torsion).items()):
        parts.append(f"Z/{order}" if count == 1 else f"(Z/{order})^{count}")
    return "+".join(parts)


def _count(values: list[int]) -> dict[int, int]:
    counts: dict[int, int] = defaultdict(int)
    for v in values:
        counts[v] += 1
    return counts


def render_table(table: HomologyTable) -> str:
    """Text grid: rows by q (descending), columns by i."""
    header = f"variant: {table.variant}"
    if table.block is not None:
        header += f"  block: ({table.block[0]},{table.block[1]})"
    if not table.entries:
        return header + "\n(zero)\n"
    mod2 = table.variant == SpecVariant.MOD2.value
    grid = table.groups()
    i_values = range(min(i for i, _ in grid), max(i for i, _ in grid) + 1)
    q_values = sorted({q for _, q in grid}, reverse=True)
    cells = {
        (e.i, e.q): _cell(e, mod2) for e in table.entries
    }
    width = max([len(s) for s in cells.values()] + [3])
    lines = [header, "q\\i".rjust(5) + " " + " ".join(str(i).rjust(width) for i in i_values)]
    for q in q_values:
        row = [cells.get((i, q), ".").rjust(width) for i in i_values]
        lines.append(str(q).rjust(5) + " " + " ".join(row))
    if table.involution:
        pairs = ", ".join(f"({e.i},{e.q}):+{e.plus}/-{e.minus}" for e in table.involution)
        lines.append(f"pi eigenspaces: {pairs}")
    return "\n".join(lines) + "\n"
