"""
Link diagrams from PD codes.

A crossing X(a,b,c,d) lists its four arcs in cyclic order starting at the
incoming under-strand, so the under-strand runs a -> c. The crossing is
positive when the over-strand runs b -> d. The 0-resolution joins
(a,d) and (b,c); the 1-resolution joins (a,b) and (c,d).
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Mapping, Sequence

import structlog

from khovanov.exceptions import DiagramParseError

logger = structlog.get_logger(__name__)

Occurrence = tuple[int, int]  # (crossing index, slot)

# slot pairs joined by each smoothing
ZERO_PAIRS = ((0, 3), (1, 2))
ONE_PAIRS = ((0, 1), (2, 3))


@dataclass(frozen=True, slots=True)
class Crossing:
    arcs: tuple[int, int, int, int]
    sign: int
    arrow: bool = False

    def __post_init__(self) -> None:
        if len(self.arcs) != 4:
            raise ValueError(f"crossing needs four arcs, got {self.arcs}")
        if self.sign not in (1, -1):
            raise ValueError(f"crossing sign must be +-1, got {self.sign}")

    def is_head(self, slot: int) -> bool:
        """True when the arc at ``slot`` arrives at this crossing."""
        if slot == 0:
            return True
        if slot == 2:
            return False
        return (slot == 1) == (self.sign == 1)

    def mirrored(self) -> Crossing:
        a, b, c, d = self.arcs
        arcs = (b, c, d, a) if self.sign == 1 else (d, a, b, c)
        return Crossing(arcs, -self.sign, self.arrow)

    def tail_zero_strand(self) -> tuple[int, int]:
        """Slot pair of the 0-strand the arrow starts from."""
        a, b, c, d = self.arcs
        lower_first = min(a, d) <= min(b, c)
        first = lower_first != self.arrow
        return ZERO_PAIRS[0] if first else ZERO_PAIRS[1]

    def tail_one_strand(self) -> tuple[int, int]:
        """1-strand sharing the even slot of the tail 0-strand."""
        return ONE_PAIRS[0] if self.tail_zero_strand() == ZERO_PAIRS[0] else ONE_PAIRS[1]

    def render(self) -> str:
        return "X({},{},{},{})".format(*self.arcs)


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    free_circles: int = 0

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign == 1)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign == -1)

    @property
    def arcs(self) -> list[int]:
        return sorted({a for c in self.crossings for a in c.arcs})

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    @property
    def arrows(self) -> str:
        return "".join("1" if c.arrow else "0" for c in self.crossings)

    def occurrences(self) -> dict[int, list[Occurrence]]:
        occ: dict[int, list[Occurrence]] = {}
        for ci, crossing in enumerate(self.crossings):
            for slot, arc in enumerate(crossing.arcs):
                occ.setdefault(arc, []).append((ci, slot))
        return occ

    def arc_ends(self) -> dict[int, tuple[Occurrence, Occurrence]]:
        """arc -> (tail occurrence, head occurrence)."""
        ends: dict[int, tuple[Occurrence, Occurrence]] = {}
        for arc, occs in self.occurrences().items():
            first, second = occs
            if self.crossings[first[0]].is_head(first[1]):
                ends[arc] = (second, first)
            else:
                ends[arc] = (first, second)
        return ends

    def components(self) -> int:
        """Number of link components, free circles included."""
        ends = self.arc_ends()
        arc_at = {occ: arc for arc, pair in ends.items() for occ in pair}
        seen: set[int] = set()
        count = 0
        for start in sorted(ends):
            if start in seen:
                continue
            count += 1
            arc = start
            while arc not in seen:
                seen.add(arc)
                ci, slot = ends[arc][1]
                arc = arc_at[(ci, (slot + 2) % 4)]
        return count + self.free_circles

    def render(self) -> str:
        body = " ".join(c.render() for c in self.crossings)
        if self.free_circles:
            header = f"circles={self.free_circles}"
            return f"{header} {body}".strip()
        return body


@dataclass(frozen=True)
class Resolution:
    xi: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]
    arc_circle: Mapping[int, int] = field(default_factory=dict, compare=False, hash=False)

    @property
    def weight(self) -> int:
        return sum(self.xi)

    def __len__(self) -> int:
        return len(self.circles)

    def position_of_arc(self, arc: int) -> int:
        """Tensor position (1 = rightmost) of the circle through ``arc``."""
        return self.arc_circle[arc] + 1

    def arc_sets(self) -> list[frozenset[int]]:
        return [frozenset(c) for c in self.circles]


_TOKEN = re.compile(r"X\((?P<args>[^()]*)\)|circles\s*=\s*(?P<circles>\d+)")
_SKIP = re.compile(r"(?:\s|,|#[^\n]*)*")


def parse_pd(text: str, free_circles: int = 0) -> Diagram:
    """
    Parse whitespace/comma separated ``X(a,b,c,d)`` terms.

    An optional ``circles=k`` token adds k crossing-less components. Crossing
    order is textual order. Errors carry the character offset of the
    offending token.
    """
    arcs_list: list[tuple[int, int, int, int]] = []
    token_pos: list[int] = []
    pos = 0
    while True:
        pos = _SKIP.match(text, pos).end()
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DiagramParseError(f"unexpected input {text[pos:pos + 12]!r}", position=pos)
        if m.group("circles") is not None:
            free_circles += int(m.group("circles"))
        else:
            parts = [p.strip() for p in m.group("args").split(",")]
            if len(parts) != 4:
                raise DiagramParseError(
                    f"crossing needs 4 arcs, got {len(parts)}", position=pos
                )
            try:
                arcs = tuple(int(p) for p in parts)
            except ValueError:
                raise DiagramParseError(f"non-integer arc label in {m.group(0)}", position=pos)
            if min(arcs) < 1:
                raise DiagramParseError("arc labels are 1-based", position=pos)
            arcs_list.append(arcs)  # type: ignore[arg-type]
            token_pos.append(pos)
        pos = m.end()

    if not arcs_list and free_circles == 0:
        raise DiagramParseError("empty diagram", position=0)

    counts: dict[int, int] = {}
    for arcs in arcs_list:
        for a in arcs:
            counts[a] = counts.get(a, 0) + 1
    for idx, arcs in enumerate(arcs_list):
        for a in arcs:
            if counts[a] != 2:
                raise DiagramParseError(
                    f"arc {a} appears {counts[a]} times", position=token_pos[idx]
                )

    heads = orient(arcs_list, token_pos=token_pos)
    crossings = tuple(
        Crossing(arcs, 1 if heads[(ci, 1)] else -1)
        for ci, arcs in enumerate(arcs_list)
    )
    diagram = Diagram(crossings, free_circles)
    logger.debug("diagram_parsed", crossings=diagram.n, n_plus=diagram.n_plus)
    return diagram


def orient(
    arcs_list: Sequence[tuple[int, int, int, int]],
    known: Mapping[Occurrence, bool] | None = None,
    token_pos: Sequence[int] | None = None,
) -> dict[Occurrence, bool]:
    """
    Decide for every (crossing, slot) whether its arc arrives there.

    Under passes seed the propagation; ``known`` adds further seeds.
    Components that only pass over crossings are oriented along the arc
    numbering.
    """
    where = token_pos or [0] * len(arcs_list)
    partner: dict[Occurrence, Occurrence] = {}
    by_arc: dict[int, list[Occurrence]] = {}
    for ci, arcs in enumerate(arcs_list):
        for slot, a in enumerate(arcs):
            by_arc.setdefault(a, []).append((ci, slot))
    for occs in by_arc.values():
        partner[occs[0]], partner[occs[1]] = occs[1], occs[0]

    def neighbours(o: Occurrence) -> list[Occurrence]:
        ci, slot = o
        return [partner[o], (ci, (slot + 2) % 4)]

    heads: dict[Occurrence, bool] = {}

    def propagate(seeds: Iterable[tuple[Occurrence, bool]], into: dict[Occurrence, bool]) -> None:
        queue = deque()
        for o, v in seeds:
            if o in into and into[o] != v:
                raise DiagramParseError(
                    f"inconsistent orientation at crossing {o[0] + 1}", position=where[o[0]]
                )
            if o not in into:
                into[o] = v
                queue.append(o)
        while queue:
            o = queue.popleft()
            for nb in neighbours(o):
                want = not into[o]
                if nb in into:
                    if into[nb] != want:
                        raise DiagramParseError(
                            f"inconsistent orientation at crossing {nb[0] + 1}",
                            position=where[nb[0]],
                        )
                    continue
                into[nb] = want
                queue.append(nb)

    seeds = [((ci, 0), True) for ci in range(len(arcs_list))]
    seeds += [((ci, 2), False) for ci in range(len(arcs_list))]
    seeds += list((known or {}).items())
    propagate(seeds, heads)

    for ci in range(len(arcs_list)):
        for slot in (1, 3):
            o = (ci, slot)
            if o in heads:
                continue
            trial: dict[Occurrence, bool] = {}
            propagate([(o, True)], trial)
            forward = _successor_steps(arcs_list, trial)
            backward = _successor_steps(arcs_list, {k: not v for k, v in trial.items()})
            if forward == backward:
                raise DiagramParseError(
                    f"cannot orient over-only component through crossing {ci + 1}",
                    position=where[ci],
                )
            propagate([(o, forward > backward)], heads)
    return heads


def _successor_steps(
    arcs_list: Sequence[tuple[int, int, int, int]], heads: Mapping[Occurrence, bool]
) -> int:
    """Count arcs whose successor along the trial orientation is labelled one higher."""
    steps = 0
    for (ci, slot), is_head in heads.items():
        if is_head:
            nxt = arcs_list[ci][(slot + 2) % 4]
            if nxt == arcs_list[ci][slot] + 1:
                steps += 1
    return steps


def mirror(d: Diagram) -> Diagram:
    return Diagram(tuple(c.mirrored() for c in d.crossings), d.free_circles)


def resolve(d: Diagram, xi: Sequence[int]) -> Resolution:
    """Smooth every crossing according to ``xi`` and list circles in canonical order."""
    if len(xi) != d.n:
        raise ValueError(f"resolution vector has length {len(xi)}, diagram has {d.n} crossings")
    xi = tuple(int(b) for b in xi)
    ends = d.arc_ends()
    arc_at = {occ: arc for arc, pair in ends.items() for occ in pair}
    joined: dict[Occurrence, Occurrence] = {}
    for ci, bit in enumerate(xi):
        for s, t in ONE_PAIRS if bit else ZERO_PAIRS:
            joined[(ci, s)] = (ci, t)
            joined[(ci, t)] = (ci, s)

    circles: list[tuple[int, ...]] = []
    seen: set[int] = set()
    for start in sorted(ends):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        arc, leave = start, ends[start][1]
        while True:
            enter = joined[leave]
            arc = arc_at[enter]
            if arc == start:
                break
            loop.append(arc)
            seen.add(arc)
            tail, head = ends[arc]
            leave = head if enter == tail else tail
        circles.append(tuple(loop))

    ordered = [()] * d.free_circles + sorted(circles, key=min)
    arc_circle = {a: j for j, c in enumerate(ordered) for a in c}
    return Resolution(xi, tuple(ordered), arc_circle)


def with_arrows(d: Diagram, bits: str | Sequence[int]) -> Diagram:
    """Override every crossing arrow from a 0/1 string."""
    flags = [str(b) for b in bits]
    if len(flags) != d.n or any(b not in "01" for b in flags):
        raise ValueError(f"arrow override must be {d.n} bits of 0/1, got {bits!r}")
    return Diagram(
        tuple(replace(c, arrow=b == "1") for c, b in zip(d.crossings, flags)),
        d.free_circles,
    )


def renumber(d: Diagram, order: Sequence[int]) -> Diagram:
    """Reorder crossings: the new i-th crossing is the old ``order[i]``."""
    if sorted(order) != list(range(d.n)):
        raise ValueError(f"{order!r} is not a permutation of the crossings")
    return Diagram(tuple(d.crossings[i] for i in order), d.free_circles)


KinkForm = Literal["under_positive", "under_negative", "over_positive", "over_negative"]


def add_kink(d: Diagram, arc: int, form: KinkForm = "under_positive") -> Diagram:
    """
    Reidemeister I: curl ``arc`` just before its head.

    The head end of ``arc`` is relabelled g and a new crossing is appended
    joining arc (incoming), the loop f and g (outgoing).
    """
    ends = d.arc_ends()
    if arc not in ends:
        raise ValueError(f"arc {arc} not in diagram")
    top = max(d.arcs)
    f, g = top + 1, top + 2
    (hc, hs) = ends[arc][1]
    arcs_list = [list(c.arcs) for c in d.crossings]
    arcs_list[hc][hs] = g
    new = {
        "under_positive": (arc, f, f, g),
        "under_negative": (arc, g, f, f),
        "over_positive": (f, arc, g, f),
        "over_negative": (f, f, g, arc),
    }[form]
    arcs_list.append(list(new))
    return _rebuild(d, arcs_list, extra_arrows=1)


def add_bigon(d: Diagram, crossing: int, slot: int, under: bool = False) -> Diagram:
    """
    Reidemeister II: push the arc at ``slot`` of ``crossing`` across its
    neighbour at ``slot + 1``, inside the face the two share next to the
    crossing. ``under`` makes the pushed arc pass below.
    """
    arcs = d.crossings[crossing].arcs
    x, y = arcs[slot % 4], arcs[(slot + 1) % 4]
    if x == y:
        raise ValueError("bigon needs two distinct arcs")
    ends = d.arc_ends()
    top = max(d.arcs)
    xb, xc, yb, yc = top + 1, top + 2, top + 3, top + 4
    here_x = (crossing, slot % 4)
    here_y = (crossing, (slot + 1) % 4)
    far_x = next(o for o in ends[x] if o != here_x)
    far_y = next(o for o in ends[y] if o != here_y)
    arcs_list = [list(c.arcs) for c in d.crossings]
    arcs_list[far_x[0]][far_x[1]] = xc
    arcs_list[far_y[0]][far_y[1]] = yc
    if not under:
        y_outward = ends[y][0] == here_y
        if y_outward:
            k1, k2 = (y, x, yb, xb), (yb, xc, yc, xb)
        else:
            k1, k2 = (yb, xb, y, x), (yc, xb, yb, xc)
    else:
        x_outward = ends[x][0] == here_x
        if x_outward:
            k1, k2 = (x, yb, xb, y), (xb, yb, xc, yc)
        else:
            k1, k2 = (xb, y, x, yb), (xc, yc, xb, yb)
    arcs_list += [list(k1), list(k2)]
    return _rebuild(d, arcs_list, extra_arrows=2)


def _rebuild(d: Diagram, arcs_list: list[list[int]], extra_arrows: int) -> Diagram:
    known = {
        (ci, slot): c.is_head(slot)
        for ci, c in enumerate(d.crossings)
        for slot in range(4)
    }
    frozen = [tuple(a) for a in arcs_list]
    heads = orient(frozen, known=known)
    arrows = [c.arrow for c in d.crossings] + [False] * extra_arrows
    crossings = tuple(
        Crossing(arcs, 1 if heads[(ci, 1)] else -1, arrows[ci])  # type: ignore[arg-type]
        for ci, arcs in enumerate(frozen)
    )
    return Diagram(crossings, d.free_circles)
