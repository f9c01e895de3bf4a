"""
The algebra A = R.v+ (+) R.v- and its tensor powers.

Tensor words are written left to right; position 1 is the rightmost
factor. Maps between tensor powers are sparse matrices over R indexed by
words. The elementary maps (merge, split, birth, death), the symmetry
tau and the lambda-twisted embedding id (x) f (x) id live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping

from khovanov.core.coeff import (
    ChronDegree,
    RingElem,
    RingLike,
    SDeg,
    Unit,
    X_UNIT,
    Y_UNIT,
    as_ring_elem,
    lam,
)

PLUS = "+"
MINUS = "-"


@dataclass(frozen=True, slots=True, order=True)
class TensorWord:
    """Basis element v_{i_k} (x) ... (x) v_{i_1} of A^{(x)k}."""

    signs: str = ""

    def __post_init__(self) -> None:
        if any(ch not in "+-" for ch in self.signs):
            raise ValueError(f"tensor word may only contain '+'/'-': {self.signs!r}")

    def __len__(self) -> int:
        return len(self.signs)

    def __add__(self, other: TensorWord) -> TensorWord:
        return TensorWord(self.signs + other.signs)

    def letter_at(self, position: int) -> str:
        """Letter at 1-based position counted from the right."""
        k = len(self.signs)
        if not 1 <= position <= k:
            raise IndexError(f"position {position} outside word of length {k}")
        return self.signs[k - position]

    def flip(self) -> TensorWord:
        return TensorWord(self.signs.translate(_FLIP))

    @property
    def q_weight(self) -> int:
        """#plus - #minus, i.e. alpha + beta of the chronological degree."""
        return self.signs.count(PLUS) - self.signs.count(MINUS)

    def __str__(self) -> str:
        return self.signs or "1"


_FLIP = str.maketrans("+-", "-+")
EMPTY = TensorWord("")


def all_words(k: int) -> list[TensorWord]:
    return [TensorWord("".join(p)) for p in product(PLUS + MINUS, repeat=k)]


def chron_deg(w: TensorWord) -> ChronDegree:
    return ChronDegree(w.signs.count(PLUS), -w.signs.count(MINUS))


def _letter_deg(letter: str) -> ChronDegree:
    return ChronDegree(1, 0) if letter == PLUS else ChronDegree(0, -1)


def sdeg(w: TensorWord) -> SDeg:
    """Closed form: a = -(sum of positions carrying v-), sdeg = (a mod 2, a)."""
    k = len(w)
    a = -sum(k - idx for idx, ch in enumerate(w.signs) if ch == MINUS)
    return SDeg(a, a)


def sdeg_incremental(w: TensorWord) -> SDeg:
    """sdeg built factor by factor with sdeg(m (x) n) = sdeg m + sdeg n + [beta(m) w(n); beta(m) w(n)]."""
    if len(w) <= 1:
        return SDeg(1, -1) if w.signs == MINUS else SDeg()
    m, n = TensorWord(w.signs[:1]), TensorWord(w.signs[1:])
    cross = chron_deg(m).beta * len(n)
    return sdeg_incremental(m) + sdeg_incremental(n) + SDeg(cross, cross)


def tau_word(w: TensorWord, p: int) -> tuple[Unit, TensorWord]:
    """Swap positions p and p+1; the coefficient is lambda(deg left, deg right)."""
    k = len(w)
    if not 1 <= p < k:
        raise IndexError(f"tau position {p} out of range for word of length {k}")
    left_idx, right_idx = k - p - 1, k - p
    left, right = w.signs[left_idx], w.signs[right_idx]
    unit = lam(_letter_deg(left), _letter_deg(right))
    chars = list(w.signs)
    chars[left_idx], chars[right_idx] = right, left
    return unit, TensorWord("".join(chars))


class TensorElem:
    """Finite R-combination of tensor words of one length."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[TensorWord, RingElem] | None = None):
        self._terms: dict[TensorWord, RingElem] = {
            w: c for w, c in (terms or {}).items() if c
        }
        lengths = {len(w) for w in self._terms}
        if len(lengths) > 1:
            raise ValueError(f"mixed word lengths {sorted(lengths)} in tensor element")

    @classmethod
    def basis(cls, w: TensorWord, coeff: RingLike = 1) -> TensorElem:
        return cls({w: as_ring_elem(coeff)})

    def items(self) -> Iterator[tuple[TensorWord, RingElem]]:
        return iter(sorted(self._terms.items(), key=lambda kv: kv[0]))

    def coefficient(self, w: TensorWord) -> RingElem:
        return self._terms.get(w, RingElem.zero())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: TensorElem) -> TensorElem:
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc[w] + c if w in acc else c
        return TensorElem(acc)

    def scale(self, factor: RingLike) -> TensorElem:
        if isinstance(factor, Unit):
            return TensorElem({w: c.scale(factor) for w, c in self._terms.items()})
        factor = as_ring_elem(factor)
        return TensorElem({w: c * factor for w, c in self._terms.items()})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{w}" for w, c in self.items())


def tau(w: TensorWord, p: int) -> TensorElem:
    unit, swapped = tau_word(w, p)
    return TensorElem.basis(swapped, unit)


class TensorMap:
    """
    R-linear map A^{(x)m} -> A^{(x)n} as a sparse matrix.

    ``columns`` maps each source word to its image; zero images are omitted.
    """

    __slots__ = ("source_len", "target_len", "columns")

    def __init__(
        self,
        source_len: int,
        target_len: int,
        columns: Mapping[TensorWord, TensorElem],
    ):
        self.source_len = source_len
        self.target_len = target_len
        self.columns: dict[TensorWord, TensorElem] = {
            w: img for w, img in columns.items() if img
        }

    @classmethod
    def from_function(
        cls,
        source_len: int,
        target_len: int,
        fn: Callable[[TensorWord], TensorElem],
    ) -> TensorMap:
        return cls(source_len, target_len, {w: fn(w) for w in all_words(source_len)})

    @classmethod
    def identity(cls, k: int) -> TensorMap:
        return cls(k, k, {w: TensorElem.basis(w) for w in all_words(k)})

    def __call__(self, w: TensorWord) -> TensorElem:
        if len(w) != self.source_len:
            raise ValueError(
                f"word of length {len(w)} fed to map with source length {self.source_len}"
            )
        return self.columns.get(w, TensorElem())

    def apply(self, elem: TensorElem) -> TensorElem:
        acc = TensorElem()
        for w, c in elem.items():
            acc = acc + self(w).scale(c)
        return acc

    def compose(self, first: TensorMap) -> TensorMap:
        """self o first."""
        if first.target_len != self.source_len:
            raise ValueError(
                f"cannot compose: {first.target_len} != {self.source_len}"
            )
        return TensorMap(
            first.source_len,
            self.target_len,
            {w: self.apply(img) for w, img in first.columns.items()},
        )

    def scale(self, factor: RingLike) -> TensorMap:
        return TensorMap(
            self.source_len,
            self.target_len,
            {w: img.scale(factor) for w, img in self.columns.items()},
        )

    def is_zero(self) -> bool:
        return not self.columns

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorMap):
            return NotImplemented
        return (
            self.source_len == other.source_len
            and self.target_len == other.target_len
            and self.columns == other.columns
        )

    def entries(self) -> Iterator[tuple[TensorWord, TensorWord, RingElem]]:
        """(source, target, coefficient) triples in word order."""
        for src in sorted(self.columns):
            for tgt, c in self.columns[src].items():
                yield src, tgt, c

    def sdeg_shift(self) -> SDeg | None:
        """
        Common value of sdeg(target) + sdeg(coefficient) - sdeg(source).

        Returns None when the map is zero; raises ValueError when entries
        disagree.
        """
        shift: SDeg | None = None
        for src, tgt, c in self.entries():
            for mono, _ in c.items():
                value = sdeg(tgt) + mono.sdeg - sdeg(src)
                if shift is None:
                    shift = value
                elif value != shift:
                    raise ValueError(f"map is not sdeg-homogeneous: {shift} vs {value}")
        return shift

    def chron_shift(self) -> ChronDegree | None:
        shift: ChronDegree | None = None
        for src, tgt, _ in self.entries():
            value = chron_deg(tgt) - chron_deg(src)
            if shift is None:
                shift = value
            elif value != shift:
                raise ValueError("map is not homogeneous in chronological degree")
        return shift


@dataclass(frozen=True)
class ElementaryMap:
    """A generating cobordism: its matrix together with its chronological degree."""

    name: str
    degree: ChronDegree
    matrix: TensorMap

    @property
    def dom(self) -> int:
        return self.matrix.source_len

    @property
    def cod(self) -> int:
        return self.matrix.target_len


def _basis_images(table: Mapping[str, Iterable[tuple[str, RingLike]]]) -> dict[TensorWord, TensorElem]:
    return {
        TensorWord(src): TensorElem({TensorWord(t): as_ring_elem(c) for t, c in images})
        for src, images in table.items()
    }


_XZ = RingElem.parse("X*Z")
_YZ = RingElem.parse("Y*Z")


def elementary_merge(orient_reversed: bool = False) -> ElementaryMap:
    matrix = TensorMap(
        2,
        1,
        _basis_images(
            {
                "++": [("+", 1)],
                "+-": [("-", 1)],
                "-+": [("-", _XZ)],
                "--": [],
            }
        ),
    )
    if orient_reversed:
        matrix = matrix.scale(X_UNIT)
    return ElementaryMap("merge", ChronDegree(-1, 0), matrix)


def elementary_split(orient_reversed: bool = False) -> ElementaryMap:
    matrix = TensorMap(
        1,
        2,
        _basis_images(
            {
                "+": [("-+", 1), ("+-", _YZ)],
                "-": [("--", 1)],
            }
        ),
    )
    if orient_reversed:
        matrix = matrix.scale(Y_UNIT)
    return ElementaryMap("split", ChronDegree(0, -1), matrix)


def birth() -> ElementaryMap:
    return ElementaryMap("birth", ChronDegree(1, 0), TensorMap(0, 1, _basis_images({"": [("+", 1)]})))


def death() -> ElementaryMap:
    return ElementaryMap(
        "death",
        ChronDegree(0, 1),
        TensorMap(1, 0, _basis_images({"+": [], "-": [("", 1)]})),
    )


def embed_word(f: ElementaryMap, k: int, l: int, w: TensorWord) -> TensorElem:
    """Image of a single word under id_k (x) f (x) id_l."""
    if len(w) != k + f.dom + l:
        raise ValueError(
            f"embed expects a word of length {k + f.dom + l}, got {len(w)}"
        )
    left = TensorWord(w.signs[:k])
    middle = TensorWord(w.signs[k : k + f.dom])
    right = TensorWord(w.signs[k + f.dom :])
    twist = lam(f.degree, chron_deg(left))
    return TensorElem(
        {left + out + right: c.scale(twist) for out, c in f.matrix(middle).items()}
    )


def embed(f: ElementaryMap, k: int, l: int) -> TensorMap:
    """
    id (x) f (x) id with k factors on the left (higher positions) and l on the right.

    Each basis word picks up lambda(deg f, deg of the left block).
    """
    return TensorMap.from_function(
        k + f.dom + l,
        k + f.cod + l,
        lambda w: embed_word(f, k, l, w),
    )


def tau_map(k: int, p: int) -> TensorMap:
    return TensorMap.from_function(k, k, lambda w: tau(w, p))


def composite_closed_surface(kind: str) -> RingElem:
    """Evaluate the sphere (death o birth) or torus (death o merge o split o birth) on 1."""
    if kind == "sphere":
        chain = [birth(), death()]
    elif kind == "torus":
        chain = [birth(), elementary_split(), elementary_merge(), death()]
    else:
        raise ValueError(f"unknown closed surface {kind!r}")
    composite = TensorMap.identity(0)
    for step in chain:
        composite = step.matrix.compose(composite)
    return composite(EMPTY).coefficient(EMPTY)


def disjoint_tori(interleaved: bool = False) -> RingElem:
    """
    Two tori side by side on the empty surface, evaluated on 1.

    With ``interleaved`` the critical points of the two tori alternate in
    time instead of finishing the first torus before starting the second.
    """
    b, s, m, d = birth(), elementary_split(), elementary_merge(), death()
    if interleaved:
        steps = [
            embed(b, 0, 0),
            embed(b, 1, 0),
            embed(s, 1, 0),
            embed(s, 0, 2),
            embed(m, 2, 0),
            embed(m, 0, 1),
            embed(d, 1, 0),
            embed(d, 0, 0),
        ]
    else:
        steps = [
            embed(b, 0, 0),
            embed(s, 0, 0),
            embed(m, 0, 0),
            embed(d, 0, 0),
            embed(b, 0, 0),
            embed(s, 0, 0),
            embed(m, 0, 0),
            embed(d, 0, 0),
        ]
    composite = TensorMap.identity(0)
    for step in steps:
        composite = step.compose(composite)
    return composite(EMPTY).coefficient(EMPTY)


def transpose(f: TensorMap) -> TensorMap:
    """Matrix transpose; the dual map on dual words (v* indexed by v)."""
    cols: dict[TensorWord, dict[TensorWord, RingElem]] = {}
    for src, tgt, c in f.entries():
        cols.setdefault(tgt, {})[src] = c
    return TensorMap(
        f.target_len,
        f.source_len,
        {w: TensorElem(images) for w, images in cols.items()},
    )

