"""Unnormalized Jones polynomial from the Kauffman bracket."""

from __future__ import annotations

from typing import Optional

import sympy

from khovanov.core.diagram import ONE_PAIRS, ZERO_PAIRS, Diagram

Q = sympy.Symbol("q")
LOOP = Q + 1 / Q


def _find(parent: dict[int, int], a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def _loops(d: Diagram, choices: list[int]) -> int:
    parent = {a: a for a in d.arcs}
    for crossing, bit in zip(d.crossings, choices):
        for s, t in ONE_PAIRS if bit else ZERO_PAIRS:
            ra, rb = _find(parent, crossing.arcs[s]), _find(parent, crossing.arcs[t])
            if ra != rb:
                parent[ra] = rb
    return len({_find(parent, a) for a in parent}) + d.free_circles


def kauffman_bracket(d: Diagram, choices: Optional[list[int]] = None) -> sympy.Expr:
    """<D> with <X> = <0> - q<1> and <O> = q + 1/q, resolving crossings left to right."""
    choices = [] if choices is None else choices
    if len(choices) == d.n:
        return LOOP ** _loops(d, choices)
    return kauffman_bracket(d, choices + [0]) - Q * kauffman_bracket(d, choices + [1])


def jones_polynomial(d: Diagram) -> sympy.Expr:
    """(-1)^{n-} q^{n+ - 2n-} <D>, expanded as a Laurent polynomial in q."""
    if d.n == 0 and d.free_circles == 0:
        return sympy.Integer(1)
    shift = (-1) ** d.n_minus * Q ** (d.n_plus - 2 * d.n_minus)
    return sympy.expand(shift * kauffman_bracket(d))


def mirror_jones(poly: sympy.Expr) -> sympy.Expr:
    return sympy.expand(poly.subs(Q, 1 / Q))


def coefficients(poly: sympy.Expr) -> dict[int, int]:
    """{exponent: coefficient} of a Laurent polynomial in q."""
    out: dict[int, int] = {}
    for term in sympy.Add.make_args(sympy.expand(poly)):
        if term == 0:
            continue
        coeff, rest = term.as_coeff_Mul()
        if rest == 1:
            exponent = 0
        elif rest == Q:
            exponent = 1
        elif rest.is_Pow and rest.base == Q:
            exponent = int(rest.exp)
        else:
            raise ValueError(f"not a Laurent monomial in q: {term}")
        out[int(exponent)] = out.get(int(exponent), 0) + int(coeff)
    return {k: v for k, v in sorted(out.items()) if v}
