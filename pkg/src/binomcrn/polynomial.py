"""Sparse multivariate polynomials with exact rational coefficients.

Variables come in two kinds: species concentrations ``x_S`` (keyed by
:class:`~binomcrn.network.SpeciesId`) and rate constants ``k..`` (keyed by
their label).  A monomial is the pair of sorted exponent tuples
``(rates, species)``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .network import Complex, SpeciesId

__all__ = ["Monomial", "SymbolicPolynomial", "complex_monomial"]

Monomial = tuple[tuple[tuple[str, int], ...], tuple[tuple[SpeciesId, int], ...]]

_ONE: Monomial = ((), ())


def _mul_exponents(a, b):
    out = dict(a)
    for var, e in b:
        out[var] = out.get(var, 0) + e
    return tuple(sorted(out.items()))


class SymbolicPolynomial:
    """Immutable polynomial; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None):
        clean = {}
        for mono, coeff in (terms or {}).items():
            if coeff:
                clean[mono] = Fraction(coeff)
        self._terms = clean

    @classmethod
    def constant(cls, value: Rational) -> "SymbolicPolynomial":
        return cls({_ONE: value})

    @classmethod
    def monomial(
        cls,
        coeff: Rational = 1,
        rates: Iterable[tuple[str, int]] = (),
        species: Iterable[tuple[SpeciesId, int]] = (),
    ) -> "SymbolicPolynomial":
        r = tuple(sorted((name, e) for name, e in rates if e))
        s = tuple(sorted((sid, e) for sid, e in species if e))
        return cls({(r, s): coeff})

    @classmethod
    def rate(cls, label: str) -> "SymbolicPolynomial":
        return cls.monomial(rates=[(label, 1)])

    @classmethod
    def concentration(cls, sid: SpeciesId) -> "SymbolicPolynomial":
        return cls.monomial(species=[(sid, 1)])

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, SymbolicPolynomial):
            return self._terms == other._terms
        if isinstance(other, Rational):
            return self._terms == SymbolicPolynomial.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def _coerce(self, other) -> "SymbolicPolynomial":
        if isinstance(other, SymbolicPolynomial):
            return other
        if isinstance(other, Rational):
            return SymbolicPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return SymbolicPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicPolynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for (ra, sa), ca in self._terms.items():
            for (rb, sb), cb in other._terms.items():
                mono = (_mul_exponents(ra, rb), _mul_exponents(sa, sb))
                out[mono] = out.get(mono, 0) + ca * cb
        return SymbolicPolynomial(out)

    __rmul__ = __mul__

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in degree-lexicographic order: species part first, then rates."""

        def key(item):
            (rates, species), _ = item
            sdeg = sum(e for _, e in species)
            rdeg = sum(e for _, e in rates)
            return (-sdeg, [(s.index, -e) for s, e in species], -rdeg, [(r, -e) for r, e in rates])

        return sorted(self._terms.items(), key=key)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, ((rates, species), coeff) in enumerate(self.sorted_terms()):
            factors = [r if e == 1 else f"{r}^{e}" for r, e in rates]
            factors += [f"x_{s.name}" if e == 1 else f"x_{s.name}^{e}" for s, e in species]
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if i == 0:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append((" - " if coeff < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"SymbolicPolynomial({str(self)!r})"


def complex_monomial(c: Complex) -> SymbolicPolynomial:
    """Monomial ``prod x_s^coeff(s)`` of a complex; the empty complex gives 1."""
    return SymbolicPolynomial.monomial(species=c.terms)
