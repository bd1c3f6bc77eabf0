"""One-variable Laurent polynomials over Q, the values of circle localization sums."""

from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError, StructuralError
from .polynomial import MultiPolynomial
from .rational import as_rational, format_rational


class LaurentUnivariate:
    __slots__ = ("variable", "_terms")

    def __init__(self, variable: str, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            c = as_rational(c)
            if c:
                clean[int(k)] = c
        object.__setattr__(self, "variable", variable)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentUnivariate is immutable")

    @classmethod
    def from_polynomial(cls, p: MultiPolynomial) -> LaurentUnivariate:
        if len(p.variables) != 1:
            raise StructuralError("Laurent polynomials have exactly one variable")
        return cls(p.variables[0], {e[0]: c for e, c in p.terms.items()})

    @property
    def terms(self):
        return dict(self._terms)

    def coefficient(self, degree: int) -> Fraction:
        return self._terms.get(degree, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_polynomial(self) -> bool:
        return all(k >= 0 for k in self._terms)

    def principal_part(self) -> LaurentUnivariate:
        """Negative-degree terms."""
        return LaurentUnivariate(self.variable, {k: c for k, c in self._terms.items() if k < 0})

    def polynomial_part(self) -> LaurentUnivariate:
        return LaurentUnivariate(self.variable, {k: c for k, c in self._terms.items() if k >= 0})

    def to_polynomial(self) -> MultiPolynomial:
        if not self.is_polynomial:
            raise DomainError(f"{self} has negative powers")
        return MultiPolynomial((self.variable,), {(k,): c for k, c in self._terms.items()})

    def _check(self, other):
        if isinstance(other, LaurentUnivariate):
            if other.variable != self.variable:
                raise StructuralError("Laurent polynomials in different variables")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentUnivariate(self.variable, {0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c
        return LaurentUnivariate(self.variable, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentUnivariate(self.variable, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        terms = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                terms[k1 + k2] = terms.get(k1 + k2, 0) + c1 * c2
        return LaurentUnivariate(self.variable, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LaurentUnivariate):
            return self.variable == other.variable and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.variable, frozenset(self._terms.items())))

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for k in sorted(self._terms, reverse=True):
            c = self._terms[k]
            mag = abs(c)
            if k == 0:
                body = format_rational(mag)
            else:
                mono = self.variable if k == 1 else f"{self.variable}^{k}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            if not out:
                out = ("-" if c < 0 else "") + body
            else:
                out += f" {'-' if c < 0 else '+'} {body}"
        return out

    def __repr__(self):
        return f"LaurentUnivariate({str(self)!r})"

    def to_json(self):
        return [[k, format_rational(self._terms[k])] for k in sorted(self._terms, reverse=True)]


def laurent_from_ratio(numer: MultiPolynomial, denom_coeff, denom_power: int) -> LaurentUnivariate:
    """numer / (denom_coeff * u^denom_power) for a one-variable numerator."""
    denom_coeff = as_rational(denom_coeff)
    if not denom_coeff:
        raise DomainError("zero denominator coefficient")
    lp = LaurentUnivariate.from_polynomial(numer)
    return LaurentUnivariate(
        lp.variable, {k - denom_power: c / denom_coeff for k, c in lp.terms.items()}
    )
