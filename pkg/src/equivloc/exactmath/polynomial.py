"""Multivariate polynomials with exact rational coefficients, and linear forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from ..errors import StructuralError
from .rational import as_rational, format_rational


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree ``degree``, in descending lex order."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_count(nvars: int, degree: int) -> int:
    if nvars == 0:
        return 1 if degree == 0 else 0
    return comb(degree + nvars - 1, nvars - 1)


def _grlex_key(exp):
    return (sum(exp), exp)


class _EveryDegree:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EVERY_DEGREE"


#: Result of :func:`is_homogeneous` for the zero polynomial.
EVERY_DEGREE = _EveryDegree()


class MultiPolynomial:
    """An element of Q[x_1, ..., x_n] over a fixed, ordered variable list.

    Instances are immutable.  Terms map exponent tuples to nonzero Fractions.
    Arithmetic between polynomials over different variable lists raises
    :class:`StructuralError`; ints and Fractions act as constants.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables, terms=None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise StructuralError(f"repeated variable names in {variables}")
        n = len(variables)
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise StructuralError(f"bad exponent vector {exp} for variables {variables}")
            coeff = as_rational(coeff)
            if coeff:
                clean[exp] = clean.get(exp, 0) + coeff
                if not clean[exp]:
                    del clean[exp]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPolynomial is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, value):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables, name):
        variables = tuple(variables)
        if name not in variables:
            raise StructuralError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exp: 1})

    @classmethod
    def monomial(cls, variables, exp, coeff=1):
        return cls(variables, {tuple(exp): coeff})

    @classmethod
    def linear(cls, variables, coefficients):
        variables = tuple(variables)
        if len(coefficients) != len(variables):
            raise StructuralError("coefficient vector length does not match variables")
        terms = {}
        for i, c in enumerate(coefficients):
            exp = [0] * len(variables)
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(variables, terms)

    # -- access ---------------------------------------------------------

    @property
    def terms(self):
        return dict(self._terms)

    def sorted_terms(self):
        """Terms in graded-lex descending order."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def coefficient(self, exp) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def total_degree(self):
        """Largest total degree of a term; ``None`` for the zero polynomial."""
        if not self._terms:
            return None
        return max(sum(e) for e in self._terms)

    def homogeneous_part(self, degree: int) -> MultiPolynomial:
        return MultiPolynomial(
            self.variables, {e: c for e, c in self._terms.items() if sum(e) == degree}
        )

    def coefficient_vector(self, degree: int):
        """Coefficients of the degree-``degree`` part over :func:`monomials`."""
        return [self.coefficient(m) for m in monomials(len(self.variables), degree)]

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self.sorted_terms()[0][1]

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPolynomial):
            if other.variables != self.variables:
                raise StructuralError(
                    f"variable lists differ: {self.variables} vs {other.variables}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPolynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return MultiPolynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPolynomial(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MultiPolynomial(self.variables, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPolynomial(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiPolynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, factor) -> MultiPolynomial:
        return self * as_rational(factor)

    def __eq__(self, other):
        if isinstance(other, MultiPolynomial):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == MultiPolynomial.constant(self.variables, other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.variables, frozenset(self._terms.items())))
            )
        return self._hash

    # -- maps -----------------------------------------------------------

    def evaluate(self, point) -> Fraction:
        point = [as_rational(v) for v in point]
        if len(point) != len(self.variables):
            raise StructuralError("evaluation point has wrong length")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(point, e):
                if k:
                    term *= v**k
            total += term
        return total

    def specialize(self, xi, variable: str = "u") -> MultiPolynomial:
        """Image under the ring map x_i -> xi_i * u (restriction to a subcircle)."""
        if len(xi) != len(self.variables):
            raise StructuralError("direction length does not match variables")
        terms = {}
        for e, c in self._terms.items():
            factor = c
            for a, k in zip(xi, e):
                if k:
                    factor *= a**k
            key = (sum(e),)
            terms[key] = terms.get(key, 0) + factor
        return MultiPolynomial((variable,), terms)

    def substitute(self, images, variables) -> MultiPolynomial:
        """Compose with a ring map sending each variable to a polynomial over ``variables``."""
        if len(images) != len(self.variables):
            raise StructuralError("need one image per variable")
        result = MultiPolynomial.zero(variables)
        for e, c in self._terms.items():
            term = MultiPolynomial.constant(variables, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            result = result + term
        return result

    # -- rendering ------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPolynomial({str(self)!r}, variables={self.variables})"

    # -- serialization --------------------------------------------------

    def to_term_list(self):
        """``[[exponents], "coeff"], ...`` in graded-lex descending order."""
        return [[list(e), format_rational(c)] for e, c in self.sorted_terms()]

    @classmethod
    def from_term_list(cls, variables, data):
        terms = {}
        for item in data:
            exp, coeff = item
            exp = tuple(exp)
            terms[exp] = terms.get(exp, 0) + as_rational(coeff)
        return cls(variables, terms)


def poly_arith(a: MultiPolynomial, b: MultiPolynomial, op: str) -> MultiPolynomial:
    if not isinstance(a, MultiPolynomial) or not isinstance(b, MultiPolynomial):
        raise StructuralError("poly_arith expects two polynomials")
    if a.variables != b.variables:
        raise StructuralError(f"variable lists differ: {a.variables} vs {b.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def is_homogeneous(p: MultiPolynomial):
    """Common total degree of all terms, ``None`` if mixed, EVERY_DEGREE for 0."""
    if p.is_zero():
        return EVERY_DEGREE
    degrees = {sum(e) for e in p._terms}
    if len(degrees) == 1:
        return degrees.pop()
    return None


@dataclass(frozen=True)
class LinearForm:
    """A nonzero integral linear form, stored primitive with first nonzero entry positive.

    Over Q this represents the principal ideal it generates, so scaling and
    sign are irrelevant and normalized away.
    """

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not any(coeffs):
            raise ValueError("linear form must be nonzero")
        g = 0
        for c in coeffs:
            g = gcd(g, c)
        coeffs = tuple(c // g for c in coeffs)
        if next(c for c in coeffs if c) < 0:
            coeffs = tuple(-c for c in coeffs)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def leading_index(self) -> int:
        return next(i for i, c in enumerate(self.coefficients) if c)

    def __len__(self):
        return len(self.coefficients)

    def to_polynomial(self, variables) -> MultiPolynomial:
        return MultiPolynomial.linear(variables, self.coefficients)

    def render(self, variables) -> str:
        return str(self.to_polynomial(variables))


def divide_by_linear(p: MultiPolynomial, alpha) -> MultiPolynomial | None:
    """Exact quotient p / alpha or ``None`` when alpha does not divide p.

    ``alpha`` is a LinearForm or a homogeneous linear polynomial.  The division
    is synthetic division in alpha's leading variable with the remaining
    variables as coefficients.
    """
    variables = p.variables
    if isinstance(alpha, LinearForm):
        coeffs = [Fraction(c) for c in alpha.coefficients]
    else:
        if alpha.variables != variables:
            raise StructuralError("divisor is over a different variable list")
        if is_homogeneous(alpha) != 1:
            raise ValueError("divisor must be a nonzero linear form")
        coeffs = alpha.coefficient_vector(1)
    if len(coeffs) != len(variables):
        raise StructuralError("linear form length does not match variables")
    v = next(i for i, c in enumerate(coeffs) if c)
    lead = coeffs[v]
    rest = list(coeffs)
    rest[v] = 0
    beta = MultiPolynomial.linear(variables, rest)

    # split p by powers of the leading variable
    by_power: dict[int, dict] = {}
    for e, c in p._terms.items():
        k = e[v]
        stripped = e[:v] + (0,) + e[v + 1:]
        by_power.setdefault(k, {})[stripped] = c
    if not by_power:
        return MultiPolynomial.zero(variables)
    top = max(by_power)
    parts = [MultiPolynomial(variables, by_power.get(k, {})) for k in range(top + 1)]

    # p = (lead*x_v + beta) * q + r with q = sum q_k x_v^k
    q = [None] * top
    carry = MultiPolynomial.zero(variables)
    for k in range(top, 0, -1):
        q[k - 1] = (parts[k] - carry) * (1 / lead)
        carry = beta * q[k - 1]
    remainder = parts[0] - carry
    if not remainder.is_zero():
        return None
    quotient = MultiPolynomial.zero(variables)
    xv = [0] * len(variables)
    for k, qk in enumerate(q):
        xv[v] = k
        quotient = quotient + qk * MultiPolynomial.monomial(variables, xv)
    return quotient


def divide_by_linear_power(p: MultiPolynomial, alpha, m: int) -> MultiPolynomial | None:
    """q with p = alpha^m * q, or ``None``; implemented as m exact divisions."""
    if m < 1:
        raise ValueError("power must be at least 1")
    q = p
    for _ in range(m):
        q = divide_by_linear(q, alpha)
        if q is None:
            return None
    return q
