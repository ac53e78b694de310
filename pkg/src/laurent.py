"""
Exact Laurent polynomials in v over the rationals.

All quantum weights live here. The variable v stands for -q^(1/2), so the
quantum integers have integer exponents and the classical limit is v = -1.

>>> quantum_int(3)
LaurentPoly('v^2 + 1 + v^-2')
>>> quantum_int(2) * quantum_int(2)
LaurentPoly('v^2 + 2 + v^-2')
"""
import re
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple, Union

from src.utils import MalformedInputError

Number = Union[int, Fraction]

_TERM_RE = re.compile(
    r'\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(v(?:\^\(?(-?\d+)\)?)?)?\s*'
)


class LaurentPoly:
    """Sparse Laurent polynomial {exponent: Fraction}, immutable"""

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Mapping[int, Number] = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    clean[int(exp)] = coeff
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> 'LaurentPoly':
        return cls()

    @classmethod
    def one(cls) -> 'LaurentPoly':
        return cls({0: 1})

    @classmethod
    def constant(cls, c: Number) -> 'LaurentPoly':
        return cls({0: c})

    @classmethod
    def monomial(cls, exp: int, coeff: Number = 1) -> 'LaurentPoly':
        return cls({exp: coeff})

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]) -> 'LaurentPoly':
        """Build from an {exponent: integer count} table produced by state sums"""
        return cls(counts)

    @classmethod
    def parse(cls, text: str) -> 'LaurentPoly':
        """Parse the rendering produced by str(), e.g. '2*v^3 - 1/2 + v^-1'"""
        s = text.strip()
        if s in ('', '0'):
            return cls()
        terms: Dict[int, Fraction] = {}
        pos = 0
        first = True
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if not m or m.end() == pos:
                raise MalformedInputError(f"Cannot parse Laurent polynomial: {text!r}")
            sign, coeff, var, exp = m.groups()
            if coeff is None and var is None:
                raise MalformedInputError(f"Dangling sign in Laurent polynomial: {text!r}")
            if sign is None and not first:
                raise MalformedInputError(f"Missing operator in Laurent polynomial: {text!r}")
            value = Fraction(coeff) if coeff is not None else Fraction(1)
            if sign == '-':
                value = -value
            power = 0
            if var is not None:
                power = int(exp) if exp is not None else 1
            terms[power] = terms.get(power, Fraction(0)) + value
            pos = m.end()
            first = False
        return cls(terms)

    # -- access -------------------------------------------------------

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        """Terms in descending exponent order"""
        return iter(sorted(self._terms.items(), reverse=True))

    def coefficient(self, exp: int) -> Fraction:
        return self._terms.get(exp, Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient(0)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("Zero polynomial has no degree")
        return max(self._terms)

    def valuation(self) -> int:
        if not self._terms:
            raise ValueError("Zero polynomial has no valuation")
        return min(self._terms)

    def exponents(self):
        return sorted(self._terms)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> 'LaurentPoly':
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for exp, coeff in other._terms.items():
            out[exp] = out.get(exp, Fraction(0)) + coeff
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> 'LaurentPoly':
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'LaurentPoly':
        return (-self) + other

    def __mul__(self, other) -> 'LaurentPoly':
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> 'LaurentPoly':
        if n < 0:
            if len(self._terms) == 1:
                (exp, coeff), = self._terms.items()
                return LaurentPoly({exp * n: coeff ** n})
            raise ValueError("Only monomials have negative powers")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> 'LaurentPoly':
        """Multiply by v^k"""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def bar(self) -> 'LaurentPoly':
        """v^n -> v^-n"""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def evaluate(self, value: Number) -> Fraction:
        value = Fraction(value)
        return sum((c * value ** e for e, c in self._terms.items()), Fraction(0))

    def classical_limit(self) -> Fraction:
        """Evaluate at v = -1"""
        return sum((c if e % 2 == 0 else -c for e, c in self._terms.items()), Fraction(0))

    def negative_exponent_only(self) -> bool:
        return all(e < 0 and c.denominator == 1 for e, c in self._terms.items())

    def is_bar_invariant(self) -> bool:
        return self == self.bar()

    def has_nonnegative_coefficients(self) -> bool:
        return all(c >= 0 and c.denominator == 1 for c in self._terms.values())

    # -- protocol -----------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for exp, coeff in self.items():
            sign = '-' if coeff < 0 else '+'
            mag = abs(coeff)
            if exp == 0:
                body = str(mag)
            else:
                var = 'v' if exp == 1 else f'v^{exp}'
                body = var if mag == 1 else f'{mag}*{var}'
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ('-' if first_sign == '-' else '') + first_body
        for sign, body in parts[1:]:
            text += f' {sign} {body}'
        return text

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"


def _coerce(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly.constant(value)
    return NotImplemented


V = LaurentPoly.monomial(1)
V_INV = LaurentPoly.monomial(-1)


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def bar(p: LaurentPoly) -> LaurentPoly:
    return p.bar()


def classical_limit(p: LaurentPoly) -> Fraction:
    return p.classical_limit()


def negative_exponent_only(p: LaurentPoly) -> bool:
    return p.negative_exponent_only()


def quantum_int(n: int) -> LaurentPoly:
    """[n] = (q^(n/2) - q^(-n/2)) / (q^(1/2) - q^(-1/2)) written in v = -q^(1/2)"""
    if n < 0:
        raise ValueError(f"Quantum integer needs n >= 0, got {n}")
    sign = -1 if n % 2 == 0 else 1
    return LaurentPoly({n - 1 - 2 * i: sign for i in range(n)})
