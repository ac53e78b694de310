#!/usr/bin/env python3
"""
Laurent polynomial arithmetic checks
Usage: python test_laurent.py
"""

import sys
from fractions import Fraction
from pathlib import Path
sys.path.append(str(Path(__file__).parent))

from src.laurent import LaurentPoly, V, V_INV, quantum_int, add, mul, bar, classical_limit, negative_exponent_only
from src.utils import setup_logging, make_rng, MalformedInputError

logger = setup_logging()


def _random_poly(rng):
    return LaurentPoly({rng.randint(-4, 4): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                        for _ in range(rng.randint(0, 4))})


def test_basic_arithmetic():
    assert add(V, -V) == LaurentPoly.zero()
    assert add(LaurentPoly.parse('1 + v^-1'), V_INV) == LaurentPoly.parse('1 + 2*v^-1')
    assert add(quantum_int(3), LaurentPoly.zero()) == quantum_int(3)
    assert mul(V, V_INV) == LaurentPoly.one()
    assert mul(LaurentPoly.zero(), quantum_int(5)).is_zero()
    assert quantum_int(2) * quantum_int(2) == LaurentPoly.parse('v^2 + 2 + v^-2')


def test_quantum_integers():
    assert quantum_int(0).is_zero()
    assert quantum_int(1) == LaurentPoly.one()
    assert quantum_int(2) == -V - V_INV
    assert quantum_int(3) == V ** 2 + 1 + V ** -2
    for n in range(1, 9):
        q = quantum_int(n)
        assert q.is_bar_invariant()
        assert classical_limit(q) == n


def test_bar_and_limit():
    assert bar(V) == V_INV
    assert classical_limit(quantum_int(2)) == 2
    assert classical_limit(LaurentPoly.zero()) == 0
    assert LaurentPoly.parse('3*v^2 - v').evaluate(2) == 10


def test_ring_laws_randomized():
    rng = make_rng(7)
    for _ in range(200):
        a, b, c = _random_poly(rng), _random_poly(rng), _random_poly(rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert bar(a * b) == bar(a) * bar(b)
        assert bar(bar(a)) == a
        assert classical_limit(a * b) == classical_limit(a) * classical_limit(b)


def test_negative_exponent_property():
    assert negative_exponent_only(LaurentPoly.parse('v^-1 + 2*v^-3'))
    assert not negative_exponent_only(LaurentPoly.parse('1 + v^-1'))
    assert negative_exponent_only(LaurentPoly.zero())
    assert not negative_exponent_only(LaurentPoly.parse('1/2*v^-2'))


def test_text_round_trip():
    rng = make_rng(11)
    for _ in range(100):
        p = _random_poly(rng)
        assert LaurentPoly.parse(str(p)) == p
    assert str(LaurentPoly.parse('-v - v^-1')) == '-v - v^-1'
    assert str(LaurentPoly({3: Fraction(1, 6), 0: -2})) == '1/6*v^3 - 2'
    try:
        LaurentPoly.parse('v^2 +')
        assert False, "dangling operator accepted"
    except MalformedInputError:
        pass


if __name__ == "__main__":
    test_basic_arithmetic()
    test_quantum_integers()
    test_bar_and_limit()
    test_ring_laws_randomized()
    test_negative_exponent_property()
    test_text_round_trip()
    print("✅ Laurent polynomial checks passed")
