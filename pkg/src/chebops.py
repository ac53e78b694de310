"""
Bivariate Chebyshev polynomials and the cable operations on single-cycle webs.

    T_0 = 2, T_1 = x, T_k = x T_(k-1) - y T_(k-2)
    U_0 = 1, U_1 = x, U_k = x U_(k-1) - y U_(k-2)

For a web W with one internal cycle, x = [W] and y = [B(W)] with
B(W) = (W^2 - brac_2(W)) / 2. The k-bracelet is T_k(x, y) and the k-band is
U_k(x, y). All web arithmetic is commutative and clasped.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Callable, Dict, List, Tuple

import pandas as pd
import sympy

from src.webgraph import Web, WebCombo, empty_web, unclasp, faces_of, honeycomb_web
from src.geometry import parallel_copies, cable_with_permutation, cup_union_webs
from src.skein import SkeinReducer, COMMUTATIVE, multiply
from src.utils import setup_logging, default_jobs, MalformedInputError, InvariantBreach

logger = setup_logging()

X, Y = sympy.symbols('x y')
FIRST = 'first'
SECOND = 'second'
KINDS = (FIRST, SECOND)


@dataclass(frozen=True)
class ChebPoly:
    kind: str
    k: int
    expr: sympy.Expr

    def coefficients(self) -> Dict[Tuple[int, int], int]:
        """{(i, j): c} for the terms c x^i y^j"""
        return {m: int(c) for m, c in sympy.Poly(self.expr, X, Y).terms()}

    def __str__(self) -> str:
        return str(sympy.expand(self.expr))


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise MalformedInputError(f"Unknown Chebyshev kind {kind!r}; expected one of {KINDS}")
    return kind


@lru_cache(maxsize=None)
def _cheb_expr(kind: str, k: int) -> sympy.Expr:
    if k < 0:
        raise MalformedInputError(f"Chebyshev index must be nonnegative, got {k}")
    if k == 0:
        return sympy.Integer(2 if kind == FIRST else 1)
    if k == 1:
        return X
    return sympy.expand(X * _cheb_expr(kind, k - 1) - Y * _cheb_expr(kind, k - 2))


def cheb_t(k: int) -> ChebPoly:
    return ChebPoly(FIRST, k, _cheb_expr(FIRST, k))


def cheb_u(k: int) -> ChebPoly:
    return ChebPoly(SECOND, k, _cheb_expr(SECOND, k))


def cheb(kind: str, k: int) -> ChebPoly:
    return cheb_t(k) if _check_kind(kind) == FIRST else cheb_u(k)


def recursion_check(kind: str, kmax: int = 12) -> bool:
    for k in range(2, kmax + 1):
        residue = cheb(kind, k).expr - X * cheb(kind, k - 1).expr + Y * cheb(kind, k - 2).expr
        if sympy.expand(residue) != 0:
            logger.error(f"❌ Recursion fails for the {kind} kind at k={k}")
            return False
    return True


def derivative_check(kmax: int = 12) -> bool:
    """d/dx T_k = k U_(k-1)"""
    for k in range(1, kmax + 1):
        if sympy.expand(sympy.diff(cheb_t(k).expr, X) - k * cheb_u(k - 1).expr) != 0:
            logger.error(f"❌ Derivative relation fails at k={k}")
            return False
    return True


def monomial_in_cheb(k: int, kind: str) -> Dict[Tuple[int, int], int]:
    """
    x^k as a combination {(j, m): c} of the terms c y^m K_j, j = k - 2m.

    First kind: c = C(k, m), halved for the T_0 term. Second kind:
    c = C(k, m) - C(k, m - 1).
    """
    _check_kind(kind)
    if k < 1:
        raise MalformedInputError(f"Monomial degree must be positive, got {k}")
    out = {}
    for m in range(k // 2 + 1):
        j = k - 2 * m
        if kind == FIRST:
            c = comb(k, m) // 2 if j == 0 else comb(k, m)
        else:
            c = comb(k, m) - (comb(k, m - 1) if m else 0)
        out[(j, m)] = c
    return out


def combination_expr(terms: Dict[Tuple[int, int], int], kind: str) -> sympy.Expr:
    return sympy.expand(sum(c * Y ** m * cheb(kind, j).expr for (j, m), c in terms.items()))


def cheb_eval(poly: ChebPoly, x, y, mul: Callable, add: Callable, scale: Callable, unit):
    """Evaluate a Chebyshev polynomial in any commutative algebra given by its operations"""
    powers: Dict[Tuple[int, int], object] = {(0, 0): unit}

    def power(i: int, j: int):
        if (i, j) not in powers:
            powers[(i, j)] = mul(power(i - 1, j), x) if i else mul(power(i, j - 1), y)
        return powers[(i, j)]

    total = None
    for (i, j), c in sorted(poly.coefficients().items()):
        term = scale(power(i, j), c)
        total = term if total is None else add(total, term)
    return total


# -- cable operations on webs ---------------------------------------------------------------

def check_single_cycle(w: Web) -> Tuple[int, ...]:
    """The internal cycle of w; rejects webs with a boundary-attached quadrilateral on it"""
    faces = faces_of(unclasp(w))
    if len(faces) != 1:
        raise MalformedInputError(f"Expected a web with exactly one internal cycle, found {len(faces)}")
    cycle = {w.origin[h] for h in faces[0]}
    for b in w.boundary:
        strands = w.rotation[b]
        for h1, h2 in zip(strands, strands[1:]):
            u, x = w.neighbor(h1), w.neighbor(h2)
            if u in cycle and x in cycle:
                shared = {w.neighbor(h) for h in w.rotation[u]} & {w.neighbor(h) for h in w.rotation[x]}
                if shared & cycle:
                    raise MalformedInputError("A quadrilateral with a boundary vertex touches the cycle; "
                                              "its cable invariants vanish")
    return faces[0]


def _cyclic(k: int) -> Tuple[int, ...]:
    return tuple((j + 1) % k for j in range(k))


class ChebAlgebra:
    """[W] and [B(W)] with memoized products, for evaluating Chebyshev polynomials on webs"""

    def __init__(self, w: Web, reducer: SkeinReducer = None):
        self.web = unclasp(w)
        self.cycle = check_single_cycle(self.web)
        self.reducer = reducer or SkeinReducer(COMMUTATIVE)
        if self.reducer.mode != COMMUTATIVE:
            raise MalformedInputError("Cable operations use the commutative clasped calculus")
        self.x = WebCombo.of(self.web)
        self.unit = WebCombo.of(empty_web())
        self._y = None

    def product(self, c1: WebCombo, c2: WebCombo) -> WebCombo:
        return multiply(c1, c2, self.reducer)

    def cable(self, permutation) -> WebCombo:
        k = len(permutation)
        if k == 1:
            return self.x
        return self.reducer.reduce(cable_with_permutation(self.web, k, permutation, self.cycle[0]))

    def thick(self, k: int) -> Web:
        return thick(self.web, k, self.reducer)

    def bracelet(self, k: int) -> WebCombo:
        if k == 0:
            return self.unit.scale(2)
        return self.cable(_cyclic(k))

    def band(self, k: int) -> WebCombo:
        if k == 0:
            return self.unit
        total = WebCombo()
        for sigma in permutations(range(k)):
            total = total + self.cable(sigma)
        return total.scale(Fraction(1, factorial(k)))

    @property
    def y(self) -> WebCombo:
        """B(W) = (W^2 - brac_2(W)) / 2"""
        if self._y is None:
            self._y = (self.product(self.x, self.x) - self.bracelet(2)).scale(Fraction(1, 2))
            logger.debug(f"B(W) has {len(self._y)} terms")
        return self._y

    def evaluate(self, poly: ChebPoly) -> WebCombo:
        return cheb_eval(poly, self.x, self.y, self.product, lambda a, b: a + b,
                         lambda a, c: a.scale(c), self.unit)


def thick(w: Web, k: int, reducer: SkeinReducer = None) -> Web:
    """The k-fold thickening, reduced from k parallel copies; a single web with coefficient 1"""
    w = unclasp(w)
    if k < 1:
        raise MalformedInputError(f"Thickening needs k >= 1, got {k}")
    if k == 1:
        return w
    reducer = reducer or SkeinReducer(COMMUTATIVE)
    combo = reducer.reduce(parallel_copies(w, k))
    single = combo.single()
    if single is None or single[1] != 1:
        logger.error(f"❌ Thickening of {w!r} gave {combo!r}")
        raise InvariantBreach(f"Thickening by {k} is not a single web with coefficient 1")
    return single[0]


def bracelet(w: Web, k: int) -> WebCombo:
    return ChebAlgebra(w).bracelet(k)


def band(w: Web, k: int) -> WebCombo:
    return ChebAlgebra(w).band(k)


def coefficient_web_b(w: Web) -> WebCombo:
    return ChebAlgebra(w).y


def web_power_monomial(a: int, b: int, w: Web = None) -> Web:
    """thick_a(W) with b copies of B(W) nested around it; W defaults to the hexagon"""
    algebra = ChebAlgebra(w if w is not None else honeycomb_web(1))
    single = algebra.y.single()
    if single is None:
        raise InvariantBreach("B(W) is not a single web")
    ring = single[0]
    web = algebra.thick(a) if a else None
    for _ in range(b):
        web = ring if web is None else cup_union_webs(web, ring)
    return web if web is not None else empty_web()


def _verify(algebra: ChebAlgebra, kind: str, kmax: int, jobs: int = None) -> pd.DataFrame:
    operation = algebra.bracelet if kind == FIRST else algebra.band
    algebra.y  # shared by the workers

    def check(k: int) -> Dict:
        lhs = operation(k)
        rhs = algebra.evaluate(cheb(kind, k))
        diff = lhs.first_difference(rhs)
        return {'k': k, 'kind': kind, 'polynomial': str(cheb(kind, k)), 'terms': len(lhs),
                'equal': diff is None, 'first_difference': diff or ''}

    jobs = jobs or default_jobs()
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(check, range(kmax + 1)))
    frame = pd.DataFrame(rows, columns=['k', 'kind', 'polynomial', 'terms', 'equal', 'first_difference'])
    if frame['equal'].all():
        logger.info(f"✅ {kind.capitalize()}-kind identities hold up to k={kmax}")
    else:
        logger.error(f"❌ {kind.capitalize()}-kind identities fail at k={list(frame[~frame['equal']]['k'])}")
    return frame


def verify_bracelet(w: Web, kmax: int, jobs: int = None) -> pd.DataFrame:
    return _verify(ChebAlgebra(w), FIRST, kmax, jobs)


def verify_band(w: Web, kmax: int, jobs: int = None) -> pd.DataFrame:
    return _verify(ChebAlgebra(w), SECOND, kmax, jobs)


def monomial_report(kmax: int = 12) -> List[Dict]:
    """Round trip of x^k through both expansions, with positivity of every coefficient"""
    rows = []
    for kind in KINDS:
        for k in range(1, kmax + 1):
            terms = monomial_in_cheb(k, kind)
            rows.append({
                'kind': kind,
                'k': k,
                'expansion': ' + '.join(f"{c}*y^{m}*{'T' if kind == FIRST else 'U'}_{j}"
                                        for (j, m), c in sorted(terms.items(), reverse=True)),
                'positive': all(c > 0 for c in terms.values()),
                'round_trip': sympy.expand(combination_expr(terms, kind) - X ** k) == 0,
            })
    return rows
