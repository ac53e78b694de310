"""
Dual canonical diagnostics for web invariants.

A verdict is one of three statuses:
  not_dual_canonical  some non-leading coefficient has a term of exponent >= 0
  dual_canonical      an exhaustive search finds no exact red graph, or it is a ∪ of certified webs
  unknown             neither certificate applies
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Sequence, Tuple

from src.laurent import LaurentPoly
from src.webgraph import (Web, WebCombo, unclasp, is_non_elliptic, unclasped_signature, hexagon_web, honeycomb_web,
                          nest_in_ring, has_boundary_y)
from src.geometry import cup_union_webs
from src.quantum_eval import (FULL_EXPANSION_LIMIT, FULL_EXPANSION_STRANDS, expand_by_contraction, coefficient_at,
                              cut_path_state, disc_offset, weight_one_flows)
from src.red_graphs import CYCLES, EXHAUSTIVE, exact_red_graphs, g_reductions, uses_exhaustive_search
from src.chebops import cheb_u
from src.corpus import (S5, THICK5_PATH, WBB_PATH, thick_web, w_union_b, w_union_b_union_b, thick3_union_b,
                        ring_b)
from src.utils import setup_logging, default_jobs, format_state, MalformedInputError, InvariantBreach

logger = setup_logging()

DUAL_CANONICAL = 'dual_canonical'
NOT_DUAL_CANONICAL = 'not_dual_canonical'
UNKNOWN = 'unknown'
STATUSES = (DUAL_CANONICAL, NOT_DUAL_CANONICAL, UNKNOWN)


@dataclass(frozen=True)
class CanonVerdict:
    status: str
    evidence: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise MalformedInputError(f"Unknown verdict status {self.status!r}")
        if self.status == NOT_DUAL_CANONICAL and 'state' not in self.evidence:
            raise InvariantBreach("A not_dual_canonical verdict needs a witness state")

    @property
    def is_dual_canonical(self) -> bool:
        return self.status == DUAL_CANONICAL

    def to_dict(self) -> Dict:
        return {'status': self.status, 'evidence': dict(self.evidence)}


def violates_negative_exponents(coeff: LaurentPoly) -> bool:
    return not coeff.is_zero() and coeff.degree() >= 0


def _witness(state: Sequence[int], coeff: LaurentPoly) -> CanonVerdict:
    return CanonVerdict(NOT_DUAL_CANONICAL, {
        'state': format_state(state),
        'coefficient': str(coeff),
        'exponent': coeff.degree(),
    })




def _candidate_states(w: Web, mode: str = None) -> Iterator[Tuple[int, ...]]:
    """
    Dominant paths of the G-reduction survivors, read in the same boundary order as w.

    Without a forced mode, face cycles are tried before the full search.
    """
    if not w.is_clasped():
        return
    searches = [mode] if mode else [CYCLES] + ([EXHAUSTIVE] if uses_exhaustive_search(w) else [])
    seen = set()
    for search in searches:
        for reduction in g_reductions(w, search):
            for web, _ in reduction.survivors.items():
                try:
                    state = cut_path_state(unclasp(web))
                except MalformedInputError:
                    continue
                if state not in seen:
                    seen.add(state)
                    yield state


def negative_exponent_check(w: Web, candidates: Iterable[Sequence[int]] = None, mode: str = None) -> CanonVerdict:
    """
    Look for a non-leading coefficient with a term of exponent >= 0.

    Small webs are expanded in full. Larger ones test the given candidate
    states, or the dominant paths of their G-reduction survivors. Without a
    witness the web is certified only when an exhaustive red graph search
    finds no exact red graph.
    """
    clasped = w
    w = unclasp(w)
    if not is_non_elliptic(w):
        raise MalformedInputError(f"Dual canonical checks need a non-elliptic web, got {w!r}")
    if len(w.internal_vertices()) <= FULL_EXPANSION_LIMIT and len(w.strands()) <= FULL_EXPANSION_STRANDS:
        expansion = expand_by_contraction(w)
        lead = expansion.leading_state()
        for state in expansion.states():
            coeff = expansion.coefficient(state)
            if state != lead and violates_negative_exponents(coeff):
                logger.info(f"📊 Exponent {coeff.degree()} at {format_state(state)}")
                return _witness(state, coeff)
    else:
        lead = cut_path_state(w)
        states = candidates if candidates is not None else _candidate_states(clasped, mode)
        for state in states:
            state = tuple(state)
            if state == lead or len(state) != len(w.strands()):
                continue
            coeff = coefficient_at(w, state)
            if violates_negative_exponents(coeff):
                logger.info(f"📊 Exponent {coeff.degree()} at {format_state(state)}")
                return _witness(state, coeff)
    if not uses_exhaustive_search(w, mode):
        return CanonVerdict(UNKNOWN, {'reason': 'red graph search limited to face cycles'})
    if not exact_red_graphs(w, mode):
        return CanonVerdict(DUAL_CANONICAL, {'certificate': 'no exact red graph'})
    return CanonVerdict(UNKNOWN, {'reason': 'exact red graphs present and no witness state found'})


def cup_closure(verdicts: Sequence[CanonVerdict], webs: Sequence[Web] = None) -> CanonVerdict:
    """
    ∪ of dual canonical invariants is dual canonical.

    When the operand webs are given they must stack without crossing; the union
    is built to check it.
    """
    if not verdicts:
        raise MalformedInputError("∪ closure needs at least one operand")
    if webs is not None:
        if len(webs) != len(verdicts):
            raise MalformedInputError("One verdict per ∪ operand is required")
        union = webs[0]
        for w in webs[1:]:
            union = cup_union_webs(union, w)
    if all(v.is_dual_canonical for v in verdicts):
        return CanonVerdict(DUAL_CANONICAL, {'certificate': f'cup closure of {len(verdicts)} operands'})
    return CanonVerdict(UNKNOWN, {'reason': 'an operand is not certified dual canonical'})


# -- the five-fold honeycomb obstruction ------------------------------------------------------

def monomial_web(i: int, j: int) -> Web:
    """x^i y^j as a web: Thick_i(W) nested in j copies of B(W)"""
    if i < 0 or j < 0 or i + j == 0:
        raise MalformedInputError(f"No web for the monomial x^{i} y^{j}")
    web = honeycomb_web(i, clasped=True) if i else ring_b()
    for _ in range(j if i else j - 1):
        web = nest_in_ring(web)
    return web


def band_in_webs(k: int) -> WebCombo:
    """U_k(x, y) with each monomial read as its web"""
    total = WebCombo()
    for (i, j), c in cheb_u(k).coefficients().items():
        total = total + WebCombo.of(monomial_web(i, j), c)
    return total


def band_coefficients(a1_webs: Iterable[bytes] = None) -> Dict[str, int]:
    """
    The correction coefficients a band expansion forces.

    Each is minus the coefficient of Band_k(W), written in webs, at a web the
    red graph decomposition leaves without a boundary Y: a1 at W∪B (or the
    given keys) for k = 3, c1 at Thick_3(W)∪B and c2 at W∪B∪B for k = 5.
    """
    band3, band5 = band_in_webs(3), band_in_webs(5)
    keys = list(a1_webs) if a1_webs is not None else [w_union_b().key()]
    return {
        'a1': -sum(int(band3.coefficient(key).constant_term()) for key in keys),
        'c1': -int(band5.coefficient(thick3_union_b()).constant_term()),
        'c2': -int(band5.coefficient(w_union_b_union_b()).constant_term()),
    }


@dataclass
class SubCheck:
    name: str
    passed: bool
    detail: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail}


def _check_paths() -> SubCheck:
    thick5 = honeycomb_web(5)
    wbb = w_union_b_union_b(unclasped=True)
    detail = {
        'signature': unclasped_signature(thick5),
        'thick5_path': format_state(cut_path_state(thick5)),
        'wbb_path': format_state(cut_path_state(wbb)),
        'disc_offset': disc_offset(thick5, WBB_PATH),
    }
    passed = (unclasped_signature(thick5) == S5 == unclasped_signature(wbb)
              and cut_path_state(thick5) == THICK5_PATH and cut_path_state(wbb) == WBB_PATH
              and detail['disc_offset'] == 8)
    return SubCheck('dominant_paths', passed, detail)


def _check_coefficient(flows: bool) -> SubCheck:
    thick5 = honeycomb_web(5)
    coeff = coefficient_at(thick5, WBB_PATH)
    detail = {'coefficient': str(coeff), 'constant_term': int(coeff.constant_term())}
    passed = detail['constant_term'] >= 6
    if flows:
        detail['weight_one_flows'] = len(weight_one_flows(thick5, WBB_PATH, limit=6))
        passed = passed and detail['weight_one_flows'] == 6
    return SubCheck('coefficient_six', passed, detail)


def _check_reductions(mode: str = None) -> SubCheck:
    """G-reductions of Thick_3(W) without a boundary Y reach W∪B and nothing else; a1 is read there"""
    reductions = g_reductions(thick_web(3), mode or CYCLES)
    plain = set()
    for r in reductions:
        for web, _ in r.survivors.items():
            if not has_boundary_y(web):
                plain.add(web.key())
    a1 = band_coefficients(plain)['a1'] if plain else None
    detail = {'g_reductions': len(reductions), 'without_boundary_y': len(plain), 'a1': a1}
    return SubCheck('thick3_reductions', plain == {w_union_b().key()}, detail)


def _check_closure() -> SubCheck:
    hexagon = negative_exponent_check(hexagon_web())
    ring = CanonVerdict(DUAL_CANONICAL, {'certificate': 'crossing-free arcs only'})
    verdict = cup_closure([hexagon, ring, ring], [honeycomb_web(1, clasped=True), ring_b(), ring_b()])
    return SubCheck('cup_closure', verdict.is_dual_canonical, {'hexagon': hexagon.status, 'w_union_b_union_b': verdict.status})


def proposition_report(flows: bool = True, mode: str = None, jobs: int = None, strict: bool = True) -> Dict:
    """
    The computational skeleton of the five-fold obstruction.

    The G-reductions of Thick_3(W) fix the web at which a1 is read off the
    band; with (c1, c2) = (4, -3) and a1 = 2 a dual canonical lift of the
    five-fold band would need the coefficient of J(W∪B∪B) in [Thick_5(W)]
    to equal c1 a1 + c2 = 5, while that coefficient has constant term at
    least 6. flows=True also exhibits six weight-one flows.
    """
    jobs = jobs or default_jobs()
    tasks = [_check_paths, _check_closure, lambda: _check_reductions(mode), lambda: _check_coefficient(flows)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        checks = list(pool.map(lambda task: task(), tasks))
    reductions = next(c for c in checks if c.name == 'thick3_reductions')
    coeffs = {**band_coefficients(), 'a1': reductions.detail['a1']}
    a1_by_arithmetic = -cheb_u(3).coefficients()[(1, 1)]
    forced = coeffs['c1'] * coeffs['a1'] + coeffs['c2'] if coeffs['a1'] is not None else None
    checks.insert(0, SubCheck('band_coefficients',
                              coeffs == {'a1': 2, 'c1': 4, 'c2': -3} and coeffs['a1'] == a1_by_arithmetic and forced == 5,
                              {**coeffs, 'a1_by_arithmetic': a1_by_arithmetic, 'c1*a1+c2': forced}))
    lower = next(c for c in checks if c.name == 'coefficient_six').detail['constant_term']
    checks.append(SubCheck('obstruction', forced is not None and forced < lower, {'forced': forced, 'lower_bound': lower}))
    report = {'checks': [c.to_dict() for c in checks], 'passed': all(c.passed for c in checks)}
    for c in checks:
        logger.info(f"{'✅' if c.passed else '❌'} {c.name}: {c.detail}")
    if strict and not report['passed']:
        failed = [c.name for c in checks if not c.passed]
        logger.error(f"❌ Obstruction report failed: {failed}")
        raise InvariantBreach(f"Obstruction sub-checks failed: {failed}")
    return report
