"""
Triangle domains in Heegaard triple diagrams.

A triangle with its obtuse corner at x_hg (an α-γ generator) runs along α to an
α-β generator P, along β to a β-γ generator Q and back along γ. Every
nonnegative such domain avoiding the basepoints is enumerated, up to a bound on
the multiplicities, to see which corners it can have.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy import Rational, ceiling, floor
from sympy.solvers.simplex import InfeasibleLPError, linprog

from .. import constants as C
from .. import f2linalg as F
from .diagram import ALPHA, BETA, GAMMA, CombinatorialDiagram
from .domains import DomainVector, corner_equations
from .generators import GeneratorMatching, enumerate_generators, named_generator

logger = logging.getLogger(__name__)


def triangle_targets(d: CombinatorialDiagram, x_hg: GeneratorMatching, P: GeneratorMatching,
                     Q: GeneratorMatching) -> Dict[Tuple[str, str], int]:
    targets: Dict[Tuple[str, str], int] = {}

    def add(curve, v, s):
        targets[(curve, v)] = targets.get((curve, v), 0) + s

    for g, head, tail in ((P, ALPHA, BETA), (Q, BETA, GAMMA), (x_hg, GAMMA, ALPHA)):
        # each generator is where one boundary arc ends and the next one starts
        for _, v in g.components:
            cr = d.crossing[v]
            for curve in (cr.first, cr.second):
                fam = d.curve[curve].family
                if fam == head:
                    add(curve, v, 1)
                elif fam == tail:
                    add(curve, v, -1)
    return targets


def _system(d: CombinatorialDiagram, targets) -> Tuple[List[List[int]], List[int]]:
    rows, rhs = corner_equations(d, targets)
    for region in sorted(set(d.basepoint_regions())):
        rows.append([int(r.name == region) for r in d.regions])
        rhs.append(0)
    return rows, rhs


def _lambda_box(particular, kernel, bound) -> Optional[List[Tuple[int, int]]]:
    """Integer ranges for the kernel coefficients keeping every entry in [0, bound]."""
    n, r = len(particular), len(kernel)
    # lambda = plus - minus
    A, b = [], []
    for i in range(n):
        coeffs = [kernel[k][i] for k in range(r)]
        A.append([-c for c in coeffs] + coeffs)
        b.append(particular[i])
        A.append(coeffs + [-c for c in coeffs])
        b.append(bound - particular[i])
    box = []
    for k in range(r):
        lo_hi = []
        for sign in (1, -1):
            c = [0] * (2 * r)
            c[k], c[r + k] = sign, -sign
            try:
                opt, _ = linprog(c, A, b)
            except InfeasibleLPError:
                return None
            lo_hi.append(Rational(opt) * sign)
        box.append((int(ceiling(lo_hi[0])), int(floor(lo_hi[1]))))
    return box


def bounded_solutions(d: CombinatorialDiagram, targets, bound: int) -> List[Tuple[int, ...]]:
    """All integer region vectors in [0, bound] meeting the corner targets and basepoints."""
    rows, rhs = _system(d, targets)
    M = F.IntMatrix.from_rows(rows, cols=len(d.regions))
    particular = F.solve_integer(M, rhs)
    if particular is None:
        return []
    kernel = F.integer_kernel(M)
    if not kernel:
        ok = all(0 <= v <= bound for v in particular)
        return [tuple(particular)] if ok else []
    box = _lambda_box(particular, kernel, bound)
    if box is None:
        return []
    out = []
    for lam in itertools.product(*[range(lo, hi + 1) for lo, hi in box]):
        vec = [particular[i] + sum(l * kernel[k][i] for k, l in enumerate(lam)) for i in range(len(particular))]
        if all(0 <= v <= bound for v in vec):
            out.append(tuple(vec))
    return out


def is_small_triangle_union(d: CombinatorialDiagram, values) -> bool:
    """Multiplicities in {0, 1} on pairwise edge-disjoint triangular regions, one edge per family."""
    if any(v not in (0, 1) for v in values):
        return False
    support = [r for r, v in zip(d.regions, values) if v]
    used = set()
    for r in support:
        if len(r.components) != 1 or len(r.components[0]) != 3:
            return False
        if sorted(d.curve[t.curve].family for t in r.components[0]) != sorted((ALPHA, BETA, GAMMA)):
            return False
        edges = {(t.curve, t.start) for t in r.components[0]}
        if edges & used:
            return False
        used |= edges
    return True


@dataclass
class TriangleSolution:
    P: GeneratorMatching
    Q: GeneratorMatching
    domain: DomainVector

    def as_dict(self):
        return {'alpha_beta': str(self.P), 'beta_gamma': str(self.Q), 'domain': self.domain.as_dict()}


@dataclass
class CornerReport:
    name: str
    bound: int
    solutions: List[TriangleSolution] = field(default_factory=list)
    counterexamples: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.solutions) and not self.counterexamples

    def as_dict(self):
        return {'fixture': self.name, 'ok': self.ok, 'bound': self.bound,
                'solutions': [s.as_dict() for s in self.solutions],
                'counterexamples': list(self.counterexamples)}


def corner_forcing_check(d: CombinatorialDiagram, x_g: GeneratorMatching, x_h: GeneratorMatching,
                         x_hg: GeneratorMatching, bound: Optional[int] = None) -> CornerReport:
    """Every nonnegative triangle from x_hg avoiding the basepoints has corners x_g and x_h
    and is a union of small triangles."""
    if not d.curves:
        # nothing to move: only the constant triangle
        report = CornerReport(d.name, 0)
        report.solutions.append(TriangleSolution(x_g, x_h, DomainVector((), ())))
        return report
    if bound is None:
        bound = min(len(d.regions), C.MAX_FIXTURE_REGIONS)
    report = CornerReport(d.name, bound)
    for P in enumerate_generators(d, (ALPHA, BETA)):
        for Q in enumerate_generators(d, (BETA, GAMMA)):
            for values in bounded_solutions(d, triangle_targets(d, x_hg, P, Q), bound):
                sol = TriangleSolution(P, Q, DomainVector.from_regions(d, values))
                report.solutions.append(sol)
                if P != x_g or Q != x_h:
                    report.counterexamples.append('corners {} and {}: {}'.format(P, Q, sol.domain.as_dict()))
                elif not is_small_triangle_union(d, values):
                    report.counterexamples.append('not small triangles: {}'.format(sol.domain.as_dict()))
    logger.info('%s: %d triangle domains up to multiplicity %d, %d stray', d.name,
                len(report.solutions), bound, len(report.counterexamples))
    return report


def corner_forcing_fixture(d: CombinatorialDiagram, bound: Optional[int] = None) -> CornerReport:
    return corner_forcing_check(d, named_generator(d, 'xg'), named_generator(d, 'xh'), named_generator(d, 'xhg'),
                                bound=bound)
