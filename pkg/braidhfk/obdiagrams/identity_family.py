"""
Heegaard diagrams of open books with identity monodromy, with optional braid
strands, and the checks of their top Alexander grading.

Generators in the top grading of the binding are exactly those with every
component in the page half tagged S12. Braid strands are the curves past the
base diagram, numbered so that a strand α only meets β curves of lower or
equal index.
"""
import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .. import constants as C
from ..errors import InputError, UnsupportedError
from .diagram import ALPHA, BETA, CombinatorialDiagram, Cut, check
from .domains import DomainVector, positive_domain
from .fixture_format import load
from .generators import GeneratorMatching, named_generator, tagged_generators
from .spinc import epsilon_class, h1_presentation

logger = logging.getLogger(__name__)

SHIPPED = ((0, 1), (0, 2), (0, 3), (1, 1))
MAX_STRANDS = 2
TOP_TAG = 'S12'
CONTACT_GENERATOR = 'xD'
BINDING = 'B'

_NAME = re.compile(r'^identity_g(\d+)_n(\d+)_k(\d+)$')


def identity_fixture_name(g: int, n: int, k: int) -> str:
    return 'identity_g{}_n{}_k{}'.format(g, n, k)


def parse_identity_name(name: str) -> Optional[Tuple[int, int, int]]:
    m = _NAME.match(name)
    return None if m is None else (int(m.group(1)), int(m.group(2)), int(m.group(3)))


def identity_parameters(d: CombinatorialDiagram) -> Tuple[int, int, int]:
    params = parse_identity_name(d.name)
    if params is None:
        raise InputError('{} is not an identity open book diagram'.format(d.name or 'diagram'))
    return params


def build_identity_open_book_diagram(g: int, n: int, k: int = 0,
                                     fixtures_dir: str = C.FIXTURES_DIR) -> CombinatorialDiagram:
    if (g, n) not in SHIPPED or not 0 <= k <= MAX_STRANDS:
        raise UnsupportedError('no identity open book diagram for g={} n={} k={}'.format(g, n, k))
    name = identity_fixture_name(g, n, k)
    if (g, n) == (0, 1):
        if k:
            raise UnsupportedError('braid strands need a page with at least two binding components')
        # the disk page: no curves, one empty generator, Y = S^3
        return CombinatorialDiagram((), (), generators={CONTACT_GENERATOR: ()}, name=name)
    path = os.path.join(fixtures_dir, name + '.hd')
    if not os.path.exists(path):
        raise UnsupportedError('no fixture {} for g={} n={} k={}'.format(path, g, n, k))
    return check(load(path))


def base_curve_count(d: CombinatorialDiagram) -> int:
    return len(d.family(ALPHA)) - identity_parameters(d)[2]


def _index(curve: str) -> int:
    return int(curve[1:])


def top_generators(d: CombinatorialDiagram) -> List[GeneratorMatching]:
    return tagged_generators(d, TOP_TAG)


def contact_generator(d: CombinatorialDiagram) -> GeneratorMatching:
    return named_generator(d, CONTACT_GENERATOR)


def seam_longitude(d: CombinatorialDiagram) -> List[Cut]:
    """The binding longitude: every region meeting both halves is cut between them."""
    top = d.tags.get(TOP_TAG, frozenset())
    cuts = []
    for r in d.regions:
        left = frozenset(s for s in r.corner_slots() if d.corner_crossing(r.name, s) in top)
        right = frozenset(r.corner_slots()) - left
        if left and right:
            cuts.append(Cut(r.name, left, right))
    return cuts


def seam_domain(d: CombinatorialDiagram) -> DomainVector:
    """The S12 half as a relative periodic domain: one on its corners, p = 1."""
    top = d.tags.get(TOP_TAG, frozenset())
    corners = tuple(tuple(int(d.corner_crossing(r.name, s) in top) for s in r.corner_slots())
                    for r in d.regions)
    return DomainVector(tuple(r.name for r in d.regions), corners, p=1)


@dataclass
class UniquenessReport:
    name: str
    top_count: int
    per_class: Dict[str, int]
    counterexamples: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def as_dict(self):
        return {'fixture': self.name, 'ok': self.ok, 'top_generators': self.top_count,
                'per_class': dict(self.per_class), 'counterexamples': list(self.counterexamples)}


def verify_unique_top_generator(d: CombinatorialDiagram) -> UniquenessReport:
    """x_D is the only top generator whose difference class against x_D vanishes."""
    xd = contact_generator(d)
    pres = h1_presentation(d)
    tops = top_generators(d)
    per_class: Counter = Counter()
    counterexamples = []
    if xd not in tops:
        counterexamples.append('{} is not in the top grading'.format(xd))
    for y in tops:
        eps = epsilon_class(xd, y, d, pres)
        per_class[eps.format()] += 1
        if eps.is_zero != (y == xd):
            counterexamples.append('{}: class {}'.format(y, eps))
    logger.info('%s: %d top generators, classes %s', d.name, len(tops), dict(per_class))
    return UniquenessReport(d.name, len(tops), dict(per_class), counterexamples)


@dataclass
class SplittingReport:
    name: str
    strands: int
    top_count: int
    base_top_count: int
    staircase: List[str] = field(default_factory=list)
    unmatched: List[str] = field(default_factory=list)
    escapes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (not self.staircase and not self.unmatched and not self.escapes
                and self.top_count == 2 ** self.strands * self.base_top_count)

    def as_dict(self):
        return {'fixture': self.name, 'ok': self.ok, 'strands': self.strands,
                'top_generators': self.top_count, 'base_top_generators': self.base_top_count,
                'staircase': list(self.staircase), 'unmatched': list(self.unmatched),
                'escapes': list(self.escapes)}


def _staircase_problems(d: CombinatorialDiagram, base: int) -> List[str]:
    problems = []
    for x in d.crossings:
        if d.curve[x.first].family != ALPHA or d.curve[x.second].family != BETA:
            continue
        i, j = _index(x.first), _index(x.second)
        if max(i, j) > base and j > i:
            problems.append('{} meets {} at {}'.format(x.first, x.second, x.name))
    return problems


def verify_top_splitting(d: CombinatorialDiagram, base: Optional[CombinatorialDiagram] = None) -> SplittingReport:
    """Top generators are (top generators of the base diagram) x {x_i, y_i} per strand,
    and no positive domain avoiding the basepoints moves a strand component."""
    g, n, k = identity_parameters(d)
    if base is None:
        base = build_identity_open_book_diagram(g, n, 0)
    tops = top_generators(d)
    base_tops = set(top_generators(base))
    report = SplittingReport(d.name, k, len(tops), len(base_tops))
    if k == 0:
        return report
    m = base_curve_count(d)
    report.staircase = _staircase_problems(d, m)
    strand_alphas = ['{}{}'.format(ALPHA, m + i) for i in range(1, k + 1)]
    pairs: Dict[str, Tuple[str, ...]] = {}
    for a in strand_alphas:
        b = '{}{}'.format(BETA, a[1:])
        pairs[a] = tuple(sorted(x for x in d.crossings_between(a, b, TOP_TAG)))
        if len(pairs[a]) != 2:
            report.unmatched.append('{} meets {} in {} top points'.format(a, b, len(pairs[a])))
    seen = set()
    for y in tops:
        rest = GeneratorMatching(tuple(c for c in y.components if c[0] not in pairs))
        strands = tuple(y.on(a) for a in strand_alphas)
        if rest not in base_tops or any(s not in pairs[a] for a, s in zip(strand_alphas, strands)):
            report.unmatched.append(str(y))
        seen.add((rest, strands))
    if len(seen) != len(tops):
        report.unmatched.append('top generators collapse under the splitting')
    for x in tops:
        for y in tops:
            if x == y or all(x.on(a) == y.on(a) for a in strand_alphas):
                continue
            witness = positive_domain(d, x, y)
            if witness is not None:
                report.escapes.append('{} -> {}: {}'.format(x, y, [str(v) for v in witness]))
    logger.info('%s: %d top generators over %d base, %d escapes', d.name, len(tops),
                len(base_tops), len(report.escapes))
    return report
