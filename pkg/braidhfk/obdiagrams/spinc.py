"""
Spin^c difference classes.

H_1 of the three-manifold is presented as Z^k modulo the columns
(beta_j . alpha_i), where alpha_1..alpha_k are the dual curves of the diagram:
a one-cycle is sent to its algebraic intersection numbers with them. The dual
curves are read off the regions: an α curve is dropped when it cobounds a
domain with the α curves kept before it. For the difference cycle of two
generators the beta arcs are counted directly and the alpha arcs are pushed to
the left of their curves, which leaves a half-step at each junction.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .. import f2linalg as F
from ..errors import InputError
from .diagram import ALPHA, BETA, CombinatorialDiagram
from .domains import bounds_with
from .generators import GeneratorMatching

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class H1Presentation:
    dual: Tuple[str, ...]
    relations: F.IntMatrix
    cokernel: F.CokernelPresentation

    @property
    def divisors(self) -> Tuple[int, ...]:
        return self.cokernel.divisors

    def as_dict(self):
        return {'dual': list(self.dual), 'divisors': list(self.divisors)}


def dual_curves(d: CombinatorialDiagram) -> Tuple[str, ...]:
    """α curves independent modulo domain boundaries, earliest first.

    Diagrams without regions fall back to their declared dual curves.
    """
    alphas = [c.name for c in d.family(ALPHA)]
    if not d.regions:
        if alphas and not d.dual:
            raise InputError('{} has neither region data nor dual curves'.format(d.name or 'diagram'))
        return tuple(d.dual)
    kept: List[str] = []
    for a in alphas:
        if not bounds_with(d, a, kept):
            kept.append(a)
    if d.dual and tuple(d.dual) != tuple(kept):
        raise InputError('{} declares dual curves {} but its regions give {}'.format(
            d.name or 'diagram', ' '.join(d.dual), ' '.join(kept)))
    logger.debug('%s: dual curves %s', d.name, kept)
    return tuple(kept)


def h1_presentation(d: CombinatorialDiagram) -> H1Presentation:
    dual = dual_curves(d)
    for name, coords in d.homology.items():
        if len(coords) != len(dual):
            raise InputError('homology class {} has {} coordinates for {} dual curves'.format(
                name, len(coords), len(dual)))
    betas = [c.name for c in d.family(BETA)]
    rows = []
    for a in dual:
        rows.append([sum(d.crossing[x].sign for x in d.crossings_between(a, b)) for b in betas])
    M = F.IntMatrix.from_rows(rows, cols=len(betas))
    return H1Presentation(dual, M, F.cokernel_presentation(M))


def _beta_arc(d: CombinatorialDiagram, curve: str, start: str, end: str) -> Tuple[List[str], int]:
    """Crossings strictly inside the chosen arc from start to end, and its direction."""
    seq = d.curve[curve].crossings
    n = len(seq)
    i, j = seq.index(start), seq.index(end)
    f = (j - i) % n
    forward = [seq[(i + k) % n] for k in range(1, f)]
    backward = [seq[(i - k) % n] for k in range(1, n - f)]
    if f < n - f:
        return forward, 1
    if n - f < f:
        return backward, -1
    # tie: the arc through the lower crossing id
    if backward and (not forward or min(backward) < min(forward)):
        return backward, -1
    return forward, 1


def epsilon_vector(d: CombinatorialDiagram, x: GeneratorMatching, y: GeneratorMatching,
                   dual_names: Optional[Tuple[str, ...]] = None) -> Tuple[int, ...]:
    """Intersection numbers of the difference cycle with the dual curves."""
    if dual_names is None:
        dual_names = dual_curves(d)
    dual = {a: i for i, a in enumerate(dual_names)}
    out = [0] * len(dual_names)

    def alpha_of(crossing):
        cr = d.crossing[crossing]
        return cr.first if d.curve[cr.first].family == ALPHA else None

    on_beta_x = {d.crossing[c].second: c for c in x.crossings if d.curve[d.crossing[c].second].family == BETA}
    on_beta_y = {d.crossing[c].second: c for c in y.crossings if d.curve[d.crossing[c].second].family == BETA}
    if set(on_beta_x) != set(on_beta_y):
        raise InputError('generators {} and {} use different β curves'.format(x, y))
    for b in sorted(on_beta_x):
        start, end = on_beta_y[b], on_beta_x[b]
        if start == end:
            continue
        inside, direction = _beta_arc(d, b, start, end)
        for c in inside:
            a = alpha_of(c)
            if a in dual:
                out[dual[a]] += direction * d.crossing[c].sign
        a = alpha_of(start)
        if a in dual:
            out[dual[a]] += (direction * d.crossing[start].sign - 1) // 2
        a = alpha_of(end)
        if a in dual:
            out[dual[a]] += (direction * d.crossing[end].sign + 1) // 2
    return tuple(out)


@dataclass(frozen=True)
class EpsilonClass:
    vector: Tuple[int, ...]
    coordinates: Tuple[int, ...]
    expression: Optional[Tuple[Tuple[str, int], ...]]

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def format(self) -> str:
        if self.is_zero:
            return '0'
        if self.expression is None:
            return str(list(self.coordinates))
        terms = []
        for name, k in self.expression:
            terms.append(name if k == 1 else '-' + name if k == -1 else '{}*{}'.format(k, name))
        return ' + '.join(terms).replace('+ -', '- ')

    def __str__(self):
        return self.format()


def _express(d: CombinatorialDiagram, pres: H1Presentation, v: Tuple[int, ...]) -> Optional[Tuple[Tuple[str, int], ...]]:
    if not d.homology:
        return None
    names = list(d.homology)
    columns = [d.homology[n] for n in names] + [list(col) for col in zip(*pres.relations.entries)]
    M = F.IntMatrix.from_columns(len(pres.dual), columns) if columns else None
    if M is None:
        return None
    sol = F.solve_integer(M, v)
    if sol is None:
        return None
    return tuple((n, k) for n, k in zip(names, sol) if k)


def epsilon_class(x: GeneratorMatching, y: GeneratorMatching, d: CombinatorialDiagram,
                  presentation: Optional[H1Presentation] = None) -> EpsilonClass:
    pres = presentation or h1_presentation(d)
    v = epsilon_vector(d, x, y, pres.dual)
    coords = pres.cokernel.coordinates(v)
    expr = _express(d, pres, v) if any(coords) else ()
    return EpsilonClass(v, coords, expr)
