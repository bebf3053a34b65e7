"""
Toroidal grid diagrams as combinatorial Heegaard diagrams.

Row r gives the horizontal curve α_r, column c the vertical curve β_c, and
crossing c{c}_{r} sits at lattice point (c, r). Every cell is a square region
with corners LL, LR, UR, UL. X markers become z basepoints and O markers w
basepoints.

A knot longitude runs along the knot: vertical segments from O to X,
horizontal ones from X to O. Corner positions on a cell boundary are measured
in eighths of a turn, corner k at 2k and the middle of side k at 2k + 1.
"""
import logging
from fractions import Fraction
from typing import List, Sequence

from ..errors import InputError
from ..gridfloer import GridDiagram, GridState
from .diagram import ALPHA, BETA, W, Z, Basepoint, CombinatorialDiagram, Crossing, Curve, Cut, Region, Token
from .domains import alexander_difference, relative_periodic_domain
from .generators import GeneratorMatching

logger = logging.getLogger(__name__)

BOTTOM, RIGHT, TOP, LEFT = 1, 3, 5, 7


def _alpha(r: int) -> str:
    return '{}{}'.format(ALPHA, r)


def _beta(c: int) -> str:
    return '{}{}'.format(BETA, c)


def _point(c: int, r: int) -> str:
    return 'c{}_{}'.format(c, r)


def _cell(c: int, r: int) -> str:
    return 'R{}_{}'.format(c, r)


def grid_to_diagram(G: GridDiagram, name: str = '') -> CombinatorialDiagram:
    n = G.size
    curves = tuple(Curve(_alpha(r), tuple(_point(c, r) for c in range(n))) for r in range(n)) + \
        tuple(Curve(_beta(c), tuple(_point(c, r) for r in range(n))) for c in range(n))
    crossings = tuple(Crossing(_point(c, r), _alpha(r), _beta(c), 1) for r in range(n) for c in range(n))
    regions = []
    for r in range(n):
        for c in range(n):
            c1, r1 = (c + 1) % n, (r + 1) % n
            regions.append(Region(_cell(c, r), ((
                Token(1, _alpha(r), _point(c, r)),
                Token(1, _beta(c1), _point(c1, r)),
                Token(-1, _alpha(r1), _point(c, r1)),
                Token(-1, _beta(c), _point(c, r)),
            ),)))
    labels = G.component_labels
    basepoints = tuple(Basepoint(Z, str(labels[c]), _cell(c, G.X[c])) for c in range(n)) + \
        tuple(Basepoint(W, str(labels[c]), _cell(c, G.O[c])) for c in range(n))
    return CombinatorialDiagram(curves, crossings, tuple(regions), basepoints,
                                expected_euler=0,
                                name=name or 'grid{}'.format(n))


def state_generator(state: GridState) -> GeneratorMatching:
    return GeneratorMatching.of([(_alpha(r), _point(c, r)) for c, r in enumerate(state)])


def _cut(c: int, r: int, entry: int, exit: int) -> Cut:
    span = (entry - exit) % 8
    slots = [(0, k) for k in range(4)]
    left = frozenset(s for s in slots if (2 * s[1] - exit) % 8 < span)
    return Cut(_cell(c, r), left, frozenset(slots) - left)


def grid_longitude(G: GridDiagram, component: int) -> List[Cut]:
    labels = G.component_labels
    if component not in labels:
        raise InputError('grid has no component {}'.format(component))
    n = G.size
    x_col = {G.X[c]: c for c in range(n)}
    o_col = {G.O[c]: c for c in range(n)}
    cuts = []
    for c in range(n):
        if labels[c] != component:
            continue
        o, x = G.O[c], G.X[c]
        up = x > o
        for r in (range(o + 1, x) if up else range(x + 1, o)):
            cuts.append(_cut(c, r, BOTTOM, TOP) if up else _cut(c, r, TOP, BOTTOM))
        # O cell: the row segment arrives, the column segment leaves
        rightwards = c > x_col[o]
        cuts.append(_cut(c, o, LEFT if rightwards else RIGHT, TOP if up else BOTTOM))
        # X cell: the column segment arrives, the row segment leaves
        rightwards = o_col[x] > c
        cuts.append(_cut(c, x, BOTTOM if up else TOP, RIGHT if rightwards else LEFT))
    for r in range(n):
        xc, oc = x_col[r], o_col[r]
        if labels[xc] != component:
            continue
        if oc > xc:
            cuts.extend(_cut(c, r, LEFT, RIGHT) for c in range(xc + 1, oc))
        else:
            cuts.extend(_cut(c, r, RIGHT, LEFT) for c in range(oc + 1, xc))
    return cuts


def grid_alexander_differences(G: GridDiagram, base: GridState, states: Sequence[GridState]) -> List[Fraction]:
    d = grid_to_diagram(G)
    gb = state_generator(base)
    domains = [relative_periodic_domain(d, str(comp), grid_longitude(G, comp))
               for comp in sorted(set(G.component_labels))]
    return [sum((alexander_difference(d, state_generator(s), gb, P) for P in domains), Fraction(0))
            for s in states]
