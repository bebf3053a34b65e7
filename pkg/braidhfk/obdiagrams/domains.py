"""
Periodic, triply periodic and relative periodic domains, weak admissibility
and Alexander grading differences.

Multiplicities live on corner pieces: a region that a longitude cuts through is
split into the classes of its corners on either side of each cut, an uncut
region is a single piece.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Rational, ilcm
from sympy.solvers.simplex import InfeasibleLPError, linprog

from .. import f2linalg as F
from ..errors import InputError
from .diagram import CombinatorialDiagram, CornerSlot, Cut
from .generators import GeneratorMatching

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DomainVector:
    """Integer multiplicities on the corners of every region."""
    regions: Tuple[str, ...]
    corners: Tuple[Tuple[int, ...], ...]
    p: int = 0
    curve_coefficients: Tuple[Tuple[str, int], ...] = ()

    @classmethod
    def from_regions(cls, d: CombinatorialDiagram, values: Sequence[int]) -> 'DomainVector':
        return cls(tuple(r.name for r in d.regions),
                   tuple((int(v),) * len(r.corner_slots()) for r, v in zip(d.regions, values)))

    def at(self, d: CombinatorialDiagram, region: str, slot: CornerSlot) -> int:
        i = d.region_index[region]
        return self.corners[i][d.regions[i].corner_slots().index(slot)]

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        """One value per region; only defined when no region is cut."""
        out = []
        for name, values in zip(self.regions, self.corners):
            if len(set(values)) > 1:
                raise InputError('region {} carries several multiplicities'.format(name))
            out.append(values[0] if values else 0)
        return tuple(out)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for values in self.corners for v in values)

    def is_zero(self) -> bool:
        return not any(v for values in self.corners for v in values)

    def as_dict(self):
        out = {'p': self.p, 'regions': {}}
        for name, values in zip(self.regions, self.corners):
            out['regions'][name] = values[0] if len(set(values)) == 1 else list(values)
        if self.curve_coefficients:
            out['boundary'] = dict(self.curve_coefficients)
        return out


class _Pieces:
    """Variable layout: corner pieces first, then one coefficient per curve, then p."""

    def __init__(self, d: CombinatorialDiagram, cuts: Sequence[Cut] = (), with_p: bool = False):
        self.d = d
        by_region: Dict[str, List[Cut]] = {}
        for c in cuts:
            if c.region not in d.region:
                raise InputError('longitude cuts unknown region {}'.format(c.region))
            if not c.left or not c.right:
                raise InputError('longitude cut in {} has no corners on one side'.format(c.region))
            by_region.setdefault(c.region, []).append(c)
        self.cuts = by_region
        self.slot_piece: Dict[Tuple[str, CornerSlot], int] = {}
        self.piece_signature: List[Tuple[str, Tuple[bool, ...]]] = []
        for r in d.regions:
            rcuts = by_region.get(r.name, [])
            signatures: Dict[Tuple[bool, ...], int] = {}
            for slot in r.corner_slots():
                sig = []
                for c in rcuts:
                    if (slot in c.left) == (slot in c.right):
                        raise InputError('corner {} of {} is not split by its cut'.format(slot, r.name))
                    sig.append(slot in c.left)
                sig = tuple(sig)
                if sig not in signatures:
                    signatures[sig] = len(self.piece_signature)
                    self.piece_signature.append((r.name, sig))
                self.slot_piece[(r.name, slot)] = signatures[sig]
        self.npieces = len(self.piece_signature)
        self.curve_index = {c.name: self.npieces + i for i, c in enumerate(d.curves)}
        self.p_index = self.npieces + len(d.curves) if with_p else None
        self.ncols = self.npieces + len(d.curves) + (1 if with_p else 0)

    def region_pieces(self, region: str) -> List[int]:
        return sorted({v for (r, _), v in self.slot_piece.items() if r == region})

    def boundary_rows(self) -> List[List[int]]:
        d = self.d
        side: Dict[Tuple[int, str, str], Tuple[str, int, int]] = {}
        for r in d.regions:
            for j, comp in enumerate(r.components):
                for k, t in enumerate(comp):
                    side[(t.sign, t.curve, t.start)] = (r.name, j, k)
        rows = []
        for curve, start in d.edges:
            (r1, j1, k1), (r2, j2, k2) = side[(1, curve, start)], side[(-1, curve, start)]
            n1 = len(d.region[r1].components[j1])
            n2 = len(d.region[r2].components[j2])
            # left minus right equals the curve coefficient at both ends of the edge
            for a, b in (((j1, k1), (j2, (k2 + 1) % n2)), ((j1, (k1 + 1) % n1), (j2, k2))):
                row = [0] * self.ncols
                row[self.slot_piece[(r1, a)]] += 1
                row[self.slot_piece[(r2, b)]] -= 1
                row[self.curve_index[curve]] -= 1
                rows.append(row)
        for region, rcuts in self.cuts.items():
            pieces = {self.piece_signature[v][1]: v for v in self.region_pieces(region)}
            for i in range(len(rcuts)):
                for sig, v in pieces.items():
                    if not sig[i]:
                        continue
                    other = sig[:i] + (False,) + sig[i + 1:]
                    if other in pieces:
                        row = [0] * self.ncols
                        row[v] += 1
                        row[pieces[other]] -= 1
                        row[self.p_index] -= 1
                        rows.append(row)
        return rows

    def basepoint_rows(self) -> List[List[int]]:
        rows = []
        for region in sorted(set(self.d.basepoint_regions())):
            for v in self.region_pieces(region):
                row = [0] * self.ncols
                row[v] = 1
                rows.append(row)
        return rows

    def to_domain(self, vec: Sequence[int]) -> DomainVector:
        d = self.d
        corners = tuple(tuple(int(vec[self.slot_piece[(r.name, s)]]) for s in r.corner_slots())
                        for r in d.regions)
        coeffs = tuple((c.name, int(vec[self.curve_index[c.name]])) for c in d.curves)
        p = int(vec[self.p_index]) if self.p_index is not None else 0
        return DomainVector(tuple(r.name for r in d.regions), corners, p, coeffs)


def _require_regions(d: CombinatorialDiagram) -> None:
    if not d.regions:
        raise InputError('{} carries no region data'.format(d.name or 'diagram'))


def periodic_domains(d: CombinatorialDiagram) -> List[DomainVector]:
    """Basis of the domains with n_z = n_w = 0 whose boundary is a sum of full curves."""
    _require_regions(d)
    layout = _Pieces(d)
    M = F.IntMatrix.from_rows(layout.boundary_rows() + layout.basepoint_rows(), cols=layout.ncols)
    kernel = F.integer_kernel(M)
    projected = [v[:layout.npieces] for v in kernel]
    basis = F.canonical_lattice_basis(projected, layout.npieces)
    logger.debug('%s: periodic lattice of rank %d', d.name, len(basis))
    return [DomainVector.from_regions(d, v) for v in basis]


# every family present is allowed in the boundary, so the same lattice serves triples
triply_periodic_domains = periodic_domains


def nonnegative_periodic_domain(d: CombinatorialDiagram) -> Optional[DomainVector]:
    """A nonzero periodic domain with all multiplicities >= 0, decided by exact LP."""
    basis = periodic_domains(d)
    if not basis:
        return None
    L = [b.multiplicities for b in basis]
    nreg, r = len(d.regions), len(L)
    # lambda = plus - minus, both nonnegative; L.lambda >= 0 and its total >= 1
    A, rhs = [], []
    for i in range(nreg):
        A.append([-L[k][i] for k in range(r)] + [L[k][i] for k in range(r)])
        rhs.append(0)
    totals = [sum(L[k]) for k in range(r)]
    A.append([-t for t in totals] + totals)
    rhs.append(-1)
    try:
        _, sol = linprog([0] * (2 * r), A, rhs)
    except InfeasibleLPError:
        return None
    lam = [Rational(sol[k]) - Rational(sol[r + k]) for k in range(r)]
    scale = ilcm(1, *[q.q for q in lam])
    values = [sum(int(lam[k] * scale) * L[k][i] for k in range(r)) for i in range(nreg)]
    g = 0
    for v in values:
        g = gcd(g, v)
    return DomainVector.from_regions(d, [v // g for v in values])


def is_weakly_admissible(d: CombinatorialDiagram) -> bool:
    witness = nonnegative_periodic_domain(d)
    if witness is not None:
        logger.info('%s: nonnegative periodic domain %s', d.name, witness.as_dict())
    return witness is None


def bounds_with(d: CombinatorialDiagram, curve: str, others: Sequence[str]) -> bool:
    """Whether curve plus an integer combination of others is the boundary of a domain.

    Basepoints are ignored and every curve outside others has coefficient zero.
    """
    _require_regions(d)
    layout = _Pieces(d)
    rows = layout.boundary_rows()
    free = list(range(layout.npieces)) + [layout.curve_index[c] for c in others]
    j = layout.curve_index[curve]
    M = F.IntMatrix.from_rows([[row[k] for k in free] for row in rows], cols=len(free))
    return F.solve_integer(M, [-row[j] for row in rows]) is not None


def relative_periodic_domain(d: CombinatorialDiagram, component: str,
                             longitude: Sequence[Cut]) -> DomainVector:
    """Domain with boundary p times the longitude plus full curves, p > 0 minimal.

    The answer is reduced to a canonical representative modulo the periodic
    domains without basepoint conditions.
    """
    _require_regions(d)
    layout = _Pieces(d, longitude, with_p=True)
    M = F.IntMatrix.from_rows(layout.boundary_rows(), cols=layout.ncols)
    kernel = F.integer_kernel(M)
    pi = layout.p_index
    p_coords = [v[pi] for v in kernel]
    g = 0
    for x in p_coords:
        g = gcd(g, x)
    if g == 0:
        raise InputError('longitude of {} bounds no relative periodic domain in {}'.format(
            component, d.name or 'diagram'))
    # integer combination of kernel vectors with p coordinate g
    coeffs, acc = [0] * len(kernel), 0
    for i, x in enumerate(p_coords):
        if x == 0:
            continue
        if acc == 0:
            coeffs[i], acc = 1, x
            continue
        h, s, t = _xgcd(acc, x)
        coeffs = [c * s for c in coeffs]
        coeffs[i] += t
        acc = h
    vec = [sum(c * v[j] for c, v in zip(coeffs, kernel)) for j in range(layout.ncols)]
    if acc < 0:
        vec = [-x for x in vec]
    assert vec[pi] == g
    sublattice = F.integer_kernel(F.IntMatrix.from_rows(
        layout.boundary_rows() + [[int(j == pi) for j in range(layout.ncols)]], cols=layout.ncols))
    vec = F.lattice_reduce(vec, sublattice)
    logger.debug('%s: relative periodic domain for %s with p = %d', d.name, component, g)
    return layout.to_domain(vec)


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) up to sign."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def is_relative_periodic_domain(d: CombinatorialDiagram, P: DomainVector, longitude: Sequence[Cut]) -> bool:
    layout = _Pieces(d, longitude, with_p=True)
    vec = [0] * layout.ncols
    for r in d.regions:
        for slot in r.corner_slots():
            vec[layout.slot_piece[(r.name, slot)]] = P.at(d, r.name, slot)
    # curve coefficients are free: solve for them and p
    rows = layout.boundary_rows()
    fixed = F.IntMatrix.from_rows([row[layout.npieces:] for row in rows], cols=layout.ncols - layout.npieces)
    rhs = [-sum(a * b for a, b in zip(row[:layout.npieces], vec)) for row in rows]
    sol = F.solve_integer(fixed, rhs)
    return sol is not None and sol[-1] == P.p != 0


def point_measure(d: CombinatorialDiagram, crossing: str, P: DomainVector) -> Fraction:
    """Average of the four corner multiplicities at a crossing."""
    corners = d.corners_at[crossing]
    if len(corners) != 4:
        raise InputError('crossing {} has {} corners'.format(crossing, len(corners)))
    return Fraction(sum(P.at(d, r, s) for r, s in corners), 4)


def n_x(d: CombinatorialDiagram, x: GeneratorMatching, P: DomainVector) -> Fraction:
    return sum((point_measure(d, c, P) for c in x.crossings), Fraction(0))


def alexander_difference(d: CombinatorialDiagram, x: GeneratorMatching, y: GeneratorMatching,
                         P: DomainVector) -> Fraction:
    """A(x) - A(y) read off a relative periodic domain, normalised by its p."""
    p = P.p or 1
    return (n_x(d, x, P) - n_x(d, y, P)) / p


def edge_sides(d: CombinatorialDiagram) -> Dict[Tuple[str, str], Tuple[str, str]]:
    """(left region, right region) of every edge."""
    left, right = {}, {}
    for r in d.regions:
        for comp in r.components:
            for t in comp:
                (left if t.sign > 0 else right)[(t.curve, t.start)] = r.name
    return {e: (left[e], right[e]) for e in d.edges}


def corner_equations(d: CombinatorialDiagram, targets: Mapping[Tuple[str, str], int]) -> Tuple[List[List[int]], List[int]]:
    """Rows over regions: at every point of every curve, incoming minus outgoing jump.

    The jump of an edge is the multiplicity on its left minus the one on its
    right, so a row equals the coefficient of that point in the boundary of the
    curve's part of the domain boundary.
    """
    sides = edge_sides(d)
    index = d.region_index
    rows, rhs = [], []
    for c in d.curves:
        for v in c.crossings:
            row = [0] * len(d.regions)
            for edge, s in (((c.name, d.prev_crossing(c.name, v)), 1), ((c.name, v), -1)):
                l, r = sides[edge]
                row[index[l]] += s
                row[index[r]] -= s
            rows.append(row)
            rhs.append(int(targets.get((c.name, v), 0)))
    return rows, rhs


def _bigon_targets(d: CombinatorialDiagram, x: GeneratorMatching, y: GeneratorMatching) -> Dict[Tuple[str, str], int]:
    targets: Dict[Tuple[str, str], int] = {}
    for g, s in ((y, 1), (x, -1)):
        for a, v in g.components:
            cr = d.crossing[v]
            b = cr.second if cr.first == a else cr.first
            targets[(a, v)] = targets.get((a, v), 0) + s
            targets[(b, v)] = targets.get((b, v), 0) - s
    return targets


def connecting_domain(d: CombinatorialDiagram, x: GeneratorMatching, y: GeneratorMatching) -> Optional[DomainVector]:
    """Some integral domain from x to y, ignoring basepoints, or None."""
    _require_regions(d)
    rows, rhs = corner_equations(d, _bigon_targets(d, x, y))
    sol = F.solve_integer(F.IntMatrix.from_rows(rows, cols=len(d.regions)), rhs)
    return None if sol is None else DomainVector.from_regions(d, sol)


def positive_domain(d: CombinatorialDiagram, x: GeneratorMatching, y: GeneratorMatching,
                    targets: Optional[Mapping[Tuple[str, str], int]] = None) -> Optional[Tuple[Fraction, ...]]:
    """A rational domain from x to y with multiplicities >= 0 and none at any basepoint.

    None means no such domain exists, even rationally.
    """
    _require_regions(d)
    rows, rhs = corner_equations(d, targets if targets is not None else _bigon_targets(d, x, y))
    for region in sorted(set(d.basepoint_regions())):
        rows.append([int(r.name == region) for r in d.regions])
        rhs.append(0)
    if not rows:
        return (Fraction(0),) * len(d.regions)
    # equalities as paired inequalities
    A = rows + [[-a for a in row] for row in rows]
    b = rhs + [-v for v in rhs]
    try:
        _, sol = linprog([1] * len(d.regions), A, b)
    except InfeasibleLPError:
        return None
    return tuple(Fraction(int(Rational(v).p), int(Rational(v).q)) for v in sol)
