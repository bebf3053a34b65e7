"""
Grid diagrams of braid closures and the fully blocked grid complex over GF(2).

Coordinates: column c and row r index the cell [c, c+1] x [r, r+1] of the
N x N torus, rows grow upwards. A grid state puts one lattice point on every
vertical circle; state[i] is the row of the point on vertical circle i.
Markers sit at cell centres. The layout used by grid_from_braid is pictured
in docs/grid_layout.md.
"""
import heapq
import itertools
import logging
import time
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from tqdm.auto import tqdm

from . import braidlab as BL
from . import constants as C
from .braidlab import BraidWord
from .errors import BraidHFKError, InputError, ResourceError, UnsupportedError
from .f2linalg import BitMatrix

logger = logging.getLogger(__name__)

GridState = Tuple[int, ...]

NONZERO = 'nonzero'
ZERO = 'zero'


@dataclass(frozen=True)
class GridLayout:
    word: BraidWord
    column_kinds: Tuple[str, ...]
    closure_order: Tuple[int, ...]
    jog_strands: Tuple[int, ...]


@dataclass(frozen=True)
class GridDiagram:
    size: int
    X: Tuple[int, ...]
    O: Tuple[int, ...]
    layout: Optional[GridLayout] = field(default=None, compare=False)

    def __post_init__(self):
        n = self.size
        if n < 2:
            raise InputError('grid size must be at least 2, got {}'.format(n))
        for name, perm in (('X', self.X), ('O', self.O)):
            if sorted(perm) != list(range(n)):
                raise InputError('{} is not a permutation of 0..{}: {}'.format(name, n - 1, perm))
        for c in range(n):
            if self.X[c] == self.O[c]:
                raise InputError('X and O share the cell in column {}'.format(c))

    @classmethod
    def parse(cls, text: str) -> 'GridDiagram':
        lines = [ln.split('#')[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if len(lines) != 3:
            raise InputError('grid file needs exactly 3 lines, got {}'.format(len(lines)))
        try:
            n = int(lines[0])
            X = tuple(int(t) for t in lines[1].split())
            O = tuple(int(t) for t in lines[2].split())
        except ValueError as e:
            raise InputError('malformed grid file: {}'.format(e))
        if len(X) != n or len(O) != n:
            raise InputError('permutation length does not match N={}'.format(n))
        return cls(n, X, O)

    def format(self) -> str:
        return '{}\n{}\n{}\n'.format(self.size, ' '.join(map(str, self.X)), ' '.join(map(str, self.O)))

    @cached_property
    def component_labels(self) -> Tuple[int, ...]:
        """Component id of the marker pair in each column, in order of first appearance."""
        n = self.size
        o_col_of_row = {r: c for c, r in enumerate(self.O)}
        labels = [-1] * n
        next_id = 0
        for start in range(n):
            if labels[start] >= 0:
                continue
            c = start
            while labels[c] < 0:
                labels[c] = next_id
                c = o_col_of_row[self.X[c]]
            next_id += 1
        return tuple(labels)

    @property
    def num_components(self) -> int:
        return len(set(self.component_labels))

    def ascii_picture(self) -> str:
        rows = []
        for r in reversed(range(self.size)):
            cells = []
            for c in range(self.size):
                cells.append('X' if self.X[c] == r else 'O' if self.O[c] == r else '.')
            rows.append(' '.join(cells))
        return '\n'.join(rows)


class _RowNodes:
    def __init__(self):
        self.count = 0

    def new(self) -> int:
        self.count += 1
        return self.count - 1


def _topological_rows(num_nodes: int, below: Iterable[Tuple[int, int]]) -> Optional[List[int]]:
    succ = defaultdict(set)
    indeg = [0] * num_nodes
    for a, b in below:
        if b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    heap = [v for v in range(num_nodes) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in sorted(succ[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != num_nodes:
        return None
    row = [0] * num_nodes
    for i, v in enumerate(order):
        row[v] = i
    return row


def _strand_moves(word: BraidWord) -> Tuple[List[bool], List[int]]:
    n = word.strands
    strand_at = list(range(n))
    jumped = [False] * n
    for x in word.letters:
        i = abs(x) - 1
        mover = strand_at[i + 1] if x > 0 else strand_at[i]
        jumped[mover] = True
        strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]
    end_position = [0] * n
    for p, s in enumerate(strand_at):
        end_position[s] = p
    return jumped, end_position


def _route(word: BraidWord, jog_strands: Sequence[int], order: Sequence[int]):
    n = word.strands
    nodes = _RowNodes()
    initial = [nodes.new() for _ in range(n)]
    pos_row = list(initial)
    below = set()
    columns = []

    def chain():
        for p in range(n - 1):
            below.add((pos_row[p], pos_row[p + 1]))

    chain()
    for s in jog_strands:
        new = nodes.new()
        columns.append(('jog', pos_row[s], new))
        pos_row[s] = new
        chain()
    for x in word.letters:
        i = abs(x) - 1
        new = nodes.new()
        if x > 0:
            # upper strand drops just below the lower one
            columns.append(('letter', pos_row[i + 1], new))
            pos_row[i], pos_row[i + 1] = new, pos_row[i]
        else:
            # lower strand climbs just above the upper one
            columns.append(('letter', pos_row[i], new))
            pos_row[i], pos_row[i + 1] = pos_row[i + 1], new
        chain()

    jumped, end_position = _strand_moves(word)
    for s in range(n):
        if jumped[s] or s in jog_strands:
            continue
        if end_position[s] == s or order.index(end_position[s]) > order.index(s):
            return None
    for p in order:
        depart, arrive = pos_row[p], initial[p]
        if depart == arrive:
            return None
        columns.append(('closure', depart, arrive))
        pos_row[p] = arrive
        chain()

    rows = _topological_rows(nodes.count, below)
    if rows is None:
        return None
    return columns, rows


def _closure_orders(n: int) -> List[Tuple[int, ...]]:
    orders = [tuple(reversed(range(n))), tuple(range(n))]
    if n <= 6:
        orders += [p for p in itertools.permutations(range(n)) if p not in orders]
    return orders


def grid_from_braid(word: BraidWord) -> GridDiagram:
    n = word.strands
    jumped, end_position = _strand_moves(word)
    idle = [s for s in range(n) if not jumped[s]]
    mandatory = [s for s in idle if end_position[s] == s]
    attempts = [mandatory, idle, list(range(n))]
    routed = None
    for jogs in attempts:
        for order in _closure_orders(n):
            routed = _route(word, jogs, order)
            if routed is not None:
                break
        if routed is not None:
            break
    if routed is None:
        raise UnsupportedError('no closure routing found for {}'.format(word.format()))
    columns, rows = routed
    size = len(columns)
    X = [0] * size
    O = [0] * size
    for t, (_, depart, arrive) in enumerate(columns):
        # columns are laid out right to left
        c = size - 1 - t
        X[c] = rows[depart]
        O[c] = rows[arrive]
    layout = GridLayout(word, tuple(reversed([k for k, _, _ in columns])), tuple(order), tuple(jogs))
    grid = GridDiagram(size, tuple(X), tuple(O), layout)
    if grid.num_components != BL.closure_components(word):
        raise BraidHFKError('grid of size {} does not present the closure of {}'.format(size, word.format()))
    logger.debug('grid of size %d for %s, closure order %s, jogs %s', size, word.format(), order, jogs)
    return grid


# gradings, on doubled coordinates so that markers are odd lattice points

def _count_ne(P: Sequence[Tuple[int, int]], Q: Sequence[Tuple[int, int]]) -> int:
    return sum(1 for a in P for b in Q if b[0] > a[0] and b[1] > a[1])


def _state_points(state: GridState) -> List[Tuple[int, int]]:
    return [(2 * i, 2 * r) for i, r in enumerate(state)]


def _marker_points(perm: Sequence[int]) -> List[Tuple[int, int]]:
    return [(2 * c + 1, 2 * r + 1) for c, r in enumerate(perm)]


def _maslov_wrt(points, markers) -> int:
    return (_count_ne(points, points) - _count_ne(points, markers) - _count_ne(markers, points)
            + _count_ne(markers, markers) + 1)


def maslov(state: GridState, G: GridDiagram) -> int:
    if len(state) != G.size:
        raise InputError('state of size {} on a grid of size {}'.format(len(state), G.size))
    return _maslov_wrt(_state_points(state), _marker_points(G.O))


def alexander(state: GridState, G: GridDiagram) -> Fraction:
    if len(state) != G.size:
        raise InputError('state of size {} on a grid of size {}'.format(len(state), G.size))
    pts = _state_points(state)
    m_o = _maslov_wrt(pts, _marker_points(G.O))
    m_x = _maslov_wrt(pts, _marker_points(G.X))
    return Fraction(m_o - m_x - (G.size - G.num_components), 2)


def bigrading(state: GridState, G: GridDiagram) -> Tuple[int, Fraction]:
    return maslov(state, G), alexander(state, G)


# rectangles

def _in_open(k: int, start: int, width: int, n: int) -> bool:
    return 0 < (k - start) % n < width


def _in_cells(k: int, start: int, width: int, n: int) -> bool:
    return (k - start) % n < width


def _rectangle_empty(state: GridState, G: GridDiagram, a: int, b: int, p: int, q: int) -> bool:
    """[a, b] x [p, q] read cyclically: no state points inside, no markers at all."""
    n = G.size
    w = (b - a) % n
    h = (q - p) % n
    for k in range(1, w):
        col = (a + k) % n
        if _in_open(state[col], p, h, n):
            return False
    for k in range(w):
        col = (a + k) % n
        if _in_cells(G.X[col], p, h, n) or _in_cells(G.O[col], p, h, n):
            return False
    return True


def _swap(state: GridState, a: int, b: int) -> GridState:
    s = list(state)
    s[a], s[b] = s[b], s[a]
    return tuple(s)


def rectangles_from(state: GridState, G: GridDiagram) -> Iterable[GridState]:
    """Targets of empty rectangles leaving state, with multiplicity."""
    n = G.size
    for a in range(n):
        for b in range(n):
            if a != b and _rectangle_empty(state, G, a, b, state[a], state[b]):
                yield _swap(state, a, b)


def rectangles_into(state: GridState, G: GridDiagram) -> Iterable[GridState]:
    """Sources of empty rectangles arriving at state, with multiplicity."""
    n = G.size
    for a in range(n):
        for b in range(n):
            if a != b and _rectangle_empty(state, G, a, b, state[b], state[a]):
                yield _swap(state, a, b)


def boundary(state: GridState, G: GridDiagram) -> Dict[GridState, int]:
    counts = Counter(rectangles_from(state, G))
    return {y: 1 for y, k in counts.items() if k % 2}


# full complex for small grids

def all_states(G: GridDiagram) -> Iterable[GridState]:
    return itertools.permutations(range(G.size))


def graded_states(G: GridDiagram, max_size: int = C.DEFAULT_FULL_HOMOLOGY_MAX_N,
                  verbose: bool = False) -> Dict[Tuple[int, Fraction], List[GridState]]:
    if G.size > max_size:
        raise ResourceError('full enumeration of {}! states exceeds budget N <= {}'.format(G.size, max_size),
                            attempted=G.size, budget=max_size)
    out = defaultdict(list)
    total = 1
    for k in range(2, G.size + 1):
        total *= k
    for s in tqdm(all_states(G), total=total, disable=not verbose):
        out[bigrading(s, G)].append(s)
    for key in out:
        out[key].sort()
    return dict(out)


def differential(G: GridDiagram, window: Tuple[int, Fraction],
                 states: Optional[Dict[Tuple[int, Fraction], List[GridState]]] = None):
    """Boundary matrix from bigrading (M, A) to (M-1, A) with both generator lists."""
    m, a = window
    states = states if states is not None else graded_states(G)
    sources = states.get((m, a), [])
    targets = states.get((m - 1, a), [])
    index = {s: i for i, s in enumerate(targets)}
    columns = []
    for s in sources:
        col = 0
        for y in boundary(s, G):
            assert y in index, "differential left its Alexander grading"
            col ^= 1 << index[y]
        columns.append(col)
    return BitMatrix.from_columns(len(targets), columns), sources, targets


@dataclass(frozen=True)
class HomologyReport:
    size: int
    components: int
    ranks: Dict[Tuple[int, Fraction], int]

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())


def fully_blocked_homology(G: GridDiagram, verbose: bool = False,
                           max_size: int = C.DEFAULT_FULL_HOMOLOGY_MAX_N) -> HomologyReport:
    states = graded_states(G, max_size=max_size, verbose=verbose)
    ranks_of_d = {}
    for (m, a) in states:
        d, _, _ = differential(G, (m, a), states)
        ranks_of_d[(m, a)] = d.rank()
        if (m - 1, a) in states:
            d_next, _, _ = differential(G, (m - 1, a), states)
            assert d_next.compose(d).is_zero(), "boundary squared is nonzero at {}".format((m, a))
    ranks = {}
    for (m, a), gens in states.items():
        h = len(gens) - ranks_of_d[(m, a)] - ranks_of_d.get((m + 1, a), 0)
        if h:
            ranks[(m, a)] = h
    return HomologyReport(G.size, G.num_components, ranks)


def graded_euler_characteristic(G: GridDiagram) -> sympy.Expr:
    t = BL.T
    chi = 0
    for (m, a), gens in graded_states(G).items():
        chi += (-1) ** (m % 2) * len(gens) * t ** sympy.Rational(a.numerator, a.denominator)
    return sympy.expand(chi)


# the distinguished state

def theta_state(G: GridDiagram) -> GridState:
    """Upper right corner of every X cell."""
    if G.layout is None:
        raise InputError('theta needs a grid built from a braid')
    n = G.size
    state = [0] * n
    for c in range(n):
        state[(c + 1) % n] = (G.X[c] + 1) % n
    return tuple(state)


@dataclass
class NonvanishingReport:
    verdict: str
    bigrading: Tuple[int, Fraction]
    window_size: int
    witness: Optional[List[GridState]] = None

    @property
    def witness_size(self) -> int:
        return len(self.witness) if self.witness else 0


def decide_theta(G: GridDiagram, max_window_states: int = 2_000_000, verbose: bool = False) -> NonvanishingReport:
    """Is theta a boundary? Only the component of theta in the (M+1, M) layers is built."""
    theta = theta_state(G)
    grading = bigrading(theta, G)
    if boundary(theta, G):
        raise BraidHFKError('theta is not a cycle on the grid of size {}'.format(G.size))
    lower = {theta: 0}
    upper: Dict[GridState, int] = {}
    upper_cols: List[Tuple[GridState, List[GridState]]] = []
    queue = deque([theta])
    progress = tqdm(disable=not verbose, desc='theta window')
    while queue:
        y = queue.popleft()
        for z in set(rectangles_into(y, G)):
            if z in upper:
                continue
            upper[z] = len(upper)
            targets = list(boundary(z, G))
            upper_cols.append((z, targets))
            for w in targets:
                if w not in lower:
                    lower[w] = len(lower)
                    queue.append(w)
            if len(upper) + len(lower) > max_window_states:
                raise ResourceError('theta window exceeded {} states'.format(max_window_states),
                                    attempted=len(upper) + len(lower), budget=max_window_states)
        progress.update(1)
    progress.close()
    columns = []
    for z, targets in upper_cols:
        col = 0
        for w in targets:
            col ^= 1 << lower[w]
        columns.append(col)
    d = BitMatrix.from_columns(len(lower), columns)
    v = [0] * len(lower)
    v[0] = 1
    coeffs = d.in_image(v)
    window = len(upper) + len(lower)
    logger.info('theta window for grid of size %d: %d + %d states', G.size, len(upper), len(lower))
    if coeffs is None:
        return NonvanishingReport(NONZERO, grading, window)
    witness = [upper_cols[i][0] for i, bit in enumerate(coeffs) if bit]
    return NonvanishingReport(ZERO, grading, window, witness)


def theta_nonvanishing(b: BraidWord, max_size: int = C.DEFAULT_WINDOW_MAX_N,
                       max_window_states: int = 2_000_000, verbose: bool = False) -> NonvanishingReport:
    G = grid_from_braid(b)
    if G.size > max_size:
        raise ResourceError('grid of size {} exceeds budget {}'.format(G.size, max_size),
                            attempted=G.size, budget=max_size)
    return decide_theta(G, max_window_states=max_window_states, verbose=verbose)


def self_linking(b: BraidWord) -> Tuple[int, List[int]]:
    """Total sl and the sl of each closure component (components ordered by lowest strand)."""
    n = b.strands
    cycles = BL.permutation_cycles(BL.permutation(b))
    comp_of_strand = {}
    for k, cycle in enumerate(cycles):
        for s in cycle:
            comp_of_strand[s] = k
    per_writhe = [0] * len(cycles)
    strand_at = list(range(n))
    for x in b.letters:
        i = abs(x) - 1
        c1, c2 = comp_of_strand[strand_at[i]], comp_of_strand[strand_at[i + 1]]
        if c1 == c2:
            per_writhe[c1] += 1 if x > 0 else -1
        strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]
    per = [per_writhe[k] - len(cycle) for k, cycle in enumerate(cycles)]
    return BL.writhe(b) - n, per


def normalize_laurent(expr) -> sympy.Poly:
    """Representative up to units: lowest degree 0 and positive lowest coefficient."""
    t = BL.T
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    den_poly = sympy.Poly(den, t)
    if len(den_poly.terms()) != 1:
        raise InputError('not a Laurent polynomial: {}'.format(expr))
    poly = sympy.Poly(num, t)
    low = min(m[0] for m, _ in poly.terms())
    poly = sympy.Poly(sympy.expand(poly.as_expr() / t ** low), t)
    lowest = poly.coeff_monomial(1)
    if lowest < 0:
        poly = -poly
    return poly


def alexander_poly_burau(b: BraidWord) -> sympy.Poly:
    if BL.closure_components(b) != 1:
        raise UnsupportedError('Alexander polynomial is only computed for knot closures')
    t = BL.T
    n = b.strands
    if n == 1:
        return sympy.Poly(1, t)
    B = BL.reduced_burau(b)
    det = (sympy.eye(n - 1) - B).det()
    return normalize_laurent(det * (1 - t) / (1 - t ** n))


def euler_check(b: BraidWord) -> bool:
    """Graded Euler characteristic of the fully blocked complex against the Burau oracle."""
    G = grid_from_braid(b)
    t = BL.T
    chi = graded_euler_characteristic(G)
    quotient = sympy.cancel(chi / (1 - 1 / t) ** (G.size - 1))
    return normalize_laurent(quotient) == alexander_poly_burau(b)


@dataclass
class ThetaRun:
    word: BraidWord
    axis: bool
    grid_size: int
    sl: int
    floor: int
    fdtc_interval: Tuple[int, int]
    report: NonvanishingReport
    wall_time_ms: int

    def as_dict(self) -> dict:
        m, a = self.report.bigrading
        return {
            'schema_version': C.SCHEMA_VERSION,
            'input_word': self.word.format(),
            'axis': self.axis,
            'N': self.grid_size,
            'sl': self.sl,
            'floor': self.floor,
            'fdtc_interval': list(self.fdtc_interval),
            'theta_bigrading': [m, format_grading(a)],
            'verdict': self.report.verdict,
            'witness_size': self.report.witness_size,
            'wall_time_ms': self.wall_time_ms,
        }


def format_grading(a: Fraction):
    return a.numerator if a.denominator == 1 else '{}/{}'.format(a.numerator, a.denominator)


def run_theta(word: BraidWord, axis: bool = False, max_size: int = C.DEFAULT_WINDOW_MAX_N,
              max_window_states: int = 2_000_000, verbose: bool = False) -> ThetaRun:
    start = time.perf_counter()
    target = BL.axis_augment(word) if axis else word
    G = grid_from_braid(target)
    if G.size > max_size:
        raise ResourceError('grid of size {} exceeds budget {}'.format(G.size, max_size),
                            attempted=G.size, budget=max_size)
    report = decide_theta(G, max_window_states=max_window_states, verbose=verbose)
    sl, _ = self_linking(target)
    if target.strands >= 2:
        bounds = BL.fdtc_bounds(target)
        floor, interval = bounds.lower, (bounds.lower, bounds.upper)
    else:
        floor, interval = 0, (0, 1)
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return ThetaRun(word, axis, G.size, sl, floor, interval, report, elapsed)
