"""
Combinatorial Heegaard double and triple diagrams.

A diagram is stored as crossing and region data only. Curves carry their cyclic
crossing sequence; edge k of a curve runs from its k-th crossing to the next one.
A region is a list of boundary components, each a ccw word of tokens; a token is
an edge traversed forwards (+) or backwards (-), named by the crossing the edge
leaves in the curve direction. Corner k of a component is the crossing at which
token k starts its traversal.

Crossing signs: +1 when the curve of the later family crosses the curve of the
earlier family from its right to its left.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from ..errors import InputError

logger = logging.getLogger(__name__)

ALPHA = 'α'
BETA = 'β'
GAMMA = 'γ'
FAMILIES = (ALPHA, BETA, GAMMA)

Z = 'z'
W = 'w'

# (component index, token index) inside one region
CornerSlot = Tuple[int, int]


def curve_family(name: str) -> str:
    if not name or name[0] not in FAMILIES or not name[1:].isdigit():
        raise InputError('bad curve name {!r}, expected a family letter and a number'.format(name))
    return name[0]


@dataclass(frozen=True)
class Curve:
    name: str
    crossings: Tuple[str, ...]

    @property
    def family(self) -> str:
        return curve_family(self.name)


@dataclass(frozen=True)
class Crossing:
    name: str
    first: str
    second: str
    sign: int


@dataclass(frozen=True)
class Token:
    sign: int
    curve: str
    start: str

    @classmethod
    def parse(cls, text: str) -> 'Token':
        if len(text) < 4 or text[0] not in '+-' or '@' not in text:
            raise InputError('bad boundary token {!r}'.format(text))
        curve, _, start = text[1:].partition('@')
        curve_family(curve)
        return cls(1 if text[0] == '+' else -1, curve, start)

    def format(self) -> str:
        return '{}{}@{}'.format('+' if self.sign > 0 else '-', self.curve, self.start)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class Region:
    name: str
    components: Tuple[Tuple[Token, ...], ...]

    def corner_slots(self) -> List[CornerSlot]:
        return [(j, k) for j, comp in enumerate(self.components) for k in range(len(comp))]


@dataclass(frozen=True)
class Basepoint:
    kind: str
    label: str
    region: str


@dataclass(frozen=True)
class Cut:
    """One crossing of a longitude through a region, splitting its corners."""
    region: str
    left: FrozenSet[CornerSlot]
    right: FrozenSet[CornerSlot]


@dataclass(frozen=True)
class CrossingCount:
    first: str
    second: str
    tag: Optional[str]
    expected: int


@dataclass
class CombinatorialDiagram:
    curves: Tuple[Curve, ...]
    crossings: Tuple[Crossing, ...]
    regions: Tuple[Region, ...] = ()
    basepoints: Tuple[Basepoint, ...] = ()
    tags: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    generators: Dict[str, Tuple[Tuple[str, str], ...]] = field(default_factory=dict)
    homology: Dict[str, Tuple[int, ...]] = field(default_factory=dict)
    dual: Tuple[str, ...] = ()
    expected_counts: Tuple[CrossingCount, ...] = ()
    expected_euler: Optional[int] = None
    name: str = ''

    @cached_property
    def curve(self) -> Mapping[str, Curve]:
        return {c.name: c for c in self.curves}

    @cached_property
    def crossing(self) -> Mapping[str, Crossing]:
        return {x.name: x for x in self.crossings}

    @cached_property
    def region(self) -> Mapping[str, Region]:
        return {r.name: r for r in self.regions}

    @cached_property
    def region_index(self) -> Mapping[str, int]:
        return {r.name: i for i, r in enumerate(self.regions)}

    @cached_property
    def _position(self) -> Mapping[Tuple[str, str], int]:
        return {(c.name, x): k for c in self.curves for k, x in enumerate(c.crossings)}

    def family(self, f: str) -> List[Curve]:
        return [c for c in self.curves if c.family == f]

    def next_crossing(self, curve: str, x: str) -> str:
        seq = self.curve[curve].crossings
        return seq[(self._position[(curve, x)] + 1) % len(seq)]

    def prev_crossing(self, curve: str, x: str) -> str:
        seq = self.curve[curve].crossings
        return seq[(self._position[(curve, x)] - 1) % len(seq)]

    def token_corner(self, t: Token) -> str:
        """Crossing at which the traversal of t starts."""
        return t.start if t.sign > 0 else self.next_crossing(t.curve, t.start)

    def token_end(self, t: Token) -> str:
        return self.next_crossing(t.curve, t.start) if t.sign > 0 else t.start

    def corner_crossing(self, region: str, slot: CornerSlot) -> str:
        j, k = slot
        return self.token_corner(self.region[region].components[j][k])

    @cached_property
    def corners_at(self) -> Mapping[str, List[Tuple[str, CornerSlot]]]:
        """The four (region, slot) corners around each crossing."""
        out: Dict[str, List[Tuple[str, CornerSlot]]] = {x.name: [] for x in self.crossings}
        for r in self.regions:
            for slot in r.corner_slots():
                out.setdefault(self.corner_crossing(r.name, slot), []).append((r.name, slot))
        return out

    @cached_property
    def edges(self) -> List[Tuple[str, str]]:
        return [(c.name, x) for c in self.curves for x in c.crossings]

    def crossings_between(self, a: str, b: str, tag: Optional[str] = None) -> List[str]:
        pair = {a, b}
        tagged = self.tags.get(tag, frozenset()) if tag else None
        return [x.name for x in self.crossings
                if {x.first, x.second} == pair and (tagged is None or x.name in tagged)]

    def basepoint_regions(self, kind: Optional[str] = None) -> List[str]:
        return [b.region for b in self.basepoints if kind is None or b.kind == kind]

    def euler_characteristic(self) -> Optional[int]:
        if not self.regions:
            return None
        faces = sum(2 - len(r.components) for r in self.regions)
        return len(self.crossings) - len(self.edges) + faces


@dataclass
class ValidationReport:
    name: str
    euler_characteristic: Optional[int]
    problems: List[str]

    @property
    def ok(self) -> bool:
        return not self.problems

    def as_dict(self):
        return {'fixture': self.name, 'ok': self.ok,
                'euler_characteristic': self.euler_characteristic, 'problems': list(self.problems)}


def _check_curves(d: CombinatorialDiagram, problems: List[str]) -> None:
    seen = set()
    for c in d.curves:
        if c.name in seen:
            problems.append('curve {} declared twice'.format(c.name))
        seen.add(c.name)
        if len(set(c.crossings)) != len(c.crossings):
            problems.append('curve {} passes a crossing twice'.format(c.name))
        for x in c.crossings:
            cr = d.crossing.get(x)
            if cr is None:
                problems.append('curve {} lists unknown crossing {}'.format(c.name, x))
            elif c.name not in (cr.first, cr.second):
                problems.append('curve {} lists crossing {} of {} and {}'.format(c.name, x, cr.first, cr.second))
        if not c.crossings and d.regions:
            problems.append('curve {} has no crossings'.format(c.name))
    for x in d.crossings:
        for c in (x.first, x.second):
            if c not in d.curve:
                problems.append('crossing {} lies on unknown curve {}'.format(x.name, c))
            elif x.name not in d.curve[c].crossings:
                problems.append('crossing {} missing from the sequence of {}'.format(x.name, c))
        if x.first in d.curve and x.second in d.curve:
            f1, f2 = d.curve[x.first].family, d.curve[x.second].family
            if FAMILIES.index(f1) >= FAMILIES.index(f2):
                problems.append('crossing {} must join curves of two families in order'.format(x.name))
        if x.sign not in (1, -1):
            problems.append('crossing {} has no sign'.format(x.name))


def _check_regions(d: CombinatorialDiagram, problems: List[str]) -> None:
    uses: Dict[Tuple[int, str, str], int] = {}
    for r in d.regions:
        if not r.components:
            problems.append('region {} is empty'.format(r.name))
        for j, comp in enumerate(r.components):
            if not comp:
                problems.append('region {} component {} is empty'.format(r.name, j))
                continue
            for t in comp:
                if (t.curve, t.start) not in d._position:
                    problems.append('region {} uses unknown edge {}'.format(r.name, t))
                    break
                uses[(t.sign, t.curve, t.start)] = uses.get((t.sign, t.curve, t.start), 0) + 1
            else:
                for k, t in enumerate(comp):
                    nxt = comp[(k + 1) % len(comp)]
                    if d.token_end(t) != d.token_corner(nxt) or (len(comp) > 1 and nxt.curve == t.curve):
                        problems.append('region {} does not close up after {}'.format(r.name, t))
                        break
    for curve, start in d.edges:
        for sign in (1, -1):
            n = uses.get((sign, curve, start), 0)
            if n != 1:
                problems.append('edge {} is bounded {} times on its {} side'.format(
                    Token(sign, curve, start), n, 'left' if sign > 0 else 'right'))


def validate(d: CombinatorialDiagram) -> ValidationReport:
    problems: List[str] = []
    _check_curves(d, problems)
    if d.regions and not problems:
        _check_regions(d, problems)
    names = {r.name for r in d.regions}
    for b in d.basepoints:
        if b.kind not in (Z, W):
            problems.append('basepoint kind {!r} is not z or w'.format(b.kind))
        if d.regions and b.region not in names:
            problems.append('basepoint {}{} lies in unknown region {}'.format(b.kind, b.label, b.region))
    for tag, members in d.tags.items():
        unknown = sorted(m for m in members if m not in names and m not in d.crossing)
        if unknown:
            problems.append('tag {} names unknown items {}'.format(tag, ' '.join(unknown)))
    for gname, comps in d.generators.items():
        try:
            check_generator(d, comps, generator_families(d, comps))
        except InputError as e:
            problems.append('generator {}: {}'.format(gname, e))
    for c in d.dual:
        if c not in d.curve or d.curve[c].family != ALPHA:
            problems.append('dual curve {} is not an α curve'.format(c))
    for e in d.expected_counts:
        n = len(d.crossings_between(e.first, e.second, e.tag))
        if n != e.expected:
            problems.append('expected {} crossings of {} and {}{}, found {}'.format(
                e.expected, e.first, e.second, ' in ' + e.tag if e.tag else '', n))
    chi = d.euler_characteristic() if not problems else None
    if d.expected_euler is not None and chi is not None and chi != d.expected_euler:
        problems.append('expected Euler characteristic {}, found {}'.format(d.expected_euler, chi))
    for p in problems:
        logger.info('%s: %s', d.name or 'diagram', p)
    return ValidationReport(d.name, chi, problems)


def check(d: CombinatorialDiagram) -> CombinatorialDiagram:
    report = validate(d)
    if not report.ok:
        raise InputError('{} is invalid: {}'.format(d.name or 'diagram', '; '.join(report.problems)))
    return d


def generator_families(d: CombinatorialDiagram, comps: Sequence[Tuple[str, str]]) -> Tuple[str, str]:
    """The two curve families a generator matches, read off its first component."""
    if comps:
        curve, x = comps[0]
        cr = d.crossing.get(x)
        if cr is not None and curve in (cr.first, cr.second) and curve in d.curve:
            other = cr.second if curve == cr.first else cr.first
            if other in d.curve:
                return d.curve[curve].family, d.curve[other].family
    return ALPHA, BETA


def check_generator(d: CombinatorialDiagram, comps: Sequence[Tuple[str, str]],
                    families: Tuple[str, str] = (ALPHA, BETA)) -> None:
    """One crossing per curve of the first family, meeting each curve of the second once."""
    first = {c.name for c in d.family(families[0])}
    second = {c.name for c in d.family(families[1])}
    used_first, used_second = set(), set()
    for curve, x in comps:
        cr = d.crossing.get(x)
        if cr is None or curve not in (cr.first, cr.second):
            raise InputError('crossing {} does not lie on {}'.format(x, curve))
        other = cr.second if curve == cr.first else cr.first
        if curve not in first or other not in second:
            raise InputError('crossing {} does not join {} to {}'.format(x, families[0], families[1]))
        if curve in used_first or other in used_second:
            raise InputError('curve used twice at {}'.format(x))
        used_first.add(curve)
        used_second.add(other)
    if used_first != first or used_second != second:
        raise InputError('not a bijection between the {} and {} curves'.format(*families))


def _ccw_darts(x: Crossing) -> Tuple[Tuple[str, int], ...]:
    # darts as (curve, +1 leaving forward / -1 leaving backward), ccw around x
    a, b = x.first, x.second
    if x.sign > 0:
        return (a, 1), (b, 1), (a, -1), (b, -1)
    return (a, 1), (b, -1), (a, -1), (b, 1)


def trace_regions(curves: Sequence[Curve], crossings: Sequence[Crossing]) -> Tuple[Region, ...]:
    """Faces of the curve graph, read off the rotation given by the crossing signs.

    Only correct when every region is a disk, which holds when the curves fill
    the surface.
    """
    d = CombinatorialDiagram(tuple(curves), tuple(crossings))
    order = {x.name: _ccw_darts(x) for x in crossings}
    seen = set()
    regions = []
    for x in crossings:
        for dart in order[x.name]:
            if (x.name, dart) in seen:
                continue
            tokens = []
            at, (curve, direction) = x.name, dart
            while (at, (curve, direction)) not in seen:
                seen.add((at, (curve, direction)))
                if direction > 0:
                    tokens.append(Token(1, curve, at))
                    arrive = d.next_crossing(curve, at)
                else:
                    arrive = d.prev_crossing(curve, at)
                    tokens.append(Token(-1, curve, arrive))
                darts = order[arrive]
                back = darts.index((curve, -direction))
                at, (curve, direction) = arrive, darts[back - 1]
            regions.append(Region('R{}'.format(len(regions) + 1), (tuple(tokens),)))
    logger.debug('traced %d regions from %d crossings', len(regions), len(crossings))
    return tuple(regions)


def region_left_of(regions: Sequence[Region], token: Token) -> str:
    for r in regions:
        for comp in r.components:
            if token in comp:
                return r.name
    raise InputError('no region lies to the left of {}'.format(token))
