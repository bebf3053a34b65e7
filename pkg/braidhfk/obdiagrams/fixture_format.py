"""
Reader and writer for the line oriented ``.hd`` diagram format.

    curve α1 : u1 v2 x1            cyclic crossing sequence
    sign + : u1 x1                 crossing signs, any number of lines
    region R4 : +α1@x1 -β2@v2 | +α2@c3 -β1@u1
    trace                          regions read off the crossing signs instead
    basepoint z 1 R4               or: basepoint w 1 left -β1@v1
    tag S12 : x1 u1 R4
    generator xD : (α1,x1) (α2,x2)
    dual : α1 α2                   dual curves of a diagram without regions
    homology A1 : 1 0              names a class by its dual curve coordinates
    expect crossings α1 β1 S12 = 2
    expect euler = 0

Everything after ``#`` is a comment.
"""
import logging
import os
import re
from collections import OrderedDict
from typing import Dict, List, Tuple

from ..errors import InputError
from .diagram import (ALPHA, FAMILIES, Basepoint, CombinatorialDiagram, Crossing,
                      CrossingCount, Curve, Region, Token, curve_family, region_left_of,
                      trace_regions)

logger = logging.getLogger(__name__)

_PAIR = re.compile(r'\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)')


class _Reader:
    def __init__(self, source: str):
        self.source = source
        self.curves: 'OrderedDict[str, Tuple[str, ...]]' = OrderedDict()
        self.signs: Dict[str, int] = {}
        self.regions: List[Region] = []
        self.traced = False
        self.basepoints: List[Tuple[int, str, str, str]] = []
        self.tags: Dict[str, frozenset] = {}
        self.generators: Dict[str, Tuple[Tuple[str, str], ...]] = {}
        self.homology: Dict[str, Tuple[int, ...]] = {}
        self.dual: Tuple[str, ...] = ()
        self.counts: List[CrossingCount] = []
        self.euler = None
        self.lineno = 0

    def fail(self, message: str):
        raise InputError('{}:{}: {}'.format(self.source, self.lineno, message))

    def split_colon(self, rest: str) -> Tuple[str, List[str]]:
        head, sep, body = rest.partition(':')
        if not sep:
            self.fail('expected ":"')
        return head.strip(), body.split()

    def line(self, text: str):
        words = text.split(None, 1)
        keyword, rest = words[0], words[1] if len(words) > 1 else ''
        handler = getattr(self, 'do_' + keyword, None)
        if handler is None:
            self.fail('unknown directive {!r}'.format(keyword))
        try:
            handler(rest)
        except InputError as e:
            if str(e).startswith(self.source + ':'):
                raise
            self.fail(str(e))

    def do_curve(self, rest):
        name, body = self.split_colon(rest)
        curve_family(name)
        if name in self.curves:
            self.fail('curve {} declared twice'.format(name))
        self.curves[name] = tuple(body)

    def do_sign(self, rest):
        head, body = self.split_colon(rest)
        if head not in ('+', '-'):
            self.fail('sign must be + or -, got {!r}'.format(head))
        for x in body:
            self.signs[x] = 1 if head == '+' else -1

    def do_region(self, rest):
        name, _ = self.split_colon(rest)
        body = rest.partition(':')[2]
        comps = tuple(tuple(Token.parse(t) for t in part.split()) for part in body.split('|'))
        self.regions.append(Region(name, comps))

    def do_trace(self, rest):
        if rest.strip():
            self.fail('trace takes no arguments')
        self.traced = True

    def do_basepoint(self, rest):
        words = rest.split()
        if len(words) == 3:
            self.basepoints.append((self.lineno, words[0], words[1], words[2]))
        elif len(words) == 4 and words[2] == 'left':
            self.basepoints.append((self.lineno, words[0], words[1], Token.parse(words[3])))
        else:
            self.fail('expected "basepoint z|w label region" or "basepoint z|w label left token"')

    def do_tag(self, rest):
        name, body = self.split_colon(rest)
        self.tags[name] = self.tags.get(name, frozenset()) | frozenset(body)

    def do_generator(self, rest):
        name, _ = self.split_colon(rest)
        body = rest.partition(':')[2]
        pairs = tuple(_PAIR.findall(body))
        if not pairs and body.strip():
            self.fail('bad generator components {!r}'.format(body.strip()))
        self.generators[name] = pairs

    def do_dual(self, rest):
        _, body = self.split_colon(rest)
        self.dual = tuple(body)

    def do_homology(self, rest):
        name, body = self.split_colon(rest)
        try:
            self.homology[name] = tuple(int(v) for v in body)
        except ValueError:
            self.fail('homology coordinates must be integers')

    def do_expect(self, rest):
        lhs, sep, rhs = rest.partition('=')
        words = lhs.split()
        try:
            value = int(rhs)
        except ValueError:
            self.fail('expected an integer after "="')
        if sep and words == ['euler']:
            self.euler = value
        elif sep and words and words[0] == 'crossings' and len(words) in (3, 4):
            tag = words[3] if len(words) == 4 else None
            self.counts.append(CrossingCount(words[1], words[2], tag, value))
        else:
            self.fail('expected "expect crossings A B [TAG] = n" or "expect euler = n"')

    def crossings(self) -> List[Crossing]:
        on: 'OrderedDict[str, List[str]]' = OrderedDict()
        for curve, seq in self.curves.items():
            for x in seq:
                on.setdefault(x, []).append(curve)
        out = []
        for x, curves in on.items():
            if len(curves) != 2 or curves[0] == curves[1]:
                raise InputError('{}: crossing {} must lie on exactly two curves, found {}'.format(
                    self.source, x, ' '.join(curves)))
            first, second = sorted(curves, key=lambda c: FAMILIES.index(curve_family(c)))
            if x not in self.signs:
                raise InputError('{}: crossing {} has no sign'.format(self.source, x))
            out.append(Crossing(x, first, second, self.signs[x]))
        stray = sorted(set(self.signs) - set(on))
        if stray:
            raise InputError('{}: signs given for unknown crossings {}'.format(self.source, ' '.join(stray)))
        return out

    def build(self, name: str) -> CombinatorialDiagram:
        crossings = self.crossings()
        curves = tuple(Curve(n, seq) for n, seq in self.curves.items())
        if self.traced and self.regions:
            raise InputError('{}: give region lines or trace, not both'.format(self.source))
        regions = trace_regions(curves, crossings) if self.traced else tuple(self.regions)
        basepoints = []
        for lineno, kind, label, where in self.basepoints:
            if isinstance(where, Token):
                try:
                    where = region_left_of(regions, where)
                except InputError as e:
                    raise InputError('{}:{}: {}'.format(self.source, lineno, e))
            basepoints.append(Basepoint(kind, label, where))
        dual = self.dual
        if not dual and not regions and len([b for b in basepoints if b.kind == 'w']) <= 1:
            dual = tuple(c for c in self.curves if curve_family(c) == ALPHA)
        return CombinatorialDiagram(curves, tuple(crossings), regions, tuple(basepoints), dict(self.tags),
                                    dict(self.generators), dict(self.homology), dual,
                                    tuple(self.counts), self.euler, name)


def loads(text: str, source: str = '<string>') -> CombinatorialDiagram:
    reader = _Reader(source)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        reader.lineno = lineno
        line = raw.split('#', 1)[0].strip()
        if line:
            reader.line(line)
    name = os.path.splitext(os.path.basename(source))[0]
    d = reader.build(name)
    logger.debug('read %s: %d curves, %d crossings, %d regions', source, len(d.curves),
                 len(d.crossings), len(d.regions))
    return d


def load(path: str) -> CombinatorialDiagram:
    try:
        with open(path, encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        raise InputError('cannot read fixture {}: {}'.format(path, e))
    return loads(text, source=path)


def dumps(d: CombinatorialDiagram) -> str:
    lines = []
    for c in d.curves:
        lines.append('curve {} : {}'.format(c.name, ' '.join(c.crossings)))
    for sign, label in ((1, '+'), (-1, '-')):
        names = [x.name for x in d.crossings if x.sign == sign]
        if names:
            lines.append('sign {} : {}'.format(label, ' '.join(names)))
    for r in d.regions:
        lines.append('region {} : {}'.format(r.name, ' | '.join(
            ' '.join(t.format() for t in comp) for comp in r.components)))
    for b in d.basepoints:
        lines.append('basepoint {} {} {}'.format(b.kind, b.label, b.region))
    for tag, members in sorted(d.tags.items()):
        lines.append('tag {} : {}'.format(tag, ' '.join(sorted(members))))
    for g, comps in d.generators.items():
        lines.append('generator {} : {}'.format(g, ' '.join('({},{})'.format(c, x) for c, x in comps)))
    if d.dual:
        lines.append('dual : {}'.format(' '.join(d.dual)))
    for h, coords in d.homology.items():
        lines.append('homology {} : {}'.format(h, ' '.join(str(v) for v in coords)))
    for e in d.expected_counts:
        lines.append('expect crossings {} {}{} = {}'.format(e.first, e.second,
                                                            ' ' + e.tag if e.tag else '', e.expected))
    if d.expected_euler is not None:
        lines.append('expect euler = {}'.format(d.expected_euler))
    return '\n'.join(lines) + '\n'
