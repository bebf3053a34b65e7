"""
Braid words, Dehornoy handle reduction and the Dehornoy floor.

Letters are nonzero ints: +i is sigma_i and -i its inverse, 1 <= i <= n-1.
The full twist is fixed as Delta^2 = (sigma_1 ... sigma_{n-1})^n.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy

from . import constants as C
from .errors import InputError, ResourceError

logger = logging.getLogger(__name__)

POSITIVE = 'positive'
NEGATIVE = 'negative'
TRIVIAL = 'trivial'

T = sympy.Symbol('t')


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise InputError('braid needs at least one strand, got {}'.format(self.strands))
        for x in self.letters:
            if x == 0 or abs(x) > self.strands - 1:
                raise InputError('index-out-of-range: letter {} on {} strands'.format(x, self.strands))

    @classmethod
    def parse(cls, text: str) -> 'BraidWord':
        head, sep, body = text.partition(':')
        if not sep:
            raise InputError('expected "n: w", got {!r}'.format(text))
        try:
            strands = int(head.strip())
        except ValueError:
            raise InputError('bad strand count token {!r}'.format(head.strip()))
        letters = []
        for token in body.split():
            try:
                letters.append(int(token))
            except ValueError:
                raise InputError('bad letter token {!r}'.format(token))
            if letters[-1] == 0 or abs(letters[-1]) > strands - 1:
                raise InputError('index-out-of-range: token {!r} on {} strands'.format(token, strands))
        return cls(strands, tuple(letters))

    def format(self) -> str:
        return '{}: {}'.format(self.strands, ' '.join(str(x) for x in self.letters))

    def __str__(self):
        return self.format()

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> 'BraidWord':
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __mul__(self, other: 'BraidWord') -> 'BraidWord':
        return multiply(self, other)


def identity(strands: int) -> BraidWord:
    return BraidWord(strands, ())


def multiply(a: BraidWord, b: BraidWord) -> BraidWord:
    if a.strands != b.strands:
        raise InputError('strand mismatch: {} vs {}'.format(a.strands, b.strands))
    return BraidWord(a.strands, a.letters + b.letters)


def power(b: BraidWord, k: int) -> BraidWord:
    base = b if k >= 0 else b.inverse()
    return BraidWord(b.strands, base.letters * abs(k))


def conjugate(b: BraidWord, by: BraidWord) -> BraidWord:
    """by . b . by^-1"""
    return multiply(multiply(by, b), by.inverse())


def permutation(b: BraidWord) -> Tuple[int, ...]:
    """perm[p] is the starting position of the strand that ends at position p (0-indexed)."""
    arrangement = list(range(b.strands))
    for x in b.letters:
        i = abs(x) - 1
        arrangement[i], arrangement[i + 1] = arrangement[i + 1], arrangement[i]
    return tuple(arrangement)


def permutation_cycles(perm: Sequence[int]) -> List[List[int]]:
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cycle = []
        p = start
        while p not in seen:
            seen.add(p)
            cycle.append(p)
            p = perm[p]
        cycles.append(cycle)
    return cycles


def closure_components(b: BraidWord) -> int:
    return len(permutation_cycles(permutation(b)))


def writhe(b: BraidWord) -> int:
    return sum(1 if x > 0 else -1 for x in b.letters)


def positive_markov_stabilize(b: BraidWord) -> BraidWord:
    n = b.strands
    return BraidWord(n + 1, b.letters + (n,))


def axis_augment(b: BraidWord) -> BraidWord:
    """Adds the braid axis as a new outermost strand: b . (s_n ... s_1)(s_1 ... s_n)."""
    n = b.strands
    loop = tuple(range(n, 0, -1)) + tuple(range(1, n + 1))
    return BraidWord(n + 1, b.letters + loop)


def full_twist(n: int, k: int = 1) -> BraidWord:
    if n < 2:
        raise InputError('full twist needs at least 2 strands, got {}'.format(n))
    return power(BraidWord(n, tuple(range(1, n))), n * k)


def free_reduce(b: BraidWord) -> BraidWord:
    stack: List[int] = []
    for x in b.letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return BraidWord(b.strands, tuple(stack))


def _first_handle(word: Sequence[int]) -> Optional[Tuple[int, int]]:
    # the handle whose closing letter comes first; between its ends there is no
    # letter of index i or i-1
    last = {}
    for k, x in enumerate(word):
        i = abs(x)
        p = last.get(i)
        q = last.get(i - 1, -1)
        if p is not None and p > q and word[p] == -x:
            return p, k
        last[i] = k
    return None


def _reduce_handle(word: List[int], p: int, k: int) -> List[int]:
    i = abs(word[p])
    e = 1 if word[p] > 0 else -1
    middle = []
    for x in word[p + 1:k]:
        if abs(x) == i + 1:
            d = 1 if x > 0 else -1
            middle.extend((-e * (i + 1), d * i, e * (i + 1)))
        else:
            middle.append(x)
    return word[:p] + middle + word[k + 1:]


def handle_reduce(b: BraidWord, max_steps: int = C.MAX_HANDLE_STEPS) -> BraidWord:
    word = list(b.letters)
    steps = 0
    while True:
        handle = _first_handle(word)
        if handle is None:
            break
        word = _reduce_handle(word, *handle)
        steps += 1
        if steps > max_steps:
            raise ResourceError('handle reduction exceeded {} steps on {}'.format(max_steps, b.format()),
                                attempted=steps, budget=max_steps)
    logger.debug('handle reduction of %d letters took %d steps', len(b), steps)
    return BraidWord(b.strands, tuple(word))


def word_sign(letters: Sequence[int]) -> str:
    """Sign of the lowest index in a handle-free word."""
    if not letters:
        return TRIVIAL
    low = min(abs(x) for x in letters)
    signs = {x > 0 for x in letters if abs(x) == low}
    assert len(signs) == 1, "word still contains a handle"
    return POSITIVE if signs.pop() else NEGATIVE


def sigma_sign(b: BraidWord) -> str:
    return word_sign(handle_reduce(b).letters)


def braid_equal(a: BraidWord, b: BraidWord) -> bool:
    return sigma_sign(multiply(a.inverse(), b)) == TRIVIAL


def compare(a: BraidWord, b: BraidWord) -> int:
    """-1, 0, 1 as a < b, a = b, a > b in the Dehornoy order."""
    sign = sigma_sign(multiply(a.inverse(), b))
    return {POSITIVE: -1, TRIVIAL: 0, NEGATIVE: 1}[sign]


@dataclass(frozen=True)
class FloorCertificate:
    floor: int
    lower_witness: BraidWord
    upper_witness: BraidWord

    def verify(self) -> bool:
        return (word_sign(self.lower_witness.letters) in (POSITIVE, TRIVIAL)
                and word_sign(self.upper_witness.letters) == NEGATIVE)


def _search_order(bound: int):
    yield 0
    for m in range(1, bound + 1):
        yield m
        yield -m


def dehornoy_floor(b: BraidWord, max_steps: int = C.MAX_HANDLE_STEPS) -> FloorCertificate:
    """The m with Delta^2m <= b < Delta^2(m+1)."""
    if b.strands < 2:
        raise InputError('floor needs at least 2 strands, got {}'.format(b.strands))
    bound = len(b) + 1
    for m in _search_order(bound):
        lower = handle_reduce(multiply(b, full_twist(b.strands, -m)), max_steps)
        if word_sign(lower.letters) == NEGATIVE:
            continue
        upper = handle_reduce(multiply(b, full_twist(b.strands, -(m + 1))), max_steps)
        if word_sign(upper.letters) != NEGATIVE:
            continue
        return FloorCertificate(m, lower, upper)
    raise ResourceError('no floor found within |m| <= {} for {}'.format(bound, b.format()),
                        attempted=bound)


@dataclass(frozen=True)
class FdtcBounds:
    lower: int
    upper: int
    certifies_c_gt_1: bool
    certifies_c_lt_0: bool
    certifies_right_veering: bool

    def as_dict(self):
        return {'fdtc_interval': [self.lower, self.upper],
                'certifies_c_gt_1': self.certifies_c_gt_1,
                'certifies_c_lt_0': self.certifies_c_lt_0,
                'certifies_right_veering': self.certifies_right_veering}


def fdtc_bounds(b: BraidWord, certificate: Optional[FloorCertificate] = None) -> FdtcBounds:
    m = (certificate or dehornoy_floor(b)).floor
    return FdtcBounds(m, m + 1, m >= 2, m <= -2, m >= 1)


def reduced_burau(b: BraidWord) -> sympy.Matrix:
    """Reduced Burau image, an (n-1)x(n-1) matrix over Z[t, 1/t]."""
    n = b.strands
    size = n - 1
    out = sympy.eye(size)
    for x in b.letters:
        r = abs(x) - 1
        gen = sympy.eye(size)
        if x > 0:
            left, diag, right = T, -T, 1
        else:
            left, diag, right = 1, -1 / T, 1 / T
        if r > 0:
            gen[r, r - 1] = left
        gen[r, r] = diag
        if r < size - 1:
            gen[r, r + 1] = right
        out = out * gen
    return out.applyfunc(sympy.cancel)
