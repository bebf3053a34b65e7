import os

import numpy as np
import pandas as pd

from .. import braidlab as BL
from .. import constants as C

"""
Add corpora to this file so that they can be run from the command line.

Every corpus is a CSV file under data/corpora or, with `build`, a frame generated
from a fixed seed. The kind decides which columns
a row carries and what is checked on it:
    - floor: `word`; floor >= 2 forces a nonzero invariant, floor <= -2 a zero one
    - axis: `word`; the braid together with its axis has a nonzero invariant
    - multiplicativity: `word_g`, `word_h`; nonzero on both forces nonzero on the product
    - conjugation: `word`, `by`; the verdict survives conjugation
An optional `expected` column (nonzero / zero) is compared against the verdict.
An entry may override the grid budget of the run configuration with `grid_cfg`.
"""

FLOOR = 'floor'
AXIS = 'axis'
MULTIPLICATIVITY = 'multiplicativity'
CONJUGATION = 'conjugation'
KINDS = (FLOOR, AXIS, MULTIPLICATIVITY, CONJUGATION)

KIND_COLUMNS = {
    FLOOR: ('word',),
    AXIS: ('word',),
    MULTIPLICATIVITY: ('word_g', 'word_h'),
    CONJUGATION: ('word', 'by'),
}

random_seed_base = 1000


def _positive_word(rng, n: int, max_len: int = 2) -> BL.BraidWord:
    length = int(rng.integers(1, max_len + 1))
    return BL.BraidWord(n, tuple(int(rng.integers(1, n)) for _ in range(length)))


def _nonvanishing_word(rng, n: int) -> BL.BraidWord:
    """A word whose closure is known to keep a nonzero invariant, often not positive as written."""
    p = _positive_word(rng, n)
    kind = int(rng.integers(4))
    if kind == 1:
        j = int(rng.integers(1, n))
        return BL.conjugate(p, BL.BraidWord(n, (j if rng.random() < 0.5 else -j,)))
    if kind == 2:
        j = int(rng.integers(1, n))
        k = int(rng.integers(0, len(p) + 1))
        pair = (j, -j) if rng.random() < 0.5 else (-j, j)
        return BL.BraidWord(n, p.letters[:k] + pair + p.letters[k:])
    if kind == 3:
        return BL.axis_augment(BL.identity(n - 1))
    return p


def random_multiplicativity_pairs(seed: int = random_seed_base, count: int = 60,
                                  max_letters: int = 6) -> pd.DataFrame:
    """Seeded pairs on 2 and 3 strands; the product stays within max_letters letters."""
    rng = np.random.default_rng(seed)
    rows = []
    while len(rows) < count:
        n = int(rng.choice([2, 3]))
        g, h = _nonvanishing_word(rng, n), _nonvanishing_word(rng, n)
        if len(g) + len(h) > max_letters:
            continue
        rows.append({'word_g': g.format(), 'word_h': h.format()})
    return pd.DataFrame(rows, columns=list(KIND_COLUMNS[MULTIPLICATIVITY]))


name2corpus = {}

"""
Fractional Dehn twist coefficient corpus: braids with floor at least 2 must
have a nonzero invariant and braids with floor at most -2 a vanishing one.
Rows with a floor in between are carried along as controls.
"""
name2corpus['fdtc_floors'] = {
    'path': os.path.join(C.CORPORA_DIR, 'fdtc_floors.csv'),
    'kind': FLOOR,
}

"""
Braids with their axis added as an extra component, including braids whose
own invariant vanishes.
"""
name2corpus['axis'] = {
    'path': os.path.join(C.CORPORA_DIR, 'axis.csv'),
    'kind': AXIS,
    # the axis adds a strand and 2n letters
    'grid_cfg': {'max_size': 12},
}

"""
Pairs of braids with nonzero invariants; the product must keep it.
"""
name2corpus['multiplicativity'] = {
    'path': os.path.join(C.CORPORA_DIR, 'multiplicativity_pairs.csv'),
    'kind': MULTIPLICATIVITY,
}

"""
Seeded random pairs on two and three strands. Factors are positive words,
their conjugates by a single letter, words with an inserted cancelling pair,
or the axis of the trivial braid, so most of them are not positive as written.
"""
name2corpus['multiplicativity_random'] = {
    'build': random_multiplicativity_pairs,
    'kind': MULTIPLICATIVITY,
    'grid_cfg': {'max_size': 10, 'max_window_states': 200_000},
}

"""
Conjugates of a positive half twist and of a full twist on a two-strand
sub-block, by a spread of short conjugators. Every closure must keep a
nonzero invariant.
"""
name2corpus['conjugates'] = {
    'path': os.path.join(C.CORPORA_DIR, 'half_twist_conjugates.csv'),
    'kind': CONJUGATION,
    # conjugated words stay on grids of size <= 10
    'grid_cfg': {'max_size': 10, 'max_window_states': 200_000},
}


def infer_kind(columns) -> str:
    cols = set(columns)
    if {'word_g', 'word_h'} <= cols:
        return MULTIPLICATIVITY
    if {'word', 'by'} <= cols:
        return CONJUGATION
    return FLOOR
