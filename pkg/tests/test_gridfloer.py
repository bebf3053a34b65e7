from collections import Counter
from fractions import Fraction

import pytest
import sympy

from braidhfk import braidlab as BL
from braidhfk import gridfloer as GF
from braidhfk.braidlab import BraidWord
from braidhfk.errors import BraidHFKError, InputError, ResourceError, UnsupportedError


def W(text):
    return BraidWord.parse(text)


KNOTS = ['2: 1', '2: 1 1 1', '2: -1', '2: -1 -1 -1', '3: 1 2', '3: 1 -2', '3: 1 -2 1 -2']


def test_grid_file_round_trip():
    G = GF.GridDiagram(3, (0, 1, 2), (1, 2, 0))
    assert GF.GridDiagram.parse(G.format()) == G


@pytest.mark.parametrize('X,O', [((0, 1), (0, 1)), ((0, 0), (1, 1)), ((0, 1, 2), (1, 2))])
def test_grid_validation(X, O):
    with pytest.raises(InputError):
        GF.GridDiagram(len(X), X, O)


@pytest.mark.parametrize('text', ['1: ', '2: ', '2: 1', '2: -1', '2: 1 1', '3: 1 2', '3: 1 -2 1 -2',
                                  '3: -2 -1', '4: 1 3', '3: 2 2'])
def test_grid_presents_closure(text):
    b = W(text)
    G = GF.grid_from_braid(b)
    assert G.num_components == BL.closure_components(b)
    assert G.layout.word == b


def test_identity_grid_is_two_component_unlink():
    G = GF.grid_from_braid(W('2: '))
    assert G.num_components == 2
    report = GF.fully_blocked_homology(G)
    # unlink of two components: rank 2 over the hat group, times 2^(N-2)
    assert report.total_rank == 2 * 2 ** (G.size - 2)


def test_unknot_grid_homology():
    G = GF.grid_from_braid(W('2: 1'))
    assert G.size == 3
    assert GF.fully_blocked_homology(G).total_rank == 2 ** (G.size - 1)


def test_two_by_two_gradings():
    G = GF.GridDiagram(2, (0, 1), (1, 0))
    assert GF.bigrading((0, 1), G) == (0, 0)
    assert GF.bigrading((1, 0), G) == (-1, -1)
    d, sources, targets = GF.differential(G, (0, 0))
    assert d.is_zero()


def test_hand_counted_rectangles():
    G = GF.GridDiagram(4, (2, 3, 0, 1), (3, 0, 1, 2))
    x = (0, 1, 2, 3)
    counts = Counter(GF.rectangles_from(x, G))
    assert counts[(1, 0, 2, 3)] == 1
    assert counts[(2, 1, 0, 3)] == 0


@pytest.mark.parametrize('text', ['2: 1', '2: 1 1 1', '3: 1 2', '2: -1 -1'])
def test_boundary_properties(text):
    G = GF.grid_from_braid(W(text))
    if G.size > 5:
        pytest.skip('exhaustive check kept to small grids')
    for x in GF.all_states(G):
        gx = GF.bigrading(x, G)
        for y in GF.boundary(x, G):
            assert GF.bigrading(y, G) == (gx[0] - 1, gx[1])
        twice = Counter()
        for y in GF.boundary(x, G):
            twice.update(GF.boundary(y, G))
        assert all(k % 2 == 0 for k in twice.values())


def test_rank_divisible_and_symmetric():
    for text in ['2: 1 1 1', '3: 1 2', '3: 1 -2 1 -2']:
        G = GF.grid_from_braid(W(text))
        if G.size > 7:
            continue
        report = GF.fully_blocked_homology(G)
        assert report.total_rank % 2 ** (G.size - G.num_components) == 0
        gradings = Counter()
        for (m, a), r in report.ranks.items():
            gradings[a] += r
        low, high = min(gradings), max(gradings)
        for a, r in gradings.items():
            assert gradings[low + high - a] == r


def test_theta_calibration():
    assert GF.bigrading(GF.theta_state(GF.grid_from_braid(W('2: 1'))), GF.grid_from_braid(W('2: 1'))) == (0, 0)
    neg = GF.grid_from_braid(W('2: -1'))
    assert GF.bigrading(GF.theta_state(neg), neg) == (-2, -1)
    assert GF.theta_nonvanishing(W('2: 1')).verdict == GF.NONZERO
    assert GF.theta_nonvanishing(W('2: -1')).verdict == GF.ZERO


@pytest.mark.parametrize('text', KNOTS)
def test_theta_alexander_matches_self_linking(text):
    b = W(text)
    G = GF.grid_from_braid(b)
    sl, _ = GF.self_linking(b)
    assert 2 * GF.alexander(GF.theta_state(G), G) - 1 == sl


def _corner_states(G):
    """theta and the three other corner states of the X markers."""
    n = G.size
    states = {'upper right': [0] * n, 'upper left': [0] * n, 'lower left': [0] * n, 'lower right': [0] * n}
    for c in range(n):
        states['upper right'][(c + 1) % n] = (G.X[c] + 1) % n
        states['upper left'][c] = (G.X[c] + 1) % n
        states['lower left'][c] = G.X[c]
        states['lower right'][(c + 1) % n] = G.X[c]
    return {k: tuple(v) for k, v in states.items()}


def _carries_theta(state, G, b):
    if len(set(state)) != G.size or GF.boundary(state, G):
        return False
    sl, _ = GF.self_linking(b)
    m, a = GF.bigrading(state, G)
    return 2 * a - 1 == sl and m == sl + 1


def test_theta_is_the_only_calibrated_corner():
    words = [W(t) for t in KNOTS]
    for b in words:
        G = GF.grid_from_braid(b)
        corners = _corner_states(G)
        assert corners['upper right'] == GF.theta_state(G)
        assert _carries_theta(corners['upper right'], G, b)
    for name in ('upper left', 'lower left', 'lower right'):
        assert not all(_carries_theta(_corner_states(GF.grid_from_braid(b))[name], GF.grid_from_braid(b), b)
                       for b in words), name


def test_theta_must_be_a_cycle(monkeypatch):
    G = GF.grid_from_braid(W('2: 1'))
    monkeypatch.setattr(GF, 'boundary', lambda state, grid: {state: 1})
    with pytest.raises(BraidHFKError, match='not a cycle'):
        GF.decide_theta(G)


@pytest.mark.parametrize('text', ['2: 1', '2: -1', '2: 1 1 1', '2: -1 -1 -1', '3: 1 -2'])
def test_verdict_survives_positive_stabilization(text):
    b = W(text)
    stabilized = BL.positive_markov_stabilize(b)
    assert GF.theta_nonvanishing(stabilized).verdict == GF.theta_nonvanishing(b).verdict


@pytest.mark.parametrize('a, b', [
    ('2: 1', '2: 1 1 -1'),
    ('2: -1', '2: -1 -1 1'),
    ('2: -1 -1 -1', '2: -1 1 -1 -1 -1'),
    ('3: 1 2 1', '3: 2 1 2'),
    ('3: -1 -2 -1', '3: -2 -1 -2'),
    ('3: 1 -2', '3: 1 2 -2 -2'),
    ('4: 1 3 2', '4: 3 1 2'),
])
def test_verdict_survives_relators(a, b):
    a, b = W(a), W(b)
    assert BL.braid_equal(a, b)
    assert GF.theta_nonvanishing(a).verdict == GF.theta_nonvanishing(b).verdict


def test_theta_requires_layout():
    with pytest.raises(InputError):
        GF.theta_state(GF.GridDiagram(2, (0, 1), (1, 0)))


def test_theta_verdicts():
    assert GF.theta_nonvanishing(W('2: 1 1 1')).verdict == GF.NONZERO
    report = GF.theta_nonvanishing(W('2: -1 -1 -1'))
    assert report.verdict == GF.ZERO
    assert report.witness_size > 0
    assert GF.theta_nonvanishing(BL.axis_augment(W('2: -1'))).verdict == GF.NONZERO


def test_theta_zero_witness_is_a_coboundary():
    b = W('2: -1')
    G = GF.grid_from_braid(b)
    report = GF.decide_theta(G)
    total = Counter()
    for z in report.witness:
        total.update(GF.boundary(z, G))
    odd = {y for y, k in total.items() if k % 2}
    assert odd == {GF.theta_state(G)}


def test_theta_budget():
    with pytest.raises(ResourceError):
        GF.theta_nonvanishing(W('3: 1 2 1 2 1 2 1 2'), max_size=6)


def test_self_linking():
    assert GF.self_linking(W('2: 1'))[0] == -1
    assert GF.self_linking(W('2: 1 1 1'))[0] == 1
    b = W('3: 1 -2 1')
    assert GF.self_linking(BL.positive_markov_stabilize(b))[0] == GF.self_linking(b)[0]
    total, per = GF.self_linking(W('2: 1 1'))
    assert total == 0 and per == [-1, -1]


def test_alexander_poly_burau():
    t = BL.T
    assert GF.alexander_poly_burau(W('2: 1')) == sympy.Poly(1, t)
    assert GF.alexander_poly_burau(W('2: 1 1 1')) == sympy.Poly(t ** 2 - t + 1, t)
    assert GF.alexander_poly_burau(W('3: 1 -2 1 -2')) == sympy.Poly(t ** 2 - 3 * t + 1, t)
    with pytest.raises(UnsupportedError):
        GF.alexander_poly_burau(W('2: 1 1'))


@pytest.mark.parametrize('text', ['2: 1', '2: 1 1 1', '3: 1 -2 1 -2'])
def test_euler_characteristic_matches_burau(text):
    assert GF.euler_check(W(text))


def test_run_theta_report():
    run = GF.run_theta(W('2: -1'), axis=True)
    d = run.as_dict()
    assert d['verdict'] == GF.NONZERO
    assert d['input_word'] == '2: -1'
    assert d['axis'] is True
    assert set(d) >= {'schema_version', 'N', 'sl', 'floor', 'fdtc_interval', 'theta_bigrading',
                      'witness_size', 'wall_time_ms'}


def test_format_grading():
    assert GF.format_grading(Fraction(3, 1)) == 3
    assert GF.format_grading(Fraction(-1, 2)) == '-1/2'


@pytest.mark.parametrize('text, X, O, picture', [
    ('2: 1', (0, 1, 2), (1, 2, 0), ['. O X', 'O X .', 'X . O']),
    ('2: -1', (2, 1, 0), (1, 0, 2), ['X . O', 'O X .', '. O X']),
])
def test_documented_layouts(text, X, O, picture):
    G = GF.grid_from_braid(BraidWord.parse(text))
    assert (G.X, G.O) == (X, O)
    assert G.layout.column_kinds == ('closure', 'closure', 'letter')
    assert G.ascii_picture().splitlines() == picture
