import dataclasses
import itertools

import pytest

from braidhfk import gridfloer as GF
from braidhfk.braidlab import BraidWord
from braidhfk.errors import InputError
from braidhfk.obdiagrams import domains as DM
from braidhfk.obdiagrams import fixture_format as FF
from braidhfk.obdiagrams import grids as GR
from braidhfk.obdiagrams import spinc as SP
from braidhfk.obdiagrams.diagram import Cut, check, trace_regions, validate
from braidhfk.obdiagrams.generators import enumerate_generators, named_generator
from braidhfk.obdiagrams.identity_family import (TOP_TAG, build_identity_open_book_diagram, seam_domain,
                                                 seam_longitude, top_generators)

from .conftest import fixture_path


def load(name):
    return FF.load(fixture_path(name))


def _cycle(tokens):
    texts = [t.format() for t in tokens]
    k = texts.index(min(texts))
    return tuple(texts[k:] + texts[:k])


def test_torus_unknot_is_valid():
    d = load('torus_unknot.hd')
    report = validate(d)
    assert report.ok, report.problems
    assert report.euler_characteristic == 0
    assert len(d.regions) == 1
    assert len(d.corners_at['a']) == 4


@pytest.mark.parametrize('name, chi', [
    ('identity_g0_n2_k0.hd', 0),
    ('identity_g0_n3_k0.hd', -2),
    ('identity_g1_n1_k0.hd', -2),
])
def test_identity_fixtures_are_valid(name, chi):
    report = validate(load(name))
    assert report.ok, report.problems
    assert report.euler_characteristic == chi


def test_unclosed_region_is_reported():
    d = load('broken_region.hd')
    report = validate(d)
    assert not report.ok
    assert any('R1' in p for p in report.problems)
    with pytest.raises(InputError):
        check(d)


def test_unknown_directive_names_the_line():
    text = 'curve α1 : a\ncurve β1 : a\nmystery : a\n'
    with pytest.raises(InputError, match=r'<string>:3: unknown directive'):
        FF.loads(text)


@pytest.mark.parametrize('text', [
    'curve α1 : a\ncurve β1 : a\n',
    'curve α1 : a b\ncurve β1 : a\nsign + : a b\n',
    'curve α1 : a\ncurve β1 : a\nsign + : a\nregion R1 : +α1@a +β1@a -α1@a -β1@a\ntrace\n',
    'curve δ1 : a\n',
    'curve α1 : a\ncurve β1 : a\nsign * : a\n',
])
def test_malformed_fixtures(text):
    with pytest.raises(InputError):
        FF.loads(text)


def test_dumps_reads_back():
    d = load('torus_unknot_augmented.hd')
    again = FF.loads(FF.dumps(d))
    assert again.curves == d.curves
    assert again.crossings == d.crossings
    assert again.regions == d.regions
    assert again.basepoints == d.basepoints


def test_basepoints_kill_the_torus():
    d = load('torus_unknot.hd')
    assert DM.periodic_domains(d) == []
    assert DM.is_weakly_admissible(d)
    free = dataclasses.replace(d, basepoints=())
    assert len(DM.periodic_domains(free)) == 1
    assert not DM.is_weakly_admissible(free)


def test_rank_one_lattice_gives_a_witness():
    free = dataclasses.replace(load('torus_unknot.hd'), basepoints=())
    witness = DM.nonnegative_periodic_domain(free)
    assert witness is not None
    assert witness.multiplicities == (1,)


def test_positive_domain_respects_basepoints():
    d = check(load('torus_unknot.hd'))
    x = named_generator(d, 'x')
    assert DM.positive_domain(d, x, x) == (0,)
    assert DM.positive_domain(dataclasses.replace(d, basepoints=()), x, x) == (0,)
    # the single square has no boundary at a, so a nonzero jump is unreachable
    assert DM.positive_domain(d, x, x, targets={('α1', 'a'): 1, ('β1', 'a'): -1}) is None


def test_augmented_diagram_gains_a_nonnegative_class():
    d = check(load('torus_unknot_augmented.hd'))
    basis = DM.periodic_domains(d)
    assert len(basis) == len(DM.periodic_domains(load('torus_unknot.hd'))) + 1
    assert not DM.is_weakly_admissible(d)
    witness = DM.nonnegative_periodic_domain(d)
    values = dict(zip(witness.regions, witness.multiplicities))
    assert values == {'Lft': 0, 'Rgt': 0, 'HalfL': 1, 'HalfR': 1}


def test_triple_fixture_is_weakly_admissible():
    d = check(load('triple_identity.hd'))
    basis = DM.triply_periodic_domains(d)
    assert len(basis) == 2
    for P in basis:
        values = P.multiplicities
        assert min(values) < 0 < max(values)
    assert DM.is_weakly_admissible(d)
    assert not DM.is_weakly_admissible(check(load('triple_identity_unblocked.hd')))


def test_traced_regions_match_the_hand_written_ones():
    traced = check(build_identity_open_book_diagram(0, 2, 0))
    assert traced.euler_characteristic() == 0
    assert len(traced.regions) == 20
    explicit = check(load('identity_g0_n2_k1.hd'))
    strand = {'α3', 'β3'}
    hand = set()
    for r in explicit.regions:
        comps = [c for c in r.components if not {t.curve for t in c} & strand]
        hand.update(_cycle(c) for c in comps)
    assert {_cycle(r.components[0]) for r in traced.regions} == hand


def test_trace_of_the_torus_square():
    d = load('torus_unknot.hd')
    regions = trace_regions(d.curves, d.crossings)
    assert len(regions) == 1
    assert _cycle(regions[0].components[0]) == _cycle(d.regions[0].components[0])


def test_h1_presentations():
    assert SP.h1_presentation(load('torus_unknot.hd')).divisors == ()
    assert SP.h1_presentation(load('torus_unknot_augmented.hd')).divisors == ()
    assert SP.h1_presentation(build_identity_open_book_diagram(0, 2, 0)).divisors == (0,)
    assert SP.h1_presentation(build_identity_open_book_diagram(1, 1, 0)).divisors == (0, 0)
    assert SP.h1_presentation(build_identity_open_book_diagram(0, 3, 0)).divisors == (0, 0)


@pytest.mark.parametrize('name, expected', [
    ('torus_unknot.hd', ('α1',)),
    # the small circle α2 bounds the two halves of its disk
    ('torus_unknot_augmented.hd', ('α1',)),
    ('identity_g0_n2_k0.hd', ('α1',)),
    ('identity_g0_n2_k1.hd', ('α1',)),
    ('identity_g0_n2_k2.hd', ('α1',)),
    ('identity_g0_n3_k0.hd', ('α1', 'α2')),
    ('identity_g1_n1_k0.hd', ('α1', 'α2')),
])
def test_dual_curves_come_from_the_regions(name, expected):
    assert SP.dual_curves(check(load(name))) == expected


def test_declared_dual_curves():
    d = build_identity_open_book_diagram(0, 2, 0)
    with pytest.raises(InputError, match='regions give α1'):
        SP.h1_presentation(dataclasses.replace(d, dual=('α2',)))
    assert SP.h1_presentation(dataclasses.replace(d, dual=('α1',))).dual == ('α1',)
    bare = dataclasses.replace(load('torus_unknot.hd'), regions=(), basepoints=())
    with pytest.raises(InputError):
        SP.dual_curves(dataclasses.replace(bare, dual=()))
    assert SP.dual_curves(dataclasses.replace(bare, dual=('α1',))) == ('α1',)


def test_homology_names_need_one_coordinate_per_dual_curve():
    d = build_identity_open_book_diagram(0, 2, 0)
    with pytest.raises(InputError, match='coordinates'):
        SP.h1_presentation(dataclasses.replace(d, homology={'A1': (1, 0)}))


def test_epsilon_vanishes_on_the_diagonal():
    d = build_identity_open_book_diagram(1, 1, 0)
    for x in top_generators(d):
        assert SP.epsilon_class(x, x, d).is_zero


def test_epsilon_is_a_cocycle():
    d = build_identity_open_book_diagram(0, 2, 0)
    pres = SP.h1_presentation(d)
    gens = list(enumerate_generators(d))
    x = named_generator(d, 'xD')

    def eps(a, b):
        return SP.epsilon_class(a, b, d, pres).coordinates

    for y in gens[::3]:
        for z in gens[::5]:
            lhs = eps(x, z)
            rhs = tuple(a + b for a, b in zip(eps(x, y), eps(y, z)))
            assert lhs == rhs


def test_epsilon_detects_connecting_domains():
    d = build_identity_open_book_diagram(0, 2, 0)
    pres = SP.h1_presentation(d)
    tops = top_generators(d)
    for x, y in itertools.product(tops, repeat=2):
        same = SP.epsilon_class(x, y, d, pres).is_zero
        assert (DM.connecting_domain(d, x, y) is not None) == same


def test_seam_is_a_relative_periodic_domain():
    d = build_identity_open_book_diagram(0, 2, 0)
    cuts = seam_longitude(d)
    assert cuts
    S = seam_domain(d)
    assert DM.is_relative_periodic_domain(d, S, cuts)
    P = DM.relative_periodic_domain(d, 'B', cuts)
    assert P.p == 1
    assert DM.is_relative_periodic_domain(d, P, cuts)


def test_seam_alexander_counts_top_components():
    d = build_identity_open_book_diagram(0, 2, 0)
    S = seam_domain(d)
    top = d.tags[TOP_TAG]
    x = named_generator(d, 'xD')
    for y in enumerate_generators(d):
        inside = sum(1 for c in y.crossings if c in top)
        assert DM.alexander_difference(d, x, y, S) == len(x.crossings) - inside
        assert DM.alexander_difference(d, y, y, S) == 0


def test_seam_on_the_connected_sum():
    d = build_identity_open_book_diagram(0, 3, 0)
    S = seam_domain(d)
    assert DM.is_relative_periodic_domain(d, S, seam_longitude(d))
    top = d.tags[TOP_TAG]
    x = named_generator(d, 'xD')
    for y in top_generators(d):
        assert DM.alexander_difference(d, x, y, S) == 0
    for y in itertools.islice(enumerate_generators(d), 200):
        inside = sum(1 for c in y.crossings if c in top)
        assert DM.alexander_difference(d, x, y, S) == len(x.crossings) - inside


def test_alexander_difference_is_additive():
    d = build_identity_open_book_diagram(0, 2, 0)
    P = DM.relative_periodic_domain(d, 'B', seam_longitude(d))
    gens = top_generators(d)
    for x, y, z in itertools.product(gens, repeat=3):
        assert (DM.alexander_difference(d, x, z, P)
                == DM.alexander_difference(d, x, y, P) + DM.alexander_difference(d, y, z, P))


def test_one_sided_longitude_is_rejected():
    d = build_identity_open_book_diagram(0, 2, 0)
    r = d.regions[0]
    with pytest.raises(InputError):
        DM.relative_periodic_domain(d, 'B', [Cut(r.name, frozenset(r.corner_slots()), frozenset())])


def test_domains_need_regions():
    bare = FF.loads('curve α1 : a\ncurve β1 : a\nsign + : a\n')
    with pytest.raises(InputError, match='region'):
        DM.periodic_domains(bare)
    with pytest.raises(InputError):
        DM.bounds_with(bare, 'α1', [])


GRIDS = [
    GF.GridDiagram(2, (0, 1), (1, 0)),
    GF.GridDiagram(3, (0, 1, 2), (1, 2, 0)),
    GF.GridDiagram(4, (0, 1, 2, 3), (1, 2, 3, 0)),
    GF.GridDiagram(4, (0, 1, 2, 3), (1, 0, 3, 2)),
]


@pytest.mark.parametrize('G', GRIDS)
def test_grid_export_is_valid(G):
    d = GR.grid_to_diagram(G)
    report = validate(d)
    assert report.ok, report.problems
    assert report.euler_characteristic == 0
    # one relation between the component annuli survives per extra component
    assert len(DM.periodic_domains(d)) == len(set(G.component_labels)) - 1
    assert SP.h1_presentation(d).divisors == ()


def test_grid_longitude_on_the_smallest_grid():
    G = GRIDS[0]
    d = GR.grid_to_diagram(G)
    P = DM.relative_periodic_domain(d, '0', GR.grid_longitude(G, 0))
    assert P.p == 1
    diff = DM.alexander_difference(d, GR.state_generator((0, 1)), GR.state_generator((1, 0)), P)
    assert diff == 1


@pytest.mark.parametrize('G', GRIDS + [GF.grid_from_braid(BraidWord.parse('2: 1'))])
def test_grid_alexander_matches_grid_gradings(G):
    states = list(GF.all_states(G))
    base = states[0]
    got = GR.grid_alexander_differences(G, base, states)
    want = [GF.alexander(s, G) - GF.alexander(base, G) for s in states]
    assert got == want


def test_grid_longitude_rejects_unknown_component():
    with pytest.raises(InputError):
        GR.grid_longitude(GRIDS[0], 5)
