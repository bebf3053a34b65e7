import io
import itertools

import numpy as np
import pytest

from braidhfk.errors import InputError
from braidhfk.f2linalg import (BitMatrix, IntMatrix, cokernel_presentation, dump_triplets,
                               elementary_divisors, in_image, integer_kernel, kernel_basis,
                               load_triplets, rank, solve_integer)


def naive_rank(dense):
    a = np.array(dense, dtype=np.uint8) % 2
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i, c]), None)
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def test_rank_trivial():
    assert rank(BitMatrix.identity(5)) == 5
    assert rank(BitMatrix.zeros(4, 7)) == 0


def test_rank_matches_oracle(rng):
    for _ in range(25):
        dense = rng.integers(0, 2, size=(20, 20))
        assert rank(BitMatrix.from_dense(dense)) == naive_rank(dense)


def test_entries_out_of_bounds():
    with pytest.raises(InputError):
        BitMatrix.from_entries(2, 2, [(2, 0)])


def test_in_image_trivial():
    v = np.array([1, 0, 1, 1], dtype=np.uint8)
    assert np.array_equal(in_image(BitMatrix.identity(4), v), v)
    assert in_image(BitMatrix.zeros(4, 4), v) is None


def test_in_image_dimension_mismatch():
    with pytest.raises(InputError):
        in_image(BitMatrix.identity(3), [1, 0])


def test_in_image_exhaustive(rng):
    for _ in range(4):
        dense = rng.integers(0, 2, size=(15, 15)) * (rng.random((15, 15)) < 0.2)
        M = BitMatrix.from_dense(dense)
        reachable = set()
        for combo in itertools.product((0, 1), repeat=15):
            reachable.add(tuple(M.apply(combo)))
        for _ in range(30):
            v = rng.integers(0, 2, size=15)
            witness = in_image(M, v)
            assert (witness is not None) == (tuple(v) in reachable)
            if witness is not None:
                assert np.array_equal(M.apply(witness), v)


def test_in_image_iff_rank_unchanged(rng):
    for _ in range(20):
        dense = rng.integers(0, 2, size=(8, 5))
        v = rng.integers(0, 2, size=8)
        augmented = BitMatrix.from_dense(np.column_stack([dense, v]))
        M = BitMatrix.from_dense(dense)
        assert (in_image(M, v) is not None) == (rank(augmented) == rank(M))


def test_kernel_basis():
    assert kernel_basis(BitMatrix.identity(4)) == []
    basis = kernel_basis(BitMatrix.zeros(3, 3))
    assert sorted(tuple(v) for v in basis) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_rank_nullity(rng):
    for _ in range(20):
        dense = rng.integers(0, 2, size=(12, 17))
        M = BitMatrix.from_dense(dense)
        basis = kernel_basis(M)
        assert rank(M) + len(basis) == M.cols
        for v in basis:
            assert not M.apply(v).any()


def test_triplet_dump():
    M = BitMatrix.from_entries(3, 4, [(0, 1), (2, 3), (1, 1)])
    buf = io.StringIO()
    dump_triplets(M, buf)
    assert buf.getvalue().splitlines()[0] == '3 4'
    assert load_triplets(io.StringIO(buf.getvalue())) == M


def test_compose_square_zero():
    d = BitMatrix.from_dense([[1, 1], [1, 1]])
    assert d.compose(d).is_zero()


def test_integer_kernel_forced():
    assert integer_kernel(IntMatrix.from_rows([[1, -1]])) == [(1, 1)]
    assert integer_kernel(IntMatrix.identity(4)) == []


def test_integer_kernel_random(rng):
    for _ in range(10):
        rows = rng.integers(-2, 3, size=(6, 8)).tolist()
        M = IntMatrix.from_rows(rows)
        basis = integer_kernel(M)
        for v in basis:
            assert not any(M.apply(v))
        # same dimension as the rational kernel, compared against the GF(2) one for parity
        assert len(basis) == M.cols - M.to_sympy().rank()
        assert len(basis) <= len(kernel_basis(M.mod2()))


def test_integer_kernel_saturated():
    # 2x - 2y = 0 has kernel generated by (1, 1), not (2, 2)
    assert integer_kernel(IntMatrix.from_rows([[2, -2]])) == [(1, 1)]


def test_cokernel_trivial():
    assert elementary_divisors(IntMatrix.zeros(3, 3)) == (0, 0, 0)
    assert elementary_divisors(IntMatrix.identity(3)) == ()


def test_cokernel_mixed_diagonal():
    # diag(2, 3) hidden by row and column operations
    M = IntMatrix.from_rows([[2, 3], [2, 6]])
    pres = cokernel_presentation(M)
    assert pres.smith_diagonal == (1, 6)
    assert elementary_divisors(M) == (6,)
    assert pres.is_zero(M.apply((1, 0)))
    assert not pres.is_zero((1, 0))


def test_cokernel_coordinates_free_part():
    pres = cokernel_presentation(IntMatrix.from_rows([[1], [0]]))
    assert pres.divisors == (0,)
    assert pres.is_zero((5, 0))
    assert not pres.is_zero((0, 1))


def test_solve_integer():
    M = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert solve_integer(M, (4, 9)) == (2, 3)
    assert solve_integer(M, (1, 0)) is None
