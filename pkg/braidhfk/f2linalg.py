"""
Exact linear algebra over GF(2) and over the integers.

GF(2) matrices store each column as a Python int used as a bitset over the
rows, so a column operation is a single xor. Integer matrices are plain
tuples of Python ints and are handed to sympy's normal forms over ZZ.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from .errors import InputError


def bits_to_int(v: Sequence[int]) -> int:
    out = 0
    for i, b in enumerate(v):
        if int(b) & 1:
            out |= 1 << i
    return out


def int_to_bits(x: int, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.uint8)
    i = 0
    while x:
        if x & 1:
            out[i] = 1
        x >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    columns: Tuple[int, ...]

    def __post_init__(self):
        assert len(self.columns) == self.cols, "column count does not match cols"
        limit = 1 << self.rows
        for j, col in enumerate(self.columns):
            if col < 0 or col >= limit:
                raise InputError('column {} has entries outside {} rows'.format(j, self.rows))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Tuple[int, int]]) -> 'BitMatrix':
        columns = [0] * cols
        for r, c in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise InputError('entry ({}, {}) out of bounds for {}x{}'.format(r, c, rows, cols))
            columns[c] |= 1 << r
        return cls(rows, cols, tuple(columns))

    @classmethod
    def from_dense(cls, dense) -> 'BitMatrix':
        dense = np.asarray(dense, dtype=np.uint8) & 1
        if dense.ndim != 2:
            raise InputError('expected a 2d array, got shape {}'.format(dense.shape))
        rows, cols = dense.shape
        return cls(rows, cols, tuple(bits_to_int(dense[:, j]) for j in range(cols)))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> 'BitMatrix':
        return cls(rows, len(columns), tuple(columns))

    @classmethod
    def identity(cls, n: int) -> 'BitMatrix':
        return cls(n, n, tuple(1 << j for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'BitMatrix':
        return cls(rows, cols, (0,) * cols)

    @property
    def entries(self) -> frozenset:
        out = set()
        for c, col in enumerate(self.columns):
            r = 0
            while col:
                if col & 1:
                    out.add((r, c))
                col >>= 1
                r += 1
        return frozenset(out)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for c, col in enumerate(self.columns):
            out[:, c] = int_to_bits(col, self.rows)
        return out

    def apply(self, coeffs: Sequence[int]) -> np.ndarray:
        """M.c over GF(2)."""
        if len(coeffs) != self.cols:
            raise InputError('vector of length {} for a matrix with {} columns'.format(len(coeffs), self.cols))
        acc = 0
        for c, b in enumerate(coeffs):
            if int(b) & 1:
                acc ^= self.columns[c]
        return int_to_bits(acc, self.rows)

    def compose(self, other: 'BitMatrix') -> 'BitMatrix':
        """self . other"""
        if self.cols != other.rows:
            raise InputError('cannot compose {}x{} with {}x{}'.format(self.rows, self.cols, other.rows, other.cols))
        out = []
        for col in other.columns:
            acc = 0
            r = 0
            while col:
                if col & 1:
                    acc ^= self.columns[r]
                col >>= 1
                r += 1
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.columns)

    @cached_property
    def _elimination(self) -> Tuple[Dict[int, Tuple[int, int]], List[int]]:
        # pivots: lowest set bit -> (reduced column, combination of original columns)
        pivots: Dict[int, Tuple[int, int]] = {}
        kernel: List[int] = []
        for j, col in enumerate(self.columns):
            combo = 1 << j
            while col:
                low = col & -col
                hit = pivots.get(low)
                if hit is None:
                    break
                col ^= hit[0]
                combo ^= hit[1]
            if col:
                pivots[col & -col] = (col, combo)
            else:
                kernel.append(combo)
        return pivots, kernel

    def rank(self) -> int:
        return len(self._elimination[0])

    def kernel_basis(self) -> List[np.ndarray]:
        return [int_to_bits(k, self.cols) for k in self._elimination[1]]

    def in_image(self, v: Sequence[int]) -> Optional[np.ndarray]:
        """Coefficients c with M.c = v, or None when v is not in the column space."""
        if len(v) != self.rows:
            raise InputError('vector of length {} for a matrix with {} rows'.format(len(v), self.rows))
        pivots = self._elimination[0]
        target = bits_to_int(v)
        combo = 0
        while target:
            hit = pivots.get(target & -target)
            if hit is None:
                return None
            target ^= hit[0]
            combo ^= hit[1]
        return int_to_bits(combo, self.cols)


def rank(M: BitMatrix) -> int:
    return M.rank()


def in_image(M: BitMatrix, v: Sequence[int]) -> Optional[np.ndarray]:
    return M.in_image(v)


def kernel_basis(M: BitMatrix) -> List[np.ndarray]:
    return M.kernel_basis()


def dump_triplets(M: BitMatrix, fh) -> None:
    fh.write('{} {}\n'.format(M.rows, M.cols))
    for r, c in sorted(M.entries):
        fh.write('{} {}\n'.format(r, c))


def load_triplets(fh) -> BitMatrix:
    lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith('#')]
    if not lines:
        raise InputError('empty triplet dump')
    try:
        rows, cols = (int(t) for t in lines[0].split())
        entries = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    except ValueError:
        raise InputError('malformed triplet dump')
    if any(len(e) != 2 for e in entries):
        raise InputError('triplet lines must have exactly two fields')
    return BitMatrix.from_entries(rows, cols, entries)


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        assert len(self.entries) == self.rows
        for row in self.entries:
            assert len(row) == self.cols

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> 'IntMatrix':
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not rows:
                raise InputError('column count required for a matrix without rows')
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Sequence[int]]) -> 'IntMatrix':
        return cls.from_rows([[int(col[i]) for col in columns] for i in range(nrows)], cols=len(columns))

    @classmethod
    def identity(cls, n: int) -> 'IntMatrix':
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'IntMatrix':
        return cls.from_rows([[0] * cols for _ in range(rows)], cols=cols)

    def to_sympy(self) -> Matrix:
        return Matrix(self.rows, self.cols, [x for row in self.entries for x in row])

    def apply(self, v: Sequence[int]) -> Tuple[int, ...]:
        if len(v) != self.cols:
            raise InputError('vector of length {} for a matrix with {} columns'.format(len(v), self.cols))
        return tuple(sum(a * int(b) for a, b in zip(row, v)) for row in self.entries)

    def mod2(self) -> BitMatrix:
        return BitMatrix.from_entries(self.rows, self.cols,
                                      [(r, c) for r, row in enumerate(self.entries)
                                       for c, x in enumerate(row) if x % 2])


def _smith(M: IntMatrix) -> Tuple[List[int], Matrix, Matrix]:
    """Signed Smith diagonal with S.M.T = D, S and T unimodular."""
    if M.rows == 0 or M.cols == 0:
        return [], Matrix.eye(M.rows), Matrix.eye(M.cols)
    D, S, T = smith_normal_decomp(M.to_sympy(), domain=ZZ)
    diag = [int(D[i, i]) for i in range(min(M.rows, M.cols))]
    return diag, S, T


def canonical_lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> List[Tuple[int, ...]]:
    """Hermite normal form basis of the lattice spanned by independent vectors."""
    if not vectors:
        return []
    H = hermite_normal_form(Matrix(dim, len(vectors), lambda i, j: vectors[j][i]))
    out = []
    for j in range(H.cols):
        col = tuple(int(H[i, j]) for i in range(H.rows))
        if any(col):
            out.append(col)
    assert len(out) == len(vectors), "lattice basis lost rank in normal form"
    return out


def integer_kernel(M: IntMatrix) -> List[Tuple[int, ...]]:
    """Basis of {v in Z^cols : M v = 0}, saturated and in Hermite normal form."""
    if M.cols == 0:
        return []
    if M.rows == 0:
        return [tuple(int(i == j) for i in range(M.cols)) for j in range(M.cols)]
    diag, _, T = _smith(M)
    r = sum(1 for d in diag if d != 0)
    vectors = [[int(T[i, j]) for i in range(M.cols)] for j in range(r, M.cols)]
    basis = canonical_lattice_basis(vectors, M.cols)
    for v in basis:
        assert not any(M.apply(v)), "kernel vector not annihilated"
    return basis


def lattice_reduce(v: Sequence[int], basis: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Canonical representative of v modulo a basis from canonical_lattice_basis.

    Each basis column has its pivot at its last nonzero row and zeros below, so
    sweeping from the last column back pulls every pivot entry of v into [0, pivot).
    """
    out = [int(x) for x in v]
    for col in reversed(basis):
        row = max(i for i, x in enumerate(col) if x)
        pivot = col[row]
        assert pivot > 0
        q = out[row] // pivot
        if q:
            out = [a - q * b for a, b in zip(out, col)]
    return tuple(out)


@dataclass(frozen=True)
class CokernelPresentation:
    """Z^rows / im(M) as a product of cyclic groups with a coordinate map."""
    smith_diagonal: Tuple[int, ...]
    free_rank: int
    transform: Tuple[Tuple[int, ...], ...]

    @property
    def divisors(self) -> Tuple[int, ...]:
        # units dropped, zeros for the free part
        return tuple(d for d in self.smith_diagonal if d > 1) + (0,) * self.free_rank

    @property
    def _moduli(self) -> Tuple[int, ...]:
        return self.smith_diagonal + (0,) * (len(self.transform) - len(self.smith_diagonal))

    def coordinates(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Class of v, one coordinate per nontrivial cyclic factor."""
        sv = [sum(a * int(b) for a, b in zip(row, v)) for row in self.transform]
        out = []
        for x, d in zip(sv, self._moduli):
            if d == 1:
                continue
            out.append(x % d if d else x)
        return tuple(out)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.coordinates(v))


def cokernel_presentation(M: IntMatrix) -> CokernelPresentation:
    diag, S, _ = _smith(M)
    nonzero = [abs(d) for d in diag if d != 0]
    free_rank = M.rows - len(nonzero)
    transform = tuple(tuple(int(S[i, j]) for j in range(M.rows)) for i in range(M.rows))
    return CokernelPresentation(tuple(nonzero), free_rank, transform)


def elementary_divisors(M: IntMatrix) -> Tuple[int, ...]:
    return cokernel_presentation(M).divisors


def solve_integer(M: IntMatrix, v: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Some integer y with M y = v, or None."""
    if len(v) != M.rows:
        raise InputError('vector of length {} for a matrix with {} rows'.format(len(v), M.rows))
    if M.cols == 0:
        return () if not any(v) else None
    diag, S, T = _smith(M)
    sv = [sum(int(S[i, j]) * int(v[j]) for j in range(M.rows)) for i in range(M.rows)]
    z = [0] * M.cols
    for i, x in enumerate(sv):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if x != 0:
                return None
            continue
        if x % d:
            return None
        z[i] = x // d
    y = tuple(sum(int(T[i, j]) * z[j] for j in range(M.cols)) for i in range(M.cols))
    assert M.apply(y) == tuple(int(x) for x in v)
    return y
