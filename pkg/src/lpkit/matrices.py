"""Dense exact matrices and the split-form / eigenbasis oracle.

The oracle recovers a_i and a*_i without touching the closed-form
expressions: it builds the split-form pair (A, A*), finds an eigenbasis of
one matrix by exact elimination, changes basis, and reads the diagonal of
the resulting tridiagonal matrix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .array import ParameterArray, require_valid
from .fields import FieldDescriptor, FieldElement, FieldMismatchError

__all__ = [
    "MatrixError",
    "ExactMatrix",
    "TridiagonalProfile",
    "OracleResult",
    "build_split_form",
    "eigenbasis_ordered",
    "conjugate",
    "tridiagonal_profile",
    "oracle_a",
    "oracle_matrices",
    "rref",
    "kernel",
    "solve",
    "inverse",
]

DEBUG_ENV = "LPKIT_DEBUG_ORACLE"


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class ExactMatrix:
    field: FieldDescriptor
    rows: Tuple[Tuple[FieldElement, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(self.field(x) for x in row) for row in self.rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise MatrixError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_values(cls, field: FieldDescriptor, rows) -> "ExactMatrix":
        return cls(field, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, field: FieldDescriptor, n: int) -> "ExactMatrix":
        z, o = field.zero, field.one
        return cls(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[FieldElement, ...]:
        return tuple(r[j] for r in self.rows)

    def diagonal(self) -> Tuple[FieldElement, ...]:
        return tuple(self.rows[i][i] for i in range(self.n))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.field != self.field:
            raise FieldMismatchError("matrices over different fields")
        if other.n != self.n:
            raise MatrixError("dimension mismatch")
        cols = [other.column(j) for j in range(other.n)]
        z = self.field.zero
        out = []
        for row in self.rows:
            new = []
            for col in cols:
                acc = z
                for x, y in zip(row, col):
                    if x and y:
                        acc = acc + x * y
                new.append(acc)
            out.append(tuple(new))
        return ExactMatrix(self.field, tuple(out))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return ExactMatrix(
            self.field,
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def shift(self, lam: FieldElement) -> "ExactMatrix":
        """M - lam*I."""
        return ExactMatrix(
            self.field,
            tuple(
                tuple(x - lam if i == j else x for j, x in enumerate(row))
                for i, row in enumerate(self.rows)
            ),
        )

    def to_json(self) -> List[List[str]]:
        return [[str(x) for x in row] for row in self.rows]


@dataclass(frozen=True)
class TridiagonalProfile:
    diag: Tuple[FieldElement, ...]
    sub: Tuple[FieldElement, ...]
    sup: Tuple[FieldElement, ...]

    @property
    def irreducible(self) -> bool:
        return all(self.sub) and all(self.sup)


def rref(rows: Sequence[Sequence[FieldElement]], ncols: int = None):
    """Reduced row echelon form; the pivot is the first nonzero entry scanning down.

    Only the first ``ncols`` columns are eliminated on (all by default), which
    lets callers row-reduce an augmented matrix.  Returns ``(rows, pivots)``.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def kernel(M: ExactMatrix) -> List[Tuple[FieldElement, ...]]:
    """A basis of the null space of M."""
    red, pivots = rref(M.rows)
    n = M.n
    free = [c for c in range(n) if c not in pivots]
    z, o = M.field.zero, M.field.one
    basis = []
    for f in free:
        v = [z] * n
        v[f] = o
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(M: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """X with M X = B, by elimination on the augmented matrix [M | B]."""
    n = M.n
    aug = [list(r) + list(s) for r, s in zip(M.rows, B.rows)]
    red, pivots = rref(aug, ncols=n)
    if len(pivots) < n:
        raise MatrixError("singular matrix")
    return ExactMatrix(M.field, tuple(tuple(row[n:]) for row in red))


def inverse(M: ExactMatrix) -> ExactMatrix:
    return solve(M, ExactMatrix.identity(M.field, M.n))


def build_split_form(pa: ParameterArray) -> Tuple[ExactMatrix, ExactMatrix]:
    """Lower bidiagonal A (diagonal theta, 1 below) and upper bidiagonal A*
    (diagonal theta*, varphi above)."""
    require_valid(pa)
    n = pa.d + 1
    z, o = pa.field.zero, pa.field.one
    A = [[z] * n for _ in range(n)]
    As = [[z] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = pa.theta[i]
        As[i][i] = pa.theta_star[i]
        if i >= 1:
            A[i][i - 1] = o
            As[i - 1][i] = pa.varphi[i - 1]
    return ExactMatrix.from_values(pa.field, A), ExactMatrix.from_values(pa.field, As)


def _normalize(v, last: bool):
    idx = range(len(v) - 1, -1, -1) if last else range(len(v))
    k = next(i for i in idx if v[i])
    inv = v[k].inverse()
    return tuple(x * inv for x in v)


def eigenbasis_ordered(M: ExactMatrix, eigenvalues: Sequence[FieldElement], *, last_nonzero: bool = False) -> ExactMatrix:
    """Columns are eigenvectors of M for ``eigenvalues`` in the given order.

    Each eigenvector spans the kernel of M - lambda*I, which must be one
    dimensional, and is scaled so its first (or last) nonzero coordinate is 1.
    """
    if len(eigenvalues) != M.n:
        raise MatrixError(f"need {M.n} eigenvalues, got {len(eigenvalues)}")
    if len(set(eigenvalues)) != len(eigenvalues):
        raise MatrixError("repeated eigenvalue")
    cols = []
    for lam in eigenvalues:
        ker = kernel(M.shift(M.field(lam)))
        if len(ker) != 1:
            raise MatrixError(f"eigenspace for {lam} has dimension {len(ker)}, expected 1")
        cols.append(_normalize(ker[0], last_nonzero))
    n = M.n
    return ExactMatrix(M.field, tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))


def conjugate(M: ExactMatrix, P: ExactMatrix) -> ExactMatrix:
    """P^-1 M P, computed as the solution X of P X = M P."""
    return solve(P, M @ P)


def tridiagonal_profile(M: ExactMatrix) -> TridiagonalProfile:
    n = M.n
    for i in range(n):
        for j in range(n):
            if abs(i - j) > 1 and M[i, j]:
                raise MatrixError(f"nonzero entry {M[i, j]} at ({i}, {j}) outside the tridiagonal band")
    return TridiagonalProfile(
        diag=M.diagonal(),
        sub=tuple(M[i + 1, i] for i in range(n - 1)),
        sup=tuple(M[i, i + 1] for i in range(n - 1)),
    )


@dataclass(frozen=True)
class OracleResult:
    A: ExactMatrix
    A_star: ExactMatrix
    P_star: ExactMatrix
    T: ExactMatrix
    P: ExactMatrix
    T_star: ExactMatrix

    def to_json(self) -> dict:
        return {k: getattr(self, k).to_json() for k in ("A", "A_star", "P_star", "T", "P", "T_star")}


def oracle_matrices(pa: ParameterArray) -> OracleResult:
    A, As = build_split_form(pa)
    Ps = eigenbasis_ordered(As, pa.theta_star)
    T = conjugate(A, Ps)
    P = eigenbasis_ordered(A, pa.theta)
    Ts = conjugate(As, P)
    for name, mat in (("T", T), ("T_star", Ts)):
        if not tridiagonal_profile(mat).irreducible:
            raise MatrixError(f"{name} is tridiagonal but not irreducible")
    return OracleResult(A, As, Ps, T, P, Ts)


def oracle_a(pa: ParameterArray) -> Tuple[Tuple[FieldElement, ...], Tuple[FieldElement, ...]]:
    """(a, a*) read off the diagonals of A and A* written in each other's eigenbasis."""
    res = oracle_matrices(pa)
    a, a_star = res.T.diagonal(), res.T_star.diagonal()
    if os.environ.get(DEBUG_ENV) == "1":
        A, As = res.A, res.A_star
        a2 = conjugate(A, eigenbasis_ordered(As, pa.theta_star, last_nonzero=True)).diagonal()
        as2 = conjugate(As, eigenbasis_ordered(A, pa.theta, last_nonzero=True)).diagonal()
        if a2 != a or as2 != a_star:
            raise AssertionError("diagonal depends on eigenvector normalization")
    return a, a_star
