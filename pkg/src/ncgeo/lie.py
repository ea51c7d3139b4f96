"""Traceless matrices, their bracket table, and exact special-unitary elements.

The fixed basis of the traceless n x n matrices is

    E_ij (i != j, lexicographic by (row, col)),  then  H_k = E_kk - E_{k+1,k+1}

for k = 1..n-1.  This order is part of the package contract: every exterior
sign downstream is derived from it.  Structure constants in this basis are
integers.

Matrices here are immutable tuples of tuples of GaussianRational.  Group
elements are exact: unitarity and det = 1 are checked on construction, so the
inverse is the conjugate transpose for free.
"""

from __future__ import annotations

from functools import lru_cache

from .scalars import GaussianRational, gr, I, MINUS_I, MINUS_ONE, ONE, ZERO

Matrix = tuple  # tuple of row tuples of GaussianRational


def zero_matrix(n: int) -> Matrix:
    return tuple(tuple(ZERO for _ in range(n)) for _ in range(n))


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def matrix_unit(n: int, i: int, j: int) -> Matrix:
    return tuple(
        tuple(ONE if (r, c) == (i, j) else ZERO for c in range(n)) for r in range(n)
    )


def mat_from_rows(rows) -> Matrix:
    return tuple(tuple(v if isinstance(v, GaussianRational) else gr(v) for v in row) for row in rows)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(s: GaussianRational, a: Matrix) -> Matrix:
    return tuple(tuple(s * x for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0])
    k = len(b)
    bt = tuple(zip(*b))
    out = []
    for i in range(n):
        ra = a[i]
        out.append(
            tuple(sum((ra[t] * bt[j][t] for t in range(k)), ZERO) for j in range(m))
        )
    return tuple(out)


def mat_conj_transpose(a: Matrix) -> Matrix:
    return tuple(tuple(a[j][i].conjugate() for j in range(len(a))) for i in range(len(a[0])))


def mat_trace(a: Matrix) -> GaussianRational:
    return sum((a[i][i] for i in range(len(a))), ZERO)


def mat_is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def mat_det(a: Matrix) -> GaussianRational:
    """Determinant by cofactor expansion; group elements are tiny."""
    n = len(a)
    if n == 1:
        return a[0][0]
    out = ZERO
    sign = ONE
    for j in range(n):
        if a[0][j]:
            minor = tuple(
                tuple(a[r][c] for c in range(n) if c != j) for r in range(1, n)
            )
            out = out + sign * a[0][j] * mat_det(minor)
        sign = -sign
    return out


def bracket(a: Matrix, b: Matrix) -> Matrix:
    """Commutator ab - ba, exact."""
    if len(a) != len(b):
        raise ValueError("bracket of matrices of different sizes")
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


class SlBasis:
    """The fixed ordered basis of traceless n x n matrices (n^2 - 1 elements)."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("matrix size must be >= 1")
        self.n = n
        elems = []
        self.labels = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    elems.append(matrix_unit(n, i, j))
                    self.labels.append("E%d%d" % (i + 1, j + 1))
        for k in range(n - 1):
            h = mat_sub(matrix_unit(n, k, k), matrix_unit(n, k + 1, k + 1))
            elems.append(h)
            self.labels.append("H%d" % (k + 1))
        self.elements = tuple(elems)

    @property
    def dim(self) -> int:
        return self.n * self.n - 1

    def coordinates(self, m: Matrix):
        """Coordinates of a traceless matrix in this basis; raises otherwise.

        Off-diagonal coordinates are the entries themselves; the coordinate on
        H_k is the partial sum d_1 + ... + d_k of the diagonal.
        """
        n = self.n
        if mat_trace(m):
            raise ValueError("matrix is not traceless")
        coords = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    coords.append(m[i][j])
        acc = ZERO
        for k in range(n - 1):
            acc = acc + m[k][k]
            coords.append(acc)
        return coords

    def from_coordinates(self, coords) -> Matrix:
        m = zero_matrix(self.n)
        rows = [list(r) for r in m]
        for x, e in zip(coords, self.elements):
            if x:
                for r in range(self.n):
                    for c in range(self.n):
                        if e[r][c]:
                            rows[r][c] = rows[r][c] + x * e[r][c]
        return tuple(tuple(r) for r in rows)


@lru_cache(maxsize=None)
def sl_basis(n: int) -> SlBasis:
    return SlBasis(n)


class StructureConstants:
    """Bracket table [X_i, X_j] = sum_k table[i][j][k] X_k in the fixed basis."""

    def __init__(self, basis: SlBasis):
        self.basis = basis
        d = basis.dim
        table = {}
        pairs_for = {}
        for i in range(d):
            for j in range(i + 1, d):
                br = bracket(basis.elements[i], basis.elements[j])
                coords = basis.coordinates(br)
                rebuilt = basis.from_coordinates(coords)
                if rebuilt != br:
                    raise ValueError("basis is not closed under the bracket")
                vec = {k: c for k, c in enumerate(coords) if c}
                if vec:
                    table[(i, j)] = vec
                    for k, c in vec.items():
                        pairs_for.setdefault(k, []).append((i, j, c))
        self.table = table
        self.pairs_for = pairs_for

    def entry(self, i: int, j: int) -> dict:
        """Coordinates of [X_i, X_j]; antisymmetry applied for i > j."""
        if i == j:
            return {}
        if i < j:
            return self.table.get((i, j), {})
        vec = self.table.get((j, i), {})
        return {k: -c for k, c in vec.items()}


@lru_cache(maxsize=None)
def structure_constants(n: int) -> StructureConstants:
    return StructureConstants(sl_basis(n))


class GroupElement:
    """Exact special-unitary matrix; inverse is the conjugate transpose."""

    __slots__ = ("n", "matrix", "_ad")

    def __init__(self, matrix, validate: bool = True):
        matrix = mat_from_rows(matrix)
        self.n = len(matrix)
        self.matrix = matrix
        self._ad = None
        if validate:
            if mat_mul(mat_conj_transpose(matrix), matrix) != identity_matrix(self.n):
                raise ValueError("matrix is not unitary")
            if mat_det(matrix) != ONE:
                raise ValueError("matrix does not have determinant one")

    def inverse(self) -> Matrix:
        return mat_conj_transpose(self.matrix)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(mat_mul(self.matrix, other.matrix), validate=False)

    def inverse_element(self) -> "GroupElement":
        return GroupElement(self.inverse(), validate=False)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def conjugation_matrix(self):
        """Coordinates of x -> g x g^{-1} on the traceless matrices.

        Column j holds the basis coordinates of g X_j g^{-1}; this is the
        matrix whose exterior powers transform the form slots under a gauge
        change.  Cached on the element.
        """
        if self._ad is None:
            basis = sl_basis(self.n)
            ginv = self.inverse()
            cols = []
            for e in basis.elements:
                cols.append(basis.coordinates(mat_mul(self.matrix, mat_mul(e, ginv))))
            d = basis.dim
            self._ad = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
        return self._ad

    def __repr__(self):
        return "GroupElement(n=%d)" % self.n


def adjoint_action(g: GroupElement, x: Matrix) -> Matrix:
    """g^{-1} x g, the action matching the gauge convention on form values."""
    if len(x) != g.n:
        raise ValueError("size mismatch in adjoint action")
    return mat_mul(g.inverse(), mat_mul(x, g.matrix))


def identity_element(n: int) -> GroupElement:
    return GroupElement(identity_matrix(n), validate=False)


def special_unitary_samples(n: int):
    """A deterministic exact subgroup sample used by equivariance checks.

    Diagonal fourth-root phases with determinant one, signed permutations of
    determinant one, and a few products; rich enough to catch every sign or
    conjugation-direction mistake while staying in Q(i).
    """
    if n == 1:
        return [identity_element(1)]
    out = [identity_element(n)]
    # diagonal phases: i on one slot, -i on the next
    for k in range(n - 1):
        rows = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
        rows[k][k] = I
        rows[k + 1][k + 1] = MINUS_I
        out.append(GroupElement(rows))
    # adjacent transposition with a sign (determinant one)
    for k in range(n - 1):
        rows = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
        rows[k][k] = ZERO
        rows[k + 1][k + 1] = ZERO
        rows[k][k + 1] = ONE
        rows[k + 1][k] = MINUS_ONE
        out.append(GroupElement(rows))
    # i-weighted swap: off-diagonal i, i has determinant one for the 2x2 block
    rows = [[ONE if r == c else ZERO for c in range(n)] for r in range(n)]
    rows[0][0] = ZERO
    rows[1][1] = ZERO
    rows[0][1] = I
    rows[1][0] = I
    out.append(GroupElement(rows))
    # a couple of products to leave the torus and the permutation subgroup
    out.append(out[1] * out[n])
    out.append(out[n] * out[1])
    return out
