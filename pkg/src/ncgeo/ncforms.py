"""Matrix-valued exterior forms on the derivation space of M_n(C).

An ``NCForm`` of degree q assigns to every strictly increasing index subset
S of the fixed traceless basis (see :mod:`ncgeo.lie`) an n x n matrix; the
value of the form on the derivations ad_{X_{s_1}}, ..., ad_{X_{s_q}} is the
component at S = (s_1 < ... < s_q).  Absent components are zero.

The differential follows the Lie-algebra-cohomology formula with matrix
coefficients acted on by the bracket:

    (dw)(X_0..X_q) = sum_i (-1)^i [X_i, w(..X_i^..)]
                   + sum_{i<j} (-1)^{i+j} w([X_i,X_j], ..X_i^..X_j^..)

together with the interior product on the first slot and the Lie derivative
as their anticommutator.  The invariant scalar forms, the graded cohomology,
the antisymmetrized-trace generators in odd degrees, the canonical 1-form
(the one sending ad_A to A), the normalized top-degree trace integral and the
gauge action of exact special-unitary elements all live here.

Index subsets are plain sorted tuples of 0-based ints; all signs are shuffle
counts over them.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

from .lie import (
    GroupElement,
    Matrix,
    adjoint_action,
    bracket,
    identity_matrix,
    mat_add,
    mat_det,
    mat_is_zero,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_trace,
    sl_basis,
    structure_constants,
)
from .scalars import GaussianRational, ONE, ZERO, gr
from .sparse import (
    SparseMatrix,
    SubspaceBasis,
    image_basis,
    kernel_basis,
    quotient_representatives,
)


class NCForm:
    """Degree-q form with n x n matrix components over index subsets.

    The zero form is degree-agnostic: empty forms of any degree compare equal
    and absorb into sums, which keeps the boundary degrees (contraction of a
    function, differential of a top form) uniform.
    """

    __slots__ = ("n", "degree", "components")

    def __init__(self, n: int, degree: int, components=None):
        d = n * n - 1
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.n = n
        self.degree = degree
        comps = {}
        if components:
            if degree > d:
                raise ValueError("no nonzero forms above degree %d" % d)
            for S, m in components.items():
                S = tuple(S)
                if list(S) != sorted(set(S)) or (S and not (0 <= S[0] and S[-1] < d)):
                    raise ValueError("index subset %r is not sorted in range" % (S,))
                if len(S) != degree:
                    raise ValueError("subset size differs from the form degree")
                if not mat_is_zero(m):
                    comps[S] = m
        self.components = comps

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, NCForm):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.components and not other.components:
            return True
        return self.degree == other.degree and self.components == other.components

    def __add__(self, other: "NCForm") -> "NCForm":
        if self.n != other.n:
            raise ValueError("cannot add forms over different matrix sizes")
        if not self.components:
            return other
        if not other.components:
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.components)
        for S, m in other.components.items():
            cur = out.get(S)
            nm = mat_add(cur, m) if cur is not None else m
            if mat_is_zero(nm):
                out.pop(S, None)
            else:
                out[S] = nm
        f = NCForm.__new__(NCForm)
        f.n, f.degree, f.components = self.n, self.degree, out
        return f

    def __sub__(self, other: "NCForm") -> "NCForm":
        return self + other.scale(gr(-1))

    def __neg__(self) -> "NCForm":
        return self.scale(gr(-1))

    def scale(self, s: GaussianRational) -> "NCForm":
        if not s:
            return NCForm(self.n, self.degree)
        f = NCForm.__new__(NCForm)
        f.n, f.degree = self.n, self.degree
        f.components = {S: mat_scale(s, m) for S, m in self.components.items()}
        return f

    def component(self, S) -> Matrix:
        from .lie import zero_matrix

        return self.components.get(tuple(S), zero_matrix(self.n))

    def __repr__(self):
        return "NCForm(n=%d, degree=%d, supports=%d)" % (
            self.n,
            self.degree,
            len(self.components),
        )


def zero_form(n: int, degree: int) -> NCForm:
    return NCForm(n, degree)


def scalar_form(n: int, degree: int, coeffs: dict) -> NCForm:
    """Scalar coefficients per subset, embedded as multiples of the identity."""
    ident = identity_matrix(n)
    return NCForm(
        n, degree, {tuple(S): mat_scale(c, ident) for S, c in coeffs.items() if c}
    )


def matrix_form(n: int, m: Matrix) -> NCForm:
    """Degree-0 form with a single matrix value."""
    return NCForm(n, 0, {(): m})


def _shuffle_sign(S, T) -> int:
    """Sign of sorting the concatenation of two disjoint sorted tuples."""
    inv = 0
    for s in S:
        for t in T:
            if s > t:
                inv += 1
    return -1 if inv & 1 else 1


def _insert_position(S, k) -> int:
    pos = 0
    for s in S:
        if s < k:
            pos += 1
    return pos


def wedge(a: NCForm, b: NCForm) -> NCForm:
    """Exterior product with matrix multiplication on the values."""
    if a.n != b.n:
        raise ValueError("forms live over different matrix sizes")
    n = a.n
    out = {}
    for S, ma in a.components.items():
        sset = set(S)
        for T, mb in b.components.items():
            if sset & set(T):
                continue
            sign = _shuffle_sign(S, T)
            merged = tuple(sorted(S + T))
            m = mat_mul(ma, mb)
            if sign < 0:
                m = mat_scale(gr(-1), m)
            cur = out.get(merged)
            nm = mat_add(cur, m) if cur is not None else m
            if mat_is_zero(nm):
                out.pop(merged, None)
            else:
                out[merged] = nm
    f = NCForm.__new__(NCForm)
    f.n, f.degree, f.components = n, a.degree + b.degree, out
    return f


def d_prime(w: NCForm) -> NCForm:
    """The derivation differential; squares to zero exactly."""
    n = w.n
    d = n * n - 1
    if w.degree >= d:
        return NCForm(n, w.degree + 1)
    basis = sl_basis(n)
    sc = structure_constants(n)
    out = {}

    def accumulate(T, m):
        cur = out.get(T)
        nm = mat_add(cur, m) if cur is not None else m
        if mat_is_zero(nm):
            out.pop(T, None)
        else:
            out[T] = nm

    for S, m in w.components.items():
        sset = set(S)
        # bracket-with-value terms
        for k in range(d):
            if k in sset:
                continue
            pos = _insert_position(S, k)
            br = bracket(basis.elements[k], m)
            if mat_is_zero(br):
                continue
            if pos & 1:
                br = mat_scale(gr(-1), br)
            T = tuple(sorted(S + (k,)))
            accumulate(T, br)
        # structure-constant insertion terms
        for cpos, c in enumerate(S):
            rest = S[:cpos] + S[cpos + 1 :]
            restset = sset - {c}
            sign_c = -1 if cpos & 1 else 1
            for a, b, coef in sc.pairs_for.get(c, ()):
                if a in restset or b in restset:
                    continue
                T = tuple(sorted(rest + (a, b)))
                i = T.index(a)
                j = T.index(b)
                total = sign_c * coef_sign(i + j)
                val = mat_scale(coef, m) if coef != 1 else m
                if total < 0:
                    val = mat_scale(gr(-1), val)
                accumulate(T, val)
    f = NCForm.__new__(NCForm)
    f.n, f.degree, f.components = n, w.degree + 1, out
    return f


def coef_sign(e: int) -> int:
    return -1 if e & 1 else 1


def interior(x_index: int, w: NCForm) -> NCForm:
    """Contraction with ad of the x_index-th basis element on the first slot."""
    n = w.n
    if w.degree == 0:
        return NCForm(n, 0)
    out = {}
    for S, m in w.components.items():
        if x_index not in S:
            continue
        pos = S.index(x_index)
        T = S[:pos] + S[pos + 1 :]
        out[T] = m if not pos & 1 else mat_scale(gr(-1), m)
    f = NCForm.__new__(NCForm)
    f.n, f.degree, f.components = n, w.degree - 1, out
    return f


def lie_derivative(x_index: int, w: NCForm) -> NCForm:
    """Cartan formula: interior after d plus d after interior."""
    return interior(x_index, d_prime(w)) + d_prime(interior(x_index, w))


def theta(n: int) -> NCForm:
    """The 1-form sending ad_A to A (the i-scaled canonical form).

    Its component at {k} is the k-th basis matrix; it satisfies
    d(theta) = theta ^ theta and is fixed by every gauge transform.
    """
    if n < 2:
        raise ValueError("no derivations for n < 2")
    basis = sl_basis(n)
    return NCForm(n, 1, {(k,): basis.elements[k] for k in range(basis.dim)})


def nc_integral_point(w: NCForm) -> GaussianRational:
    """Trace of the top component divided by n; zero below top degree."""
    d = w.n * w.n - 1
    if w.degree != d:
        return ZERO
    top = w.components.get(tuple(range(d)))
    if top is None:
        return ZERO
    return mat_trace(top) / gr(w.n)


@lru_cache(maxsize=None)
def _exterior_minors(g: GroupElement, q: int):
    """Minor table of the conjugation matrix: (rows S', cols S) -> det."""
    A = g.conjugation_matrix()
    d = len(A)
    subsets = list(combinations(range(d), q))
    out = {}
    for Sp in subsets:
        for S in subsets:
            sub = tuple(tuple(A[i][j] for j in S) for i in Sp)
            det = mat_det(sub) if q > 0 else ONE
            if det:
                out[(Sp, S)] = det
    return out, subsets


@lru_cache(maxsize=None)
def _exterior_minors_by_source(g: GroupElement, q: int):
    """Same table grouped by the source subset: S' -> [(S, det)]."""
    minors, _subsets = _exterior_minors(g, q)
    by_src = {}
    for (Sp, S), det in minors.items():
        by_src.setdefault(Sp, []).append((S, det))
    return by_src


def gauge_transform(g: GroupElement, w: NCForm) -> NCForm:
    """The action (w^g)(X...) = g^{-1} w(g X g^{-1}, ...) g."""
    if g.n != w.n:
        raise ValueError("size mismatch in gauge transform")
    n = w.n
    q = w.degree
    if q == 0:
        out = {}
        for S, m in w.components.items():
            c = adjoint_action(g, m)
            if not mat_is_zero(c):
                out[S] = c
        f = NCForm.__new__(NCForm)
        f.n, f.degree, f.components = n, 0, out
        return f
    minors, subsets = _exterior_minors(g, q)
    conj = {S: adjoint_action(g, m) for S, m in w.components.items()}
    out = {}
    for S in subsets:
        acc = None
        for Sp, m in conj.items():
            det = minors.get((Sp, S))
            if det is None:
                continue
            term = mat_scale(det, m)
            acc = term if acc is None else mat_add(acc, term)
        if acc is not None and not mat_is_zero(acc):
            out[S] = acc
    f = NCForm.__new__(NCForm)
    f.n, f.degree, f.components = n, q, out
    return f


class GradedCohomologyTable:
    """Betti numbers by degree plus chosen closed representatives."""

    def __init__(self, betti, representatives):
        self.betti = list(betti)
        self.representatives = representatives

    def __repr__(self):
        return "GradedCohomologyTable(betti=%r)" % (self.betti,)


def _scalar_basis(d: int, q: int):
    return list(combinations(range(d), q))


def invariant_subspace(n: int) -> GradedCohomologyTable:
    """Scalar forms annihilated by every Lie derivative, degree by degree."""
    d = n * n - 1
    betti = []
    reps = []
    for q in range(d + 1):
        subsets = _scalar_basis(d, q)
        index = {S: i for i, S in enumerate(subsets)}
        dim = len(subsets)
        if d == 0:
            betti.append(1)
            reps.append([matrix_form(n, identity_matrix(n))])
            continue
        ident = identity_matrix(n)
        entries = {}
        for ci, S in enumerate(subsets):
            w = scalar_form(n, q, {S: ONE})
            for k in range(d):
                lw = lie_derivative(k, w)
                for T, m in lw.components.items():
                    coeff = m[0][0]
                    if not mat_is_zero(mat_sub(m, mat_scale(coeff, ident))):
                        raise AssertionError("Lie derivative left the scalar forms")
                    entries[(k * dim + index[T], ci)] = coeff
        m_stacked = SparseMatrix(d * dim, dim, entries)
        ker = kernel_basis(m_stacked)
        betti.append(ker.dim())
        reps.append(
            [
                scalar_form(n, q, {subsets[c]: v for c, v in vec.items()})
                for vec in ker.vectors
            ]
        )
    return GradedCohomologyTable(betti, reps)


def _matrix_basis(n: int, q: int):
    """Basis (S, i, j) of degree-q matrix forms, in lexicographic order."""
    d = n * n - 1
    out = []
    for S in combinations(range(d), q):
        for i in range(n):
            for j in range(n):
                out.append((S, i, j))
    return out


def _form_to_vector(w: NCForm, index: dict) -> dict:
    vec = {}
    for S, m in w.components.items():
        for i in range(w.n):
            for j in range(w.n):
                if m[i][j]:
                    vec[index[(S, i, j)]] = m[i][j]
    return vec


def _vector_to_form(n: int, q: int, vec: dict, basis_list) -> NCForm:
    comps = {}
    for idx, v in vec.items():
        S, i, j = basis_list[idx]
        rows = comps.setdefault(S, [[ZERO] * n for _ in range(n)])
        rows[i][j] = v
    return NCForm(n, q, {S: tuple(tuple(r) for r in rows) for S, rows in comps.items()})


def _d_matrix(n: int, q: int) -> SparseMatrix:
    """Matrix of the differential from degree q to q+1."""
    from .lie import matrix_unit

    src = _matrix_basis(n, q)
    dst = _matrix_basis(n, q + 1)
    dst_index = {b: i for i, b in enumerate(dst)}
    cols = []
    for S, i, j in src:
        w = NCForm(n, q, {S: matrix_unit(n, i, j)})
        dw = d_prime(w)
        cols.append(_form_to_vector(dw, dst_index))
    return SparseMatrix.from_columns(cols, len(dst))


def matrix_cohomology(n: int, check_invariant_inclusion: bool = True) -> GradedCohomologyTable:
    """Betti numbers and representatives of the full matrix-form complex.

    Also verifies that the invariant scalar forms include as a degreewise
    basis of the cohomology: they are closed and independent modulo exact
    forms, in every degree.
    """
    d = n * n - 1
    betti = []
    reps = []
    inv = invariant_subspace(n) if check_invariant_inclusion else None
    prev_matrix = None
    for q in range(d + 1):
        basis_list = _matrix_basis(n, q)
        index = {b: i for i, b in enumerate(basis_list)}
        dim = len(basis_list)
        if q < d:
            dq = _d_matrix(n, q)
            closed = kernel_basis(dq)
        else:
            dq = None
            closed = SubspaceBasis.from_vectors(
                dim, [{i: ONE} for i in range(dim)]
            )
        if prev_matrix is not None:
            exact = image_basis(prev_matrix)
        else:
            exact = SubspaceBasis.empty(dim)
        quotient = quotient_representatives(closed, exact)
        betti.append(quotient.dim())
        reps.append(
            [_vector_to_form(n, q, vec, basis_list) for vec in quotient.vectors]
        )
        if inv is not None:
            inv_forms = inv.representatives[q]
            if len(inv_forms) != quotient.dim():
                raise AssertionError(
                    "invariant dimension %d != cohomology dimension %d in degree %d"
                    % (len(inv_forms), quotient.dim(), q)
                )
            stacked = list(exact.vectors)
            for f in inv_forms:
                if not d_prime(f).is_zero():
                    raise AssertionError("invariant representative is not closed")
                stacked.append(_form_to_vector(f, index))
            stacked_rank = SubspaceBasis.from_vectors(dim, stacked).dim()
            if stacked_rank != exact.dim() + len(inv_forms):
                raise AssertionError(
                    "invariant classes are dependent modulo exact forms in degree %d" % q
                )
        prev_matrix = dq
    return GradedCohomologyTable(betti, reps)


@lru_cache(maxsize=None)
def _permutation_signs(p: int):
    out = []
    for perm in permutations(range(p)):
        inv = 0
        for x in range(p):
            for y in range(x + 1, p):
                if perm[x] > perm[y]:
                    inv += 1
        out.append((perm, -1 if inv & 1 else 1))
    return out


def primitive_form(r: int, n: int) -> NCForm:
    """Antisymmetrized-trace generator in degree 2r - 1.

    Component at S = full antisymmetrization of trace(X_{s_1} ... X_{s_{2r-1}}),
    times the identity matrix.  Closed, with a nonzero class; the same formula
    at size n and n + 1 produces the degree-matching stabilized generator.
    """
    if not 2 <= r <= n:
        raise ValueError("generator index r must satisfy 2 <= r <= n")
    p = 2 * r - 1
    basis = sl_basis(n)
    d = basis.dim
    coeffs = {}
    for S in combinations(range(d), p):
        mats = [basis.elements[s] for s in S]
        total = ZERO
        for perm, sign in _permutation_signs(p):
            prod = mats[perm[0]]
            for t in range(1, p):
                prod = mat_mul(prod, mats[perm[t]])
            tr = mat_trace(prod)
            total = (total + tr) if sign > 0 else (total - tr)
        if total:
            coeffs[S] = total
    return scalar_form(n, p, coeffs)
