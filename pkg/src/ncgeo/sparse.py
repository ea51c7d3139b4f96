"""Sparse exact linear algebra over Q(i): rank, kernels, quotients.

Everything downstream (de Rham ranks, matrix-form cohomology, total-complex
Betti numbers, spectral pages) reduces to the operations here:

* ``rank``                     -- fraction-free elimination, integer core
* ``kernel_basis``             -- canonical reduced-row-echelon null space
* ``quotient_representatives`` -- basis of closed/exact, deterministic
* ``LinearSolver``             -- repeated exact solves against a fixed matrix

Forward elimination keeps each row as a vector of Gaussian-integer pairs
``(a, b)`` (meaning ``a + b*i``) over one shared positive integer denominator.
Eliminating row ``v/q`` against a pivot with numerator entry ``p`` uses

    v/q  -  (v[c]/p) * v_p   =   (|p|^2 * v - (conj(p)*v[c]) * v_p) / (q * |p|^2)

so the update is integer arithmetic throughout, followed by one content-gcd
trim of the row; no rounding, no divisibility assumptions.  Entries stay near
reduced minor ratios, which for the incidence-like matrices this package
produces means single machine words.

Pivoting: the rank path picks the column with fewest active entries and a
unit-valued, shortest row in it (fill control); echelon paths sweep columns
left to right so the reduced form -- and hence every basis this module
emits -- is the canonical RREF.  Reduction above the pivots happens over Q(i)
on leading-one rows, where entries are ratios of minors and stay small.
"""

from __future__ import annotations

import heapq
from math import gcd

from .scalars import GaussianRational, ONE, ZERO

_DENSE_COLS = 64


class SparseMatrix:
    """Immutable sparse matrix over Q(i); absent entries are zero."""

    __slots__ = ("rows", "cols", "_rows", "_colidx")

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self._colidx = None
        data = [dict() for _ in range(rows)]
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for key, v in items:
                r, c = key
                if not (0 <= r < rows and 0 <= c < cols):
                    raise ValueError("entry (%d, %d) out of bounds" % (r, c))
                if not isinstance(v, GaussianRational):
                    v = GaussianRational(v)
                if v:
                    data[r][c] = v
        self._rows = data

    @classmethod
    def from_row_dicts(cls, row_dicts, cols: int) -> "SparseMatrix":
        m = cls(len(row_dicts), cols)
        for r, row in enumerate(row_dicts):
            m._rows[r] = {c: v for c, v in row.items() if v}
        return m

    @classmethod
    def from_columns(cls, col_dicts, rows: int) -> "SparseMatrix":
        m = cls(rows, len(col_dicts))
        for c, col in enumerate(col_dicts):
            for r, v in col.items():
                if v:
                    m._rows[r][c] = v
        return m

    def entry(self, r: int, c: int) -> GaussianRational:
        return self._rows[r].get(c, ZERO)

    def entries(self):
        for r, row in enumerate(self._rows):
            for c, v in row.items():
                yield r, c, v

    def nnz(self) -> int:
        return sum(len(row) for row in self._rows)

    def row_dict(self, r: int) -> dict:
        return dict(self._rows[r])

    def _columns_index(self):
        if self._colidx is None:
            idx = {}
            for r, row in enumerate(self._rows):
                for c, v in row.items():
                    idx.setdefault(c, []).append((r, v))
            self._colidx = idx
        return self._colidx

    def apply(self, vec: dict) -> dict:
        """Matrix times a sparse column vector (dict col -> scalar)."""
        idx = self._columns_index()
        out = {}
        for c, x in vec.items():
            if not x:
                continue
            for r, v in idx.get(c, ()):
                cur = out.get(r)
                nv = (cur + v * x) if cur is not None else v * x
                if nv:
                    out[r] = nv
                elif cur is not None:
                    del out[r]
        return out

    def column(self, c: int) -> dict:
        return {r: row[c] for r, row in enumerate(self._rows) if c in row}

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self._rows == other._rows
        )

    def __repr__(self):
        return "SparseMatrix(%dx%d, nnz=%d)" % (self.rows, self.cols, self.nnz())


# ---------------------------------------------------------------------------
# elimination core: packed Gaussian integers with a shared row denominator
#
# A Gaussian integer a + b*i is packed as the residue of a + b*S modulo
# N = S^2 + 1 (so S^2 = -1, i.e. multiplication of residues is Gaussian
# multiplication), with the invariant |a|, |b| <= S/2.  One Python mulmod
# replaces four multiplies and a tuple allocation in the hot loop.  The
# invariant is enforced at every unpack; content trims run after non-unit
# pivots and periodically, which bounds coefficient growth far below S/2.

_SHIFT = 96
_S = 1 << _SHIFT
_HALF = _S >> 1
_N = _S * _S + 1


def _pack(a: int, b: int) -> int:
    return (a + (b << _SHIFT)) % _N


def _unpack(z: int):
    for cand in (z, z - _N):
        b = (cand + _HALF) >> _SHIFT
        a = cand - (b << _SHIFT)
        if -_HALF <= a <= _HALF and -_HALF <= b <= _HALF:
            return a, b
    raise ArithmeticError("packed Gaussian integer out of range")


def _int_rows(m: SparseMatrix):
    """Rows as packed-Gaussian dicts with denominator 1 (row-scaled)."""
    out = []
    for row in m._rows:
        if not row:
            continue
        lcm = 1
        for v in row.values():
            lcm = lcm * v.d // gcd(lcm, v.d)
        out.append(
            {c: _pack(v.a * (lcm // v.d), v.b * (lcm // v.d)) for c, v in row.items()}
        )
    return out


def _trim(row, q: int) -> int:
    """Divide the row and its denominator by their integer content."""
    g = q
    pairs = {}
    for c, z in row.items():
        a, b = _unpack(z)
        pairs[c] = (a, b)
        g = gcd(gcd(g, a), b)
        if g == 1:
            return q
    if g > 1:
        for c, (a, b) in pairs.items():
            row[c] = _pack(a // g, b // g)
        q //= g
    return q


def _combine(row, f, prow, pcol, pv, q, col_rows=None, rid=None, bound=None, changed=None):
    """row <- |pv|^2 * row - (conj(pv)*f) * prow, trimmed as needed.

    f is the popped entry of row at pcol; q the row's denominator.  Returns
    the new denominator.  When col_rows is given, the column index
    (restricted to columns < bound) is kept in sync for row id rid.
    """
    pa, pb = _unpack(pv)
    np_ = pa * pa + pb * pb
    fprime = (_pack(pa, -pb) * f) % _N
    if np_ != 1:
        for c in row:
            row[c] = (np_ * row[c]) % _N
    track = col_rows is not None
    for c, y in prow.items():
        if c == pcol:
            continue
        t = (fprime * y) % _N
        cur = row.get(c)
        if cur is None:
            nv = _N - t if t else 0
            if nv:
                row[c] = nv
                if track and (bound is None or c < bound):
                    col_rows.setdefault(c, set()).add(rid)
                    if changed is not None:
                        changed.add(c)
        else:
            nv = cur - t
            if nv < 0:
                nv += _N
            if nv == 0:
                del row[c]
                if track and (bound is None or c < bound):
                    col_rows[c].discard(rid)
                    if changed is not None:
                        changed.add(c)
            else:
                row[c] = nv
    q *= np_
    if q != 1:
        q = _trim(row, q)
    return q


_UNITS = {1: True, _N - 1: True, _S: True, _N - _S: True}


def _pivot_score(rows, r, c):
    return (0 if rows[r][c] in _UNITS else 1, len(rows[r]), r)


def _forward_minfill(rows):
    """Eliminate with fill-minimizing pivot order; returns number of pivots."""
    col_rows = {}
    for r, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    heap = [(len(rs), c) for c, rs in col_rows.items()]
    heapq.heapify(heap)
    qden = [1] * len(rows)
    cnt = [0] * len(rows)
    npiv = 0
    while heap:
        k, pcol = heapq.heappop(heap)
        rs = col_rows.get(pcol)
        if not rs:
            continue
        if len(rs) != k:
            heapq.heappush(heap, (len(rs), pcol))
            continue
        prow_id = min(rs, key=lambda r: _pivot_score(rows, r, pcol))
        prow = rows[prow_id]
        pv = prow[pcol]
        npiv += 1
        for c in prow:
            s = col_rows.get(c)
            if s is not None:
                s.discard(prow_id)
        changed = set()
        for r in list(rs):
            row = rows[r]
            f = row.pop(pcol)
            qden[r] = _combine(row, f, prow, pcol, pv, qden[r], col_rows, r, None, changed)
            cnt[r] += 1
            if cnt[r] & 7 == 0:
                qden[r] = _trim(row, qden[r])
        rs.clear()
        for c in changed:
            s = col_rows.get(c)
            if s:
                heapq.heappush(heap, (len(s), c))
    return npiv


def _forward_lex(rows, true_cols):
    """Left-to-right echelon; columns >= true_cols (solver tags) ride along.

    Returns (pivot_ids, pivots): row index and column of each pivot, in
    column order.  Rows are modified in place; non-pivot rows finish empty on
    the true columns.
    """
    col_rows = {}
    for r, row in enumerate(rows):
        for c in row:
            if c < true_cols:
                col_rows.setdefault(c, set()).add(r)
    qden = [1] * len(rows)
    cnt = [0] * len(rows)
    pivots = []
    pivot_ids = []
    taken = set()
    for c in range(true_cols):
        rs = col_rows.get(c)
        if not rs:
            continue
        cands = [r for r in rs if r not in taken]
        if not cands:
            rs.clear()
            continue
        prow_id = min(cands, key=lambda r: _pivot_score(rows, r, c))
        prow = rows[prow_id]
        pv = prow[c]
        taken.add(prow_id)
        pivots.append(c)
        pivot_ids.append(prow_id)
        for r in cands:
            if r == prow_id:
                continue
            row = rows[r]
            f = row.pop(c)
            qden[r] = _combine(row, f, prow, c, pv, qden[r], col_rows, r, true_cols)
            cnt[r] += 1
            if cnt[r] & 7 == 0:
                qden[r] = _trim(row, qden[r])
        rs.clear()
    return pivot_ids, pivots


def _to_gr_row(row, divide_by=None):
    """Packed Gaussian row to GR dict, optionally divided by a pivot entry."""
    out = {}
    if divide_by is None:
        for c, z in row.items():
            a, b = _unpack(z)
            out[c] = GaussianRational._norm(a, b, 1)
        return out
    pa, pb = _unpack(divide_by)
    pv = GaussianRational._norm(pa, pb, 1)
    for c, z in row.items():
        a, b = _unpack(z)
        out[c] = GaussianRational._norm(a, b, 1) / pv
    return out


def _reduce_above_gr(gr_rows, pivots):
    """Backward pass on leading-one GR rows: zero every pivot column above."""
    for j in range(len(pivots) - 1, -1, -1):
        c = pivots[j]
        prow = gr_rows[j]
        for k in range(j):
            row = gr_rows[k]
            f = row.get(c)
            if f is None or not f:
                continue
            del row[c]
            for cc, v in prow.items():
                if cc == c:
                    continue
                cur = row.get(cc)
                nv = (cur - f * v) if cur is not None else -(f * v)
                if nv:
                    row[cc] = nv
                elif cur is not None:
                    del row[cc]


def _rref_gr(m: SparseMatrix):
    """Canonical RREF as GR rows with leading coefficient one."""
    rows = _int_rows(m)
    pivot_ids, pivots = _forward_lex(rows, m.cols)
    gr_rows = [_to_gr_row(rows[i], rows[i][c]) for i, c in zip(pivot_ids, pivots)]
    _reduce_above_gr(gr_rows, pivots)
    return gr_rows, pivots


def rank(m: SparseMatrix) -> int:
    """Exact rank over Q(i)."""
    rows = _int_rows(m)
    if not rows:
        return 0
    if m.cols < _DENSE_COLS:
        return len(_forward_lex(rows, m.cols)[0])
    return _forward_minfill(rows)


class SubspaceBasis:
    """Subspace of Q(i)^ambient_dim held in canonical reduced row echelon form."""

    __slots__ = ("ambient_dim", "vectors", "pivots")

    def __init__(self, ambient_dim: int, vectors, pivots):
        self.ambient_dim = ambient_dim
        self.vectors = vectors
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, ambient_dim: int, raw_vectors) -> "SubspaceBasis":
        """Span of the given sparse vectors (dict col -> scalar), canonicalized."""
        rows = [dict(v) for v in raw_vectors if v]
        m = SparseMatrix.from_row_dicts(rows, ambient_dim)
        vecs, pivots = _rref_gr(m)
        return cls(ambient_dim, vecs, pivots)

    @classmethod
    def empty(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, [], [])

    def dim(self) -> int:
        return len(self.vectors)

    def reduce(self, vec: dict) -> dict:
        """Remainder of vec modulo this subspace (vec is not modified)."""
        out, _ = self._reduce(vec, False)
        return out

    def reduce_with_coords(self, vec: dict):
        """Remainder plus the coefficient taken along each basis vector."""
        return self._reduce(vec, True)

    def _reduce(self, vec, want_coords):
        out = dict(vec)
        coords = [ZERO] * len(self.vectors) if want_coords else None
        for j, (row, p) in enumerate(zip(self.vectors, self.pivots)):
            f = out.get(p)
            if f is None or not f:
                continue
            if want_coords:
                coords[j] = f
            del out[p]
            for c, v in row.items():
                if c == p:
                    continue
                cur = out.get(c)
                nv = (cur - f * v) if cur is not None else -(f * v)
                if nv:
                    out[c] = nv
                elif cur is not None:
                    del out[c]
        return out, coords

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def to_matrix(self) -> SparseMatrix:
        return SparseMatrix.from_row_dicts(self.vectors, self.ambient_dim)

    def __repr__(self):
        return "SubspaceBasis(dim=%d, ambient=%d)" % (self.dim(), self.ambient_dim)


def kernel_basis(m: SparseMatrix) -> SubspaceBasis:
    """Canonical RREF basis of the null space; dim = cols - rank."""
    vecs, pivots = _rref_gr(m)
    pivot_set = set(pivots)
    kernel_vectors = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = {f: ONE}
        for row, p in zip(vecs, pivots):
            coef = row.get(f)
            if coef is not None and coef:
                v[p] = -coef
        kernel_vectors.append(v)
    return SubspaceBasis.from_vectors(m.cols, kernel_vectors)


def image_basis(m: SparseMatrix) -> SubspaceBasis:
    """Canonical RREF basis of the column space, as vectors in Q(i)^rows."""
    cols = [m.column(c) for c in range(m.cols)]
    return SubspaceBasis.from_vectors(m.rows, cols)


def quotient_representatives(closed: SubspaceBasis, exact: SubspaceBasis) -> SubspaceBasis:
    """Representatives of a basis of closed/exact, canonical and deterministic.

    Raises ValueError when exact is not contained in closed -- downstream that
    always means a differential failed to square to zero.
    """
    if closed.ambient_dim != exact.ambient_dim:
        raise ValueError("ambient dimensions differ")
    for v in exact.vectors:
        if closed.reduce(v):
            raise ValueError("exact subspace is not contained in the closed subspace")
    remainders = []
    for v in closed.vectors:
        r = exact.reduce(v)
        if r:
            remainders.append(r)
    reps = SubspaceBasis.from_vectors(closed.ambient_dim, remainders)
    if reps.dim() != closed.dim() - exact.dim():
        raise AssertionError("quotient dimension mismatch")
    return reps


class LinearSolver:
    """Repeated exact solves A x = b for a fixed sparse A.

    Eliminates [A | I] once; each solve is then a sparse substitution.  The
    returned solution sets all free variables to zero; None means b is not in
    the image of A.
    """

    __slots__ = ("rows", "cols", "_erows", "_constraints")

    def __init__(self, m: SparseMatrix):
        self.rows = m.rows
        self.cols = m.cols
        n = m.cols
        work = []
        for r in range(m.rows):
            row = m._rows[r]
            lcm = 1
            for v in row.values():
                lcm = lcm * v.d // gcd(lcm, v.d)
            irow = {c: _pack(v.a * (lcm // v.d), v.b * (lcm // v.d)) for c, v in row.items()}
            irow[n + r] = _pack(lcm, 0)
            work.append(irow)
        pivot_ids, pivots = _forward_lex(work, n)
        gr_rows = [_to_gr_row(work[i], work[i][c]) for i, c in zip(pivot_ids, pivots)]
        _reduce_above_gr(gr_rows, pivots)
        self._erows = list(zip(pivots, gr_rows))
        taken = set(pivot_ids)
        constraints = []
        for r in range(len(work)):
            if r in taken or not work[r]:
                continue
            if any(c < n for c in work[r]):
                raise AssertionError("unswept entry after forward elimination")
            constraints.append(_to_gr_row(work[r]))
        self._constraints = constraints

    def _tag_dot(self, row, b):
        s = ZERO
        n = self.cols
        for cc, v in row.items():
            if cc >= n:
                x = b.get(cc - n)
                if x is not None:
                    s = s + v * x
        return s

    def solve(self, b: dict):
        for row in self._constraints:
            if self._tag_dot(row, b):
                return None
        x = {}
        for c, row in self._erows:
            s = self._tag_dot(row, b)
            if s:
                x[c] = s
        return x
