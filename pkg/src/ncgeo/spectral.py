"""First-quadrant double-complex spectral sequence over Q(i).

The view holds bigraded dimensions and the two raw differential blocks; the
engine applies the column sign (-1)^p to the vertical one, after which the
two anticommute and D = h + v_signed squares to zero.

Pages are computed from the column filtration by explicit zig-zag chains: a
class on page r at slot (p, q) is represented by x_0 in C^{p,q} together
with a tail x_1 .. x_{r-1} marching right and down such that every component
of D(x_0 + ... + x_{r-1}) in columns p .. p+r-1 vanishes; the page
differential is the class of the leak h(x_{r-1}) landing r columns to the
right.  Numerator, denominator and representatives are all plain kernel,
image and quotient computations in :mod:`ncgeo.sparse`, so every page and
every d_r is exact and deterministic.

The degeneration check compares the page-two dimensions, computed from the
page-one differential alone, against independently supplied total Betti
numbers and reports the first degree where they disagree.
"""

from __future__ import annotations

from .scalars import ONE, ZERO, gr
from .sparse import (
    LinearSolver,
    SparseMatrix,
    SubspaceBasis,
    image_basis,
    kernel_basis,
    quotient_representatives,
    rank,
)


class DoubleComplexView:
    """Bigraded dimensions plus horizontal and (unsigned) vertical blocks."""

    def __init__(self, dims, h_blocks, v_blocks):
        self.dims = {k: v for k, v in dims.items() if v}
        self.h_blocks = dict(h_blocks)
        self.v_blocks = dict(v_blocks)
        self.max_p = max((p for p, _q in self.dims), default=-1)
        self.max_q = max((q for _p, q in self.dims), default=-1)

    def dim(self, p, q) -> int:
        return self.dims.get((p, q), 0)

    def h(self, p, q):
        m = self.h_blocks.get((p, q))
        if m is None:
            return SparseMatrix(self.dim(p + 1, q), self.dim(p, q))
        return m

    def v_signed(self, p, q):
        m = self.v_blocks.get((p, q))
        if m is None:
            return SparseMatrix(self.dim(p, q + 1), self.dim(p, q))
        if p % 2 == 0:
            return m
        flipped = {(r, c): -val for r, c, val in m.entries()}
        return SparseMatrix(m.rows, m.cols, flipped)

    def validate(self):
        """Both differentials square to zero and commute (so D^2 = 0)."""
        for (p, q) in self.dims:
            h1 = self.h(p, q)
            h2 = self.h(p + 1, q)
            v1 = self.v_blocks.get((p, q))
            v2 = self.v_blocks.get((p, q + 1))
            for c in range(h1.cols):
                col = h1.column(c)
                if h2.apply(col):
                    raise ValueError("horizontal differential does not square to zero")
            if v1 is not None:
                for c in range(v1.cols):
                    col = v1.column(c)
                    if v2 is not None and v2.apply(col):
                        raise ValueError("vertical differential does not square to zero")
            if v1 is not None:
                hv = self.h(p, q + 1)
                vh = self.v_blocks.get((p + 1, q))
                for c in range(self.dim(p, q)):
                    unit = {c: ONE}
                    a = hv.apply(v1.apply(unit))
                    b = vh.apply(self.h(p, q).apply(unit)) if vh is not None else {}
                    if a != b:
                        raise ValueError("differentials do not commute")
        return True


def view_of_cech(cech) -> DoubleComplexView:
    """Assemble the view of a chart complex (duck-typed CechComplex)."""
    dims = {}
    h_blocks = {}
    v_blocks = {}
    for p in range(cech.max_p() + 1):
        for q in range(cech.max_q() + 1):
            d = cech.slot_dim(p, q)
            if not d:
                continue
            dims[(p, q)] = d
            if p < cech.max_p():
                h_blocks[(p, q)] = cech.delta_matrix(p, q)
            if q < cech.max_q():
                v_blocks[(p, q)] = cech.vertical_matrix(p, q)
    return DoubleComplexView(dims, h_blocks, v_blocks)


class SpectralPage:
    """Representatives and differential blocks of one page."""

    def __init__(self, r, spaces, differentials, chains=None):
        self.r = r
        self.spaces = spaces
        self.differentials = differentials
        self.chains = chains or {}

    def dim(self, p, q) -> int:
        s = self.spaces.get((p, q))
        return s.dim() if s is not None else 0

    def dims_table(self):
        return sorted(
            (p, q, s.dim()) for (p, q), s in self.spaces.items() if s.dim()
        )

    def __repr__(self):
        return "SpectralPage(r=%d, slots=%d)" % (self.r, len(self.spaces))


def _full_basis(dim: int) -> SubspaceBasis:
    return SubspaceBasis(dim, [{i: ONE} for i in range(dim)], list(range(dim)))


def _zigzag_kernel(view: DoubleComplexView, p: int, q: int, length: int):
    """Chains (x_0 .. x_{length-1}) with all D-components vanishing through
    column p + length - 1.  Returns (kernel chains, x0 block dimension)."""
    blocks = []
    offsets = []
    off = 0
    for i in range(length):
        d = view.dim(p + i, q - i)
        offsets.append(off)
        blocks.append(d)
        off += d
    nvars = off
    rows = []
    row_off = 0
    entries = []
    # vertical closure of x_0
    v0 = view.v_signed(p, q)
    for r, c, val in v0.entries():
        entries.append(((row_off + r, offsets[0] + c), val))
    row_off += v0.rows
    # h x_{i-1} + v x_i = 0
    for i in range(1, length):
        h_prev = view.h(p + i - 1, q - i + 1)
        v_i = view.v_signed(p + i, q - i)
        for r, c, val in h_prev.entries():
            entries.append(((row_off + r, offsets[i - 1] + c), val))
        for r, c, val in v_i.entries():
            entries.append(((row_off + r, offsets[i] + c), val))
        row_off += max(h_prev.rows, v_i.rows if blocks[i] else 0)
    m = SparseMatrix(row_off, nvars, entries)
    ker = kernel_basis(m)
    chains = []
    for vec in ker.vectors:
        chain = [dict() for _ in range(length)]
        for idx, val in vec.items():
            for i in range(length - 1, -1, -1):
                if idx >= offsets[i]:
                    chain[i][idx - offsets[i]] = val
                    break
        chains.append(chain)
    return chains, blocks[0]


def _boundary_space(view: DoubleComplexView, p: int, q: int, r: int):
    """x0 components of boundaries from filtration p - r + 1 landing at (p, q)."""
    vectors = []
    if q >= 1 and view.dim(p, q - 1):
        vimg = image_basis(view.v_signed(p, q - 1))
        vectors.extend(vimg.vectors)
    # the filtration saturates at column zero, so the tail clips at length p
    length = min(r - 1, p)
    if length >= 1:
        tails, _ = _zigzag_kernel(view, p - length, q + length - 1, length)
        h_last = view.h(p - 1, q)
        for chain in tails:
            leak = h_last.apply(chain[-1])
            if leak:
                vectors.append(leak)
    return SubspaceBasis.from_vectors(view.dim(p, q), vectors)


def page(view: DoubleComplexView, r: int) -> SpectralPage:
    """Page r with representatives and the d_r blocks.

    Page zero is the bigraded complex itself with the signed vertical
    differential; later pages are zig-zag subquotients.
    """
    if r < 0:
        raise ValueError("page index must be nonnegative")
    if r == 0:
        spaces = {}
        diffs = {}
        for (p, q), d in view.dims.items():
            spaces[(p, q)] = _full_basis(d)
            diffs[(p, q)] = view.v_signed(p, q)
        return SpectralPage(0, spaces, diffs)
    spaces = {}
    chains_by_slot = {}
    boundaries = {}
    for (p, q) in view.dims:
        chains, x0dim = _zigzag_kernel(view, p, q, r)
        bc = _boundary_space(view, p, q, r)
        boundaries[(p, q)] = bc
        zc = SubspaceBasis.from_vectors(x0dim, [c[0] for c in chains])
        reps = quotient_representatives(zc, bc)
        spaces[(p, q)] = reps
        if reps.dim():
            x0_cols = [c[0] for c in chains]
            solver = LinearSolver(SparseMatrix.from_columns(x0_cols, x0dim))
            rep_chains = []
            for vec in reps.vectors:
                combo = solver.solve(vec)
                if combo is None:
                    raise AssertionError("representative escaped the cycle space")
                chain = [dict() for _ in range(r)]
                for j, coef in combo.items():
                    for i in range(r):
                        for idx, val in chains[j][i].items():
                            cur = chain[i].get(idx, ZERO)
                            nv = cur + coef * val
                            if nv:
                                chain[i][idx] = nv
                            else:
                                chain[i].pop(idx, None)
                rep_chains.append(chain)
            chains_by_slot[(p, q)] = rep_chains
    diffs = {}
    for (p, q), reps in spaces.items():
        tgt = (p + r, q - r + 1)
        tgt_reps = spaces.get(tgt)
        cols = []
        rep_chains = chains_by_slot.get((p, q), [])
        h_last = view.h(p + r - 1, q - r + 1)
        for chain in rep_chains:
            leak = h_last.apply(chain[-1])
            if not leak:
                cols.append({})
                continue
            if tgt_reps is None:
                raise AssertionError("nonzero page differential into an empty slot")
            reduced = boundaries[tgt].reduce(leak)
            rem, coords = tgt_reps.reduce_with_coords(reduced)
            if rem:
                raise AssertionError("page differential left the page")
            cols.append({i: c for i, c in enumerate(coords) if c})
        diffs[(p, q)] = SparseMatrix.from_columns(
            cols, tgt_reps.dim() if tgt_reps is not None else 0
        )
    return SpectralPage(r, spaces, diffs, chains_by_slot)


def page_two_dims(view: DoubleComplexView):
    """Dimensions of page two straight from the page-one differential."""
    p1 = page(view, 1)
    dims = {}
    ranks_in = {}
    ranks_out = {}
    for key, block in p1.differentials.items():
        rk = rank(block)
        ranks_out[key] = rk
        tgt = (key[0] + 1, key[1])
        ranks_in[tgt] = ranks_in.get(tgt, 0) + rk
    for key, reps in p1.spaces.items():
        d = reps.dim() - ranks_out.get(key, 0) - ranks_in.get(key, 0)
        if d:
            dims[key] = d
    return dims, p1


def degeneration_check(view: DoubleComplexView, total_betti) -> dict:
    """Do the page-two dimensions already give the total cohomology?

    total_betti must come from an independent computation (total-complex
    ranks).  Reports per-degree sums, the page-one table and the first
    mismatching degree if any.
    """
    e2, p1 = page_two_dims(view)
    kmax = max(
        [p + q for (p, q) in e2] + [len(total_betti) - 1] + [0]
    )
    sums = []
    for k in range(kmax + 1):
        sums.append(sum(d for (p, q), d in e2.items() if p + q == k))
    padded = list(total_betti) + [0] * (kmax + 1 - len(total_betti))
    mismatch = None
    for k in range(kmax + 1):
        if sums[k] != padded[k]:
            mismatch = {"degree": k, "e2_sum": sums[k], "total": padded[k]}
            break
    return {
        "e1_dims": p1.dims_table(),
        "e2_dims": sorted([p, q, d] for (p, q), d in e2.items()),
        "e2_sums_by_degree": sums,
        "total_betti": list(total_betti),
        "degenerates_at_page_two": mismatch is None,
        "first_mismatch": mismatch,
    }
