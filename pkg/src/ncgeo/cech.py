"""The twisted double complex over the vertex-star cover.

Charts are the closed vertex stars of a simplicial complex; the chart of an
ordered tuple (a_0 < ... < a_p) is the star of the spanned simplex, and the
nerve of the cover is the complex itself.  A cochain assigns to every
p-simplex a local section: a matrix-valued mixed form

    parts[S][structural key] = n x n matrix

where S is an exterior index subset (see :mod:`ncgeo.ncforms`) and the
structural key is a Whitney simplex, or a (simplex, mono, dset) polynomial
term for the piecewise-polynomial sections the homotopy produces.

The Cech differential restricts along faces, and its last term -- the one
dropping the largest vertex -- changes trivialization through the transition
value of that edge:

    (delta w)_{a_0..a_{p+1}} = sum_i (-1)^i w_{..a_i^..}|
                               + (-1)^{p+1} (w_{a_0..a_p}|)^{g(a_p, a_{p+1})}

Transition families are flat (one exact special-unitary value per edge) and
must satisfy g(a,b) g(b,c) = g(a,c) on every triangle; that identity is
exactly what makes delta square to zero, and the validator reports the
violating triangle when it fails.

Vertical differential, total differential, partition-of-unity homotopy,
total-complex Betti numbers and the fiber-wise trace integral all live here.
"""

from __future__ import annotations

from itertools import combinations

from .lie import (
    GroupElement,
    adjoint_action,
    identity_element,
    mat_add,
    mat_is_zero,
    mat_scale,
    mat_trace,
    matrix_unit,
)
from .ncforms import NCForm, _exterior_minors_by_source, d_prime
from .scalars import GaussianRational, ONE, ZERO, gr
from .simplicial import (
    SimplicialComplex,
    _lambda_term,
    _whitney_terms,
    star,
)
from .sparse import SparseMatrix, SubspaceBasis, kernel_basis, rank


class CocycleError(ValueError):
    """Raised when a transition family breaks the triangle identity."""

    def __init__(self, triangle):
        self.triangle = triangle
        super().__init__(
            "cocycle condition fails on the 2-simplex %r" % (triangle,)
        )


class TransitionCocycle:
    """Flat transition family: one group element per edge, triangles checked."""

    def __init__(self, complex: SimplicialComplex, n: int, values=None, validate=True):
        self.complex = complex
        self.n = n
        vals = {}
        for pair, g in (values or {}).items():
            a, b = pair
            if a > b:
                a, b = b, a
                g = g.inverse_element()
            if (a, b) not in complex.simplices:
                raise ValueError("pair %r does not span an edge" % (pair,))
            if g.n != n:
                raise ValueError("transition value has the wrong size")
            vals[(a, b)] = g
        self.values = vals
        self._identity = identity_element(n)
        if validate:
            witness = self.find_violation()
            if witness is not None:
                raise CocycleError(witness)

    def g(self, a: int, b: int) -> GroupElement:
        """Transition value for the ordered pair (a, b); inverse below the diagonal."""
        if a == b:
            return self._identity
        if a < b:
            return self.values.get((a, b), self._identity)
        rev = self.values.get((b, a))
        return self._identity if rev is None else rev.inverse_element()

    def find_violation(self):
        """First triangle where g(a,b) g(b,c) != g(a,c), or None."""
        for tri in self.complex.p_simplices(2):
            a, b, c = tri
            if (self.g(a, b) * self.g(b, c)) != self.g(a, c):
                return tri
        return None

    def is_trivial(self) -> bool:
        ident = self._identity
        return all(g == ident for g in self.values.values())


def trivial_cocycle(complex: SimplicialComplex, n: int) -> TransitionCocycle:
    return TransitionCocycle(complex, n, {})


# ---------------------------------------------------------------------------
# local sections

WHITNEY = "whitney"
SULLIVAN = "sullivan"


class LocalSection:
    """Mixed-degree local section over a star subcomplex.

    ``parts[S]`` maps structural keys to matrices; for the Whitney kind the
    key is a simplex tuple, for the polynomial kind it is a
    (simplex, mono, dset) term.  The total degree q = |S| + form degree is
    fixed per section.
    """

    __slots__ = ("complex", "n", "q", "kind", "cap", "parts")

    def __init__(self, complex, n, q, kind=WHITNEY, cap=1, parts=None):
        self.complex = complex
        self.n = n
        self.q = q
        self.kind = kind
        self.cap = cap
        cleaned = {}
        if parts:
            for S, leaf in parts.items():
                keep = {k: m for k, m in leaf.items() if not mat_is_zero(m)}
                if keep:
                    cleaned[tuple(S)] = keep
        self.parts = cleaned

    def is_zero(self) -> bool:
        return not self.parts

    def __eq__(self, other):
        if not isinstance(other, LocalSection):
            return NotImplemented
        if self.n != other.n or self.kind != other.kind:
            return False
        if not self.parts and not other.parts:
            return True
        return self.q == other.q and self.parts == other.parts

    def copy_with(self, parts, cap=None):
        return LocalSection(
            self.complex, self.n, self.q, self.kind, cap or self.cap, parts
        )

    def __add__(self, other: "LocalSection") -> "LocalSection":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.q != other.q or self.kind != other.kind:
            raise ValueError("cannot add sections of different shape")
        out = {S: dict(leaf) for S, leaf in self.parts.items()}
        for S, leaf in other.parts.items():
            cur = out.setdefault(S, {})
            for k, m in leaf.items():
                prev = cur.get(k)
                nm = mat_add(prev, m) if prev is not None else m
                if mat_is_zero(nm):
                    cur.pop(k, None)
                else:
                    cur[k] = nm
            if not cur:
                del out[S]
        return LocalSection(
            self.complex, self.n, self.q, self.kind, max(self.cap, other.cap), out
        )

    def scale(self, c: GaussianRational) -> "LocalSection":
        if not c:
            return LocalSection(self.complex, self.n, self.q, self.kind, self.cap)
        out = {
            S: {k: mat_scale(c, m) for k, m in leaf.items()}
            for S, leaf in self.parts.items()
        }
        return self.copy_with(out)

    def __neg__(self):
        return self.scale(gr(-1))

    def restrict(self, substar: SimplicialComplex) -> "LocalSection":
        """Keep structural keys whose carrier simplex lies in the substar."""
        simp = substar.simplices
        out = {}
        for S, leaf in self.parts.items():
            if self.kind == WHITNEY:
                keep = {k: m for k, m in leaf.items() if k in simp}
            else:
                keep = {k: m for k, m in leaf.items() if k[0] in simp}
            if keep:
                out[S] = keep
        return LocalSection(substar, self.n, self.q, self.kind, self.cap, out)

    def gauge(self, g: GroupElement) -> "LocalSection":
        """Change of trivialization: conjugate values, mix exterior slots."""
        out = {}
        for S, leaf in self.parts.items():
            s = len(S)
            if s == 0:
                tgt = out.setdefault(S, {})
                for k, m in leaf.items():
                    c = adjoint_action(g, m)
                    if not mat_is_zero(c):
                        prev = tgt.get(k)
                        nm = mat_add(prev, c) if prev is not None else c
                        if mat_is_zero(nm):
                            tgt.pop(k, None)
                        else:
                            tgt[k] = nm
                if not tgt:
                    del out[S]
                continue
            targets = _exterior_minors_by_source(g, s).get(S, ())
            for k, m in leaf.items():
                c = adjoint_action(g, m)
                if mat_is_zero(c):
                    continue
                for T, det in targets:
                    tgt = out.setdefault(T, {})
                    prev = tgt.get(k)
                    term = mat_scale(det, c)
                    nm = mat_add(prev, term) if prev is not None else term
                    if mat_is_zero(nm):
                        tgt.pop(k, None)
                    else:
                        tgt[k] = nm
        out = {S: leaf for S, leaf in out.items() if leaf}
        return LocalSection(self.complex, self.n, self.q, self.kind, self.cap, out)

    def to_sullivan(self) -> "LocalSection":
        """Embed a Whitney-backed section into the polynomial representation."""
        if self.kind == SULLIVAN:
            return self
        out = {}
        for S, leaf in self.parts.items():
            acc = {}
            for chart in self.complex.simplices:
                chart_set = set(chart)
                for tau, m in leaf.items():
                    if not set(tau).issubset(chart_set):
                        continue
                    for (mono, dset), c in _whitney_terms(chart, tau).items():
                        key = (chart, mono, dset)
                        prev = acc.get(key)
                        term = mat_scale(gr(c), m)
                        nm = mat_add(prev, term) if prev is not None else term
                        if mat_is_zero(nm):
                            acc.pop(key, None)
                        else:
                            acc[key] = nm
            if acc:
                out[S] = acc
        return LocalSection(self.complex, self.n, self.q, SULLIVAN, 1, out)

    def lambda_multiply(self, alpha: int) -> "LocalSection":
        """Multiply by the barycentric coordinate of a vertex (polynomial kind)."""
        sec = self.to_sullivan()
        out = {}
        for S, leaf in sec.parts.items():
            acc = {}
            for (chart, mono, dset), m in leaf.items():
                if alpha not in chart:
                    continue
                p = len(chart) - 1
                pos0 = chart.index(alpha)
                for nm_, nd, c in _lambda_term(p, pos0, mono, dset):
                    key = (chart, nm_, nd)
                    prev = acc.get(key)
                    term = mat_scale(gr(c), m)
                    nm2 = mat_add(prev, term) if prev is not None else term
                    if mat_is_zero(nm2):
                        acc.pop(key, None)
                    else:
                        acc[key] = nm2
            if acc:
                out[S] = acc
        return LocalSection(sec.complex, sec.n, sec.q, SULLIVAN, sec.cap + 1, out)

    def transplant(self, bigger_star: SimplicialComplex) -> "LocalSection":
        """View the section inside a larger star, extending by zero."""
        return LocalSection(bigger_star, self.n, self.q, self.kind, self.cap, self.parts)

    def __repr__(self):
        return "LocalSection(q=%d, kind=%s, parts=%d)" % (
            self.q,
            self.kind,
            len(self.parts),
        )


def local_d(section: LocalSection) -> LocalSection:
    """Vertical differential: coboundary on the form part plus, with the
    Koszul sign of the form degree, the derivation differential on the
    matrix-exterior part."""
    if section.kind != WHITNEY:
        raise ValueError("the vertical differential acts on Whitney-backed sections")
    n = section.n
    out = {}

    def put(S, key, m):
        tgt = out.setdefault(S, {})
        prev = tgt.get(key)
        nm = mat_add(prev, m) if prev is not None else m
        if mat_is_zero(nm):
            tgt.pop(key, None)
        else:
            tgt[key] = nm

    simp = section.complex.simplices
    for S, leaf in section.parts.items():
        for tau, m in leaf.items():
            r = len(tau) - 1
            # coboundary part: tau -> cofacets within the star
            tau_set = set(tau)
            for v in range(len(section.complex.vertices)):
                if v in tau_set:
                    continue
                up = tuple(sorted(tau + (v,)))
                if up not in simp:
                    continue
                pos = up.index(v)
                put(S, up, m if pos % 2 == 0 else mat_scale(gr(-1), m))
            # derivation part with the degree sign
            w = NCForm(n, len(S), {S: m})
            dw = d_prime(w)
            sign = -1 if r % 2 else 1
            for T, mm in dw.components.items():
                put(T, tau, mm if sign > 0 else mat_scale(gr(-1), mm))
    return LocalSection(
        section.complex, n, section.q + 1, WHITNEY, section.cap, out
    )


# ---------------------------------------------------------------------------
# cochains


class GlobalSection:
    """Level below the Cech complex: one chart per vertex, glued by gauge.

    Compatibility (the chart over b equals the gauge transport of the chart
    over a on every overlap) is exactly closedness of the induced degree-zero
    cochain.
    """

    __slots__ = ("complex", "n", "q", "charts")

    def __init__(self, complex, n, q, charts):
        self.complex = complex
        self.n = n
        self.q = q
        self.charts = dict(charts)

    def __eq__(self, other):
        if not isinstance(other, GlobalSection):
            return NotImplemented
        return self.q == other.q and self.charts == other.charts

    def is_compatible(self, cocycle: TransitionCocycle) -> bool:
        from_cochain = CechCochain(self.complex, self.n, 0, self.q, self.charts)
        return cech_delta(from_cochain, cocycle).is_zero()


class CechCochain:
    """Cochain indexed by the ordered p-simplices of the nerve.

    p = -1 is the global level: the single entry at the empty tuple is a
    GlobalSection and the differential is the chart-by-chart restriction.
    """

    __slots__ = ("complex", "n", "p", "q", "entries")

    def __init__(self, complex, n, p, q, entries=None):
        self.complex = complex
        self.n = n
        self.p = p
        self.q = q
        ent = {}
        if entries:
            for sigma, sec in entries.items():
                sigma = tuple(sigma)
                if p >= 0:
                    if len(sigma) != p + 1:
                        raise ValueError("entry key %r has the wrong length" % (sigma,))
                    if sigma not in complex.simplices:
                        raise ValueError("entry key %r is not a simplex" % (sigma,))
                    if not sec.is_zero():
                        ent[sigma] = sec
                else:
                    if sigma != ():
                        raise ValueError("global-level entries are keyed by ()")
                    ent[sigma] = sec
        self.entries = ent

    def is_zero(self) -> bool:
        if self.p < 0:
            g = self.entries.get(())
            return g is None or all(s.is_zero() for s in g.charts.values())
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, CechCochain):
            return NotImplemented
        if self.n != other.n or self.p != other.p:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.q == other.q and self.entries == other.entries

    def __add__(self, other: "CechCochain") -> "CechCochain":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("cannot add cochains in different bidegrees")
        out = dict(self.entries)
        for sigma, sec in other.entries.items():
            cur = out.get(sigma)
            ns = (cur + sec) if cur is not None else sec
            if ns.is_zero():
                out.pop(sigma, None)
            else:
                out[sigma] = ns
        return CechCochain(self.complex, self.n, self.p, self.q, out)

    def scale(self, c: GaussianRational) -> "CechCochain":
        return CechCochain(
            self.complex,
            self.n,
            self.p,
            self.q,
            {sigma: sec.scale(c) for sigma, sec in self.entries.items()},
        )

    def __neg__(self):
        return self.scale(gr(-1))

    def to_sullivan(self) -> "CechCochain":
        return CechCochain(
            self.complex,
            self.n,
            self.p,
            self.q,
            {sigma: sec.to_sullivan() for sigma, sec in self.entries.items()},
        )

    def __repr__(self):
        return "CechCochain(p=%d, q=%d, entries=%d)" % (self.p, self.q, len(self.entries))


class TotalCochain:
    """Formal sum of cochains of equal total degree, one per bidegree."""

    __slots__ = ("complex", "n", "degree", "parts")

    def __init__(self, complex, n, degree, parts=None):
        self.complex = complex
        self.n = n
        self.degree = degree
        self.parts = {}
        for key, c in (parts or {}).items():
            if not c.is_zero():
                self.parts[key] = c

    def is_zero(self) -> bool:
        return not self.parts

    def add_part(self, c: CechCochain):
        if c.is_zero():
            return
        key = (c.p, c.q)
        cur = self.parts.get(key)
        ns = (cur + c) if cur is not None else c
        if ns.is_zero():
            self.parts.pop(key, None)
        else:
            self.parts[key] = ns


def cech_delta(c: CechCochain, cocycle: TransitionCocycle) -> CechCochain:
    """The twisted alternating-sum coboundary; the last face term carries the
    gauge action of the dropped edge."""
    K = c.complex
    if c.p < 0:
        g = c.entries.get(())
        charts = {} if g is None else g.charts
        return CechCochain(K, c.n, 0, c.q, dict(charts))
    out = {}
    nverts = len(K.vertices)
    for sigma, sec in c.entries.items():
        sset = set(sigma)
        top = sigma[-1]
        for u in range(nverts):
            if u in sset:
                continue
            tau = tuple(sorted(sigma + (u,)))
            if tau not in K.simplices:
                continue
            st = star(K, tau)
            term = sec.restrict(st)
            if u > top:
                term = term.gauge(cocycle.g(top, u))
            pos = tau.index(u)
            if pos % 2:
                term = term.scale(gr(-1))
            if term.is_zero():
                continue
            cur = out.get(tau)
            ns = (cur + term) if cur is not None else term
            if ns.is_zero():
                out.pop(tau, None)
            else:
                out[tau] = ns
    return CechCochain(K, c.n, c.p + 1, c.q, out)


def total_D(c: CechCochain, cocycle: TransitionCocycle) -> TotalCochain:
    """D = delta + (-1)^p vertical, as a total-degree element."""
    if c.p < 0:
        raise ValueError("the total differential starts at Cech level zero")
    out = TotalCochain(c.complex, c.n, c.p + c.q + 1)
    out.add_part(cech_delta(c, cocycle))
    vert = CechCochain(
        c.complex,
        c.n,
        c.p,
        c.q + 1,
        {sigma: local_d(sec) for sigma, sec in c.entries.items()},
    )
    if c.p % 2:
        vert = vert.scale(gr(-1))
    out.add_part(vert)
    return out


def total_D_on_total(t: TotalCochain, cocycle: TransitionCocycle) -> TotalCochain:
    out = TotalCochain(t.complex, t.n, t.degree + 1)
    for c in t.parts.values():
        d = total_D(c, cocycle)
        for part in d.parts.values():
            out.add_part(part)
    return out


def mv_homotopy(c: CechCochain, cocycle: TransitionCocycle) -> CechCochain:
    """Partition-of-unity primitive of a closed cochain.

    Requires delta(c) = 0; returns eta one level down, in the polynomial
    representation with the cap raised by one, with delta(eta) = c exactly.
    Vertex coordinates are the partition of unity of the star cover.
    """
    if c.p < 0:
        raise ValueError("the homotopy starts at Cech level zero")
    if not cech_delta(c, cocycle).is_zero():
        raise ValueError("the homotopy needs a delta-closed cochain")
    K = c.complex
    nverts = len(K.vertices)
    if c.p == 0:
        charts = {}
        for beta in range(nverts):
            key = (beta,)
            if key not in K.simplices:
                continue
            st_beta = star(K, key)
            acc = LocalSection(st_beta, c.n, c.q, SULLIVAN, 2)
            for alpha in range(nverts):
                if alpha == beta:
                    src = c.entries.get(key)
                    if src is None:
                        continue
                    term = src.lambda_multiply(alpha).transplant(st_beta)
                else:
                    edge = tuple(sorted((alpha, beta)))
                    if edge not in K.simplices:
                        continue
                    src = c.entries.get((alpha,))
                    if src is None:
                        continue
                    overlap = star(K, edge)
                    moved = src.restrict(overlap).gauge(cocycle.g(alpha, beta))
                    term = moved.lambda_multiply(alpha).transplant(st_beta)
                acc = acc + term
            charts[(beta,)] = acc
        out = CechCochain(K, c.n, -1, c.q)
        out.entries[()] = GlobalSection(K, c.n, c.q, charts)
        return out
    out_entries = {}
    for sigma in K.p_simplices(c.p - 1):
        st_sigma = star(K, sigma)
        top = sigma[-1]
        acc = LocalSection(st_sigma, c.n, c.q, SULLIVAN, 2)
        sset = set(sigma)
        for alpha in range(nverts):
            if alpha in sset:
                continue
            merged = tuple(sorted(sigma + (alpha,)))
            if merged not in K.simplices:
                continue
            src = c.entries.get(merged)
            if src is None:
                continue
            sign = -1 if merged.index(alpha) % 2 else 1
            term = src
            if alpha > top:
                term = term.gauge(cocycle.g(alpha, top))
            term = term.lambda_multiply(alpha).transplant(st_sigma)
            if sign < 0:
                term = term.scale(gr(-1))
            acc = acc + term
        if not acc.is_zero():
            out_entries[sigma] = acc
    return CechCochain(K, c.n, c.p - 1, c.q, out_entries)


def fiber_integrate(c: CechCochain) -> CechCochain:
    """Trace of the top exterior part over n, chartwise; lands in the scalar
    double complex (matrix size one) with the degree dropped by n^2 - 1."""
    n = c.n
    d = n * n - 1
    top = tuple(range(d))

    def integrate_section(sec: LocalSection, target_complex) -> LocalSection:
        leaf = sec.parts.get(top, {})
        out_leaf = {}
        for key, m in leaf.items():
            val = mat_trace(m) / gr(n)
            if val:
                out_leaf[key] = ((val,),)
        return LocalSection(
            target_complex, 1, sec.q - d, sec.kind, sec.cap, {(): out_leaf} if out_leaf else {}
        )

    if c.p < 0:
        g = c.entries.get(())
        charts = {
            key: integrate_section(sec, sec.complex) for key, sec in (g.charts if g else {}).items()
        }
        out = CechCochain(c.complex, 1, -1, c.q - d)
        out.entries[()] = GlobalSection(c.complex, 1, c.q - d, charts)
        return out
    entries = {}
    for sigma, sec in c.entries.items():
        isec = integrate_section(sec, sec.complex)
        if not isec.is_zero():
            entries[sigma] = isec
    return CechCochain(c.complex, 1, c.p, c.q - d, entries)


# ---------------------------------------------------------------------------
# assembly: bases, matrices, Betti numbers


class CechComplex:
    """Cached basis enumeration and matrix assembly for one gluing family."""

    def __init__(self, complex: SimplicialComplex, n: int, cocycle=None):
        self.complex = complex
        self.n = n
        self.cocycle = cocycle if cocycle is not None else trivial_cocycle(complex, n)
        if self.cocycle.n != n or self.cocycle.complex.simplices != complex.simplices:
            raise ValueError("cocycle does not match the complex and size")
        self._bases = {}
        self._mats = {}

    # ---- bases

    def slot_basis(self, p: int, q: int):
        """Basis of the (p, q) slot: (sigma, S, tau, i, j), lexicographic."""
        key = (p, q)
        cached = self._bases.get(key)
        if cached is not None:
            return cached
        n = self.n
        d = n * n - 1
        items = []
        offsets = {}
        for sigma in self.complex.p_simplices(p):
            st = star(self.complex, sigma)
            offsets[sigma] = len(items)
            for s in range(0, min(d, q) + 1):
                r = q - s
                if r < 0:
                    continue
                taus = st.p_simplices(r)
                if not taus:
                    continue
                for S in combinations(range(d), s):
                    for tau in taus:
                        for i in range(n):
                            for j in range(n):
                                items.append((sigma, S, tau, i, j))
        index = {b: t for t, b in enumerate(items)}
        out = (items, index, offsets)
        self._bases[key] = out
        return out

    def slot_dim(self, p: int, q: int) -> int:
        return len(self.slot_basis(p, q)[0])

    def max_p(self) -> int:
        return self.complex.dim()

    def max_q(self) -> int:
        return self.complex.dim() + self.n * self.n - 1

    def section_to_vector(self, p, q, sigma, section, out=None, offset_override=None):
        items, index, offsets = self.slot_basis(p, q)
        base = offsets[sigma] if offset_override is None else offset_override
        vec = out if out is not None else {}
        for S, leaf in section.parts.items():
            for tau, m in leaf.items():
                for i in range(self.n):
                    for j in range(self.n):
                        v = m[i][j]
                        if v:
                            vec[index[(sigma, S, tau, i, j)]] = v
        return vec

    def cochain_to_vector(self, c: CechCochain) -> dict:
        vec = {}
        for sigma, sec in c.entries.items():
            self.section_to_vector(c.p, c.q, sigma, sec, out=vec)
        return vec

    def vector_to_cochain(self, p, q, vec: dict) -> CechCochain:
        items, _index, _offsets = self.slot_basis(p, q)
        per_sigma = {}
        for idx, v in vec.items():
            sigma, S, tau, i, j = items[idx]
            leafs = per_sigma.setdefault(sigma, {})
            rows = leafs.setdefault(S, {})
            mat = rows.get(tau)
            if mat is None:
                mat = [[ZERO] * self.n for _ in range(self.n)]
                rows[tau] = mat
            mat[i][j] = v
        entries = {}
        for sigma, parts in per_sigma.items():
            frozen = {
                S: {tau: tuple(tuple(r) for r in m) for tau, m in leaf.items()}
                for S, leaf in parts.items()
            }
            entries[sigma] = LocalSection(
                star(self.complex, sigma), self.n, q, WHITNEY, 1, frozen
            )
        return CechCochain(self.complex, self.n, p, q, entries)

    def basis_cochain(self, p, q, idx) -> CechCochain:
        items, _, _ = self.slot_basis(p, q)
        sigma, S, tau, i, j = items[idx]
        sec = LocalSection(
            star(self.complex, sigma),
            self.n,
            q,
            WHITNEY,
            1,
            {S: {tau: matrix_unit(self.n, i, j)}},
        )
        return CechCochain(self.complex, self.n, p, q, {sigma: sec})

    # ---- matrices

    def delta_matrix(self, p: int, q: int) -> SparseMatrix:
        cached = self._mats.get(("h", p, q))
        if cached is not None:
            return cached
        src_items, _, _ = self.slot_basis(p, q)
        rows = self.slot_dim(p + 1, q)
        cols = []
        for idx in range(len(src_items)):
            c = self.basis_cochain(p, q, idx)
            dc = cech_delta(c, self.cocycle)
            vec = {}
            for sigma, sec in dc.entries.items():
                self.section_to_vector(p + 1, q, sigma, sec, out=vec)
            cols.append(vec)
        out = SparseMatrix.from_columns(cols, rows)
        self._mats[("h", p, q)] = out
        return out

    def vertical_matrix(self, p: int, q: int) -> SparseMatrix:
        """Raw vertical differential (no column sign)."""
        cached = self._mats.get(("v", p, q))
        if cached is not None:
            return cached
        src_items, _, _ = self.slot_basis(p, q)
        rows = self.slot_dim(p, q + 1)
        cols = []
        for idx in range(len(src_items)):
            c = self.basis_cochain(p, q, idx)
            vec = {}
            for sigma, sec in c.entries.items():
                dsec = local_d(sec)
                self.section_to_vector(p, q + 1, sigma, dsec, out=vec)
            cols.append(vec)
        out = SparseMatrix.from_columns(cols, rows)
        self._mats[("v", p, q)] = out
        return out

    def degree_layout(self, k: int):
        """Slots (p, q) with p + q = k and their offsets in the stacked basis."""
        out = []
        offset = 0
        for p in range(0, min(k, self.max_p()) + 1):
            q = k - p
            dim = self.slot_dim(p, q)
            if dim:
                out.append((p, q, offset, dim))
            offset += dim
        return out, offset

    def total_matrix(self, k: int) -> SparseMatrix:
        """The total differential from degree k to k + 1."""
        src_layout, src_dim = self.degree_layout(k)
        dst_layout, dst_dim = self.degree_layout(k + 1)
        dst_off = {(p, q): off for p, q, off, _dim in dst_layout}
        entries = []
        for p, q, off, _dim in src_layout:
            items, _, _ = self.slot_basis(p, q)
            sign = -1 if p % 2 else 1
            for local_idx in range(len(items)):
                col = off + local_idx
                c = self.basis_cochain(p, q, local_idx)
                dtot = total_D(c, self.cocycle)
                for (pp, qq), part in dtot.parts.items():
                    base = dst_off.get((pp, qq))
                    if base is None:
                        if not part.is_zero():
                            raise AssertionError("differential left the layout")
                        continue
                    vec = {}
                    for sigma, sec in part.entries.items():
                        self.section_to_vector(pp, qq, sigma, sec, out=vec)
                    for ridx, v in vec.items():
                        entries.append(((base + ridx, col), v))
        return SparseMatrix(dst_dim, src_dim, entries)

    def total_dims(self):
        kmax = self.max_p() + self.max_q()
        out = [self.degree_layout(k)[1] for k in range(kmax + 1)]
        while out and out[-1] == 0:
            out.pop()
        return out

    def total_cohomology(self):
        """Betti numbers of the total complex, by exact rank."""
        dims = self.total_dims()
        ranks = []
        for k in range(len(dims)):
            if k + 1 < len(dims):
                ranks.append(rank(self.total_matrix(k)))
            else:
                ranks.append(0)
        betti = []
        prev = 0
        for k, dim in enumerate(dims):
            betti.append(dim - ranks[k] - prev)
            prev = ranks[k]
        while len(betti) > 1 and betti[-1] == 0:
            betti.pop()
        return betti

    def global_section_space(self, q: int) -> SubspaceBasis:
        """Kernel of the level-zero differential: the glued sections."""
        return kernel_basis(self.delta_matrix(0, q))


def total_cohomology(complex: SimplicialComplex, n: int, cocycle=None):
    return CechComplex(complex, n, cocycle).total_cohomology()


# ---------------------------------------------------------------------------
# bundled gluing families


def _power(g: GroupElement, k: int) -> GroupElement:
    if k == 0:
        return identity_element(g.n)
    base = g if k > 0 else g.inverse_element()
    out = base
    for _ in range(abs(k) - 1):
        out = out * base
    return out


def hexagon_holonomy_cocycle(complex: SimplicialComplex) -> TransitionCocycle:
    """Identity on all edges except the closing one, which twists by diag(i, -i)."""
    from .scalars import I as IMAG, MINUS_I

    g = GroupElement([[IMAG, ZERO], [ZERO, MINUS_I]])
    seam = (0, 5)
    return TransitionCocycle(complex, 2, {seam: g})


def coboundary_cocycle(complex: SimplicialComplex, n: int) -> TransitionCocycle:
    """Vertexwise potentials h, glued by g(a, b) = h_a^{-1} h_b; always valid."""
    from .lie import special_unitary_samples

    samples = special_unitary_samples(n)
    h = {v: samples[v % len(samples)] for v in range(len(complex.vertices))}
    values = {}
    for a, b in complex.p_simplices(1):
        values[(a, b)] = h[a].inverse_element() * h[b]
    return TransitionCocycle(complex, n, values)


def torus_holonomy_cocycle(complex: SimplicialComplex, n: int = 2) -> TransitionCocycle:
    """Commuting diagonal holonomies along the two grid directions."""
    from .scalars import I as IMAG, MINUS_I
    from .simplicial import torus_displacement

    if n != 2:
        raise ValueError("the bundled torus holonomy family is built for size two")
    A = GroupElement([[IMAG, ZERO], [ZERO, MINUS_I]])
    B = GroupElement([[MINUS_I, ZERO], [ZERO, IMAG]])
    values = {}
    for a, b in complex.p_simplices(1):
        d1, d2 = torus_displacement(complex, a, b)
        values[(a, b)] = _power(A, d1) * _power(B, d2)
    return TransitionCocycle(complex, n, values)


def bundled_cocycle(name: str, complex: SimplicialComplex, n: int) -> TransitionCocycle:
    if name == "trivial":
        return trivial_cocycle(complex, n)
    if name == "holonomy-i":
        if complex.metadata.get("name") != "s1-hexagon" or n != 2:
            raise ValueError("holonomy-i is the hexagon family at size two")
        return hexagon_holonomy_cocycle(complex)
    if name == "coboundary-mix":
        return coboundary_cocycle(complex, n)
    if name == "torus-shift":
        if complex.metadata.get("name") != "t2-nine":
            raise ValueError("torus-shift is the nine-vertex torus family")
        return torus_holonomy_cocycle(complex, n)
    raise ValueError("unknown bundled cocycle %r" % name)
