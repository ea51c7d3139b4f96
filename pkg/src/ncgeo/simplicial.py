"""Simplicial complexes, Whitney forms and piecewise-polynomial forms.

The base space of every computation is a finite simplicial complex with a
fixed vertex order (the order of the ``vertices`` tuple), which orients all
cochain signs.  Whitney forms -- one coefficient per p-simplex -- are the
finite de Rham model; their differential is the simplicial coboundary.

Piecewise-polynomial ("Sullivan") forms appear where products with
barycentric coordinates are required, since Whitney forms are not closed
under multiplication.  On a simplex (v_0 < ... < v_p) a polynomial form is
stored in the coordinates ``l_1 .. l_p`` of all vertices except the first;
``l_{v_0} = 1 - sum`` is eliminated, so the representation per simplex is
canonical and face restriction is exact.  A term is keyed by

    (mono, dset):  mono = exponent tuple over positions 1..p,
                   dset = increasing tuple of positions carrying dl

and the open-star structure means multiplying by a vertex coordinate and
extending by zero is again face compatible.

The three bundled complexes -- the six-vertex circle, the octahedron sphere
and the nine-vertex torus -- live at the bottom of the module.
"""

from __future__ import annotations

from itertools import combinations

from .scalars import GaussianRational, ONE, ZERO, gr
from .sparse import SparseMatrix, rank


class SimplicialComplex:
    """Finite complex: ordered vertex labels plus a face-closed simplex set.

    Simplices are stored as sorted tuples of vertex indices into the label
    order.  Instances are immutable; stars are memoized.
    """

    def __init__(self, vertices, simplices, metadata=None):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        simp = set()
        for s in simplices:
            t = tuple(sorted(s))
            if len(set(t)) != len(t):
                raise ValueError("degenerate simplex %r" % (s,))
            if t and not (0 <= t[0] and t[-1] < len(self.vertices)):
                raise ValueError("simplex %r out of vertex range" % (s,))
            if t:
                simp.add(t)
        self.simplices = frozenset(simp)
        for s in self.simplices:
            for k in range(1, len(s)):
                for f in combinations(s, k):
                    if f not in self.simplices:
                        raise ValueError("complex is not closed under faces at %r" % (f,))
        self.metadata = metadata or {}
        self._stars = {}
        self._by_dim = {}

    @classmethod
    def from_maximal(cls, vertices, maximal, metadata=None):
        """Close the given simplices under faces."""
        simp = set()
        for s in maximal:
            t = tuple(sorted(s))
            for k in range(1, len(t) + 1):
                simp.update(combinations(t, k))
        return cls(vertices, simp, metadata)

    @classmethod
    def from_labels(cls, vertices, maximal_labels, metadata=None):
        index = {v: i for i, v in enumerate(vertices)}
        maximal = [[index[v] for v in s] for s in maximal_labels]
        return cls.from_maximal(vertices, maximal, metadata)

    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def p_simplices(self, p: int):
        cached = self._by_dim.get(p)
        if cached is None:
            cached = sorted(s for s in self.simplices if len(s) == p + 1)
            self._by_dim[p] = cached
        return cached

    def has(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self.simplices

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.vertices == other.vertices and self.simplices <= other.simplices

    def label(self, simplex):
        return tuple(self.vertices[i] for i in simplex)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertices == other.vertices and self.simplices == other.simplices

    def __repr__(self):
        return "SimplicialComplex(%d vertices, %d simplices, dim %d)" % (
            len(self.vertices),
            len(self.simplices),
            self.dim(),
        )


def star(k: SimplicialComplex, sigma) -> SimplicialComplex:
    """Closed star: all simplices containing sigma, plus their faces.

    Vertex stars model the chart of the good cover at that vertex, and the
    star of a spanned simplex models the chart intersection; every star is a
    cone on sigma, hence has the cohomology of a point.
    """
    key = tuple(sorted(sigma))
    if key not in k.simplices:
        raise ValueError("simplex %r is not in the complex" % (sigma,))
    cached = k._stars.get(key)
    if cached is not None:
        return cached
    sset = set(key)
    cofaces = [s for s in k.simplices if sset.issubset(s)]
    simp = set()
    for s in cofaces:
        for t in range(1, len(s) + 1):
            simp.update(combinations(s, t))
    out = SimplicialComplex(k.vertices, simp)
    k._stars[key] = out
    return out


class WhitneyForm:
    """Degree-p form with one Q(i) coefficient per p-simplex."""

    __slots__ = ("complex", "degree", "coefficients")

    def __init__(self, complex: SimplicialComplex, degree: int, coefficients=None):
        self.complex = complex
        self.degree = degree
        coeffs = {}
        if coefficients:
            for s, v in coefficients.items():
                t = tuple(sorted(s))
                if len(t) != degree + 1:
                    raise ValueError("simplex %r has the wrong dimension" % (s,))
                if t not in complex.simplices:
                    raise ValueError("simplex %r is not in the complex" % (s,))
                if v:
                    coeffs[t] = v
        self.coefficients = coeffs

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other):
        if not isinstance(other, WhitneyForm):
            return NotImplemented
        if self.complex.simplices != other.complex.simplices:
            return False
        if not self.coefficients and not other.coefficients:
            return True
        return self.degree == other.degree and self.coefficients == other.coefficients

    def __add__(self, other):
        out = dict(self.coefficients)
        for s, v in other.coefficients.items():
            nv = out.get(s, ZERO) + v
            if nv:
                out[s] = nv
            else:
                out.pop(s, None)
        w = WhitneyForm.__new__(WhitneyForm)
        w.complex, w.degree, w.coefficients = self.complex, self.degree, out
        return w

    def scale(self, c):
        w = WhitneyForm.__new__(WhitneyForm)
        w.complex, w.degree = self.complex, self.degree
        w.coefficients = {s: c * v for s, v in self.coefficients.items()} if c else {}
        return w

    def __repr__(self):
        return "WhitneyForm(degree=%d, supports=%d)" % (self.degree, len(self.coefficients))


def whitney_d(w: WhitneyForm) -> WhitneyForm:
    """Simplicial coboundary: (dw)(t) = sum of signed facet coefficients."""
    out = {}
    for tau in w.complex.p_simplices(w.degree + 1):
        acc = ZERO
        for i in range(len(tau)):
            facet = tau[:i] + tau[i + 1 :]
            v = w.coefficients.get(facet)
            if v is not None:
                acc = acc + v if i % 2 == 0 else acc - v
        if acc:
            out[tau] = acc
    return WhitneyForm(w.complex, w.degree + 1, out)


def coboundary_matrix(k: SimplicialComplex, p: int) -> SparseMatrix:
    """Matrix of the coboundary from degree p to p + 1."""
    src = k.p_simplices(p)
    dst = k.p_simplices(p + 1)
    dst_index = {s: i for i, s in enumerate(dst)}
    entries = {}
    for ci, s in enumerate(src):
        w = WhitneyForm(k, p, {s: ONE})
        dw = whitney_d(w)
        for t, v in dw.coefficients.items():
            entries[(dst_index[t], ci)] = v
    return SparseMatrix(len(dst), len(src), entries)


def derham_cohomology(k: SimplicialComplex):
    """Betti numbers of the Whitney complex over Q(i)."""
    dims = []
    p = 0
    while True:
        cnt = len(k.p_simplices(p))
        if cnt == 0:
            break
        dims.append(cnt)
        p += 1
    betti = []
    prev_rank = 0
    for p, cnt in enumerate(dims):
        if p + 1 < len(dims):
            r = rank(coboundary_matrix(k, p))
        else:
            r = 0
        betti.append(cnt - r - prev_rank)
        prev_rank = r
    return betti


# ---------------------------------------------------------------------------
# polynomial forms in barycentric coordinates
#
# term rewrites below are pure: they take one (mono, dset) term and return a
# list of (mono', dset', scalar) contributions, so scalar- and matrix-valued
# forms share them.


def _wedge_positions(d1, d2):
    """Sign and merged tuple for two disjoint sorted position tuples."""
    if set(d1) & set(d2):
        return 0, ()
    inv = 0
    for a in d1:
        for b in d2:
            if a > b:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(d1 + d2))


def _one_minus_sum_power(p: int, e: int):
    """Expansion of (1 - l_1 - ... - l_p)^e as [(mono, int coeff)]."""
    terms = {(0,) * p: 1}
    base = {(0,) * p: 1}
    for j in range(1, p + 1):
        mono = [0] * p
        mono[j - 1] = 1
        base[tuple(mono)] = -1
    for _ in range(e):
        nxt = {}
        for m1, c1 in terms.items():
            for m2, c2 in base.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                nxt[m] = nxt.get(m, 0) + c1 * c2
        terms = {m: c for m, c in nxt.items() if c}
    return list(terms.items())


def _eliminate_position_zero(mono_ext, dset_ext, q: int):
    """Rewrite a term over positions 0..q into positions 1..q.

    Position zero carries l_0 = 1 - sum and dl_0 = -sum of the others.
    Returns [(mono, dset, int coeff)].
    """
    e0 = mono_ext[0]
    body = tuple(mono_ext[1:])
    out = []
    heads = _one_minus_sum_power(q, e0) if e0 else [((0,) * q, 1)]
    if 0 in dset_ext:
        rest = tuple(d for d in dset_ext if d != 0)
        dparts = []
        for j in range(1, q + 1):
            if j in rest:
                continue
            sign, merged = _wedge_positions((j,), rest)
            if sign:
                dparts.append((merged, -sign))
    else:
        dparts = [(dset_ext, 1)]
    for hm, hc in heads:
        for dd, dc in dparts:
            c = hc * dc
            if c:
                out.append((tuple(a + b for a, b in zip(hm, body)), dd, c))
    return out


def _restrict_term(sigma, tau, mono, dset):
    """Restriction of one term on sigma to the face tau; [(mono', dset', int)]."""
    p = len(sigma) - 1
    q = len(tau) - 1
    tau_set = set(tau)
    keep_pos = {}
    for j in range(1, p + 1):
        v = sigma[j]
        if v in tau_set:
            keep_pos[j] = tau.index(v)  # 0-based position inside tau
    for j in range(1, p + 1):
        if j not in keep_pos and (mono[j - 1] or j in dset):
            return []
    if sigma[0] in tau_set:
        # first vertex survives as the eliminated one; straight re-index
        new_mono = [0] * q
        new_dset = []
        for j in range(1, p + 1):
            tp = keep_pos.get(j)
            if tp is None:
                continue
            if mono[j - 1]:
                new_mono[tp - 1] = mono[j - 1]
            if j in dset:
                new_dset.append(tp)
        sign, merged = _sort_dset(new_dset, dset, keep_pos)
        return [(tuple(new_mono), merged, sign)] if sign else []
    # first vertex dropped: land on extended positions 0..q, then eliminate
    mono_ext = [0] * (q + 1)
    dlist = []
    for j in range(1, p + 1):
        tp = keep_pos.get(j)
        if tp is None:
            continue
        mono_ext[tp] = mono[j - 1]
        if j in dset:
            dlist.append(tp)
    sign, merged = _sort_dset(dlist, dset, keep_pos)
    if not sign:
        return []
    return [
        (m, d, sign * c)
        for m, d, c in _eliminate_position_zero(tuple(mono_ext), merged, q)
    ]


def _sort_dset(new_positions, old_dset, keep_pos):
    """Sign of re-sorting dl factors after a position renaming.

    The renaming j -> keep_pos[j] is monotone on the kept positions, so the
    order is preserved and the sign is one; kept for clarity and safety.
    """
    seq = list(new_positions)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                seq[i], seq[j] = seq[j], seq[i]
                sign = -sign
    if len(set(seq)) != len(seq):
        return 0, ()
    return sign, tuple(seq)


def _d_term(p: int, mono, dset):
    """Exterior derivative of one term; [(mono', dset', int coeff)]."""
    out = []
    for j in range(1, p + 1):
        e = mono[j - 1]
        if not e or j in dset:
            continue
        sign, merged = _wedge_positions((j,), dset)
        if not sign:
            continue
        nm = list(mono)
        nm[j - 1] = e - 1
        out.append((tuple(nm), merged, sign * e))
    return out


def _lambda_term(p: int, pos0: int, mono, dset):
    """Multiply one term by the coordinate of the vertex at position pos0.

    pos0 = 0 means the eliminated first vertex, i.e. 1 - sum of the others.
    """
    if pos0 == 0:
        out = [(mono, dset, 1)]
        for j in range(1, p + 1):
            nm = list(mono)
            nm[j - 1] += 1
            out.append((tuple(nm), dset, -1))
        return out
    nm = list(mono)
    nm[pos0 - 1] += 1
    return [(tuple(nm), dset, 1)]


def _whitney_terms(sigma, tau):
    """The degree-r Whitney basis form of tau expressed on sigma >= tau.

    W(tau) = r! sum_i (-1)^i l_{u_i} dl_{u_0} ^ .. ^ (skip i) .. ^ dl_{u_r}.
    Returns {(mono, dset): int coeff}.
    """
    p = len(sigma) - 1
    r = len(tau) - 1
    pos = {v: i for i, v in enumerate(sigma)}
    upos = [pos[u] for u in tau]

    def lam(j):
        # coordinate at extended position j as [(mono, coeff)]
        if j == 0:
            out = [((0,) * p, 1)]
            for t in range(1, p + 1):
                m = [0] * p
                m[t - 1] = 1
                out.append((tuple(m), -1))
            return out
        m = [0] * p
        m[j - 1] = 1
        return [(tuple(m), 1)]

    def dlam(j):
        if j == 0:
            return [((t,), -1) for t in range(1, p + 1)]
        return [((j,), 1)]

    fact = 1
    for t in range(2, r + 1):
        fact *= t
    acc = {}
    for i in range(r + 1):
        sign_i = -1 if i & 1 else 1
        factors = [dlam(upos[t]) for t in range(r + 1) if t != i]
        combos = [((), 1)]
        for fac in factors:
            nxt = []
            for dset, c in combos:
                for dd, cc in fac:
                    s, merged = _wedge_positions(dset, dd)
                    if s:
                        nxt.append((merged, c * cc * s))
            combos = nxt
        for lm, lc in lam(upos[i]):
            for dset, c in combos:
                coeff = sign_i * lc * c * fact
                if coeff:
                    key = (lm, dset)
                    acc[key] = acc.get(key, 0) + coeff
    return {k: v for k, v in acc.items() if v}


class SullivanForm:
    """Face-compatible polynomial form of bounded degree, one chart per simplex."""

    __slots__ = ("complex", "degree", "cap", "per_simplex")

    def __init__(self, complex: SimplicialComplex, degree: int, cap: int, per_simplex=None):
        self.complex = complex
        self.degree = degree
        self.cap = cap
        data = {}
        if per_simplex:
            for s, terms in per_simplex.items():
                t = tuple(sorted(s))
                if t not in complex.simplices:
                    raise ValueError("simplex %r is not in the complex" % (s,))
                clean = {k: v for k, v in terms.items() if v}
                if clean:
                    data[t] = clean
        self.per_simplex = data

    def terms(self, simplex):
        return self.per_simplex.get(tuple(sorted(simplex)), {})

    def is_zero(self) -> bool:
        return not self.per_simplex

    def __eq__(self, other):
        if not isinstance(other, SullivanForm):
            return NotImplemented
        if self.complex.simplices != other.complex.simplices:
            return False
        if not self.per_simplex and not other.per_simplex:
            return True
        return self.degree == other.degree and self.per_simplex == other.per_simplex

    def __add__(self, other):
        if self.degree != other.degree and self.per_simplex and other.per_simplex:
            raise ValueError("cannot add polynomial forms of different degree")
        out = {s: dict(t) for s, t in self.per_simplex.items()}
        for s, terms in other.per_simplex.items():
            cur = out.setdefault(s, {})
            for k, v in terms.items():
                nv = cur.get(k, ZERO) + v
                if nv:
                    cur[k] = nv
                else:
                    cur.pop(k, None)
            if not cur:
                del out[s]
        f = SullivanForm.__new__(SullivanForm)
        f.complex = self.complex
        f.degree = self.degree if self.per_simplex else other.degree
        f.cap = max(self.cap, other.cap)
        f.per_simplex = out
        return f

    def scale(self, c):
        f = SullivanForm.__new__(SullivanForm)
        f.complex, f.degree, f.cap = self.complex, self.degree, self.cap
        if not c:
            f.per_simplex = {}
        else:
            f.per_simplex = {
                s: {k: c * v for k, v in terms.items()}
                for s, terms in self.per_simplex.items()
            }
        return f

    def polynomial_degree(self) -> int:
        out = 0
        for terms in self.per_simplex.values():
            for mono, _ in terms:
                out = max(out, sum(mono))
        return out

    def validate(self):
        """Check the declared cap and exact face compatibility."""
        if self.polynomial_degree() > self.cap:
            raise ValueError("polynomial degree exceeds the declared cap")
        for s in self.complex.simplices:
            if len(s) == 1:
                continue
            terms = self.per_simplex.get(s, {})
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                restricted = {}
                for (mono, dset), v in terms.items():
                    for nm, nd, c in _restrict_term(s, face, mono, dset):
                        key = (nm, nd)
                        nv = restricted.get(key, ZERO) + gr(c) * v
                        if nv:
                            restricted[key] = nv
                        else:
                            restricted.pop(key, None)
                stored = self.per_simplex.get(face, {})
                if restricted != stored:
                    raise ValueError(
                        "face restriction mismatch from %r to %r" % (s, face)
                    )
        return True

    def evaluate_function(self, simplex, point):
        """Value of a 0-form at barycentric coordinates (list over the simplex).

        ``point`` lists the coordinates of every vertex of the simplex, in
        simplex order, summing to one.
        """
        if self.degree != 0:
            raise ValueError("pointwise evaluation is for functions only")
        t = tuple(sorted(simplex))
        total = ZERO
        for (mono, dset), v in self.terms(t).items():
            if dset:
                continue
            val = v
            for j, e in enumerate(mono):
                for _ in range(e):
                    val = val * point[j + 1]
            total = total + val
        return total

    def __repr__(self):
        return "SullivanForm(degree=%d, cap=%d, charts=%d)" % (
            self.degree,
            self.cap,
            len(self.per_simplex),
        )


def whitney_to_sullivan(w: WhitneyForm) -> SullivanForm:
    """Embed a Whitney form as a polynomial form of cap one."""
    data = {}
    for s in w.complex.simplices:
        acc = {}
        for tau, coeff in w.coefficients.items():
            if not set(tau).issubset(s):
                continue
            for key, c in _whitney_terms(s, tau).items():
                nv = acc.get(key, ZERO) + gr(c) * coeff
                if nv:
                    acc[key] = nv
                else:
                    acc.pop(key, None)
        if acc:
            data[s] = acc
    return SullivanForm(w.complex, w.degree, 1, data)


def sullivan_d(s: SullivanForm) -> SullivanForm:
    """Exterior derivative, chart by chart."""
    data = {}
    for simplex, terms in s.per_simplex.items():
        p = len(simplex) - 1
        acc = {}
        for (mono, dset), v in terms.items():
            for nm, nd, c in _d_term(p, mono, dset):
                key = (nm, nd)
                nv = acc.get(key, ZERO) + gr(c) * v
                if nv:
                    acc[key] = nv
                else:
                    acc.pop(key, None)
        if acc:
            data[simplex] = acc
    return SullivanForm(s.complex, s.degree + 1, s.cap, data)


def sullivan_restrict(s: SullivanForm, sub: SimplicialComplex) -> SullivanForm:
    """Keep the charts living on a subcomplex."""
    if not sub.is_subcomplex_of(s.complex):
        raise ValueError("restriction target is not a subcomplex")
    data = {k: dict(v) for k, v in s.per_simplex.items() if k in sub.simplices}
    return SullivanForm(sub, s.degree, s.cap, data)


def barycentric_multiply(alpha, s: SullivanForm) -> SullivanForm:
    """Multiply by the barycentric coordinate of a vertex, extending by zero.

    The coordinate vanishes outside the star of the vertex, so charts on
    simplices that do not contain it are zero and the result stays face
    compatible.  The polynomial cap grows by one.
    """
    if isinstance(alpha, str):
        alpha = s.complex.vertices.index(alpha)
    data = {}
    for simplex, terms in s.per_simplex.items():
        if alpha not in simplex:
            continue
        p = len(simplex) - 1
        pos0 = simplex.index(alpha)
        acc = {}
        for (mono, dset), v in terms.items():
            for nm, nd, c in _lambda_term(p, pos0, mono, dset):
                key = (nm, nd)
                nv = acc.get(key, ZERO) + gr(c) * v
                if nv:
                    acc[key] = nv
                else:
                    acc.pop(key, None)
        if acc:
            data[simplex] = acc
    return SullivanForm(s.complex, s.degree, s.cap + 1, data)


# ---------------------------------------------------------------------------
# bundled complexes


def hexagon_circle() -> SimplicialComplex:
    verts = ["v%d" % i for i in range(6)]
    edges = [[i, (i + 1) % 6] for i in range(6)]
    return SimplicialComplex.from_maximal(verts, edges, {"name": "s1-hexagon"})


def octahedron_sphere() -> SimplicialComplex:
    verts = ["v%d" % i for i in range(6)]
    faces = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 1, 4],
        [5, 1, 2],
        [5, 2, 3],
        [5, 3, 4],
        [5, 1, 4],
    ]
    return SimplicialComplex.from_maximal(verts, faces, {"name": "s2-octahedron"})


def nine_vertex_torus() -> SimplicialComplex:
    """The standard nine-vertex torus triangulation on a 3 x 3 grid."""
    coords = {}
    verts = []
    for i in range(3):
        for j in range(3):
            coords[3 * i + j] = (i, j)
            verts.append("t%d%d" % (i, j))
    faces = []
    for i in range(3):
        for j in range(3):
            a = 3 * i + j
            b = 3 * ((i + 1) % 3) + j
            c = 3 * ((i + 1) % 3) + (j + 1) % 3
            d = 3 * i + (j + 1) % 3
            faces.append([a, b, c])
            faces.append([a, d, c])
    return SimplicialComplex.from_maximal(
        verts, faces, {"name": "t2-nine", "grid_coords": coords}
    )


BUNDLED_NAMES = ("s1-hexagon", "s2-octahedron", "t2-nine")


def bundled_complex(name: str) -> SimplicialComplex:
    if name == "s1-hexagon":
        return hexagon_circle()
    if name == "s2-octahedron":
        return octahedron_sphere()
    if name == "t2-nine":
        return nine_vertex_torus()
    raise ValueError("unknown bundled complex %r" % name)


def torus_displacement(k: SimplicialComplex, u: int, v: int):
    """Integer lift of the grid step along an ordered torus edge.

    Each edge of the nine-vertex torus is one canonical step (1,0), (0,1) or
    (1,1) up to direction; the lifts of the three edges of any triangle sum
    to zero exactly, which is what makes commuting holonomies into a valid
    gluing family.
    """
    coords = k.metadata["grid_coords"]
    cu, cv = coords[u], coords[v]
    diff = ((cv[0] - cu[0]) % 3, (cv[1] - cu[1]) % 3)
    steps = {(1, 0): (1, 0), (0, 1): (0, 1), (1, 1): (1, 1)}
    if diff in steps:
        return steps[diff]
    back = ((-diff[0]) % 3, (-diff[1]) % 3)
    if back in steps:
        s = steps[back]
        return (-s[0], -s[1])
    raise ValueError("vertices %r, %r do not span a torus edge" % (u, v))
