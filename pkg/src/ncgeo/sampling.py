"""Seeded random data for property trials.

All randomness in the package and its verification suite flows through
Python's ``random.Random`` seeded explicitly, with scalar coefficients drawn
from the small integer box -3..3 on both the real and imaginary axis; a
fixed seed therefore reproduces every trial bit for bit on any platform.
The seed contract is per package, not portable across implementations.
"""

from __future__ import annotations

import random

from .cech import CechCochain, CechComplex
from .ncforms import NCForm
from .scalars import GaussianRational, gr


def random_scalar(rng: random.Random) -> GaussianRational:
    return gr(rng.randint(-3, 3), rng.randint(-3, 3))


def random_nonzero_scalar(rng: random.Random) -> GaussianRational:
    while True:
        z = random_scalar(rng)
        if z:
            return z


def random_matrix_rows(rng: random.Random, n: int):
    return tuple(tuple(random_scalar(rng) for _ in range(n)) for _ in range(n))


def random_form(rng: random.Random, n: int, degree: int, supports: int = 3) -> NCForm:
    from itertools import combinations

    d = n * n - 1
    subsets = list(combinations(range(d), degree))
    comps = {}
    for S in rng.sample(subsets, min(supports, len(subsets))):
        comps[S] = random_matrix_rows(rng, n)
    return NCForm(n, degree, comps)


def random_cochain(
    cech: CechComplex, p: int, q: int, rng: random.Random, supports: int = 4
) -> CechCochain:
    """Sparse random cochain in the (p, q) slot of a chart complex."""
    dim = cech.slot_dim(p, q)
    if dim == 0:
        return CechCochain(cech.complex, cech.n, p, q)
    vec = {}
    for idx in rng.sample(range(dim), min(supports, dim)):
        vec[idx] = random_nonzero_scalar(rng)
    return cech.vector_to_cochain(p, q, vec)
