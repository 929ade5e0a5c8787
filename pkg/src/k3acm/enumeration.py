"""Complete enumeration of lattice classes in degree slices.

For an integral class ``A`` with ``A² > 0`` the set ``{B : A·B = k}`` is a
translate of ``A^⊥``, on which minus the intersection form is positive
definite. Any bound on ``-(B - C)²`` for a rational centre ``C`` in the same
slice therefore cuts out an ellipsoid with finitely many lattice points. The
points are enumerated Fincke–Pohst style on an LLL-reduced basis of ``A^⊥``.
Floating point is used only to prune the search tree (with slack); every
returned class is re-verified with exact integers by the caller-facing
functions.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import LatticeError, LatticeSpec, Vector, signature

_SLACK = 1e-7


@dataclass(frozen=True)
class SliceQuery:
    """Classes ``D`` with ``degree_class·D = degree`` and a condition on ``D²``.

    Either ``square`` (exact) or ``square_min`` must be given; ``square_max`` is
    optional. ``constraints`` are extra ``(class, required pairing)`` pairs.
    """

    degree_class: Vector
    degree: int
    square: int | None = None
    square_min: int | None = None
    square_max: int | None = None
    constraints: tuple[tuple[Vector, int], ...] = ()

    def bounds(self) -> tuple[int, int | None]:
        if self.square is not None:
            return self.square, self.square
        if self.square_min is None:
            raise LatticeError("slice needs a lower bound on the square to be finite")
        return self.square_min, self.square_max

    def accepts(self, lat: LatticeSpec, v: Sequence[int], vsq: int | None = None) -> bool:
        lo, hi = self.bounds()
        sq = lat.pair(v, v) if vsq is None else vsq
        if sq < lo or (hi is not None and sq > hi):
            return False
        if lat.pair(self.degree_class, v) != self.degree:
            return False
        return all(lat.pair(c, v) == val for c, val in self.constraints)


@dataclass(frozen=True)
class OrthogonalSlice:
    """Integral basis of ``H^⊥`` (columns given as lattice vectors) and its Gram matrix."""

    basis: tuple[Vector, ...]
    gram: tuple[tuple[int, ...], ...]
    scale: int = 1


class _SliceData:
    """Cached geometry of the slices ``{B : A·B = k}`` for one linear form."""

    def __init__(self, lat: LatticeSpec, form: tuple[int, ...]):
        n = lat.rank
        self.form = form
        self.content, U = _column_reduce(form)
        self.b0_dir = [U[r][0] for r in range(n)]
        kernel = [[U[r][c] for r in range(n)] for c in range(1, n)]
        m = len(kernel)
        G = lat.gram
        gk = [lat.apply(col) for col in kernel]
        Q = [[-sum(a * b for a, b in zip(kernel[i], gk[j])) for j in range(m)] for i in range(m)]
        M = lll_gram(Q)
        cols = [[sum(kernel[t][r] * M[t][c] for t in range(m)) for r in range(n)] for c in range(m)]
        self.cols = cols
        self.gcols = [lat.apply(col) for col in cols]
        self.q = [[-sum(a * b for a, b in zip(cols[i], self.gcols[j])) for j in range(m)] for i in range(m)]
        self.q_inv = _invert(self.q) if m else []
        self.dim = m
        self.diag, self.mu = _fp_decomposition(self.q)
        self.gram = G


def _column_reduce(h: Sequence[int]) -> tuple[int, list[list[int]]]:
    """Unimodular U with ``h·U = (g, 0, ..., 0)``, ``g = gcd(h) ≥ 0``."""
    n = len(h)
    w = list(h)
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst, src, c):
        w[dst] += c * w[src]
        for row in U:
            row[dst] += c * row[src]

    def swap(i, j):
        w[i], w[j] = w[j], w[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    while True:
        nz = [(abs(w[i]), i) for i in range(n) if w[i]]
        if not nz:
            break
        _, p = min(nz)
        swap(0, p)
        done = True
        for j in range(1, n):
            if w[j]:
                colop(j, 0, -(w[j] // w[0]))
                done = done and w[j] == 0
        if done:
            break
    if w[0] < 0:
        for row in U:
            row[0] = -row[0]
        w[0] = -w[0]
    return w[0], U


def _invert(q: list[list[int]]) -> list[list[Fraction]]:
    n = len(q)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(q)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def _gso(gram: list[list[int]]):
    n = len(gram)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bn = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(gram[i][j]) - sum((mu[j][k] * mu[i][k] * bn[k] for k in range(j)), Fraction(0))
            mu[i][j] = s / bn[j]
        bn[i] = gram[i][i] - sum((mu[i][k] ** 2 * bn[k] for k in range(i)), Fraction(0))
        if bn[i] <= 0:
            raise LatticeError("form is not positive definite")
    return mu, bn


def lll_gram(q: list[list[int]], delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """LLL reduction of a positive definite integral Gram matrix.

    Returns a unimodular ``M`` (columns are the reduced basis in old
    coordinates); exact rational arithmetic throughout.
    """
    n = len(q)
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return M
    g = [row[:] for row in q]

    def col_add(dst, src, c):
        # b_dst += c * b_src
        for row in M:
            row[dst] += c * row[src]
        for t in range(n):
            g[dst][t] += c * g[src][t]
        for t in range(n):
            g[t][dst] += c * g[t][src]

    def col_swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    mu, bn = _gso(g)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                col_add(k, j, -r)
                for l in range(j):
                    mu[k][l] -= r * mu[j][l]
                mu[k][j] -= r
        if bn[k] >= (delta - mu[k][k - 1] ** 2) * bn[k - 1]:
            k += 1
        else:
            col_swap(k, k - 1)
            mu, bn = _gso(g)
            k = max(k - 1, 1)
    return M


def _fp_decomposition(q: list[list[int]]):
    """``q(x) = Σ d_i (x_i + Σ_{j>i} m_ij x_j)²`` with float coefficients."""
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    d = [Fraction(0)] * n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i] - sum((m[k][i] ** 2 * d[k] for k in range(i)), Fraction(0))
        for j in range(i + 1, n):
            m[i][j] = (a[i][j] - sum((m[k][i] * m[k][j] * d[k] for k in range(i)), Fraction(0))) / d[i]
    return [float(x) for x in d], [[float(x) for x in row] for row in m]


def _slice_data(lat: LatticeSpec, A: Sequence[int]) -> _SliceData:
    form = tuple(lat.apply(A))
    key = ("slice", form)
    data = lat._cache.get(key)
    if data is None:
        if lat.pair(A, A) <= 0:
            raise LatticeError("degree class must have positive square")
        data = _SliceData(lat, form)
        lat._cache[key] = data
    return data


def slice_points(lat: LatticeSpec, A: Sequence[int], k: int,
                 center: Sequence[Fraction], radius) -> list[tuple[Vector, tuple[int, ...]]]:
    """Superset of ``{B : A·B = k, -(B - center)² ≤ radius}`` as ``(B, gram·B)`` pairs.

    ``center`` must satisfy ``A·center = k``. Every class with the stated
    property is returned; a few extra classes just outside the ellipsoid may
    appear, so callers filter exactly. Results are not sorted.
    """
    data = _slice_data(lat, A)
    radius = Fraction(radius)
    if radius < 0:
        return []
    g = data.content
    if g == 0 or k % g:
        return []
    n = lat.rank
    form = data.form
    center = [Fraction(x) for x in center]
    if sum(f * c for f, c in zip(form, center)) != k:
        raise ValueError("centre does not lie in the slice")
    b0 = [x * (k // g) for x in data.b0_dir]
    gb0 = lat.apply(b0)
    m = data.dim
    if m == 0:
        w = [b - c for b, c in zip(b0, center)]
        val = -sum(wi * gi for wi, gi in zip(w, lat.apply(w)))
        return [(tuple(b0), tuple(gb0))] if val <= radius else []
    w = [b - c for b, c in zip(b0, center)]
    rhs = [sum((gc[r] * w[r] for r in range(n) if w[r]), Fraction(0)) for gc in data.gcols]
    c = [sum((data.q_inv[i][j] * rhs[j] for j in range(m)), Fraction(0)) for i in range(m)]
    cf = [float(x) for x in c]
    R = float(radius) * (1 + _SLACK) + _SLACK
    out: list[tuple[Vector, tuple[int, ...]]] = []
    cols, gcols, diag, mu = data.cols, data.gcols, data.diag, data.mu
    x = [0.0] * m

    def rec(i: int, rem: float, B: list[int], GB: list[int]):
        ctr = cf[i]
        for j in range(i + 1, m):
            ctr -= mu[i][j] * x[j]
        span = math.sqrt(max(rem, 0.0) / diag[i])
        lo = math.ceil(ctr - span - 1e-9)
        hi = math.floor(ctr + span + 1e-9)
        if lo > hi:
            return
        col, gcol = cols[i], gcols[i]
        Bl = [b + lo * v for b, v in zip(B, col)]
        GBl = [b + lo * v for b, v in zip(GB, gcol)]
        for t in range(lo, hi + 1):
            xi = t - cf[i]
            x[i] = xi
            z = xi
            for j in range(i + 1, m):
                z += mu[i][j] * x[j]
            r2 = rem - diag[i] * z * z
            if r2 >= -1e-9 * (1 + R):
                if i == 0:
                    out.append((tuple(Bl), tuple(GBl)))
                else:
                    rec(i - 1, r2, Bl, GBl)
            Bl = [b + v for b, v in zip(Bl, col)]
            GBl = [b + v for b, v in zip(GBl, gcol)]

    rec(m - 1, R, b0, gb0)
    return out


def enumerate_slice(lat: LatticeSpec, q: SliceQuery) -> list[Vector]:
    """All classes in the slice described by ``q``, sorted lexicographically."""
    H = lat.check(q.degree_class)
    h2 = lat.pair(H, H)
    if h2 <= 0:
        raise LatticeError("degree class must have positive square")
    lo, hi = q.bounds()
    d = q.degree
    t = Fraction(d, h2)
    center = [t * x for x in H]
    radius = t * d - lo
    found = []
    for B, GB in slice_points(lat, H, d, center, radius):
        sq = sum(a * b for a, b in zip(B, GB))
        if sq < lo or (hi is not None and sq > hi):
            continue
        if all(sum(a * b for a, b in zip(c, GB)) == val for c, val in q.constraints):
            found.append(B)
    found.sort()
    return found


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("K3ACM_THREADS", "1")))
    except ValueError:
        return 1


def _slice_job(args):
    lat, q = args
    return enumerate_slice(lat, q)


def enumerate_up_to_degree(lat: LatticeSpec, H: Sequence[int], d_max: int, *,
                           square: int | None = None, square_min: int | None = None,
                           square_max: int | None = None, workers: int | None = None) -> list[Vector]:
    """Union of the slices of degree ``1..d_max``; sorted, no duplicates.

    Slices are independent, so with ``workers > 1`` (default from
    ``K3ACM_THREADS``) they are computed in separate processes; the merged
    output does not depend on scheduling.
    """
    H = lat.check(H)
    queries = [SliceQuery(H, d, square, square_min, square_max) for d in range(1, d_max + 1)]
    workers = _threads() if workers is None else workers
    if workers > 1 and len(queries) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(queries))) as pool:
            parts = list(pool.map(_slice_job, [(lat, q) for q in queries]))
    else:
        parts = [enumerate_slice(lat, q) for q in queries]
    return sorted(v for part in parts for v in part)


def orthogonal_slice_gram(lat: LatticeSpec, H: Sequence[int]) -> OrthogonalSlice:
    """Reduced integral basis and Gram matrix of the negative definite lattice ``H^⊥``."""
    H = lat.check(H)
    if lat.pair(H, H) <= 0:
        raise LatticeError("H must have positive square")
    data = _slice_data(lat, H)
    basis = tuple(tuple(c) for c in data.cols)
    gram = tuple(tuple(-x for x in row) for row in data.q)
    m = len(gram)
    if m and signature(gram) != (0, m, 0):
        raise LatticeError("orthogonal complement is not negative definite")
    return OrthogonalSlice(basis, gram, 1)
