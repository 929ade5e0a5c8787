"""Exact arithmetic on integer lattices.

Classes are plain tuples of Python ints (coordinates in the lattice basis), so
all pairings are exact and never overflow.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

Vector = tuple[int, ...]

MAX_DISCRIMINANT_RANK = 16


class LatticeError(ValueError):
    """Invalid lattice data or an operation outside a lattice's domain."""


class NotTwoElementary(LatticeError):
    """The discriminant group has an invariant factor other than 1 or 2."""

    def __init__(self, factors: Sequence[int]):
        self.factors = list(factors)
        super().__init__(f"not 2-elementary: invariant factors {self.factors}")


@dataclass(frozen=True)
class TwoElementaryInvariants:
    rho: int
    a: int
    delta: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.rho, self.a, self.delta)


@dataclass(frozen=True, eq=False)
class LatticeSpec:
    """A lattice with a labeled basis, Gram matrix and an optional ample class.

    ``classes`` holds named classes (for example ``"X"`` or ``"D1"``); it is
    carried along for convenience and does not take part in equality.
    """

    name: str
    basis: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    ample_ref: Vector | None = None
    k3: bool = False
    classes: dict[str, Vector] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = len(self.gram)
        if len(self.basis) != n:
            raise LatticeError(f"basis has {len(self.basis)} labels but gram has {n} rows")
        for i, row in enumerate(self.gram):
            if len(row) != n:
                raise LatticeError(f"gram row {i} has length {len(row)}, expected {n}")
            for j, x in enumerate(row):
                if not isinstance(x, int) or isinstance(x, bool):
                    raise LatticeError(f"gram[{i}][{j}]={x!r} is not an integer")
        for i in range(n):
            for j in range(i + 1, n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise LatticeError(
                        f"gram is not symmetric: gram[{i}][{j}]={self.gram[i][j]} "
                        f"but gram[{j}][{i}]={self.gram[j][i]}"
                    )
        if self.ample_ref is not None:
            self.check(self.ample_ref)
            if self.pair(self.ample_ref, self.ample_ref) <= 0:
                raise LatticeError("ample_ref must have positive square")
        for label, v in self.classes.items():
            try:
                self.check(v)
            except LatticeError as exc:
                raise LatticeError(f"class {label!r}: {exc}") from None
        if self.k3:
            for i in range(n):
                if self.gram[i][i] % 2:
                    raise LatticeError(f"k3 lattice must be even: gram[{i}][{i}]={self.gram[i][i]}")
            sig = signature(self)
            if sig != (1, n - 1, 0):
                raise LatticeError(f"k3 lattice must be hyperbolic, got signature {sig}")

    @classmethod
    def from_gram(cls, gram: Iterable[Iterable[int]], *, name: str = "lattice",
                  basis: Sequence[str] | None = None, ample_ref: Sequence[int] | None = None,
                  k3: bool = False, classes: dict[str, Sequence[int]] | None = None) -> "LatticeSpec":
        g = tuple(tuple(row) for row in gram)
        labels = tuple(basis) if basis is not None else tuple(f"e{i}" for i in range(len(g)))
        return cls(
            name=name,
            basis=labels,
            gram=g,
            ample_ref=tuple(ample_ref) if ample_ref is not None else None,
            k3=k3,
            classes={k: tuple(v) for k, v in (classes or {}).items()},
        )

    @property
    def rank(self) -> int:
        return len(self.gram)

    def check(self, v: Sequence[int]) -> Vector:
        if len(v) != self.rank:
            raise LatticeError(f"class has {len(v)} coordinates, lattice rank is {self.rank}")
        return tuple(v)

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        n = self.rank
        if len(u) != n or len(v) != n:
            raise LatticeError(f"dimension mismatch: {len(u)}, {len(v)} vs rank {n}")
        g = self.gram
        total = 0
        for i in range(n):
            ui = u[i]
            if ui:
                row = g[i]
                total += ui * sum(row[j] * v[j] for j in range(n) if v[j])
        return total

    def apply(self, v: Sequence[int]) -> list[int]:
        """gram · v, the linear form ``x -> pair(x, v)`` as a coefficient list."""
        return [sum(a * b for a, b in zip(row, v)) for row in self.gram]

    def cls(self, spec: str | Sequence[int]) -> Vector:
        """Resolve a named class or a coordinate sequence."""
        if isinstance(spec, str):
            try:
                return self.classes[spec]
            except KeyError:
                raise LatticeError(f"unknown class name {spec!r}") from None
        return self.check(spec)

    def fingerprint(self) -> str:
        payload = json.dumps([list(r) for r in self.gram], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "basis": list(self.basis),
            "gram": [list(r) for r in self.gram],
            "ample_ref": list(self.ample_ref) if self.ample_ref is not None else None,
            "k3": self.k3,
        }
        if self.classes:
            out["classes"] = {k: list(v) for k, v in self.classes.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, LatticeSpec):
            return NotImplemented
        return (self.name, self.basis, self.gram, self.ample_ref, self.k3) == (
            other.name, other.basis, other.gram, other.ample_ref, other.k3)

    def __hash__(self):
        return hash((self.name, self.basis, self.gram, self.ample_ref, self.k3))

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)


def lattice_from_json(data: dict) -> LatticeSpec:
    """Build a lattice from the JSON file schema; raises LatticeError with a diagnostic."""
    if not isinstance(data, dict):
        raise LatticeError("lattice file must contain a JSON object")
    for key in ("gram", "basis"):
        if key not in data:
            raise LatticeError(f"missing key {key!r}")
    gram = data["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise LatticeError("gram must be a list of lists")
    return LatticeSpec.from_gram(
        gram,
        name=str(data.get("name", "lattice")),
        basis=data["basis"],
        ample_ref=data.get("ample_ref"),
        k3=bool(data.get("k3", False)),
        classes=data.get("classes"),
    )


def load_lattice(path: str | Path) -> LatticeSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeError(f"{path}: invalid JSON ({exc})") from None
    return lattice_from_json(data)


def pair(lat: LatticeSpec, u: Sequence[int], v: Sequence[int]) -> int:
    return lat.pair(u, v)


def self_int(lat: LatticeSpec, u: Sequence[int]) -> int:
    return lat.pair(u, u)


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c: int, u: Sequence[int]) -> Vector:
    return tuple(c * a for a in u)


def content(u: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    g = 0
    for a in u:
        g = gcd(g, a)
    return g


def is_proportional(u: Sequence[int], v: Sequence[int]) -> bool:
    """True when u and v span a space of dimension at most one."""
    n = len(u)
    return all(u[i] * v[j] == u[j] * v[i] for i in range(n) for j in range(i + 1, n))


def signature(lat_or_gram) -> tuple[int, int, int]:
    """Inertia (n_plus, n_minus, n_zero) by exact congruence diagonalization over Q."""
    gram = lat_or_gram.gram if isinstance(lat_or_gram, LatticeSpec) else lat_or_gram
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    pos = neg = zero = 0
    k = 0
    while k < n:
        pivot = next((i for i in range(k, n) if a[i][i] != 0), None)
        if pivot is None:
            j = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if j is None:
                zero += n - k
                break
            # a[i][i] = a[j][j] = 0 and a[i][j] != 0: row/col i += row/col j gives 2 a[i][j]
            i, j = j
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            pivot = i
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            for row in a:
                row[k], row[pivot] = row[pivot], row[k]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for t in range(k, n):
                    a[i][t] -= f * a[k][t]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
        k += 1
    return (pos, neg, zero)


def smith_form(m: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms.

    Returns ``(d, U, V)`` with ``U·M·V = diag(d)``, ``U`` and ``V`` unimodular,
    ``d[0] | d[1] | ...`` nonnegative. Square input only.
    """
    n = len(m)
    a = [list(row) for row in m]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for s in range(n):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(s, n) for j in range(s, n) if a[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(s, i)
            swap_cols(s, j)
            p = a[s][s]
            dirty = False
            for i in range(s + 1, n):
                if a[i][s]:
                    add_row(i, s, -(a[i][s] // p))
                    dirty |= a[i][s] != 0
            for j in range(s + 1, n):
                if a[s][j]:
                    add_col(j, s, -(a[s][j] // p))
                    dirty |= a[s][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(s + 1, n) for j in range(s + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(s, bad[0], 1)
        if s < n and a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            U[s] = [-x for x in U[s]]
    return [a[i][i] for i in range(n)], U, V


def smith_invariants(m: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors of a square integer matrix; zeros mark rank deficiency."""
    d, _, _ = smith_form(m)
    nonzero = sorted(x for x in d if x)
    return nonzero + [0] * (len(d) - len(nonzero))


def discriminant_generators(lat: LatticeSpec) -> list[tuple[Fraction, ...]]:
    """Lifts to S* of a minimal generating set of S*/S (one per invariant factor > 1)."""
    d, _, V = smith_form(lat.gram)
    if 0 in d:
        raise LatticeError("lattice is degenerate")
    n = lat.rank
    gens = []
    for i, di in enumerate(d):
        if di > 1:
            gens.append(tuple(Fraction(V[r][i], di) for r in range(n)))
    return gens


def _qform(lat: LatticeSpec, x: Sequence[Fraction]) -> Fraction:
    g = lat.gram
    n = lat.rank
    return sum((x[i] * g[i][j] * x[j] for i in range(n) for j in range(n)), Fraction(0))


def two_elementary_invariants(lat: LatticeSpec) -> TwoElementaryInvariants:
    """(rho, a, delta); raises NotTwoElementary or LatticeError (degenerate)."""
    cache = lat._cache
    if "2elem" in cache:
        result = cache["2elem"]
        if isinstance(result, Exception):
            raise result
        return result
    try:
        result = _two_elementary(lat)
    except LatticeError as exc:
        cache["2elem"] = exc
        raise
    cache["2elem"] = result
    return result


def _two_elementary(lat: LatticeSpec) -> TwoElementaryInvariants:
    factors = smith_invariants(lat.gram)
    if 0 in factors:
        raise LatticeError("lattice is degenerate")
    if any(f not in (1, 2) for f in factors):
        raise NotTwoElementary(factors)
    a = factors.count(2)
    if a > MAX_DISCRIMINANT_RANK:
        raise LatticeError(f"discriminant rank {a} exceeds enumeration limit {MAX_DISCRIMINANT_RANK}")
    gens = discriminant_generators(lat)
    delta = 0
    for eps in itertools.product((0, 1), repeat=a):
        x = [sum((e * g[i] for e, g in zip(eps, gens)), Fraction(0)) for i in range(lat.rank)]
        if _qform(lat, x).denominator != 1:
            delta = 1
            break
    return TwoElementaryInvariants(lat.rank, a, delta)


def is_even(lat: LatticeSpec) -> bool:
    """Even lattice: every square is even (diagonal of the Gram matrix is even)."""
    return all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))


def all_pairings_even(lat: LatticeSpec) -> bool:
    """Every pairing of two classes is even, i.e. the whole Gram matrix is 0 mod 2."""
    return all(x % 2 == 0 for row in lat.gram for x in row)
