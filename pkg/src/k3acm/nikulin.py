"""2-elementary K3 lattices: fixed loci of the canonical involution and the dp9 lattice."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .lattice import LatticeError, LatticeSpec, scale, sub, two_elementary_invariants


class FixedShape(str, Enum):
    EMPTY = "Empty"
    TWO_ELLIPTIC = "TwoElliptic"
    GENERAL_SUM = "GeneralSum"


@dataclass(frozen=True)
class FixedLocusDescriptor:
    """Fixed locus: empty, two elliptic curves, or a genus-g curve plus k rational curves."""

    shape: FixedShape
    genus: int | None = None
    rational_tail_count: int | None = None
    elliptic_type: bool | None = None

    def to_json(self) -> dict:
        return {
            "shape": self.shape.value,
            "genus": self.genus,
            "rational_tail_count": self.rational_tail_count,
            "elliptic_type": self.elliptic_type,
        }


def fixed_locus(rho: int, a: int, delta: int) -> FixedLocusDescriptor:
    if delta not in (0, 1):
        raise ValueError(f"delta must be 0 or 1, got {delta}")
    if not 1 <= rho <= 20 or not 0 <= a <= rho:
        raise ValueError(f"(rho, a) = ({rho}, {a}) out of range")
    if (rho - a) % 2:
        raise ValueError(f"rho and a must have the same parity, got ({rho}, {a})")
    if rho + a > 22:
        raise ValueError(f"rho + a = {rho + a} exceeds 22")
    if (rho, a, delta) == (10, 10, 0):
        return FixedLocusDescriptor(FixedShape.EMPTY)
    if (rho, a, delta) == (10, 8, 0):
        return FixedLocusDescriptor(FixedShape.TWO_ELLIPTIC)
    g = (22 - rho - a) // 2
    k = (rho - a) // 2
    return FixedLocusDescriptor(FixedShape.GENERAL_SUM, g, k, g >= 2)


def classify_rank_a(a: int, delta: int) -> LatticeSpec:
    """The 2-elementary hyperbolic lattice of rank a with invariants (a, a, delta)."""
    if delta == 0:
        if a != 2:
            raise ValueError(f"delta = 0 forces a = 2, got a = {a}")
        return LatticeSpec.from_gram([[0, 2], [2, 0]], name="u2", basis=("e", "f"),
                                     ample_ref=(1, 1), k3=True)
    if delta != 1:
        raise ValueError(f"delta must be 0 or 1, got {delta}")
    if not 1 <= a <= 9:
        raise ValueError(f"a must lie in 1..9, got {a}")
    gram = [[2 if i == j == 0 else (-2 if i == j else 0) for j in range(a)] for i in range(a)]
    basis = ("B",) + tuple(f"E{i}" for i in range(1, a))
    ample = (1,) if a == 1 else (3,) + (-1,) * (a - 1)
    return LatticeSpec.from_gram(gram, name=f"rank{a}", basis=basis, ample_ref=ample, k3=True)


def build_dp9() -> LatticeSpec:
    """Rank-9 lattice with basis B, E1..E8, the class X = 3B - ΣEi and D1..D4.

    ``Di = B - E(2i-1) - E(2i)``; ``H = 3X``; X is the ample reference.
    """
    base = classify_rank_a(9, 1)
    e = [tuple(int(i == j) for j in range(9)) for i in range(9)]
    B = e[0]
    X = (3,) + (-1,) * 8
    classes = {"X": X, "H": scale(3, X)}
    for i in range(1, 5):
        classes[f"D{i}"] = sub(sub(B, e[2 * i - 1]), e[2 * i])
    lat = LatticeSpec.from_gram(base.gram, name="dp9", basis=base.basis, ample_ref=X,
                                k3=True, classes=classes)
    if two_elementary_invariants(lat).as_tuple() != (9, 9, 1):
        raise LatticeError("dp9 invariants are wrong")
    checks = [lat.pair(X, X) == 2, lat.pair(classes["H"], classes["H"]) == 18]
    for i in range(1, 5):
        Di = classes[f"D{i}"]
        checks += [lat.pair(Di, Di) == -2, lat.pair(X, Di) == 2]
    if not all(checks):
        raise LatticeError("dp9 named classes fail their identities")
    return lat


@dataclass(frozen=True)
class DegreeConstraints:
    """Allowed degrees ``X·D`` of a smooth curve D of given square.

    ``invariant`` is the set allowed when the involution maps D to itself
    (quotient-genus arithmetic); ``non_invariant_max`` bounds the degree when
    it does not, since then ``X·D ≤ θ(D)·D = D²``.
    """

    D_sq: int
    invariant: frozenset[int]
    non_invariant_max: int

    def allows(self, value: int) -> bool:
        return value in self.invariant or 0 < value <= self.non_invariant_max


def invariant_degree_constraints(D_sq: int, quotient_genera: Iterable[int] = (0, 1)) -> DegreeConstraints:
    """Hurwitz bookkeeping for a curve stable under the involution.

    ``D² = 4(γ - 1) + X·D`` with γ the genus of the quotient curve; γ ranges
    over ``quotient_genera``.
    """
    if D_sq < 0 or D_sq % 2:
        raise ValueError(f"D² must be even and nonnegative, got {D_sq}")
    inv = set()
    for gamma in quotient_genera:
        if gamma < 0:
            raise ValueError("quotient genus must be nonnegative")
        v = D_sq - 4 * (gamma - 1)
        if v > 0:
            inv.add(v)
    return DegreeConstraints(D_sq, frozenset(inv), D_sq)


def builtin_lattices() -> dict[str, LatticeSpec]:
    return {
        "dp9": build_dp9(),
        "u2": classify_rank_a(2, 0),
        "quartic-demo": LatticeSpec.from_gram([[4, 0], [0, -2]], name="quartic-demo",
                                              basis=("h", "r"), ample_ref=(2, 1), k3=True,
                                              classes={"h": (1, 0), "r": (0, 1)}),
    }


def builtin(name: str) -> LatticeSpec:
    table = builtin_lattices()
    if name not in table:
        raise LatticeError(f"unknown builtin lattice {name!r}; choose from {sorted(table)}")
    return table[name]
