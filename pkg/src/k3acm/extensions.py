"""Ext dimensions, Hilbert polynomials and rank-n extension schedules.

Bundles are tracked only through their line-bundle composition factors. When
Hom and Ext² vanish between all factors, the long exact sequences split into
short ones, so ``dim Ext¹(L, E)`` is the sum over the factors of E.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .geometry import chi, is_effective
from .lattice import LatticeSpec, Vector, sub
from .truth import ThreeValued


def hom_vanishing(lat: LatticeSpec, D1: Sequence[int], D2: Sequence[int]) -> ThreeValued:
    """Whether ``Hom(O(D1), O(D2)) = H⁰(O(D2 - D1))`` is zero."""
    D1, D2 = lat.check(D1), lat.check(D2)
    if D1 == D2:
        return ThreeValued.no("identity morphism")
    diff = sub(D2, D1)
    if is_effective(lat, diff).effective:
        return ThreeValued.no("D2 - D1 is effective", diff)
    return ThreeValued.yes("D2 - D1 is not effective")


def ext1_dim(lat: LatticeSpec, D1: Sequence[int], D2: Sequence[int]) -> int:
    """``dim Ext¹(O(D1), O(D2)) = -χ(D2 - D1)``, valid when Hom vanishes both ways.

    Vanishing of ``Hom(O(D2), O(D1))`` gives ``Ext² = H⁰(O(D1 - D2))^∨ = 0``.
    """
    if not hom_vanishing(lat, D1, D2).is_yes:
        raise ValueError("Hom(O(D1), O(D2)) does not vanish")
    if not hom_vanishing(lat, D2, D1).is_yes:
        raise ValueError("Hom(O(D2), O(D1)) does not vanish, so Ext² may not")
    value = -chi(lat, sub(D2, D1))
    if value < 0:
        raise ValueError(f"negative Ext¹ dimension {value}: preconditions violated")
    return value


@dataclass(frozen=True)
class HilbertPoly:
    """``χ(O(D + nH)) = c2·n² + c1·n + c0`` (summed over factors for a bundle)."""

    c2: int
    c1: int
    c0: int

    def __add__(self, other: "HilbertPoly") -> "HilbertPoly":
        return HilbertPoly(self.c2 + other.c2, self.c1 + other.c1, self.c0 + other.c0)

    def reduced(self, rank: int) -> tuple[Fraction, Fraction, Fraction]:
        return (Fraction(self.c2, rank), Fraction(self.c1, rank), Fraction(self.c0, rank))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.c2, self.c1, self.c0)


def hilbert_poly(lat: LatticeSpec, H: Sequence[int], D: Sequence[int]) -> HilbertPoly:
    h2 = lat.pair(H, H)
    if h2 % 2:
        raise ValueError("H² must be even")
    return HilbertPoly(h2 // 2, lat.pair(H, D), chi(lat, D))


def bundle_hilbert_poly(lat: LatticeSpec, H: Sequence[int], factors: Sequence[Sequence[int]]) -> HilbertPoly:
    total = HilbertPoly(0, 0, 0)
    for D in factors:
        total = total + hilbert_poly(lat, H, D)
    return total


def reduced_hilbert_equal(lat: LatticeSpec, H: Sequence[int], classes: Sequence[Sequence[int]]) -> bool:
    """All line bundles in ``classes`` share one Hilbert polynomial."""
    polys = {hilbert_poly(lat, H, D) for D in classes}
    return len(polys) <= 1


@dataclass(frozen=True)
class ExtensionStep:
    """Extend the line bundle ``quotient`` by the direct sum of ``sub_summands``.

    Each summand is listed by its composition factors; ``ext_dims[i]`` is
    ``dim Ext¹(quotient, summand i)``. ``rank`` is the rank of the result.
    """

    label: str
    quotient: str
    sub_summands: tuple[tuple[str, ...], ...]
    ext_dims: tuple[int, ...]
    rank: int

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "quotient": self.quotient,
            "sub_summands": [list(s) for s in self.sub_summands],
            "ext_dims": list(self.ext_dims),
            "rank": self.rank,
        }


@dataclass(frozen=True)
class ExtensionPlan:
    """Construction schedule of a rank-n family.

    The family is parametrized by a product of projective spaces, one per
    summand in the last step, so its dimension is ``Σ (ext_dim - 1)`` there.
    """

    rank: int
    blocks: tuple[tuple[str, Vector], ...]
    steps: tuple[ExtensionStep, ...]
    parameter_space_dim: int

    @property
    def block_classes(self) -> dict[str, Vector]:
        return dict(self.blocks)

    @property
    def final_factors(self) -> tuple[int, ...]:
        return self.steps[-1].ext_dims if self.steps else ()

    def parameter_space(self) -> str:
        dims = [d - 1 for d in self.final_factors]
        if not dims:
            return "point"
        if len(set(dims)) == 1 and len(dims) > 1:
            return f"(P^{dims[0]})^{len(dims)}"
        return " x ".join(f"P^{d}" for d in dims)

    def composition_factors(self) -> tuple[str, ...]:
        if not self.steps:
            return (self.blocks[0][0],)
        last = self.steps[-1]
        return tuple(f for s in last.sub_summands for f in s) + (last.quotient,)

    def to_json(self, certificate: bool | None = None) -> dict:
        out = {
            "rank": self.rank,
            "blocks": {name: list(v) for name, v in self.blocks},
            "steps": [s.to_json() for s in self.steps],
            "parameter_space_dim": self.parameter_space_dim,
            "parameter_space": self.parameter_space(),
        }
        if certificate is not None:
            out["semistable_certificate"] = certificate
        return out


def plan_from_blocks(lat: LatticeSpec, blocks: Mapping[str, Sequence[int]] | Sequence[tuple[str, Sequence[int]]],
                     n: int) -> ExtensionPlan:
    """Rank-n schedule from four line-bundle blocks ``F1..F4`` (in the given order).

    Rank 2: extend F1 by F2. Rank 2m+1: m pairwise inequivalent rank-2
    extensions E1..Em, then extend F3 by their sum. Rank 2m+2: extend F4 by
    a rank-(2m+1) bundle G of the previous kind. Hom between distinct blocks
    is checked to vanish in both directions before any dimension is used.
    """
    items = list(blocks.items()) if isinstance(blocks, Mapping) else list(blocks)
    items = [(name, lat.check(v)) for name, v in items]
    if n < 1:
        raise ValueError("rank must be positive")
    needed = 1 if n == 1 else 2 if n == 2 else 3 if n % 2 else 4
    if len(items) < needed:
        raise ValueError(f"rank {n} needs {needed} blocks, got {len(items)}")
    items = items[:needed]
    for i, (ni, vi) in enumerate(items):
        for j, (nj, vj) in enumerate(items):
            if i != j and not hom_vanishing(lat, vi, vj).is_yes:
                raise ValueError(f"Hom({ni}, {nj}) does not vanish")
    if n == 1:
        return ExtensionPlan(1, tuple(items), (), 0)
    (n1, f1), (n2, f2) = items[0], items[1]
    e12 = ext1_dim(lat, f1, f2)
    pair_summand = (n2, n1)
    if n == 2:
        step = ExtensionStep("E", n1, (pair_summand,), (e12,), 2)
        return ExtensionPlan(2, tuple(items), (step,), e12 - 1)
    m = (n - 1) // 2
    steps = [ExtensionStep(f"E{i}", n1, ((n2,),), (e12,), 2) for i in range(1, m + 1)]
    n3, f3 = items[2]
    against_pair = ext1_dim(lat, f3, f2) + ext1_dim(lat, f3, f1)
    g_step = ExtensionStep("G", n3, (pair_summand,) * m, (against_pair,) * m, 2 * m + 1)
    steps.append(g_step)
    if n % 2:
        return ExtensionPlan(n, tuple(items), tuple(steps), m * (against_pair - 1))
    n4, f4 = items[3]
    against_g = ext1_dim(lat, f4, f3) + m * (ext1_dim(lat, f4, f2) + ext1_dim(lat, f4, f1))
    g_factors = tuple(f for s in g_step.sub_summands for f in s) + (n3,)
    steps.append(ExtensionStep("F", n4, (g_factors,), (against_g,), n))
    return ExtensionPlan(n, tuple(items), tuple(steps), against_g - 1)


def family_plan(n: int, lat: LatticeSpec | None = None) -> ExtensionPlan:
    """Schedule over the blocks D1..D4 of the dp9 lattice (n ≥ 2)."""
    if n < 2:
        raise ValueError("family_plan needs n >= 2")
    if lat is None:
        from .nikulin import build_dp9
        lat = build_dp9()
    blocks = [(f"D{i}", lat.classes[f"D{i}"]) for i in range(1, 5)]
    return plan_from_blocks(lat, blocks, n)


def semistable_certificate(lat: LatticeSpec, H: Sequence[int], plan: ExtensionPlan) -> bool:
    """True when every block used by the plan has the same Hilbert polynomial.

    Then every intermediate extension has the same reduced polynomial as its
    pieces and semistability passes up each short exact sequence. This is a
    certificate for the construction, not a general semistability test.
    """
    classes = plan.block_classes
    used = set(plan.composition_factors())
    for step in plan.steps:
        used.add(step.quotient)
        for s in step.sub_summands:
            used.update(s)
    return reduced_hilbert_equal(lat, H, [classes[name] for name in sorted(used)])
