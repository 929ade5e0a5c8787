"""Divisor-class geometry on a K3 surface with a trusted ample class.

Every decision here reduces to enumerating finitely many classes in degree
slices with respect to the lattice's ``ample_ref``. The lattice is assumed to
be the Néron–Severi lattice of a K3 surface on which ``ample_ref`` is ample;
under that assumption the effectivity and (-2)-curve decisions are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .enumeration import SliceQuery, enumerate_slice, slice_points
from .lattice import LatticeError, LatticeSpec, Vector, content, is_proportional, sub
from .truth import ThreeValued


class Effectivity(str, Enum):
    EFFECTIVE = "Effective"
    NOT_EFFECTIVE = "NotEffective"


@dataclass(frozen=True)
class EffectivityVerdict:
    status: Effectivity
    witness: tuple[Vector, ...] | None = None

    @property
    def effective(self) -> bool:
        return self.status is Effectivity.EFFECTIVE

    def __bool__(self) -> bool:
        return self.effective


@dataclass(frozen=True)
class H1Status:
    """``value`` is ``"Zero"``, ``"Exactly"`` (with ``k``) or ``"Unknown"``."""

    value: str
    rule: str
    k: int | None = None

    @property
    def is_zero(self) -> bool:
        return self.value == "Zero" or (self.value == "Exactly" and self.k == 0)

    @property
    def dimension(self) -> int | None:
        if self.value == "Zero":
            return 0
        if self.value == "Exactly":
            return self.k
        return None


@dataclass(frozen=True)
class DegreeBoundResult:
    satisfied: bool
    clauses: tuple[tuple[str, bool], ...]


def _ample(lat: LatticeSpec) -> Vector:
    if lat.ample_ref is None:
        raise LatticeError(f"lattice {lat.name!r} has no ample_ref")
    return lat.ample_ref


def degree(lat: LatticeSpec, D: Sequence[int]) -> int:
    """Degree against the lattice's ample reference class."""
    return lat.pair(_ample(lat), D)


def chi(lat: LatticeSpec, D: Sequence[int]) -> int:
    """Euler characteristic ``D²/2 + 2`` of the line bundle of D."""
    sq = lat.pair(D, D)
    if sq % 2:
        raise LatticeError(f"odd square {sq}: lattice is not even")
    return sq // 2 + 2


def _negative_roots(lat: LatticeSpec, D: Vector, k: int, d: int, dsq: int) -> list[Vector]:
    """Sorted (-2)-classes B with ``A·B = k`` and ``D·B ≤ -1`` (``d = A·D``, ``0 < k < d``)."""
    A = _ample(lat)
    t = Fraction(k, d)
    radius = 2 - 2 * t - t * t * dsq
    if radius < 0:
        return []
    center = [t * x for x in D]
    out = []
    for B, GB in slice_points(lat, A, k, center, radius):
        if sum(a * b for a, b in zip(B, GB)) != -2:
            continue
        if sum(a * b for a, b in zip(D, GB)) <= -1:
            out.append(B)
    out.sort()
    return out


def _first_negative_root(lat: LatticeSpec, D: Vector, d: int, dsq: int) -> Vector | None:
    """Smallest-degree (-2)-class meeting D negatively, lexicographically least at that degree.

    If D is effective, such a class is an irreducible (-2)-curve: any of its
    components meeting D negatively is a (-2)-curve of no larger degree.
    """
    for k in range(1, d):
        roots = _negative_roots(lat, D, k, d, dsq)
        if roots:
            return roots[0]
    return None


def is_effective(lat: LatticeSpec, D: Sequence[int]) -> EffectivityVerdict:
    """Decide whether D is the class of an effective divisor (0 counts as effective).

    When ``D² < -2`` and D is effective, some (-2)-curve meets D negatively and
    is a fixed component; peeling off the lowest-degree such curve reduces the
    degree, so the recursion terminates. Witnesses list the peeled curves
    followed by a final class of square at least -2.
    """
    D = lat.check(D)
    memo = lat._cache.setdefault("effective", {})
    hit = memo.get(D)
    if hit is not None:
        return hit
    result = _decide_effective(lat, D)
    memo[D] = result
    return result


def _decide_effective(lat: LatticeSpec, D: Vector) -> EffectivityVerdict:
    if not any(D):
        return EffectivityVerdict(Effectivity.EFFECTIVE, ())
    d = degree(lat, D)
    if d <= 0:
        return EffectivityVerdict(Effectivity.NOT_EFFECTIVE)
    dsq = lat.pair(D, D)
    if dsq >= -2:
        return EffectivityVerdict(Effectivity.EFFECTIVE, (D,))
    # D = Σ aᵢCᵢ gives D² ≥ -2Σaᵢ² ≥ -2(Σaᵢ)² ≥ -2(d/step)², step the least positive degree
    step = content(lat.apply(_ample(lat)))
    if step * step * dsq < -2 * d * d:
        return EffectivityVerdict(Effectivity.NOT_EFFECTIVE)
    root = _first_negative_root(lat, D, d, dsq)
    if root is None:
        return EffectivityVerdict(Effectivity.NOT_EFFECTIVE)
    rest = is_effective(lat, sub(D, root))
    if not rest.effective:
        return EffectivityVerdict(Effectivity.NOT_EFFECTIVE)
    return EffectivityVerdict(Effectivity.EFFECTIVE, (root,) + rest.witness)


def is_nonzero_effective(lat: LatticeSpec, D: Sequence[int]) -> bool:
    return any(D) and is_effective(lat, D).effective


def is_neg2_curve(lat: LatticeSpec, D: Sequence[int]) -> bool:
    """True for the class of an irreducible (-2)-curve.

    An effective (-2)-class is reducible exactly when some (-2)-class of
    smaller positive degree meets it negatively.
    """
    D = lat.check(D)
    if lat.pair(D, D) != -2:
        return False
    d = degree(lat, D)
    if d <= 0:
        return False
    return _first_negative_root(lat, D, d, -2) is None


def _nef_degree_bound(h2: int, p: int) -> int:
    """Largest degree ``a`` of a (-2)-class Γ with ``H·Γ ≤ -1`` (``p = A·H > 0``).

    Projecting Γ - (a/p)H into the negative definite complement of A gives
    ``h2·a² + 2ap - 2p² ≤ 0``.
    """
    a = 0
    while h2 * (a + 1) ** 2 + 2 * (a + 1) * p - 2 * p * p <= 0:
        a += 1
    return a


def _roots_meeting_negatively(lat: LatticeSpec, H: Vector, a: int, h2: int, p: int) -> list[Vector]:
    A = _ample(lat)
    t = Fraction(a, p)
    radius = 2 - 2 * t - t * t * h2
    if radius < 0:
        return []
    center = [t * x for x in H]
    out = []
    for B, GB in slice_points(lat, A, a, center, radius):
        if sum(x * y for x, y in zip(B, GB)) == -2 and sum(x * y for x, y in zip(H, GB)) <= -1:
            out.append(B)
    out.sort()
    return out


def is_nef(lat: LatticeSpec, H: Sequence[int], max_degree: int | None = None) -> ThreeValued:
    """Nefness of H, by searching for a (-2)-curve of bounded degree meeting H negatively.

    Classes of square 0 in the closure of the positive cone are accepted. With
    ``max_degree`` below the provable bound the answer can only be No or
    Unknown.
    """
    H = lat.check(H)
    A = _ample(lat)
    h2 = lat.pair(H, H)
    p = lat.pair(A, H)
    if not any(H):
        return ThreeValued.yes("zero class")
    if h2 < 0 or p <= 0:
        return ThreeValued.no("outside the closed positive cone")
    if is_proportional(H, A):
        return ThreeValued.yes("positive multiple of the ample reference")
    bound = _nef_degree_bound(h2, p)
    limit = bound if max_degree is None else min(bound, max_degree)
    for a in range(1, limit + 1):
        roots = _roots_meeting_negatively(lat, H, a, h2, p)
        if roots:
            return ThreeValued.no("(-2)-class meets H negatively", roots[0])
    if limit < bound:
        return ThreeValued.unknown(f"search capped below degree bound {bound}", bound)
    return ThreeValued.yes(f"no (-2)-class of degree <= {bound} meets H negatively")


def is_ample(lat: LatticeSpec, H: Sequence[int], max_degree: int | None = None) -> ThreeValued:
    """Ampleness: H² > 0, nef, and no (-2)-class orthogonal to H."""
    H = lat.check(H)
    A = _ample(lat)
    if lat.pair(H, H) <= 0 or lat.pair(A, H) <= 0:
        return ThreeValued.no("outside the positive cone")
    ortho = enumerate_slice(lat, SliceQuery(H, 0, square=-2))
    if ortho:
        return ThreeValued.no("(-2)-class orthogonal to H", ortho[0])
    return is_nef(lat, H, max_degree)


def _require_effective(lat: LatticeSpec, D: Vector, what: str = "D"):
    if not any(D):
        raise ValueError(f"{what} must be nonzero")
    if not is_effective(lat, D).effective:
        raise ValueError(f"{what} is not effective")


def is_base_point_free_numeric(lat: LatticeSpec, D: Sequence[int]) -> ThreeValued:
    """Numeric base-point-freeness of a nef effective class.

    A nef class fails to be base point free exactly when ``D = kF + Γ`` with
    F isotropic, Γ a (-2)-curve, ``F·Γ = 1`` and ``k ≥ 2``. Then ``D·F = 1``
    and ``D² = 2k - 2``, so only isotropic classes of degree below half that
    of D and meeting D once need to be tried.
    """
    D = lat.check(D)
    _require_effective(lat, D)
    nef = is_nef(lat, D)
    if nef.is_unknown:
        return ThreeValued.unknown("nefness undecided")
    if nef.is_no:
        raise ValueError("base-point-freeness test needs a nef class")
    dsq = lat.pair(D, D)
    if dsq < 2:
        return ThreeValued.yes("no decomposition kF+Γ with k >= 2 possible")
    k = (dsq + 2) // 2
    A = _ample(lat)
    d = degree(lat, D)
    for f in range(1, d // 2 + 1):
        for F in enumerate_slice(lat, SliceQuery(A, f, square=0, constraints=((D, 1),))):
            if content(F) != 1:
                continue
            gamma = tuple(x - k * y for x, y in zip(D, F))
            if is_neg2_curve(lat, gamma):
                return ThreeValued.no("D = kF + Γ", {"F": F, "Gamma": gamma, "k": k})
    return ThreeValued.yes("no elliptic pencil with a section splits off")


def is_very_ample_numeric(lat: LatticeSpec, L: Sequence[int]) -> ThreeValued:
    """Very ampleness of a nef class with ``L² ≥ 4`` via the three hyperelliptic exclusions."""
    L = lat.check(L)
    l2 = lat.pair(L, L)
    if l2 < 4:
        raise ValueError(f"very ampleness test needs L² >= 4, got {l2}")
    nef = is_nef(lat, L)
    if nef.is_no:
        raise ValueError("very ampleness test needs a nef class")
    if nef.is_unknown:
        return ThreeValued.unknown("nefness undecided")
    A = _ample(lat)
    for e in (1, 2):
        for E in enumerate_slice(lat, SliceQuery(L, e, square=0)):
            if lat.pair(A, E) > 0:
                return ThreeValued.no(f"isotropic effective class of degree {e}", E)
    if all(x % 2 == 0 for x in L):
        half = tuple(x // 2 for x in L)
        if lat.pair(half, half) == 2:
            return ThreeValued.no("L is twice a class of square 2", half)
    ortho = enumerate_slice(lat, SliceQuery(L, 0, square=-2))
    if ortho:
        return ThreeValued.no("(-2)-class orthogonal to L", ortho[0])
    return ThreeValued.yes("all exclusion searches empty")


def degree_bound_check(lat: LatticeSpec, L: Sequence[int], D: Sequence[int],
                      very_ample: bool | None = None) -> DegreeBoundResult:
    """Degree lower bounds for curves of nonnegative square against an ample L.

    Clauses: ``"i"`` (L² = 2: D = L or L·D ≥ 3), ``"ii"`` (L² = 2, L·D = 3:
    D² = 2 or |D| base point free), ``"iii"`` (L very ample: L·D ≥ 3).
    ``very_ample`` defaults to the numeric test when L² ≥ 4.
    """
    L = lat.check(L)
    D = lat.check(D)
    if not any(D) or lat.pair(D, D) < 0:
        raise ValueError("D must be nonzero with nonnegative square")
    l2 = lat.pair(L, L)
    ld = lat.pair(L, D)
    clauses = []
    if l2 == 2:
        clauses.append(("i", D == L or ld >= 3))
        if ld == 3:
            ok = lat.pair(D, D) == 2 or is_base_point_free_numeric(lat, D).is_yes
            clauses.append(("ii", ok))
    if very_ample is None:
        very_ample = l2 >= 4 and is_very_ample_numeric(lat, L).is_yes
    if very_ample:
        clauses.append(("iii", ld >= 3))
    return DegreeBoundResult(all(ok for _, ok in clauses), tuple(clauses))


def is_one_connected(lat: LatticeSpec, D: Sequence[int]) -> ThreeValued:
    """Yes when every split D = D1 + D2 into nonzero effective classes has D1·D2 ≥ 1.

    A split with ``D1·D2 ≤ 0`` and ``A·D1 = k`` satisfies
    ``(D1 - D/2)² ≥ D²/4``, which bounds D1 to an ellipsoid in its slice.
    """
    D = lat.check(D)
    _require_effective(lat, D)
    A = _ample(lat)
    d = degree(lat, D)
    dsq = lat.pair(D, D)
    a2 = lat.pair(A, A)
    for k in range(1, d // 2 + 1):
        s = Fraction(2 * k - d, 2 * a2)
        center = [Fraction(x, 2) + s * y for x, y in zip(D, A)]
        radius = s * s * a2 - Fraction(dsq, 4)
        hits = []
        for D1, GD1 in slice_points(lat, A, k, center, radius):
            d1d = sum(x * y for x, y in zip(D, GD1))
            d1sq = sum(x * y for x, y in zip(D1, GD1))
            if d1d - d1sq > 0:
                continue
            D2 = sub(D, D1)
            if is_effective(lat, D1).effective and is_effective(lat, D2).effective:
                hits.append((D1, D2))
        if hits:
            hits.sort()
            return ThreeValued.no("decomposition with D1·D2 <= 0", hits[0])
    return ThreeValued.yes("every effective decomposition meets positively")


def hodge_index_check(lat: LatticeSpec, H: Sequence[int], D: Sequence[int]) -> bool:
    """``(H·D)² ≥ H²·D²`` when ``D² > 0``, with equality only for proportional classes."""
    h2 = lat.pair(H, H)
    if h2 <= 0:
        raise ValueError("H must have positive square")
    dsq = lat.pair(D, D)
    if dsq <= 0:
        return True
    lhs = lat.pair(H, D) ** 2
    rhs = h2 * dsq
    if lhs > rhs:
        return True
    return lhs == rhs and is_proportional(H, D)


def _isotropic_multiple(lat: LatticeSpec, D: Vector) -> tuple[int, Vector] | None:
    c = content(D)
    if c == 0 or lat.pair(D, D) != 0:
        return None
    return c, tuple(x // c for x in D)


def _rule_neg2(lat, D):
    if lat.pair(D, D) < 0 and is_neg2_curve(lat, D):
        return H1Status("Zero", "r1:rigid-curve")
    return None


def _rule_isotropic(lat, D):
    split = _isotropic_multiple(lat, D)
    if split is None:
        return None
    k, F = split
    if is_nef(lat, F).is_yes:
        return H1Status("Exactly", "r2:elliptic-multiple", k - 1)
    return None


def _rule_bpf(lat, D):
    if lat.pair(D, D) <= 0 or not is_nef(lat, D).is_yes:
        return None
    if is_base_point_free_numeric(lat, D).is_yes:
        return H1Status("Zero", "r3:nef-big-bpf")
    return None


def _rule_connected(lat, D):
    if is_one_connected(lat, D).is_yes:
        return H1Status("Zero", "r4:one-connected")
    return None


_RULES = (_rule_neg2, _rule_isotropic, _rule_bpf, _rule_connected)


def h1_status(lat: LatticeSpec, D: Sequence[int], base_divisor: Sequence[int] | None = None) -> H1Status:
    """h¹ of a nonzero effective class from the first rule that applies.

    ``base_divisor`` is a caller-supplied fixed part Δ of |D|; when
    ``h¹(D - Δ) = 0`` and ``D² = (D - Δ)²`` the vanishing propagates to D.
    """
    D = lat.check(D)
    _require_effective(lat, D)
    for rule in _RULES:
        st = rule(lat, D)
        if st is not None:
            return st
    if base_divisor is not None:
        moving = sub(D, lat.check(base_divisor))
        if any(moving) and lat.pair(moving, moving) == lat.pair(D, D):
            if is_effective(lat, moving).effective and h1_status(lat, moving).is_zero:
                return H1Status("Zero", "r5:base-divisor")
    return H1Status("Unknown", "none")


def h1_evidence(lat: LatticeSpec, D: Sequence[int]) -> list[H1Status]:
    """Every rule that fires for D, in rule order (used to check the rules agree)."""
    D = lat.check(D)
    _require_effective(lat, D)
    return [st for st in (rule(lat, D) for rule in _RULES) if st is not None]
