"""ACM and initialized line bundles: numerical row tables and their evaluation.

Each table maps ``(D², H·D)`` to a case letter plus the non-numeric side
conditions that the row still requires. Side conditions are evaluated with
the partial oracles of :mod:`k3acm.geometry`; an undecided condition makes
the verdict ``Conditional`` instead of being guessed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .geometry import chi, h1_status, is_effective, is_neg2_curve, is_very_ample_numeric
from .lattice import LatticeError, LatticeSpec, Vector, scale, sub, two_elementary_invariants
from .truth import ThreeValued

ACM = "AcmInitialized"
NOT = "Not"
CONDITIONAL = "Conditional"

# side conditions, written for the class D being classified
EMPTY_H_MINUS_D = "|H-D|=empty"
EMPTY_D_MINUS_H = "|D-H|=empty"
EMPTY_2H_MINUS_D = "|2H-D|=empty"
H1_2H_MINUS_D = "h1(2H-D)=0"


class OutOfScope(ValueError):
    """The class lies outside the range a table covers."""


@dataclass(frozen=True)
class ACMVerdict:
    status: str
    case: str | None
    D_sq: int
    HD: int
    unresolved: tuple[tuple[str, ThreeValued], ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "case": self.case,
            "D_sq": self.D_sq,
            "HD": self.HD,
            "unresolved": [{"condition": c, "value": str(v)} for c, v in self.unresolved],
        }


Row = tuple[str, tuple[str, ...]]


def genus2_row(D_sq: int, HD: int) -> Row | None:
    """Rows for a genus-2 double plane polarized by three times its pullback class (H² = 18)."""
    if D_sq == -2 and HD in (3, 6, 9):
        return "a", ()
    if D_sq == 0 and HD == 9:
        return "b", ()
    if D_sq == 2 and HD in (6, 9, 12):
        return "c", (EMPTY_H_MINUS_D,) if HD == 12 else ()
    if D_sq == 4 and HD in (9, 12):
        return "d", ()
    if D_sq == 8 and HD in (12, 15):
        return "e", ()
    if D_sq == 10 and HD == 15:
        return "f", ()
    if D_sq == 14 and HD == 18:
        return "g", ()
    if D_sq in (20, 26, 32) and D_sq == 2 * HD - 22:
        return "h", (EMPTY_D_MINUS_H, H1_2H_MINUS_D)
    return None


def quartic_row(D_sq: int, HD: int) -> Row | None:
    """Rows for a smooth quartic surface (H² = 4)."""
    if D_sq == -2 and 1 <= HD <= 3:
        return "a", ()
    if D_sq == 0 and 3 <= HD <= 4:
        return "b", ()
    if D_sq == 2 and HD == 5:
        return "c", ()
    if D_sq == 4 and HD == 6:
        return "d", (EMPTY_D_MINUS_H, EMPTY_2H_MINUS_D)
    return None


def general_row(H_sq: int, D_sq: int, HD: int) -> Row | None:
    """Rows for a very ample polarization of degree ``H_sq``, valid for ``D² ≥ H² - 4``."""
    if H_sq < 4:
        raise ValueError("very ample polarization needs H² >= 4")
    if D_sq < H_sq - 4:
        raise OutOfScope(f"D²={D_sq} is below H²-4={H_sq - 4}")
    if D_sq == H_sq - 4 and HD in (H_sq - 1, H_sq):
        return "a", ()
    if D_sq == H_sq - 2 and HD == H_sq + 1:
        return "b", ()
    if D_sq >= H_sq and D_sq == 2 * HD - H_sq - 4:
        return "c", (EMPTY_D_MINUS_H, H1_2H_MINUS_D)
    return None


def normalize_row(H_sq: int, D_sq: int, HD: int, row: Row | None) -> Row | None:
    """Apply the consequences of a row's side conditions that are purely numeric.

    If ``h¹(2H-D) = 0`` then ``χ(2H-D) = h⁰(2H-D) + h⁰(D-2H) ≥ 0``, so a
    negative Euler characteristic rules the row out. When ``|D-H|`` is empty
    so is ``|D-2H|``, and then at ``χ(2H-D) = 0`` the vanishing of ``h¹(2H-D)``
    is the same as ``|2H-D|`` being empty.
    """
    if row is None:
        return None
    case, conds = row
    if H1_2H_MINUS_D not in conds:
        return row
    c = 4 * H_sq - 4 * HD + D_sq  # (2H-D)²
    euler = c // 2 + 2
    if euler < 0:
        return None
    if euler == 0 and EMPTY_D_MINUS_H in conds:
        conds = tuple(EMPTY_2H_MINUS_D if x == H1_2H_MINUS_D else x for x in conds)
        conds = tuple(dict.fromkeys(conds))
    return case, conds


def h1_vanishes(lat: LatticeSpec, C: Sequence[int]) -> ThreeValued:
    """Whether ``h¹(O(C)) = 0`` for an arbitrary class C."""
    C = lat.check(C)
    if not any(C):
        return ThreeValued.yes("trivial bundle")
    if is_effective(lat, C).effective:
        if chi(lat, C) <= 0:
            return ThreeValued.no("h0 >= 1 > chi and h2 = 0")
        st = h1_status(lat, C)
        if st.value == "Unknown":
            return ThreeValued.unknown("no h1 rule applies", C)
        return ThreeValued.of(st.is_zero, st.rule)
    neg = scale(-1, C)
    if is_effective(lat, neg).effective:
        return h1_vanishes(lat, neg)
    return ThreeValued.of(chi(lat, C) == 0, "h0 = h2 = 0 so h1 = -chi")


def _condition_class(lat: LatticeSpec, cond: str, H: Vector, D: Vector) -> Vector:
    twoH = scale(2, H)
    return {
        EMPTY_H_MINUS_D: sub(H, D),
        EMPTY_D_MINUS_H: sub(D, H),
        EMPTY_2H_MINUS_D: sub(twoH, D),
        H1_2H_MINUS_D: sub(twoH, D),
    }[cond]


def evaluate_condition(lat: LatticeSpec, cond: str, H: Vector, D: Vector) -> ThreeValued:
    C = _condition_class(lat, cond, H, D)
    if cond.startswith("|"):
        return ThreeValued.of(not is_effective(lat, C).effective, "effectivity decision")
    return h1_vanishes(lat, C)


def verdict_from_row(row: Row | None, D_sq: int, HD: int,
                     values: Mapping[str, ThreeValued]) -> ACMVerdict:
    """Combine a row with evaluated side conditions."""
    if row is None:
        return ACMVerdict(NOT, None, D_sq, HD)
    case, conds = row
    evaluated = tuple((c, values[c]) for c in conds)
    if any(v.is_no for _, v in evaluated):
        return ACMVerdict(NOT, None, D_sq, HD, evaluated)
    status = CONDITIONAL if any(v.is_unknown for _, v in evaluated) else ACM
    return ACMVerdict(status, case, D_sq, HD, evaluated)


def _evaluate(lat: LatticeSpec, row: Row | None, H: Vector, D: Vector, D_sq: int, HD: int) -> ACMVerdict:
    values = {}
    if row is not None:
        for c in row[1]:
            values[c] = evaluate_condition(lat, c, H, D)
    return verdict_from_row(row, D_sq, HD, values)


def _check_polarization(lat: LatticeSpec, H: Vector, very_ample: bool | None):
    if very_ample:
        return
    memo = lat._cache.setdefault("very_ample", {})
    if H not in memo:
        memo[H] = is_very_ample_numeric(lat, H)
    if not memo[H].is_yes:
        raise ValueError(f"polarization is not known to be very ample ({memo[H]}: {memo[H].reason})")


def _check_divisor(lat: LatticeSpec, D: Vector):
    if not any(D):
        raise ValueError("D must be nonzero")
    if not is_effective(lat, D).effective:
        raise ValueError("D is not effective")


def classify_genus2(lat: LatticeSpec, H: Sequence[int], D: Sequence[int],
                    very_ample: bool | None = None) -> ACMVerdict:
    """Classify D against the genus-2 double plane table (requires H² = 18).

    ``very_ample=True`` attests the polarization; otherwise the numeric test
    must confirm it. H is three times a pullback class, so ``3 | H·D``.
    """
    H, D = lat.check(H), lat.check(D)
    if lat.pair(H, H) != 18:
        raise ValueError(f"genus-2 table needs H² = 18, got {lat.pair(H, H)}")
    _check_polarization(lat, H, very_ample)
    _check_divisor(lat, D)
    D_sq, HD = lat.pair(D, D), lat.pair(H, D)
    if HD % 3:
        return ACMVerdict(NOT, None, D_sq, HD)
    return _evaluate(lat, genus2_row(D_sq, HD), H, D, D_sq, HD)


def classify_quartic(D_sq: int, HD: int, empty_DmH: ThreeValued, empty_2HmD: ThreeValued) -> ACMVerdict:
    """Row lookup for a quartic surface with the two emptiness flags supplied by the caller."""
    values = {EMPTY_D_MINUS_H: empty_DmH, EMPTY_2H_MINUS_D: empty_2HmD}
    return verdict_from_row(quartic_row(D_sq, HD), D_sq, HD, values)


def classify_quartic_class(lat: LatticeSpec, H: Sequence[int], D: Sequence[int],
                           very_ample: bool | None = None) -> ACMVerdict:
    """Quartic table for a class in a lattice, with emptiness decided by effectivity."""
    H, D = lat.check(H), lat.check(D)
    if lat.pair(H, H) != 4:
        raise ValueError(f"quartic table needs H² = 4, got {lat.pair(H, H)}")
    _check_polarization(lat, H, very_ample)
    _check_divisor(lat, D)
    D_sq, HD = lat.pair(D, D), lat.pair(H, D)
    return _evaluate(lat, quartic_row(D_sq, HD), H, D, D_sq, HD)


def classify_general(lat: LatticeSpec, H: Sequence[int], D: Sequence[int],
                     very_ample: bool | None = None) -> ACMVerdict:
    """General very ample table; raises OutOfScope when ``D² < H² - 4``."""
    H, D = lat.check(H), lat.check(D)
    H_sq = lat.pair(H, H)
    if H_sq < 4:
        raise ValueError("very ample polarization needs H² >= 4")
    _check_divisor(lat, D)
    D_sq, HD = lat.pair(D, D), lat.pair(H, D)
    row = general_row(H_sq, D_sq, HD)
    _check_polarization(lat, H, very_ample)
    return _evaluate(lat, row, H, D, D_sq, HD)


def acm_by_twist_vanishing(lat: LatticeSpec, H: Sequence[int], D: Sequence[int], m: int,
                           h1_attestations: Mapping[int, ThreeValued | bool] | None = None) -> ThreeValued:
    """Sufficient criterion for ACM: ``H·D ≤ m·H² - 1`` and ``h¹(D - kH) = 0`` for ``0 ≤ k ≤ m``.

    ``h1_attestations`` maps k to a caller-supplied answer for ``h¹(D - kH) = 0``
    and overrides the built-in rules. The criterion is one-directional, so the
    result is Yes or Unknown, never No.
    """
    H, D = lat.check(H), lat.check(D)
    if m < 1:
        raise ValueError("m must be a positive integer")
    _check_divisor(lat, D)
    h2 = lat.pair(H, H)
    if lat.pair(H, D) > m * h2 - 1:
        return ThreeValued.unknown("degree hypothesis fails")
    attest = dict(h1_attestations or {})
    for k in range(m + 1):
        if k in attest:
            v = attest[k]
            v = v if isinstance(v, ThreeValued) else ThreeValued.of(bool(v), "attested")
        else:
            v = h1_vanishes(lat, sub(D, scale(k, H)))
        if not v.is_yes:
            return ThreeValued.unknown(f"h1(D-{k}H) not known to vanish")
    return ThreeValued.yes("degree bound and all twist vanishings hold")


# --- the rank-9 2-elementary lattice ------------------------------------------

DP9_GRAM = tuple(tuple(2 if i == j == 0 else (-2 if i == j else 0) for j in range(9)) for i in range(9))
DP9_X = (3, -1, -1, -1, -1, -1, -1, -1, -1)

_DP9_TABLE = {(-2, 6): "a", (2, 6): "b", (4, 12): "c", (8, 12): "d", (14, 18): "e"}


@dataclass(frozen=True)
class Dp9Classification:
    """Numeric row plus the structural description and whether it was verified."""

    numeric_case: str
    structural_case: str
    shape: str
    witness: Vector | None
    verified: bool

    def to_json(self) -> dict:
        return {
            "numeric_case": self.numeric_case,
            "structural_case": self.structural_case,
            "shape": self.shape,
            "witness": list(self.witness) if self.witness is not None else None,
            "verified": self.verified,
        }


def check_dp9(lat: LatticeSpec):
    if lat.gram != DP9_GRAM:
        raise LatticeError("lattice Gram matrix is not diag(2,-2,...,-2) of rank 9")
    if two_elementary_invariants(lat).as_tuple() != (9, 9, 1):
        raise LatticeError("lattice invariants are not (9,9,1)")


def classify_dp9(lat: LatticeSpec, D: Sequence[int]) -> Dp9Classification | None:
    """Classify D on the rank-9 lattice with H = 3X; None when D is not ACM and initialized.

    Each row comes with a structural witness: D itself, or ``rX - D``, is a
    (-2)-curve, or D is a multiple of X.
    """
    check_dp9(lat)
    D = lat.check(D)
    _check_divisor(lat, D)
    X = lat.classes.get("X", DP9_X)
    H = scale(3, X)
    key = (lat.pair(D, D), lat.pair(H, D))
    case = _DP9_TABLE.get(key)
    if case is None:
        return None
    if case == "a":
        return Dp9Classification(case, "f", "Gamma", D, is_neg2_curve(lat, D))
    if case == "b":
        return Dp9Classification(case, "g", "1X", None, D == X)
    if case == "c":
        gamma = sub(scale(3, X), D)
        return Dp9Classification(case, "f", "3X-Gamma", gamma, is_neg2_curve(lat, gamma))
    if case == "d":
        return Dp9Classification(case, "g", "2X", None, D == scale(2, X))
    gamma = sub(scale(4, X), D)
    return Dp9Classification(case, "f", "4X-Gamma", gamma, is_neg2_curve(lat, gamma))


__all__ = [
    "ACM", "NOT", "CONDITIONAL", "ACMVerdict", "OutOfScope",
    "genus2_row", "quartic_row", "general_row", "normalize_row", "h1_vanishes",
    "classify_genus2", "classify_quartic", "classify_quartic_class", "classify_general",
    "acm_by_twist_vanishing", "classify_dp9", "check_dp9", "Dp9Classification",
    "DP9_GRAM", "DP9_X",
]
