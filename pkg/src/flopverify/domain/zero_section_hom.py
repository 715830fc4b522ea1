"""
Graded Hom spaces between zero-section pushforwards on V = Tot(O_F(-h-H)).

For bundles E, F on the zero section F, the Koszul resolution of the zero
section gives

    Hom_V(i_*E, i_*F) = H^*(E^vee (x) F)  +  H^*(E^vee (x) F(-h-H))[-1].
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from flopverify.domain.bbw_engine import (
    Bundle,
    Certificate,
    GradedGRep,
    HomogeneousSpace,
    cohomology,
    dual_bundle,
    tensor_bundles,
    twist_bundle,
)
from flopverify.domain.character_ring import (
    RepSum,
    levi_torus_character,
    to_levi_weight,
    weyl_dimension,
)
from flopverify.domain.weight_lattice import RootSystem, Weight


@dataclass(frozen=True)
class TotalSpace:
    """Total space of O_F(-h-H) over the flag variety F."""

    flag: HomogeneousSpace
    h: Weight
    H: Weight
    name: str = field(default="", compare=False)

    @property
    def rs(self) -> RootSystem:
        return self.flag.rs

    @property
    def dim(self) -> int:
        return self.flag.dim + 1

    @property
    def koszul_twist(self) -> Weight:
        return -(self.h + self.H)

    @property
    def canonical(self) -> Weight:
        """omega_V restricted to the zero section: omega_F + h + H."""
        return self.flag.canonical_weight + self.h + self.H

    def line(self, a: int, b: int) -> Weight:
        """Weight of O(a*h + b*H)."""
        return self.h * a + self.H * b


@dataclass(frozen=True)
class FTerm:
    bundle: Bundle
    shift: int = 0
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity <= 0:
            raise ValueError("FTerm multiplicity must be positive")


@dataclass(frozen=True)
class FObject:
    """Direct sum of shifted bundles on the zero section, pushed forward to V."""

    terms: tuple[FTerm, ...]
    name: str = field(default="", compare=False)

    @classmethod
    def of(cls, bundle: Bundle, shift: int = 0, name: str = "") -> "FObject":
        return cls((FTerm(bundle, shift),), name)

    def shifted(self, amount: int) -> "FObject":
        return FObject(
            tuple(FTerm(t.bundle, t.shift + amount, t.multiplicity) for t in self.terms),
            self.name,
        )

    def twisted(self, weight: Weight, name: str = "") -> "FObject":
        return FObject(
            tuple(
                FTerm(twist_bundle(t.bundle, weight), t.shift, t.multiplicity)
                for t in self.terms
            ),
            name or self.name,
        )

    def unshifted(self) -> "FObject":
        return FObject(
            tuple(FTerm(t.bundle, 0, t.multiplicity) for t in self.terms), self.name
        )

    def normal_form(self, with_shift: bool = True) -> tuple:
        """Comparison key: 𝐅-level pieces of every term, as a sorted multiset."""
        keys = [
            (
                tuple((w.coords, m) for w, m in t.bundle.normal_form()),
                t.shift if with_shift else 0,
                t.multiplicity,
            )
            for t in self.terms
        ]
        return tuple(sorted(keys))

    def __str__(self) -> str:
        return self.name or "FObject"


@dataclass(frozen=True)
class HomComplex:
    graded: GradedGRep
    certificate: Certificate
    euler: int
    euler_character: RepSum[Weight]

    def dims(self) -> dict[int, int]:
        return self.graded.dims()

    def is_zero(self) -> bool:
        return self.graded.is_zero()

    def describe(self) -> str:
        return self.graded.describe()


class Verdict(Enum):
    ORTHOGONAL = "orthogonal"
    NOT_ORTHOGONAL = "not orthogonal"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class OrthogonalityResult:
    verdict: Verdict
    homs: tuple[HomComplex, ...]

    def __bool__(self) -> bool:
        return self.verdict is Verdict.ORTHOGONAL


@lru_cache(maxsize=None)
def hom_V(total: TotalSpace, source: FObject, target: FObject) -> HomComplex:
    """
    Graded Hom from source to target on V.

    Example:
        For C2, hom_V(O(h), O(-h+H)) is k in degree 1 with certificate Exact.
    """
    flag = total.flag
    rs = total.rs
    graded = GradedGRep.zero(rs)
    certificate = Certificate.VANISHING_CERTIFIED
    character: RepSum[Weight] = RepSum(virtual=True)
    for left in source.terms:
        for right in target.terms:
            base = tensor_bundles(flag, dual_bundle(flag, left.bundle), right.bundle)
            direct = cohomology(flag, base)
            koszul = cohomology(flag, twist_bundle(base, total.koszul_twist))
            factor = left.multiplicity * right.multiplicity
            offset = left.shift - right.shift
            part = (direct.value + koszul.value.shifted(1)).scaled(factor)
            graded = graded + part.shifted(offset)
            certificate = min(certificate, direct.certificate, koszul.certificate)
            sign = -factor if offset % 2 else factor
            character = character + (direct.euler + koszul.euler.scaled(-1)).scaled(sign)
    euler = character.dimension(lambda w: weyl_dimension(rs, w))
    return HomComplex(graded, Certificate(certificate), euler, character)


def is_orthogonal(
    total: TotalSpace, source: FObject, target: FObject, mutual: bool = False
) -> OrthogonalityResult:
    """
    Decide whether hom(source, target) vanishes (and hom(target, source) if mutual).

    Returns UNKNOWN when only Euler information is available and it is zero.
    """
    homs = [hom_V(total, source, target)]
    if mutual:
        homs.append(hom_V(total, target, source))
    if all(h.is_zero() and h.certificate >= Certificate.EXACT for h in homs):
        return OrthogonalityResult(Verdict.ORTHOGONAL, tuple(homs))
    if any(
        (not h.is_zero() and h.certificate >= Certificate.EXACT) or h.euler != 0
        for h in homs
    ):
        return OrthogonalityResult(Verdict.NOT_ORTHOGONAL, tuple(homs))
    return OrthogonalityResult(Verdict.UNKNOWN, tuple(homs))


def euler_pairing(total: TotalSpace, source: FObject, target: FObject) -> int:
    """chi(source, target) = sum (-1)^k dim hom^k; exact for every certificate."""
    return hom_V(total, source, target).euler


def k_class(total: TotalSpace, obj: FObject) -> dict[Weight, int]:
    """Equivariant K-class of an object as a torus character on the zero section."""
    flag = total.flag
    rs = total.rs
    result: dict[Weight, int] = {}
    for term in obj.terms:
        sign = -term.multiplicity if term.shift % 2 else term.multiplicity
        if term.bundle.shift % 2:
            sign = -sign
        for weight, multiplicity in term.bundle.pieces:
            if flag.is_character(weight):
                character = {weight: 1}
            else:
                character = levi_torus_character(
                    rs, flag.levi, to_levi_weight(rs, flag.levi, weight)
                )
            for nu, coefficient in character.items():
                result[nu] = result.get(nu, 0) + sign * multiplicity * coefficient
    return {w: c for w, c in result.items() if c}


def character_product(
    rep_character: dict[Weight, int], klass: dict[Weight, int]
) -> dict[Weight, int]:
    """Product of two torus characters (e.g. a G-representation times a K-class)."""
    result: dict[Weight, int] = {}
    for a, ca in rep_character.items():
        for b, cb in klass.items():
            key = a + b
            result[key] = result.get(key, 0) + ca * cb
    return {w: c for w, c in result.items() if c}


def character_sum(*characters: tuple[int, dict[Weight, int]]) -> dict[Weight, int]:
    """Linear combination sum(coefficient * character)."""
    result: dict[Weight, int] = {}
    for coefficient, character in characters:
        for weight, value in character.items():
            result[weight] = result.get(weight, 0) + coefficient * value
    return {w: c for w, c in result.items() if c}


__all__ = [
    "FObject",
    "FTerm",
    "HomComplex",
    "OrthogonalityResult",
    "TotalSpace",
    "Verdict",
    "character_product",
    "character_sum",
    "euler_pairing",
    "hom_V",
    "is_orthogonal",
    "k_class",
]
