"""
Borel-Weil-Bott cohomology of homogeneous bundles on G/P.

A homogeneous bundle is stored through the Levi irreducibles of its
associated graded (``pieces``, sub-bundle first). Cohomology of an
irreducible piece is computed by BBW; assembling pieces is exact when the
bundle is split or when no spectral-sequence differential can be non-zero.
Bundles pulled back from a coarser flag variety are otherwise pushed forward
with relative BBW and the projection formula.
"""

from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import cached_property, lru_cache

import numpy as np

from flopverify.domain.character_ring import (
    CharacterError,
    LeviSpec,
    RepSum,
    branch,
    dim,
    from_levi_weight,
    levi_spec,
    levi_torus_character,
    rep_name,
    tensor_decompose,
    to_levi_weight,
    weyl_dimension,
)
from flopverify.domain.weight_lattice import (
    Regular,
    RootSystem,
    Weight,
    dominant_conjugate,
    make_dominant,
    rho,
    weyl_images,
)

Pieces = tuple[tuple[Weight, int], ...]


class Certificate(IntEnum):
    """Strength of a cohomology computation; combining takes the minimum."""

    EULER_ONLY = 0
    EXACT = 1
    VANISHING_CERTIFIED = 2

    @property
    def label(self) -> str:
        return {0: "EulerOnly", 1: "Exact", 2: "VanishingCertified"}[int(self)]


class Assembly(Enum):
    SPLIT = "split"
    FILTERED = "filtered"


def _merge(pieces: Iterable[tuple[Weight, int]]) -> Pieces:
    merged: dict[Weight, int] = {}
    for weight, multiplicity in pieces:
        merged[weight] = merged.get(weight, 0) + multiplicity
    return tuple((w, m) for w, m in merged.items() if m)


@dataclass(frozen=True)
class HomogeneousSpace:
    """
    Partial flag variety G/P, P given by its crossed nodes (0-based).

    Example:
        HomogeneousSpace(RootSystem.simple("C", 2), (0, 1)) is the full flag
        variety of Sp4, of dimension 4.
    """

    rs: RootSystem
    crossed: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        crossed = tuple(sorted(set(self.crossed)))
        if not crossed:
            raise ValueError("A homogeneous space needs at least one crossed node")
        if any(i < 0 or i >= self.rs.rank for i in crossed):
            raise ValueError(f"Crossed nodes {crossed} out of range for {self.rs}")
        object.__setattr__(self, "crossed", crossed)

    @property
    def uncrossed(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.rs.rank) if i not in self.crossed)

    @cached_property
    def unipotent_roots(self) -> tuple[Weight, ...]:
        """Positive roots whose support meets a crossed node."""
        crossed = set(self.crossed)
        return tuple(
            self.rs.root_weight(beta)
            for beta in self.rs.positive_roots
            if any(beta[i] for i in crossed)
        )

    @property
    def dim(self) -> int:
        return len(self.unipotent_roots)

    @cached_property
    def canonical_weight(self) -> Weight:
        total = Weight.zero(self.rs.rank)
        for root in self.unipotent_roots:
            total = total - root
        return total

    @cached_property
    def levi(self) -> LeviSpec:
        return levi_spec(self.rs, self.crossed)

    def is_character(self, weight: Weight) -> bool:
        """True if the weight is a character of the Levi (a line bundle)."""
        return all(weight[i] == 0 for i in self.uncrossed)

    def is_levi_dominant(self, weight: Weight) -> bool:
        return all(weight[i] >= 0 for i in self.uncrossed)

    def maps_to(self, target: "HomogeneousSpace") -> bool:
        return target.rs == self.rs and set(target.crossed) <= set(self.crossed)

    def __str__(self) -> str:
        return self.name or f"{self.rs}:{','.join(str(i + 1) for i in self.crossed)}"


@dataclass(frozen=True)
class Pullback:
    """Record of a bundle of the form pi^*(E) (x) O(twist) for pi to a coarser space."""

    target_crossed: tuple[int, ...]
    pieces: Pieces
    twist: Weight


@dataclass(frozen=True)
class Bundle:
    """
    Homogeneous bundle on a fixed space, with an optional derived shift.

    ``pieces`` are the Levi irreducibles of the associated graded, sub first.
    """

    pieces: Pieces
    assembly: Assembly = Assembly.SPLIT
    shift: int = 0
    pulled_from: Pullback | None = None

    def __post_init__(self):
        for weight, multiplicity in self.pieces:
            if multiplicity <= 0:
                raise ValueError(f"Piece {weight} has non-positive multiplicity")

    @classmethod
    def line(cls, weight: Weight, shift: int = 0) -> "Bundle":
        return cls(((weight, 1),), Assembly.SPLIT, shift)

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    def is_line(self, space: HomogeneousSpace) -> bool:
        return (
            len(self.pieces) == 1
            and self.pieces[0][1] == 1
            and space.is_character(self.pieces[0][0])
        )

    def normal_form(self) -> Pieces:
        """Pieces as a sorted multiset; equal for isomorphic associated gradeds."""
        return tuple(sorted(_merge(self.pieces), key=lambda item: item[0].coords))

    def shifted(self, amount: int) -> "Bundle":
        return Bundle(self.pieces, self.assembly, self.shift + amount, self.pulled_from)

    def rank(self, space: HomogeneousSpace) -> int:
        return sum(m * levi_dimension(space, w) for w, m in self.pieces)


@dataclass(frozen=True)
class GradedGRep:
    """Graded G-representation: degree -> RepSum of highest weights."""

    rs: RootSystem
    degrees: tuple[tuple[int, RepSum[Weight]], ...] = ()

    def __post_init__(self):
        merged: dict[int, RepSum[Weight]] = {}
        for degree, rep in self.degrees:
            merged[degree] = merged[degree] + rep if degree in merged else rep
        cleaned = tuple(sorted((d, r) for d, r in merged.items() if not r.is_zero()))
        object.__setattr__(self, "degrees", cleaned)

    @classmethod
    def zero(cls, rs: RootSystem) -> "GradedGRep":
        return cls(rs)

    def is_zero(self) -> bool:
        return not self.degrees

    def __add__(self, other: "GradedGRep") -> "GradedGRep":
        return GradedGRep(self.rs, self.degrees + other.degrees)

    def shifted(self, amount: int) -> "GradedGRep":
        """Move every degree by ``amount``."""
        return GradedGRep(self.rs, tuple((d + amount, r) for d, r in self.degrees))

    def scaled(self, factor: int) -> "GradedGRep":
        return GradedGRep(self.rs, tuple((d, r.scaled(factor)) for d, r in self.degrees))

    def in_degree(self, degree: int) -> RepSum[Weight]:
        return dict(self.degrees).get(degree, RepSum())

    def dims(self) -> dict[int, int]:
        return {
            d: r.dimension(lambda w: weyl_dimension(self.rs, w)) for d, r in self.degrees
        }

    def total_dimension(self) -> int:
        return sum(self.dims().values())

    def euler(self) -> int:
        return sum(-value if d % 2 else value for d, value in self.dims().items())

    def euler_character(self) -> RepSum[Weight]:
        terms: list[tuple[Weight, int]] = []
        for degree, rep in self.degrees:
            sign = -1 if degree % 2 else 1
            terms.extend((w, sign * m) for w, m in rep)
        return RepSum(tuple(terms), virtual=True)

    def describe(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for degree, rep in self.degrees:
            names = " + ".join(
                (f"{m}*" if m != 1 else "") + rep_name(self.rs, w) for w, m in rep
            )
            parts.append(f"{names}[{-degree}]" if degree else names)
        return " + ".join(parts)


@dataclass(frozen=True)
class CohomResult:
    value: GradedGRep
    certificate: Certificate
    euler: RepSum[Weight]


def levi_dimension(space: HomogeneousSpace, weight: Weight) -> int:
    if space.is_character(weight):
        return 1
    return dim(space.levi, to_levi_weight(space.rs, space.levi, weight))


def levi_dual(space: HomogeneousSpace, weight: Weight) -> Weight:
    """Highest weight of the dual Levi irreducible, -w0_L(lambda)."""
    return dominant_conjugate(space.rs, -weight, space.uncrossed)


def tensor_levi(space: HomogeneousSpace, left: Weight, right: Weight) -> Pieces:
    """Decompose E_left (x) E_right into Levi irreducibles."""
    if space.is_character(left) or space.is_character(right):
        return ((left + right, 1),)
    spec = space.levi
    product = tensor_decompose(
        spec, to_levi_weight(space.rs, spec, left), to_levi_weight(space.rs, spec, right)
    )
    return tuple((from_levi_weight(space.rs, w), m) for w, m in product)


def branch_to(
    space: HomogeneousSpace, target: HomogeneousSpace, weight: Weight
) -> Pieces:
    """Restrict a Levi irreducible of ``target`` to the (smaller) Levi of ``space``."""
    if target.is_character(weight):
        return ((weight, 1),)
    rs = space.rs
    pieces = branch(target.levi, space.levi, to_levi_weight(rs, target.levi, weight))
    return tuple((from_levi_weight(rs, w), m) for w, m in pieces)


def pullback(
    space: HomogeneousSpace,
    target: HomogeneousSpace,
    pieces: Pieces,
    twist: Weight | None = None,
) -> Bundle:
    """Bundle pi^*(sum of target irreducibles) (x) O(twist) on ``space``."""
    if not space.maps_to(target):
        raise ValueError(f"{space} does not map to {target}")
    twist = Weight.zero(space.rs.rank) if twist is None else twist
    for weight, _ in pieces:
        if not target.is_levi_dominant(weight):
            raise ValueError(f"{weight} is not a Levi-dominant weight on {target}")
    result: list[tuple[Weight, int]] = []
    split = True
    for weight, multiplicity in pieces:
        restricted = branch_to(space, target, weight)
        split = split and len(restricted) == 1
        result.extend((w + twist, m * multiplicity) for w, m in restricted)
    return Bundle(
        tuple(result),
        Assembly.SPLIT if split else Assembly.FILTERED,
        0,
        Pullback(target.crossed, _merge(pieces), twist),
    )


def twist_bundle(bundle: Bundle, weight: Weight) -> Bundle:
    """Tensor with the line bundle O(weight)."""
    pulled = bundle.pulled_from
    if pulled is not None:
        pulled = Pullback(pulled.target_crossed, pulled.pieces, pulled.twist + weight)
    return Bundle(
        tuple((w + weight, m) for w, m in bundle.pieces),
        bundle.assembly,
        bundle.shift,
        pulled,
    )


def dual_bundle(space: HomogeneousSpace, bundle: Bundle) -> Bundle:
    """Dual bundle; the filtration order is reversed and the shift negated."""
    pieces = tuple((levi_dual(space, w), m) for w, m in reversed(bundle.pieces))
    pulled = bundle.pulled_from
    if pulled is not None:
        target = HomogeneousSpace(space.rs, pulled.target_crossed)
        pulled = Pullback(
            pulled.target_crossed,
            tuple((levi_dual(target, w), m) for w, m in pulled.pieces),
            -pulled.twist,
        )
    return Bundle(pieces, bundle.assembly, -bundle.shift, pulled)


def tensor_bundles(space: HomogeneousSpace, left: Bundle, right: Bundle) -> Bundle:
    """
    Tensor product of two bundles on the same space.

    Line bundles act by twisting. Bundles pulled back from the same coarser
    space are multiplied there and branched, so the pullback record survives.
    """
    shift = left.shift + right.shift
    if left.is_line(space):
        return twist_bundle(right, left.pieces[0][0]).shifted(left.shift)
    if right.is_line(space):
        return twist_bundle(left, right.pieces[0][0]).shifted(right.shift)

    a, b = left.pulled_from, right.pulled_from
    if a is not None and b is not None and a.target_crossed == b.target_crossed:
        target = HomogeneousSpace(space.rs, a.target_crossed)
        products: list[tuple[Weight, int]] = []
        for wa, ma in a.pieces:
            for wb, mb in b.pieces:
                products.extend((w, m * ma * mb) for w, m in tensor_levi(target, wa, wb))
        result = pullback(space, target, _merge(products), a.twist + b.twist)
        return result.shifted(shift)

    pieces: list[tuple[Weight, int]] = []
    for wa, ma in left.pieces:
        for wb, mb in right.pieces:
            pieces.extend((w, m * ma * mb) for w, m in tensor_levi(space, wa, wb))
    split = left.assembly is Assembly.SPLIT and right.assembly is Assembly.SPLIT
    return Bundle(
        tuple(pieces), Assembly.SPLIT if split else Assembly.FILTERED, shift, None
    )


@lru_cache(maxsize=None)
def cohomology_irreducible(space: HomogeneousSpace, weight: Weight) -> GradedGRep:
    """
    Cohomology of the irreducible homogeneous bundle with highest weight lambda.

    Example:
        On the C2 flag variety, O(-2h+H) = E_(-2,1) gives V_0 in degree 1.
    """
    if not space.is_levi_dominant(weight):
        raise ValueError(f"{weight} is not Levi-dominant on {space}")
    outcome = make_dominant(space.rs, weight)
    if isinstance(outcome, Regular):
        return GradedGRep(space.rs, ((outcome.length, RepSum.single(outcome.weight)),))
    return GradedGRep.zero(space.rs)


@lru_cache(maxsize=None)
def cohomology(space: HomogeneousSpace, bundle: Bundle) -> CohomResult:
    """Cohomology of a (possibly filtered, possibly shifted) homogeneous bundle."""
    rs = space.rs
    contributions: list[GradedGRep] = []
    for weight, multiplicity in bundle.pieces:
        value = cohomology_irreducible(space, weight)
        if not value.is_zero():
            contributions.append(value.scaled(multiplicity).shifted(-bundle.shift))

    total = GradedGRep.zero(rs)
    for value in contributions:
        total = total + value
    euler = total.euler_character()

    if not contributions:
        return CohomResult(total, Certificate.VANISHING_CERTIFIED, euler)

    degrees = sorted({d for value in contributions for d, _ in value.degrees})
    isolated = all(b - a != 1 for a, b in zip(degrees, degrees[1:], strict=False))
    if bundle.assembly is Assembly.SPLIT or len(contributions) <= 1 or isolated:
        return CohomResult(total, Certificate.EXACT, euler)

    if bundle.pulled_from is not None:
        target = HomogeneousSpace(rs, bundle.pulled_from.target_crossed)
        pushed = pushforward(space, bundle, target)
        result = cohomology(target, pushed)
        return CohomResult(result.value, result.certificate, euler)

    return CohomResult(total, Certificate.EULER_ONLY, euler)


@lru_cache(maxsize=None)
def pushforward(
    space: HomogeneousSpace, bundle: Bundle, target: HomogeneousSpace
) -> Bundle:
    """
    Derived pushforward along space -> target of a pulled-back bundle.

    Relative BBW of the twist over the fibre gives E_mu[-l]; the projection
    formula tensors it with the pulled-back pieces.

    Raises:
        ValueError: if the bundle is not recorded as pulled back from ``target``
    """
    pulled = bundle.pulled_from
    if pulled is None or pulled.target_crossed != target.crossed:
        raise ValueError(f"Bundle is not pulled back from {target}")
    outcome = make_dominant(space.rs, pulled.twist, target.uncrossed)
    if not isinstance(outcome, Regular):
        return Bundle((), Assembly.SPLIT, bundle.shift)
    pieces: list[tuple[Weight, int]] = []
    for weight, multiplicity in pulled.pieces:
        pieces.extend(
            (w, m * multiplicity) for w, m in tensor_levi(target, weight, outcome.weight)
        )
    return Bundle(_merge(pieces), Assembly.SPLIT, bundle.shift - outcome.length)


def euler_characteristic(
    space: HomogeneousSpace, bundle: Bundle, cap: int | None = None
) -> RepSum[Weight]:
    """
    Independent Euler characteristic by explicit Weyl-group summation.

    Every torus weight nu of the bundle contributes sum_w sgn(w) e^{w(nu + rho)};
    the coefficient at a strictly dominant point mu + rho is the multiplicity of V_mu.
    """
    rs = space.rs
    matrices, signs = weyl_images(rs, cap)
    points: list[tuple[int, ...]] = []
    weights: list[int] = []
    for weight, multiplicity in bundle.pieces:
        if space.is_character(weight):
            character = {weight: 1}
        else:
            character = levi_torus_character(
                rs, space.levi, to_levi_weight(rs, space.levi, weight)
            )
        for nu, coefficient in character.items():
            points.append((nu + rho(rs)).coords)
            weights.append(coefficient * multiplicity)
    if not points:
        return RepSum(virtual=True)
    vectors = np.array(points, dtype=np.int64)
    images = np.einsum("tr,wrs->wts", vectors, matrices)
    coefficients = signs[:, None] * np.array(weights, dtype=np.int64)[None, :]
    dominant = np.all(images > 0, axis=2)
    totals: dict[tuple[int, ...], int] = {}
    for w_index, t_index in zip(*np.nonzero(dominant), strict=True):
        key = tuple(int(x) for x in images[w_index, t_index])
        totals[key] = totals.get(key, 0) + int(coefficients[w_index, t_index])
    sign = -1 if bundle.shift % 2 else 1
    terms = tuple(
        (Weight(key) - rho(rs), sign * value) for key, value in sorted(totals.items())
    )
    return RepSum(terms, virtual=True)


__all__ = [
    "Assembly",
    "Bundle",
    "CharacterError",
    "Certificate",
    "CohomResult",
    "GradedGRep",
    "HomogeneousSpace",
    "Pullback",
    "branch_to",
    "cohomology",
    "cohomology_irreducible",
    "dual_bundle",
    "euler_characteristic",
    "levi_dimension",
    "levi_dual",
    "pullback",
    "pushforward",
    "tensor_bundles",
    "tensor_levi",
    "twist_bundle",
]
