"""
Characters of Levi subgroups and of the ambient group.

GL-block Levi characters are computed with the Gelfand-Tsetlin recursion and
decomposed by highest-weight peeling. Characters of the full group (or of any
Levi subsystem, symplectic factors included) come from the Freudenthal formula.
"""

from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Generic, TypeVar, overload

from flopverify.domain.weight_lattice import (
    RootSystem,
    Weight,
    epsilon_sizes,
    from_epsilon,
    inner_product,
    to_epsilon,
)

K = TypeVar("K")

Monomial = tuple[int, ...]


class CharacterError(RuntimeError):
    """Internal inconsistency of character arithmetic."""


def _boundaries(sizes: Iterable[int]) -> list[int]:
    result, total = [], 0
    for size in sizes:
        total += size
        result.append(total)
    return result


@dataclass(frozen=True)
class LeviSpec:
    """
    Levi subgroup given as a product of GL blocks.

    ``segments`` are the epsilon-coordinate sizes of the root system factors;
    the blocks partition every segment.
    """

    blocks: tuple[int, ...]
    segments: tuple[int, ...]

    def __post_init__(self):
        if any(size <= 0 for size in self.blocks):
            raise ValueError("Levi blocks must have positive sizes")
        if sum(self.blocks) != sum(self.segments):
            raise ValueError(
                f"Levi blocks {self.blocks} do not partition segments {self.segments}"
            )
        if not set(_boundaries(self.segments)) <= set(_boundaries(self.blocks)):
            raise ValueError(
                f"Levi blocks {self.blocks} cross factor boundaries {self.segments}"
            )

    @property
    def width(self) -> int:
        return sum(self.blocks)

    def split(self, epsilon: Iterable[int]) -> tuple[tuple[int, ...], ...]:
        values = tuple(epsilon)
        if len(values) != self.width:
            raise ValueError(f"Expected {self.width} coordinates, got {len(values)}")
        parts, start = [], 0
        for size in self.blocks:
            parts.append(values[start : start + size])
            start += size
        return tuple(parts)

    def refines(self, other: "LeviSpec") -> bool:
        """True if every block boundary of ``other`` is also a boundary here."""
        return self.segments == other.segments and set(
            _boundaries(other.blocks)
        ) <= set(_boundaries(self.blocks))

    @property
    def dominant_functional(self) -> tuple[int, ...]:
        """Strictly decreasing functional (N-1, ..., 0) on every segment."""
        values: list[int] = []
        for size in self.segments:
            values.extend(range(size - 1, -1, -1))
        return tuple(values)


@dataclass(frozen=True)
class LeviWeight:
    """Dominant weight of a GL-block Levi: one non-increasing tuple per block."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for block in self.blocks:
            if any(block[i] < block[i + 1] for i in range(len(block) - 1)):
                raise ValueError(f"Levi weight block {block} is not dominant")

    @classmethod
    def from_epsilon(cls, spec: LeviSpec, epsilon: Iterable[int]) -> "LeviWeight":
        return cls(spec.split(epsilon))

    @property
    def epsilon(self) -> Monomial:
        return tuple(value for block in self.blocks for value in block)

    def __str__(self) -> str:
        return "|".join(",".join(str(v) for v in block) for block in self.blocks)


@dataclass(frozen=True)
class RepSum(Generic[K]):
    """
    Ordered formal sum of irreducibles with multiplicities.

    Multiplicities are positive unless ``virtual`` is set, in which case signed
    multiplicities (Euler characteristics) are allowed. Zero terms are dropped.
    """

    terms: tuple[tuple[K, int], ...] = ()
    virtual: bool = False

    def __post_init__(self):
        merged: dict[K, int] = {}
        for key, multiplicity in self.terms:
            merged[key] = merged.get(key, 0) + multiplicity
        cleaned = tuple((key, m) for key, m in merged.items() if m != 0)
        if not self.virtual and any(m < 0 for _, m in cleaned):
            raise ValueError("Negative multiplicity in a non-virtual RepSum")
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def single(cls, key: K, multiplicity: int = 1) -> "RepSum[K]":
        return cls(((key, multiplicity),))

    def __iter__(self) -> Iterator[tuple[K, int]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "RepSum[K]") -> "RepSum[K]":
        return RepSum(self.terms + other.terms, self.virtual or other.virtual)

    def scaled(self, factor: int) -> "RepSum[K]":
        return RepSum(
            tuple((key, factor * m) for key, m in self.terms),
            self.virtual or factor < 0,
        )

    def as_virtual(self) -> "RepSum[K]":
        return RepSum(self.terms, True)

    def multiplicity(self, key: K) -> int:
        return dict(self.terms).get(key, 0)

    def dimension(self, dim_of: Callable[[K], int]) -> int:
        return sum(m * dim_of(key) for key, m in self.terms)

    def same_as(self, other: "RepSum[K]") -> bool:
        """Equality as formal sums, ignoring order."""
        return dict(self.terms) == dict(other.terms)


@dataclass(frozen=True)
class CharacterPoly:
    """Laurent polynomial in epsilon (or fundamental) coordinates."""

    terms: dict[Monomial, int]

    @classmethod
    def one(cls, width: int) -> "CharacterPoly":
        return cls({(0,) * width: 1})

    def __mul__(self, other: "CharacterPoly") -> "CharacterPoly":
        product: dict[Monomial, int] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b, strict=True))
                product[key] = product.get(key, 0) + ca * cb
        return CharacterPoly({k: v for k, v in product.items() if v})

    def __add__(self, other: "CharacterPoly") -> "CharacterPoly":
        total = dict(self.terms)
        for key, value in other.terms.items():
            total[key] = total.get(key, 0) + value
        return CharacterPoly({k: v for k, v in total.items() if v})

    def scaled(self, factor: int) -> "CharacterPoly":
        return CharacterPoly({k: factor * v for k, v in self.terms.items() if factor})

    def dimension(self) -> int:
        return sum(self.terms.values())

    def coefficient(self, monomial: Monomial) -> int:
        return self.terms.get(monomial, 0)


# GL characters


@lru_cache(maxsize=None)
def _gl_character(weight: tuple[int, ...]) -> tuple[tuple[Monomial, int], ...]:
    """Gelfand-Tsetlin recursion: sum over interlacing mu of x_k^(|lambda|-|mu|) chi_mu."""
    if not weight:
        return (((), 1),)
    if len(weight) == 1:
        return (((weight[0],), 1),)
    total = sum(weight)
    result: dict[Monomial, int] = {}
    for mu in _interlacing(weight):
        exponent = total - sum(mu)
        for monomial, coefficient in _gl_character(mu):
            key = monomial + (exponent,)
            result[key] = result.get(key, 0) + coefficient
    return tuple(sorted(result.items()))


def _interlacing(weight: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All mu with weight[i] >= mu[i] >= weight[i+1]."""
    ranges = [range(weight[i + 1], weight[i] + 1) for i in range(len(weight) - 1)]

    def extend(prefix: tuple[int, ...], depth: int) -> Iterator[tuple[int, ...]]:
        if depth == len(ranges):
            yield prefix
            return
        for value in ranges[depth]:
            yield from extend(prefix + (value,), depth + 1)

    yield from extend((), 0)


def irr_character(spec: LeviSpec, weight: LeviWeight) -> CharacterPoly:
    """Character of the Levi irreducible as a Laurent polynomial in epsilon."""
    if tuple(len(block) for block in weight.blocks) != spec.blocks:
        raise ValueError(f"Levi weight {weight} does not match blocks {spec.blocks}")
    character = CharacterPoly({(): 1})
    for block in weight.blocks:
        character = CharacterPoly(
            {
                a + b: ca * cb
                for a, ca in character.terms.items()
                for b, cb in _gl_character(block)
            }
        )
    return character


def _is_dominant(spec: LeviSpec, monomial: Monomial) -> bool:
    return all(
        all(block[i] >= block[i + 1] for i in range(len(block) - 1))
        for block in spec.split(monomial)
    )


def decompose(
    spec: LeviSpec, character: CharacterPoly, virtual: bool = False
) -> RepSum[LeviWeight]:
    """
    Decompose a Levi character into irreducibles by peeling the lex-maximal monomial.

    Raises:
        CharacterError: if a non-virtual decomposition meets a negative multiplicity
            or a non-dominant leading monomial
    """
    remaining = dict(character.terms)
    pieces: list[tuple[LeviWeight, int]] = []
    while remaining:
        leading = max(remaining)
        multiplicity = remaining[leading]
        if not _is_dominant(spec, leading):
            raise CharacterError(f"Leading monomial {leading} is not dominant")
        if multiplicity < 0 and not virtual:
            raise CharacterError(
                f"Negative multiplicity {multiplicity} while peeling {leading}"
            )
        highest = LeviWeight.from_epsilon(spec, leading)
        pieces.append((highest, multiplicity))
        for monomial, coefficient in irr_character(spec, highest).terms.items():
            value = remaining.get(monomial, 0) - multiplicity * coefficient
            if value:
                remaining[monomial] = value
            else:
                remaining.pop(monomial, None)
    return RepSum(tuple(pieces), virtual)


def _as_rep_sum(value: "LeviWeight | RepSum[LeviWeight]") -> RepSum[LeviWeight]:
    return value if isinstance(value, RepSum) else RepSum.single(value)


def tensor_decompose(
    spec: LeviSpec,
    left: LeviWeight | RepSum[LeviWeight],
    right: LeviWeight | RepSum[LeviWeight],
) -> RepSum[LeviWeight]:
    """
    Decompose the tensor product of two Levi representations.

    Sums multiply term by term; the result is virtual if either factor is.

    Example:
        Blocks (2,), weights (1, 0) and (1, 0) give (2, 0) + (1, 1).
    """
    left_sum, right_sum = _as_rep_sum(left), _as_rep_sum(right)
    result: RepSum[LeviWeight] = RepSum(virtual=left_sum.virtual or right_sum.virtual)
    for a, m in left_sum:
        for b, n in right_sum:
            product = irr_character(spec, a) * irr_character(spec, b)
            result = result + decompose(spec, product).scaled(m * n)
    return result


@overload
def dual(spec: LeviSpec, weight: LeviWeight) -> LeviWeight: ...


@overload
def dual(spec: LeviSpec, weight: RepSum[LeviWeight]) -> RepSum[LeviWeight]: ...


def dual(spec, weight):
    """Dual representation: reverse and negate every block of every term."""
    if isinstance(weight, RepSum):
        return RepSum(tuple((dual(spec, w), m) for w, m in weight), weight.virtual)
    return LeviWeight(tuple(tuple(-v for v in reversed(block)) for block in weight.blocks))


def dim(spec: LeviSpec, weight: LeviWeight) -> int:
    """Weyl dimension formula, block by block."""
    total = Fraction(1)
    for block in weight.blocks:
        for i in range(len(block)):
            for j in range(i + 1, len(block)):
                total *= Fraction(block[i] - block[j] + j - i, j - i)
    if total.denominator != 1:
        raise CharacterError(f"Non-integral dimension for {weight}")
    return int(total)


def branch(
    big: LeviSpec, small: LeviSpec, weight: LeviWeight
) -> RepSum[LeviWeight]:
    """
    Restrict an irreducible of the big Levi to the small one.

    Pieces are ordered sub-bundle first: ascending pairing with a strictly
    decreasing functional on every segment, lexicographic on ties.

    Raises:
        ValueError: if the small Levi is not contained in the big one
    """
    if not small.refines(big):
        raise ValueError(f"Levi {small.blocks} does not refine {big.blocks}")
    pieces = decompose(small, irr_character(big, weight))
    delta = small.dominant_functional

    def order(item: tuple[LeviWeight, int]) -> tuple[int, Monomial]:
        epsilon = item[0].epsilon
        return sum(a * b for a, b in zip(epsilon, delta, strict=True)), epsilon

    return RepSum(tuple(sorted(pieces.terms, key=order)))


# Levi data attached to a root system


def levi_spec(rs: RootSystem, crossed: Iterable[int]) -> LeviSpec:
    """
    GL-block Levi of the parabolic with the given crossed nodes.

    Raises:
        CharacterError: if a type C factor keeps a symplectic block
    """
    crossed_set = set(crossed)
    blocks: list[int] = []
    for (family, rank), start, size in zip(
        rs.factors, rs.offsets, epsilon_sizes(rs), strict=True
    ):
        local = sorted(i - start for i in crossed_set if start <= i < start + rank)
        if family == "C" and (rank - 1) not in local:
            raise CharacterError(
                f"Levi of C{rank} with crossed nodes {local} has a symplectic factor"
            )
        cuts = [0] + [i + 1 for i in local]
        if cuts[-1] != size:
            cuts.append(size)
        blocks.extend(cuts[k + 1] - cuts[k] for k in range(len(cuts) - 1))
    return LeviSpec(tuple(blocks), epsilon_sizes(rs))


def to_levi_weight(rs: RootSystem, spec: LeviSpec, weight: Weight) -> LeviWeight:
    return LeviWeight.from_epsilon(spec, to_epsilon(rs, weight))


def from_levi_weight(rs: RootSystem, weight: LeviWeight) -> Weight:
    return from_epsilon(rs, weight.epsilon)


def levi_torus_character(
    rs: RootSystem, spec: LeviSpec, weight: LeviWeight
) -> dict[Weight, int]:
    """Torus character of a Levi irreducible in fundamental coordinates."""
    result: dict[Weight, int] = {}
    for monomial, coefficient in irr_character(spec, weight).terms.items():
        key = from_epsilon(rs, monomial)
        result[key] = result.get(key, 0) + coefficient
    return result


# Characters of the full group and of Levi subsystems


def _subsystem_roots(rs: RootSystem, nodes: tuple[int, ...]) -> list[Weight]:
    allowed = set(nodes)
    return [
        rs.root_weight(beta)
        for beta in rs.positive_roots
        if all(c == 0 or i in allowed for i, c in enumerate(beta))
    ]


@lru_cache(maxsize=None)
def weight_multiplicities(
    rs: RootSystem, weight: Weight, nodes: tuple[int, ...] | None = None
) -> tuple[tuple[Weight, int], ...]:
    """
    Weight multiplicities of the irreducible with the given highest weight.

    Uses the Freudenthal formula for the subsystem spanned by ``nodes``
    (all nodes for the full group). Weights are generated by descending
    simple-root strings, so only genuine weights are visited.
    """
    active = tuple(range(rs.rank)) if nodes is None else tuple(sorted(nodes))
    if any(weight[i] < 0 for i in active):
        raise ValueError(f"Weight {weight} is not dominant for nodes {active}")
    roots = _subsystem_roots(rs, active)
    two_rho = Weight.zero(rs.rank)
    for root in roots:
        two_rho = two_rho + root
    top = inner_product(rs, weight, weight)

    multiplicities: dict[Weight, int] = {weight: 1}
    layer = [weight]
    while layer:
        candidates: set[Weight] = set()
        for nu in layer:
            for i in active:
                alpha = rs.simple_root(i)
                above = 0
                while nu + alpha * (above + 1) in multiplicities:
                    above += 1
                if nu[i] + above >= 1:
                    candidates.add(nu - alpha)
        next_layer = []
        for nu in sorted(candidates, key=lambda w: w.coords, reverse=True):
            numerator = Fraction(0)
            for root in roots:
                k = 1
                while nu + root * k in multiplicities:
                    shifted = nu + root * k
                    numerator += multiplicities[shifted] * inner_product(rs, shifted, root)
                    k += 1
            denominator = top - inner_product(rs, nu, nu) + inner_product(
                rs, weight - nu, two_rho
            )
            if denominator == 0:
                raise CharacterError(f"Freudenthal denominator vanishes at {nu}")
            value = 2 * numerator / denominator
            if value.denominator != 1:
                raise CharacterError(f"Non-integral multiplicity {value} at {nu}")
            if value > 0:
                multiplicities[nu] = int(value)
                next_layer.append(nu)
        layer = next_layer
    return tuple(multiplicities.items())


def g_character(rs: RootSystem, weight: Weight) -> dict[Weight, int]:
    """Torus character of the irreducible G-representation V_lambda."""
    return dict(weight_multiplicities(rs, weight))


@lru_cache(maxsize=None)
def weyl_dimension(rs: RootSystem, weight: Weight) -> int:
    """Dimension of V_lambda by the Weyl dimension formula."""
    shifted = [a + 1 for a in weight]
    total = Fraction(1)
    for beta in rs.positive_roots:
        numerator = sum(c * shifted[j] * rs.symmetrizer[j] for j, c in enumerate(beta))
        denominator = sum(c * rs.symmetrizer[j] for j, c in enumerate(beta))
        total *= Fraction(numerator, denominator)
    if total.denominator != 1:
        raise CharacterError(f"Non-integral Weyl dimension for {weight}")
    return int(total)


def levi_determinant(rs: RootSystem, crossed: Iterable[int], weight: Weight) -> Weight:
    """First Chern class (sum of weights) of the Levi irreducible with highest weight."""
    crossed_set = set(crossed)
    nodes = tuple(i for i in range(rs.rank) if i not in crossed_set)
    total = Weight.zero(rs.rank)
    for nu, multiplicity in weight_multiplicities(rs, weight, nodes):
        total = total + nu * multiplicity
    return total


def levi_rank(rs: RootSystem, crossed: Iterable[int], weight: Weight) -> int:
    crossed_set = set(crossed)
    nodes = tuple(i for i in range(rs.rank) if i not in crossed_set)
    return sum(m for _, m in weight_multiplicities(rs, weight, nodes))


def rep_name(rs: RootSystem, weight: Weight) -> str:
    """Human-readable name of a G-irreducible: k, V, V^vee or V(lambda)."""
    if weight.is_zero():
        return "k"
    if len(rs.factors) == 1:
        unit = [0] * rs.rank
        unit[0] = 1
        if weight.coords == tuple(unit):
            return "V^vee"
        if rs.factors[0][0] == "A":
            last = [0] * rs.rank
            last[-1] = 1
            if weight.coords == tuple(last):
                return "V"
    return f"V{weight}"
