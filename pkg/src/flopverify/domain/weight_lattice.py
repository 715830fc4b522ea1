"""
Root systems, weights and Weyl group combinatorics for types A and C.

Conventions (Bourbaki numbering, nodes are 0-based internally):
    cartan[i][j] = <alpha_i, alpha_j^vee>, so row i of the Cartan matrix is
    alpha_i written in fundamental-weight coordinates. For C_n the last node
    is the long root, so C_2 has cartan [[2, -1], [-2, 2]].
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm

import numpy as np
import sympy

SUPPORTED_FAMILIES = ("A", "C")
DEFAULT_WEYL_RANK_CAP = 8


@dataclass(frozen=True)
class Weight:
    """Integral weight in fundamental-weight coordinates."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        for value in self.coords:
            if not isinstance(value, int | np.integer):
                raise ValueError("Weight coordinates must be integers")
        object.__setattr__(self, "coords", tuple(int(value) for value in self.coords))

    @classmethod
    def of(cls, *coords: int) -> "Weight":
        return cls(tuple(coords))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, index: int) -> int:
        return self.coords[index]

    def _check(self, other: "Weight") -> None:
        if len(other) != len(self):
            raise ValueError(
                f"Weight ranks differ: {len(self)} and {len(other)}"
            )

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def __mul__(self, scalar: int) -> "Weight":
        return Weight(tuple(scalar * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(a) for a in self.coords) + ")"


@dataclass(frozen=True)
class WeylElement:
    """
    Weyl group element given by a reduced word.

    The word (i1, ..., ik) stands for w = s_i1 s_i2 ... s_ik.
    """

    reduced_word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.reduced_word)


@dataclass(frozen=True)
class Regular:
    """Outcome of make_dominant when lambda + rho is regular."""

    weyl: WeylElement
    weight: Weight

    @property
    def length(self) -> int:
        return self.weyl.length


@dataclass(frozen=True)
class Singular:
    """Outcome of make_dominant when lambda + rho lies on a wall.

    ``root`` is a positive root (simple-root coordinates) orthogonal to lambda + rho.
    """

    root: tuple[int, ...]


def _factor_cartan(family: str, rank: int) -> list[list[int]]:
    cartan = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        cartan[i][i] = 2
        if i + 1 < rank:
            cartan[i][i + 1] = -1
            cartan[i + 1][i] = -1
    if family == "C":
        cartan[rank - 1][rank - 2] = -2
    return cartan


@dataclass(frozen=True)
class RootSystem:
    """
    Finite root system of type A or C, possibly a product of such factors.

    Args:
        factors: Sequence of (family, rank) pairs, e.g. (("C", 2),) or
            (("A", 3), ("A", 3)) for SL x SL.
    """

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("A root system needs at least one factor")
        for family, rank in self.factors:
            if family not in SUPPORTED_FAMILIES:
                raise ValueError(f"Unsupported root system family: {family}")
            if rank < 1 or (family == "C" and rank < 2):
                raise ValueError(f"Invalid rank {rank} for family {family}")

    @classmethod
    def simple(cls, family: str, rank: int) -> "RootSystem":
        return cls(((family, rank),))

    @classmethod
    def product(cls, *systems: "RootSystem") -> "RootSystem":
        factors: tuple[tuple[str, int], ...] = ()
        for system in systems:
            factors += system.factors
        return cls(factors)

    @classmethod
    def parse(cls, text: str) -> "RootSystem":
        """Parse names like "C2", "A4" or "A3xA3"."""
        factors = []
        for part in text.replace("×", "x").split("x"):
            part = part.strip()
            if len(part) < 2 or not part[1:].isdigit():
                raise ValueError(f"Invalid root system name: {text}")
            factors.append((part[0].upper(), int(part[1:])))
        return cls(tuple(factors))

    @property
    def family(self) -> str:
        return "x".join(family for family, _ in self.factors)

    @property
    def name(self) -> str:
        return "x".join(f"{family}{rank}" for family, rank in self.factors)

    @cached_property
    def rank(self) -> int:
        return sum(rank for _, rank in self.factors)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """First global node index of every factor."""
        result, start = [], 0
        for _, rank in self.factors:
            result.append(start)
            start += rank
        return tuple(result)

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        matrix = [[0] * self.rank for _ in range(self.rank)]
        for (family, rank), start in zip(self.factors, self.offsets, strict=True):
            block = _factor_cartan(family, rank)
            for i in range(rank):
                for j in range(rank):
                    matrix[start + i][start + j] = block[i][j]
        return tuple(tuple(row) for row in matrix)

    @cached_property
    def symmetrizer(self) -> tuple[int, ...]:
        """Integers d with cartan[i][j] * d_j == cartan[j][i] * d_i."""
        d: list[Fraction | None] = [None] * self.rank
        for root in range(self.rank):
            if d[root] is not None:
                continue
            d[root] = Fraction(1)
            queue = deque([root])
            while queue:
                i = queue.popleft()
                for j in range(self.rank):
                    if i != j and self.cartan[i][j] != 0 and d[j] is None:
                        d[j] = Fraction(self.cartan[j][i]) * d[i] / self.cartan[i][j]
                        queue.append(j)
        scale = lcm(*(value.denominator for value in d))
        return tuple(int(value * scale) for value in d)

    def simple_root(self, i: int) -> Weight:
        return Weight(self.cartan[i])

    def root_weight(self, root: tuple[int, ...]) -> Weight:
        """Convert a root from simple-root coordinates to fundamental coordinates."""
        coords = [0] * self.rank
        for i, c in enumerate(root):
            if c:
                for j in range(self.rank):
                    coords[j] += c * self.cartan[i][j]
        return Weight(tuple(coords))

    def root_norm(self, root: tuple[int, ...]) -> int:
        """(beta, beta) in the normalization (alpha_i, alpha_j) = cartan[i][j] * d_j."""
        total = 0
        for i, ci in enumerate(root):
            if ci:
                for j, cj in enumerate(root):
                    if cj:
                        total += ci * cj * self.cartan[i][j] * self.symmetrizer[j]
        return total

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots in simple-root coordinates, ordered by height."""
        simple = [tuple(1 if k == i else 0 for k in range(self.rank)) for i in range(self.rank)]
        known = set(simple)
        ordered = list(simple)
        layer = list(simple)
        while layer:
            next_layer = []
            for beta in layer:
                for i in range(self.rank):
                    pairing = sum(beta[j] * self.cartan[j][i] for j in range(self.rank))
                    p = 0
                    lowered = list(beta)
                    while True:
                        lowered[i] -= 1
                        if tuple(lowered) in known:
                            p += 1
                        else:
                            break
                    if p - pairing > 0:
                        raised = list(beta)
                        raised[i] += 1
                        candidate = tuple(raised)
                        if candidate not in known:
                            known.add(candidate)
                            ordered.append(candidate)
                            next_layer.append(candidate)
            layer = next_layer
        return tuple(ordered)

    @cached_property
    def positive_root_weights(self) -> tuple[Weight, ...]:
        return tuple(self.root_weight(beta) for beta in self.positive_roots)

    @cached_property
    def fundamental_gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """Matrix of (omega_j, omega_k), computed from the exact Cartan inverse."""
        inverse = sympy.Matrix(self.cartan).inv()
        gram = []
        for j in range(self.rank):
            row = []
            for k in range(self.rank):
                value = sympy.Rational(inverse[k, j]) * self.symmetrizer[j]
                row.append(Fraction(int(value.p), int(value.q)))
            gram.append(tuple(row))
        return tuple(gram)

    def __str__(self) -> str:
        return self.name


def rho(rs: RootSystem) -> Weight:
    """Half the sum of positive roots: all ones in fundamental coordinates."""
    return Weight((1,) * rs.rank)


def inner_product(rs: RootSystem, left: Weight, right: Weight) -> Fraction:
    """Exact invariant inner product of two weights."""
    gram = rs.fundamental_gram
    total = Fraction(0)
    for j, a in enumerate(left):
        if a:
            for k, b in enumerate(right):
                if b:
                    total += a * b * gram[j][k]
    return total


def to_root_coordinates(rs: RootSystem, weight: Weight) -> tuple[Fraction, ...]:
    """Coefficients c with weight = sum c_i alpha_i."""
    row = sympy.Matrix([list(weight.coords)]) * sympy.Matrix(rs.cartan).inv()
    return tuple(Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in row)


def pair_coroot(rs: RootSystem, weight: Weight, root: tuple[int, ...]) -> int:
    """
    Pairing <lambda, beta^vee> for a root beta given in simple-root coordinates.

    Example:
        For C2, lambda = (-2, 1) and beta = alpha_1 + alpha_2 give 0.
    """
    if len(weight) != rs.rank or len(root) != rs.rank:
        raise ValueError("Weight and root must match the rank of the root system")
    numerator = 2 * sum(
        c * weight[j] * rs.symmetrizer[j] for j, c in enumerate(root) if c
    )
    norm = rs.root_norm(root)
    if numerator % norm:
        raise ValueError(f"Non-integral pairing of {weight} with root {root}")
    return numerator // norm


def reflect(rs: RootSystem, vector: Weight, i: int) -> Weight:
    """Simple reflection s_i acting linearly on fundamental coordinates."""
    if vector[i] == 0:
        return vector
    return vector - rs.simple_root(i) * vector[i]


def reflect_root(rs: RootSystem, root: tuple[int, ...], i: int) -> tuple[int, ...]:
    pairing = sum(root[j] * rs.cartan[j][i] for j in range(rs.rank))
    result = list(root)
    result[i] -= pairing
    return tuple(result)


def apply_word(rs: RootSystem, word: tuple[int, ...], vector: Weight) -> Weight:
    """Apply w = s_i1 ... s_ik to a weight (rightmost reflection first)."""
    for i in reversed(word):
        vector = reflect(rs, vector, i)
    return vector


def make_dominant(
    rs: RootSystem, weight: Weight, nodes: tuple[int, ...] | None = None
) -> Regular | Singular:
    """
    Bring lambda + rho into the dominant chamber.

    Args:
        rs: Root system
        weight: lambda in fundamental coordinates
        nodes: Restrict to the parabolic subgroup generated by these simple
            reflections (relative Borel-Weil-Bott). None means all nodes.

    Returns:
        Regular(w, mu) with w(lambda + rho) = mu + rho and l(w) the number of
        reflections applied, or Singular(beta) if lambda + rho is singular.
    """
    if len(weight) != rs.rank:
        raise ValueError(f"Weight {weight} does not match rank {rs.rank}")
    active = tuple(range(rs.rank)) if nodes is None else tuple(sorted(set(nodes)))
    shifted = weight + rho(rs)
    applied: list[int] = []
    while True:
        negative = next((i for i in active if shifted[i] < 0), None)
        if negative is None:
            break
        shifted = reflect(rs, shifted, negative)
        applied.append(negative)

    wall = next((i for i in active if shifted[i] == 0), None)
    if wall is not None:
        root = tuple(1 if k == wall else 0 for k in range(rs.rank))
        for i in reversed(applied):
            root = reflect_root(rs, root, i)
        if all(c <= 0 for c in root):
            root = tuple(-c for c in root)
        return Singular(root)

    word = tuple(reversed(applied))
    return Regular(WeylElement(word), shifted - rho(rs))


def dominant_conjugate(
    rs: RootSystem, weight: Weight, nodes: tuple[int, ...] | None = None
) -> Weight:
    """Dominant representative of the (linear) orbit of a weight under W or W_L."""
    active = tuple(range(rs.rank)) if nodes is None else tuple(sorted(set(nodes)))
    while True:
        negative = next((i for i in active if weight[i] < 0), None)
        if negative is None:
            return weight
        weight = reflect(rs, weight, negative)


def enumerate_weyl(rs: RootSystem, cap: int | None = None) -> list[WeylElement]:
    """
    All Weyl group elements, in order of increasing length.

    Raises:
        ValueError: if the rank exceeds the enumeration cap
    """
    cap = DEFAULT_WEYL_RANK_CAP if cap is None else cap
    if rs.rank > cap:
        raise ValueError(
            f"Weyl group enumeration is capped at rank {cap}, got rank {rs.rank}"
        )
    return list(_weyl_orbit(rs).values())


@lru_cache(maxsize=None)
def _weyl_orbit(rs: RootSystem) -> dict[Weight, WeylElement]:
    start = rho(rs)
    orbit = {start: WeylElement(())}
    queue = deque([start])
    while queue:
        point = queue.popleft()
        word = orbit[point].reduced_word
        for i in range(rs.rank):
            if point[i] > 0:
                image = reflect(rs, point, i)
                if image not in orbit:
                    orbit[image] = WeylElement((i,) + word)
                    queue.append(image)
    return orbit


def inversion_count(rs: RootSystem, element: WeylElement) -> int:
    """Number of positive roots sent to negative roots by w^-1."""
    image = apply_word(rs, element.reduced_word, rho(rs))
    return sum(1 for beta in rs.positive_roots if pair_coroot(rs, image, beta) < 0)


@lru_cache(maxsize=None)
def weyl_images(rs: RootSystem, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Matrices of all Weyl group elements together with their signs.

    Returns:
        (matrices, signs) where matrices has shape (|W|, rank, rank) and
        ``v @ matrices[k]`` is the image of the row vector v under the k-th element.
    """
    elements = enumerate_weyl(rs, cap)
    matrices = np.zeros((len(elements), rs.rank, rs.rank), dtype=np.int64)
    signs = np.empty(len(elements), dtype=np.int64)
    for k, element in enumerate(elements):
        for row in range(rs.rank):
            basis = Weight(tuple(1 if c == row else 0 for c in range(rs.rank)))
            matrices[k, row, :] = apply_word(rs, element.reduced_word, basis).coords
        signs[k] = -1 if element.length % 2 else 1
    return matrices, signs


def epsilon_sizes(rs: RootSystem) -> tuple[int, ...]:
    """Number of epsilon coordinates per factor (r + 1 for A_r, r for C_r)."""
    return tuple(rank + 1 if family == "A" else rank for family, rank in rs.factors)


def to_epsilon(rs: RootSystem, weight: Weight) -> tuple[int, ...]:
    """
    Epsilon coordinates of a weight, concatenated over factors.

    Type A_r weights are normalized with last coordinate 0.
    """
    result: list[int] = []
    for (family, rank), start in zip(rs.factors, rs.offsets, strict=True):
        local = weight.coords[start : start + rank]
        suffix = [sum(local[i:]) for i in range(rank)]
        result.extend(suffix)
        if family == "A":
            result.append(0)
    return tuple(result)


def from_epsilon(rs: RootSystem, epsilon: tuple[int, ...]) -> Weight:
    """Inverse of to_epsilon; type A coordinates are read modulo (1, ..., 1)."""
    if len(epsilon) != sum(epsilon_sizes(rs)):
        raise ValueError(f"Expected {sum(epsilon_sizes(rs))} epsilon coordinates")
    coords: list[int] = []
    position = 0
    for (family, rank), size in zip(rs.factors, epsilon_sizes(rs), strict=True):
        local = epsilon[position : position + size]
        for i in range(rank):
            if family == "C" and i == rank - 1:
                coords.append(local[i])
            else:
                coords.append(local[i] - local[i + 1])
        position += size
    return Weight(tuple(coords))
