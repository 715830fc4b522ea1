from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from flopverify.domain.weight_lattice import (
    Regular,
    RootSystem,
    Singular,
    Weight,
    apply_word,
    enumerate_weyl,
    from_epsilon,
    inner_product,
    inversion_count,
    make_dominant,
    pair_coroot,
    rho,
    to_epsilon,
    to_root_coordinates,
    weyl_images,
)

C2 = RootSystem.simple("C", 2)
A2 = RootSystem.simple("A", 2)
A3 = RootSystem.simple("A", 3)
A4 = RootSystem.simple("A", 4)


def _brute_force(rs: RootSystem, weight: Weight):
    """Dominant point of the W-orbit of weight + rho and the length of the element."""
    matrices, _ = weyl_images(rs)
    elements = enumerate_weyl(rs)
    shifted = np.array((weight + rho(rs)).coords, dtype=np.int64)
    images = np.einsum("r,wrs->ws", shifted, matrices)
    for index in np.nonzero(np.all(images >= 0, axis=1))[0]:
        return tuple(int(x) for x in images[index]), elements[index].length
    raise AssertionError(f"No dominant point in the orbit of {weight}")


class TestWeight:
    def test_arithmetic(self):
        """Weights add, subtract and scale coordinate-wise"""
        a, b = Weight.of(1, -2), Weight.of(3, 4)
        assert a + b == Weight.of(4, 2)
        assert b - a == Weight.of(2, 6)
        assert -a == Weight.of(-1, 2)
        assert a * 3 == Weight.of(3, -6)
        assert Weight.zero(3).is_zero()
        assert str(a) == "(1,-2)"

    def test_rank_mismatch(self):
        """Weights of different rank cannot be added"""
        with pytest.raises(ValueError, match="ranks differ"):
            Weight.of(1, 2) + Weight.of(1)

    def test_non_integral_coordinates(self):
        """Fractional coordinates are rejected"""
        with pytest.raises(ValueError, match="integers"):
            Weight((1.5, 0))


class TestRootSystem:
    def test_c2_cartan(self):
        """C2 uses cartan[i][j] = <alpha_i, alpha_j^vee> with a long last root"""
        assert C2.cartan == ((2, -1), (-2, 2))
        assert C2.symmetrizer == (1, 2)
        assert C2.root_norm((0, 1)) == 2 * C2.root_norm((1, 0))

    def test_positive_roots(self):
        """Positive root counts of small systems"""
        assert set(C2.positive_roots) == {(1, 0), (0, 1), (1, 1), (2, 1)}
        assert len(A3.positive_roots) == 6
        assert len(A4.positive_roots) == 10
        assert len(RootSystem.simple("C", 3).positive_roots) == 9

    def test_product_and_parse(self):
        """Products concatenate factors and offsets"""
        rs = RootSystem.parse("A3xA3")
        assert rs.rank == 6
        assert rs.offsets == (0, 3)
        assert rs == RootSystem.product(A3, A3)
        assert rs.name == "A3xA3"
        assert len(rs.positive_roots) == 12

    def test_invalid_systems(self):
        """Unsupported families and ranks are rejected"""
        with pytest.raises(ValueError, match="Unsupported"):
            RootSystem.simple("B", 2)
        with pytest.raises(ValueError, match="Invalid rank"):
            RootSystem.simple("C", 1)
        with pytest.raises(ValueError, match="Invalid root system name"):
            RootSystem.parse("C")

    @pytest.mark.parametrize("rs", [C2, A3, RootSystem.simple("C", 3)])
    def test_inner_product_with_simple_roots(self, rs):
        """(omega_i, alpha_j) = delta_ij * d_j"""
        for i in range(rs.rank):
            unit = Weight(tuple(1 if k == i else 0 for k in range(rs.rank)))
            for j in range(rs.rank):
                expected = Fraction(rs.symmetrizer[j]) if i == j else Fraction(0)
                assert inner_product(rs, unit, rs.simple_root(j)) == expected

    def test_pair_coroot(self):
        """Pairings with coroots of non-simple roots"""
        assert pair_coroot(C2, Weight.of(-2, 1), (1, 1)) == 0
        assert pair_coroot(C2, Weight.of(1, 0), (2, 1)) == 1
        assert pair_coroot(A3, Weight.of(1, 1, 1), (1, 1, 1)) == 3

    def test_root_coordinates(self):
        """Fundamental weights in the basis of simple roots"""
        assert to_root_coordinates(A2, Weight.of(1, 0)) == (Fraction(2, 3), Fraction(1, 3))
        assert to_root_coordinates(C2, Weight.of(1, 0)) == (Fraction(1), Fraction(1, 2))
        assert to_root_coordinates(C2, Weight.of(0, 1)) == (Fraction(1), Fraction(1))
        for i in range(A3.rank):
            unit = tuple(Fraction(int(k == i)) for k in range(A3.rank))
            assert to_root_coordinates(A3, A3.simple_root(i)) == unit

    def test_epsilon_coordinates(self):
        """Epsilon coordinates for types A and C"""
        assert to_epsilon(C2, Weight.of(1, 0)) == (1, 0)
        assert to_epsilon(C2, Weight.of(0, 1)) == (1, 1)
        assert to_epsilon(A2, Weight.of(1, 1)) == (2, 1, 0)
        assert from_epsilon(A2, (3, 2, 1)) == Weight.of(1, 1)
        with pytest.raises(ValueError, match="epsilon coordinates"):
            from_epsilon(A2, (1, 0))


class TestWeylGroup:
    @pytest.mark.parametrize(
        "rs, order",
        [(C2, 8), (A2, 6), (A3, 24), (A4, 120), (RootSystem.simple("C", 3), 48)],
    )
    def test_group_order(self, rs, order):
        """|W| for small systems"""
        assert len(enumerate_weyl(rs)) == order

    @pytest.mark.parametrize("rs", [C2, A3])
    def test_lengths_match_inversions(self, rs):
        """Reduced word length equals the number of inversions"""
        elements = enumerate_weyl(rs)
        assert elements[0].length == 0
        for element in elements:
            assert inversion_count(rs, element) == element.length
        assert max(e.length for e in elements) == len(rs.positive_roots)

    def test_weyl_images_match_words(self):
        """Matrices of weyl_images act like the reduced words"""
        matrices, signs = weyl_images(A3)
        elements = enumerate_weyl(A3)
        vector = Weight.of(3, -1, 2)
        for element, matrix, sign in zip(elements, matrices, signs, strict=True):
            image = tuple(int(x) for x in np.array(vector.coords) @ matrix)
            assert image == apply_word(A3, element.reduced_word, vector).coords
            assert sign == (-1) ** element.length
        assert int(signs.sum()) == 0

    def test_enumeration_cap(self):
        """Enumeration refuses ranks above the cap"""
        with pytest.raises(ValueError, match="capped at rank 8"):
            enumerate_weyl(RootSystem.simple("A", 9))
        with pytest.raises(ValueError, match="capped at rank 2"):
            enumerate_weyl(A3, cap=2)


class TestMakeDominant:
    def test_c2_examples(self):
        """Golden C2 outcomes"""
        outcome = make_dominant(C2, Weight.of(-2, 1))
        assert isinstance(outcome, Regular)
        assert outcome.length == 1
        assert outcome.weight == Weight.of(0, 0)

        assert isinstance(make_dominant(C2, Weight.of(-1, -1)), Singular)

        outcome = make_dominant(C2, Weight.of(-3, 0))
        assert isinstance(outcome, Singular)
        assert pair_coroot(C2, Weight.of(-2, 1), outcome.root) == 0

    def test_projective_space(self):
        """O(-4) on P^3 has its cohomology in degree 3"""
        outcome = make_dominant(A3, Weight.of(-4, 0, 0))
        assert isinstance(outcome, Regular)
        assert outcome.length == 3
        assert outcome.weight.is_zero()

    def test_relative_nodes(self):
        """Restricting to a parabolic subgroup only reflects in its nodes"""
        outcome = make_dominant(C2, Weight.of(-2, 0), nodes=(0,))
        assert isinstance(outcome, Regular)
        assert outcome.weyl.reduced_word == (0,)
        assert outcome.weight == Weight.of(0, -1)

    def test_rank_mismatch(self):
        """Weights must match the rank"""
        with pytest.raises(ValueError, match="does not match rank"):
            make_dominant(C2, Weight.of(1, 2, 3))

    @pytest.mark.parametrize("rs, bound", [(C2, 5), (A2, 5), (A3, 3), (A4, 2)])
    def test_agrees_with_orbit_search(self, rs, bound):
        """make_dominant agrees with an exhaustive search of the Weyl orbit"""
        values = range(-bound, bound + 1)
        for coords in product(values, repeat=rs.rank):
            weight = Weight(coords)
            point, length = _brute_force(rs, weight)
            outcome = make_dominant(rs, weight)
            if 0 in point:
                assert isinstance(outcome, Singular), weight
                assert all(c >= 0 for c in outcome.root)
                assert pair_coroot(rs, weight + rho(rs), outcome.root) == 0
            else:
                assert isinstance(outcome, Regular), weight
                assert (outcome.weight + rho(rs)).coords == point
                assert outcome.length == length
                image = apply_word(rs, outcome.weyl.reduced_word, weight + rho(rs))
                assert image.coords == point
