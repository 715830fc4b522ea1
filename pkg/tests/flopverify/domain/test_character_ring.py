from itertools import product

import pytest

from flopverify.domain.character_ring import (
    CharacterError,
    CharacterPoly,
    LeviSpec,
    LeviWeight,
    RepSum,
    branch,
    decompose,
    dim,
    dual,
    g_character,
    irr_character,
    levi_determinant,
    levi_rank,
    levi_spec,
    rep_name,
    tensor_decompose,
    weyl_dimension,
)
from flopverify.domain.weight_lattice import RootSystem, Weight

C2 = RootSystem.simple("C", 2)
A2 = RootSystem.simple("A", 2)
A3 = RootSystem.simple("A", 3)
A4 = RootSystem.simple("A", 4)

GL2 = LeviSpec((2,), (2,))
GL3 = LeviSpec((3,), (3,))


def lw(*blocks):
    return LeviWeight(tuple(tuple(block) for block in blocks))


class TestRepSum:
    def test_merges_and_drops_zero_terms(self):
        """Equal keys are merged and zero multiplicities dropped"""
        rep = RepSum((("a", 1), ("b", 0), ("a", 2)))
        assert rep.terms == (("a", 3),)
        assert rep.multiplicity("a") == 3
        assert rep.multiplicity("c") == 0

    def test_negative_multiplicity_needs_virtual(self):
        """Only virtual sums carry negative multiplicities"""
        with pytest.raises(ValueError, match="Negative multiplicity"):
            RepSum((("a", -1),))
        assert RepSum((("a", -1),), virtual=True).multiplicity("a") == -1
        assert RepSum.single("a").scaled(-2).virtual

    def test_same_as_ignores_order(self):
        """Formal sums compare as multisets"""
        left = RepSum((("a", 1), ("b", 2)))
        right = RepSum((("b", 2), ("a", 1)))
        assert left.same_as(right)
        assert not left.same_as(RepSum.single("a"))


class TestGLCharacters:
    def test_dimensions(self):
        """Gelfand-Tsetlin characters have the Weyl dimension"""
        for weight in [(2, 1, 0), (1, 0, 0), (3, 3, 0), (2, 0, -2)]:
            character = irr_character(GL3, lw(weight))
            assert character.dimension() == dim(GL3, lw(weight))
        assert dim(GL3, lw((2, 1, 0))) == 8
        assert dim(GL3, lw((1, 1, 0))) == 3

    def test_tensor_square_of_standard(self):
        """(1,0) x (1,0) = (2,0) + (1,1) for GL2"""
        result = tensor_decompose(GL2, lw((1, 0)), lw((1, 0)))
        assert result.terms == ((lw((2, 0)), 1), (lw((1, 1)), 1))

    def test_dual(self):
        """Duals reverse and negate every block"""
        assert dual(GL3, lw((2, 1, 0))) == lw((0, -1, -2))

    def test_dual_of_sums(self):
        """Dualizing a sum is termwise and twice gives the sum back"""
        virtual = RepSum(((lw((2, 1, 0)), 1), (lw((1, 0, 0)), -2)), virtual=True)
        once = dual(GL3, virtual)
        assert once.virtual
        assert once.multiplicity(lw((0, 0, -1))) == -2
        assert dual(GL3, once) == virtual
        actual = RepSum(((lw((1, 1, 0)), 2), (lw((3, 0, 0)), 1)))
        assert dual(GL3, dual(GL3, actual)) == actual

    def test_tensor_of_sums(self):
        """Tensor products of sums are bilinear and commutative"""
        left = RepSum(((lw((1, 0)), 1), (lw((1, 1)), 2)))
        right = RepSum(((lw((2, 0)), 1), (lw((0, -1)), 1)))
        forward = tensor_decompose(GL2, left, right)
        assert forward.same_as(tensor_decompose(GL2, right, left))
        expected = RepSum()
        for a, m in left:
            for b, n in right:
                expected = expected + tensor_decompose(GL2, a, b).scaled(m * n)
        assert forward.same_as(expected)
        assert forward.dimension(lambda w: dim(GL2, w)) == (2 + 2) * (3 + 2)

    def test_tensor_of_virtual_sums(self):
        """Virtual signs survive the tensor product"""
        virtual = RepSum(((lw((1, 0)), 1), (lw((0, 0)), -1)), virtual=True)
        square = tensor_decompose(GL2, virtual, virtual)
        assert square.virtual
        assert square.same_as(tensor_decompose(GL2, virtual, virtual))
        # (V - 1)^2 = S^2 V + L^2 V - 2 V + 1
        assert square.multiplicity(lw((2, 0))) == 1
        assert square.multiplicity(lw((1, 1))) == 1
        assert square.multiplicity(lw((1, 0))) == -2
        assert square.multiplicity(lw((0, 0))) == 1
        mixed = tensor_decompose(GL2, virtual, lw((1, 0)))
        assert mixed.same_as(tensor_decompose(GL2, lw((1, 0)), virtual))
        assert mixed.dimension(lambda w: dim(GL2, w)) == 2

    def test_non_dominant_levi_weight(self):
        """Levi weights must be non-increasing in every block"""
        with pytest.raises(ValueError, match="not dominant"):
            lw((0, 1))

    def test_decompose_errors(self):
        """Peeling fails on non-dominant leads and negative multiplicities"""
        with pytest.raises(CharacterError, match="not dominant"):
            decompose(GL2, CharacterPoly({(0, 1): 1}))
        with pytest.raises(CharacterError, match="Negative multiplicity"):
            decompose(GL2, CharacterPoly({(1, 0): -1, (0, 1): -1}))
        virtual = decompose(GL2, CharacterPoly({(1, 0): -1, (0, 1): -1}), virtual=True)
        assert virtual.multiplicity(lw((1, 0))) == -1


class TestBranching:
    def test_standard_representation(self):
        """GL3 -> GL2 x GL1 splits the standard representation, sub first"""
        small = LeviSpec((2, 1), (3,))
        result = branch(GL3, small, lw((1, 0, 0)))
        assert result.terms == (
            (lw((0, 0), (1,)), 1),
            (lw((1, 0), (0,)), 1),
        )

    def test_adjoint_dimension_preserved(self):
        """Branching preserves dimension"""
        small = LeviSpec((1, 2), (3,))
        result = branch(GL3, small, lw((2, 1, 0)))
        assert result.dimension(lambda w: dim(small, w)) == 8

    def test_requires_refinement(self):
        """The small Levi must refine the big one"""
        with pytest.raises(ValueError, match="does not refine"):
            branch(LeviSpec((2, 1), (3,)), LeviSpec((1, 2), (3,)), lw((1, 0), (0,)))


class TestLeviSpec:
    def test_blocks_from_crossed_nodes(self):
        """Crossed nodes cut the epsilon coordinates into GL blocks"""
        assert levi_spec(A4, (1, 2)).blocks == (2, 1, 2)
        assert levi_spec(A4, (1,)).blocks == (2, 3)
        assert levi_spec(C2, (1,)).blocks == (2,)
        assert levi_spec(C2, (0, 1)).blocks == (1, 1)

    def test_symplectic_levi_is_rejected(self):
        """A type C Levi keeping the long node has a symplectic factor"""
        with pytest.raises(CharacterError, match="symplectic"):
            levi_spec(C2, (0,))

    def test_blocks_must_partition_segments(self):
        """Blocks may not cross factor boundaries"""
        with pytest.raises(ValueError, match="cross factor boundaries"):
            LeviSpec((1, 2, 1), (2, 2))


class TestGroupCharacters:
    @pytest.mark.parametrize(
        "rs, weight, expected",
        [
            (C2, (1, 0), 4),
            (C2, (0, 1), 5),
            (C2, (2, 0), 10),
            (C2, (1, 1), 16),
            (A3, (1, 0, 1), 15),
            (A4, (1, 0, 0, 0), 5),
            (A4, (0, 1, 0, 0), 10),
        ],
    )
    def test_weyl_dimension(self, rs, weight, expected):
        """Weyl dimension formula"""
        assert weyl_dimension(rs, Weight(weight)) == expected

    @pytest.mark.parametrize("rs, bound", [(C2, 2), (A2, 2), (A3, 1)])
    def test_freudenthal_matches_weyl_dimension(self, rs, bound):
        """Freudenthal multiplicities add up to the Weyl dimension"""
        for coords in product(range(bound + 1), repeat=rs.rank):
            weight = Weight(coords)
            assert sum(g_character(rs, weight).values()) == weyl_dimension(rs, weight)

    def test_zero_weight_multiplicities(self):
        """Zero weight of the C2 five-dimensional and A2 adjoint representations"""
        assert g_character(C2, Weight.of(0, 1))[Weight.of(0, 0)] == 1
        assert g_character(A2, Weight.of(1, 1))[Weight.of(0, 0)] == 2
        assert Weight.of(0, 0) not in g_character(C2, Weight.of(1, 0))

    def test_levi_rank_and_determinant(self):
        """Rank and first Chern class of the rank 2 bundle on P^3"""
        assert levi_rank(C2, (0,), Weight.of(0, 1)) == 2
        assert levi_determinant(C2, (0,), Weight.of(0, 1)) == Weight.of(2, 0)
        assert levi_rank(A4, (1,), Weight.of(0, 0, 1, 0)) == 3

    def test_dominance_required(self):
        """Characters need a dominant highest weight"""
        with pytest.raises(ValueError, match="not dominant"):
            g_character(C2, Weight.of(-1, 0))

    def test_rep_name(self):
        """Names of trivial, standard and dual standard representations"""
        assert rep_name(A3, Weight.zero(3)) == "k"
        assert rep_name(A3, Weight.of(1, 0, 0)) == "V^vee"
        assert rep_name(A3, Weight.of(0, 0, 1)) == "V"
        assert rep_name(A3, Weight.of(0, 1, 0)) == "V(0,1,0)"
        assert rep_name(C2, Weight.of(1, 0)) == "V^vee"
        assert rep_name(RootSystem.parse("A1xA1"), Weight.of(1, 0)) == "V(1,0)"
