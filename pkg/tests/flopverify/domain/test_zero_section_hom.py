import random
from itertools import product

import pytest

from flopverify.domain.bbw_engine import Certificate
from flopverify.domain.flop_catalog import load_case
from flopverify.domain.weight_lattice import Weight
from flopverify.domain.zero_section_hom import (
    FTerm,
    Verdict,
    character_product,
    character_sum,
    euler_pairing,
    hom_V,
    is_orthogonal,
    k_class,
)


class TestTotalSpace:
    def test_c2_total_space(self, c2_case):
        """V = Tot(O(-h-H)) over the C2 flag variety"""
        total = c2_case.total
        assert total.dim == 5
        assert total.koszul_twist == Weight.of(-1, -1)
        assert total.canonical == Weight.of(-1, -1)
        assert total.line(2, -1) == Weight.of(2, -1)


class TestHom:
    def test_koszul_extension(self, c2_case):
        """hom(O(h), O(-h+H)) is k in degree 1"""
        hom = hom_V(c2_case.total, c2_case.build("O(h)"), c2_case.build("O(-h+H)"))
        assert hom.dims() == {1: 1}
        assert hom.certificate >= Certificate.EXACT
        assert hom.describe() == "k[-1]"
        assert hom.euler == -1

    def test_line_bundles_are_exceptional(self, c2_case):
        """Line bundles on the zero section have hom = k"""
        for a, b in product(range(-2, 3), repeat=2):
            obj = c2_case.build(f"O({a},{b})")
            hom = hom_V(c2_case.total, obj, obj)
            assert hom.dims() == {0: 1}

    def test_sections_of_dual_tautological(self, c2_case):
        """hom(O, S^vee) = V^vee in degree 0"""
        hom = hom_V(c2_case.total, c2_case.build("O"), c2_case.build("S_dual"))
        assert hom.dims() == {0: 4}
        assert hom.describe() == "V^vee"

    def test_shifts(self, c2_case):
        """hom^k(A[1], B) = hom^(k-1)(A, B)"""
        source = c2_case.build("O(1,0)")
        target = c2_case.build("O(-1,1)")
        shifted = hom_V(c2_case.total, source.shifted(1), target)
        assert shifted.dims() == {2: 1}
        assert shifted.euler == 1
        assert hom_V(c2_case.total, source, target.shifted(1)).dims() == {0: 1}

    def test_serre_duality(self, c2_case):
        """hom^k(A, B) = hom^(dim V - k)(B, A (x) omega_V)^vee on the five-dimensional V"""
        total = c2_case.total
        omega = total.canonical
        for (a, b), (c, d) in product(product(range(-1, 2), repeat=2), repeat=2):
            source = c2_case.build(f"O({a},{b})")
            target = c2_case.build(f"O({c},{d})")
            forward = hom_V(total, source, target).dims()
            backward = hom_V(total, target, source.twisted(omega)).dims()
            assert forward == {total.dim - k: v for k, v in backward.items()}
            assert euler_pairing(total, source, target) == -euler_pairing(
                total, target, source.twisted(omega)
            )

    @pytest.mark.parametrize(
        "name, n",
        [
            ("Mukai", 2),
            ("Std", 1),
            ("Std", 2),
            pytest.param("Mukai", 3, marks=pytest.mark.slow),
            pytest.param("AG4", None, marks=pytest.mark.slow),
        ],
    )
    def test_serre_duality_on_random_pairs(self, name, n):
        """hom^k(A, B) = hom^(dim V - k)(B, A (x) omega_V)^vee for random line bundles"""
        case = load_case(name, n, lemma_window=1)
        total = case.total
        omega = total.canonical
        sign = (-1) ** total.dim
        rng = random.Random(f"serre-{name}-{n}")
        for _ in range(50):
            a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
            source = case.build(f"O({a},{b})")
            target = case.build(f"O({c},{d})")
            forward = hom_V(total, source, target).dims()
            backward = hom_V(total, target, source.twisted(omega)).dims()
            assert forward == {total.dim - k: v for k, v in backward.items()}, (a, b, c, d)
            assert euler_pairing(total, source, target) == sign * euler_pairing(
                total, target, source.twisted(omega)
            )

    def test_serre_dual_of_extension(self, c2_case):
        """The extension class is dual to a class in degree 4"""
        hom = hom_V(c2_case.total, c2_case.build("O(-1,1)"), c2_case.build("O(0,-1)"))
        assert hom.dims() == {4: 1}


class TestOrthogonality:
    def test_mutually_orthogonal(self, c2_case):
        """O(h) and O(H) are mutually orthogonal"""
        result = is_orthogonal(
            c2_case.total, c2_case.build("O(1,0)"), c2_case.build("O(0,1)"), mutual=True
        )
        assert result.verdict is Verdict.ORTHOGONAL
        assert bool(result)
        assert len(result.homs) == 2

    def test_not_orthogonal(self, c2_case):
        """hom(O, O(h)) = V^vee is not zero"""
        result = is_orthogonal(c2_case.total, c2_case.build("O"), c2_case.build("O(1,0)"))
        assert result.verdict is Verdict.NOT_ORTHOGONAL
        assert not result

    def test_semiorthogonal_collection(self, c2_case):
        """hom from later to earlier objects of the initial collection vanishes"""
        objects = [c2_case.build(text) for text in c2_case.initial if not text.startswith("Phi")]
        for i, later in enumerate(objects):
            for earlier in objects[:i]:
                assert is_orthogonal(c2_case.total, later, earlier).verdict is Verdict.ORTHOGONAL


class TestKClasses:
    def test_line_bundle_and_shift(self, c2_case):
        """K-class of O and of O[1]"""
        obj = c2_case.build("O")
        assert k_class(c2_case.total, obj) == {Weight.of(0, 0): 1}
        assert k_class(c2_case.total, obj.shifted(1)) == {Weight.of(0, 0): -1}

    def test_extension_class(self, c2_case):
        """[S^vee] = [O(-h+H)] + [O(h)]"""
        klass = k_class(c2_case.total, c2_case.build("S_dual"))
        assert klass == {Weight.of(-1, 1): 1, Weight.of(1, 0): 1}

    def test_character_arithmetic(self):
        """Products and linear combinations of torus characters"""
        a = {Weight.of(1, 0): 1, Weight.of(-1, 0): 1}
        b = {Weight.of(0, 1): 2}
        assert character_product(a, b) == {Weight.of(1, 1): 2, Weight.of(-1, 1): 2}
        assert character_sum((1, a), (-1, a)) == {}
        assert character_sum((2, b), (1, a)) == {**a, Weight.of(0, 1): 4}

    def test_term_multiplicity(self, c2_case):
        """Terms have positive multiplicity"""
        bundle = c2_case.build("O").terms[0].bundle
        with pytest.raises(ValueError, match="multiplicity must be positive"):
            FTerm(bundle, 0, 0)
