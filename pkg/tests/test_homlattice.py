from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conecalc.errors import DimensionMismatch, ParseError
from conecalc.homlattice import (
    HomologyClass,
    ManifoldDescriptor,
    adjunction_genus,
    basis,
    canonical_class,
    codim,
    format_class,
    is_exceptional_class,
    is_section_type,
    pair,
    parse_class,
    parse_classes,
    reduction_classes,
    riemann_index,
    section_class,
    section_subset,
    square,
)


def small_classes(desc: ManifoldDescriptor):
    coeff = st.integers(min_value=-6, max_value=6)
    return st.builds(
        lambda a, b, m: HomologyClass(desc, a, b, tuple(m)),
        coeff,
        coeff,
        st.lists(coeff, min_size=desc.n, max_size=desc.n),
    )


class TestPairing:
    def test_basis_pairings(self):
        """Test the intersection form on the basis B, F, E1, E2."""
        desc = ManifoldDescriptor(1, 2)
        B, F, (E1, E2) = basis(desc)
        assert pair(B, B) == 0
        assert pair(B, F) == 1
        assert pair(F, F) == 0
        assert pair(E1, E1) == -1
        assert pair(E1, E2) == 0
        assert pair(B, E1) == 0

    def test_descriptor_mismatch(self):
        """Test that classes on different manifolds do not pair."""
        A = HomologyClass(ManifoldDescriptor(1, 1), 0, 0, (1,))
        B = HomologyClass(ManifoldDescriptor(1, 2), 0, 0, (1, 0))
        with pytest.raises(DimensionMismatch):
            pair(A, B)

    def test_wrong_number_of_coefficients(self):
        with pytest.raises(DimensionMismatch):
            HomologyClass(ManifoldDescriptor(1, 2), 0, 0, (1,))

    @given(st.data())
    def test_pairing_is_symmetric_and_bilinear(self, data):
        """Test symmetry and bilinearity of the pairing."""
        desc = ManifoldDescriptor(2, 3)
        x, y, z = (data.draw(small_classes(desc)) for _ in range(3))
        assert pair(x, y) == pair(y, x)
        assert pair(x + y, z) == pair(x, z) + pair(y, z)
        assert pair(x * 3, y) == 3 * pair(x, y)


class TestInvariants:
    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_canonical_class_satisfies_adjunction_on_basis(self, g):
        """Test the adjunction genus of B, F and each E_i."""
        desc = ManifoldDescriptor(g, 2)
        B, F, es = basis(desc)
        assert adjunction_genus(B) == g
        assert adjunction_genus(F) == 0
        for E in es:
            assert adjunction_genus(E) == 0
            assert is_exceptional_class(E)

    def test_canonical_class_text(self):
        assert format_class(canonical_class(ManifoldDescriptor(2, 2))) == "-2B + 2F + E1 + E2"

    def test_reduction_wall_class(self):
        """Test the invariants of E1 - E2."""
        desc = ManifoldDescriptor(1, 2)
        D = parse_class("E1 - E2", desc)
        assert square(D) == -2
        assert adjunction_genus(D) == 0
        assert codim(D) == 2
        assert riemann_index(D) == -2

    @pytest.mark.parametrize("g", [1, 2, 3])
    @pytest.mark.parametrize("k", [-3, -1, 0, 2])
    @pytest.mark.parametrize("subset", [(), (1,), (1, 3), (1, 2, 3)])
    def test_section_class_codim_formula(self, g, k, subset):
        """Test the codimension of B + kF - sum_I E_i."""
        desc = ManifoldDescriptor(g, 3)
        A = section_class(desc, k, subset)
        assert adjunction_genus(A) == g
        assert codim(A) == 2 * g - 2 - 4 * k + 2 * len(subset)
        assert is_section_type(A)
        assert section_subset(A) == tuple(sorted(subset))

    @given(st.data())
    def test_codim_is_minus_index(self, data):
        desc = ManifoldDescriptor(data.draw(st.integers(min_value=1, max_value=4)), 3)
        A = data.draw(small_classes(desc))
        assert codim(A) == -riemann_index(A)
        K = canonical_class(desc)
        assert codim(A) == pair(K, A) - square(A)

    def test_reduction_classes_order(self):
        """Test that the reduction classes come F - E1 - E2 first."""
        desc = ManifoldDescriptor(1, 3)
        texts = [format_class(D) for D in reduction_classes(desc)]
        assert texts == ["F - E1 - E2", "E1 - E2", "E1 - E3", "E2 - E3"]
        assert all(square(D) == -2 for D in reduction_classes(desc))

    def test_no_reduction_classes_for_one_blowup(self):
        assert reduction_classes(ManifoldDescriptor(1, 1)) == []


class TestTextForm:
    @pytest.mark.parametrize(
        "text",
        ["B + 2F - E1", "-2B + 2F + E1 + E2", "F - E1 - E2", "E2", "0", "3B - 4F + 2E1"],
    )
    def test_canonical_text_round_trips(self, text):
        """Test that canonical text is reproduced exactly."""
        desc = ManifoldDescriptor(2, 2)
        assert format_class(parse_class(text, desc)) == text

    @given(st.integers(min_value=0, max_value=4), st.data())
    def test_formatted_classes_parse_back(self, n, data):
        """Test that every formatted class parses back to itself."""
        desc = ManifoldDescriptor(1, n)
        A = data.draw(small_classes(desc))
        assert parse_class(format_class(A), desc) == A

    def test_whitespace_and_repeated_terms(self):
        """Test that spacing is free and repeated terms add up."""
        desc = ManifoldDescriptor(1, 2)
        A = parse_class("B+F+F -E2", desc)
        assert (A.a, A.b, A.m) == (1, 2, (0, -1))

    def test_leading_minus(self):
        A = parse_class("-E1", ManifoldDescriptor(1, 1))
        assert A.m == (-1,)

    def test_parse_several(self):
        """Test parsing a list of classes in order."""
        desc = ManifoldDescriptor(1, 3)
        found = parse_classes(["E1 - E2", "B - E3"], desc)
        assert [format_class(A) for A in found] == ["E1 - E2", "B - E3"]
        assert found[1] == section_class(desc, 0, (3,))

    @pytest.mark.parametrize("text", ["B + + F", "3", "", "B F", "B + X", "E"])
    def test_malformed_text(self, text):
        """Test that malformed class text is a parse error."""
        with pytest.raises(ParseError):
            parse_class(text, ManifoldDescriptor(1, 2))

    def test_parse_error_reports_position(self):
        with pytest.raises(ParseError) as info:
            parse_class("B + X", ManifoldDescriptor(1, 2))
        assert info.value.position == 4

    def test_index_beyond_n(self):
        """Test that E3 is refused when n = 2."""
        with pytest.raises(DimensionMismatch):
            parse_class("E3", ManifoldDescriptor(1, 2))
