from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conecalc.cone import exceptional_set, normalized
from conecalc.errors import (
    InconsistentProfile,
    InvalidDecomposition,
    NotAdmissible,
    NotInCone,
    ParameterOutOfRange,
)
from conecalc.homlattice import ManifoldDescriptor, pair, parse_class
from conecalc.storage import profile_from_dict
from conecalc.strata import (
    Bad,
    Decomposition,
    Embedded,
    JProfile,
    Mild,
    admissible_codim,
    check_mild_pair,
    classify_decomposition,
    classify_profile,
    cover_pairing,
    enumerate_decompositions,
    table_cell,
    witness_codims,
)

G1N2 = ManifoldDescriptor(1, 2)
G1N3 = ManifoldDescriptor(1, 3)


def cls(text: str, desc: ManifoldDescriptor = G1N2):
    return parse_class(text, desc)


def dec(total: str, *parts, desc: ManifoldDescriptor = G1N2) -> Decomposition:
    return Decomposition(cls(total, desc), tuple((cls(p, desc), m) for p, m in parts))


class TestEnumerateDecompositions:
    def test_only_trivial_on_the_reduction_wall(self):
        """Test that E1 only decomposes trivially when c1 = c2."""
        search = enumerate_decompositions(cls("E1"), normalized(3, ["1/2", "1/2"]), 6, 5)
        assert [str(d) for d in search.decompositions] == ["E1 = (E1)"]
        assert search.exhaustive

    @pytest.mark.parametrize("mu", range(3, 11))
    @pytest.mark.parametrize("g,n", [(1, 2), (1, 3), (2, 2), (2, 3)])
    def test_no_degeneration_on_the_half_line(self, mu, g, n):
        """Test that no exceptional class degenerates when every c_i is one half."""
        desc = ManifoldDescriptor(g, n)
        u = normalized(mu, [Fraction(1, 2)] * n)
        for E in exceptional_set(desc):
            search = enumerate_decompositions(E, u, 4, 2)
            assert [d.parts for d in search.decompositions] == [((E, 1),)]

    def test_mild_break_appears_off_the_wall(self):
        """Test that E1 breaks mildly once c1 > c2."""
        u = normalized(3, [Fraction(3, 4), Fraction(1, 4)])
        search = enumerate_decompositions(cls("E1"), u, 6, 5)
        assert [str(d) for d in search.decompositions] == [
            "E1 = (E1)",
            "E1 = (E1 - E2) + (E2)",
        ]

    def test_fiber_minus_exceptional(self):
        u = normalized(3, [Fraction(1, 2), Fraction(1, 4)])
        search = enumerate_decompositions(cls("F - E1"), u, 6, 5)
        assert dec("F - E1", ("F - E1 - E2", 1), ("E2", 1)) in search.decompositions

    def test_truncated_window_is_reported(self):
        """Test that a too small coefficient window marks the search incomplete."""
        u = normalized(5, [Fraction(9, 10)] * 3)
        assert not enumerate_decompositions(cls("E1", G1N3), u, 6, 1).exhaustive
        assert enumerate_decompositions(cls("E1", G1N3), u, 6, 2).exhaustive

    def test_rejects_non_exceptional_total(self):
        with pytest.raises(InvalidDecomposition):
            enumerate_decompositions(cls("E1 - E2"), normalized(3, ["1/2", "1/4"]), 6, 5)

    def test_rejects_bad_bounds(self):
        """Test that max_parts must be positive."""
        with pytest.raises(ParameterOutOfRange):
            enumerate_decompositions(cls("E1"), normalized(3, ["1/2", "1/4"]), 0, 5)

    def test_requires_cone(self):
        with pytest.raises(NotInCone):
            enumerate_decompositions(cls("E1"), normalized(3, [1, "1/4"]), 6, 5)


class TestClassifyDecomposition:
    def test_trivial_is_embedded(self):
        assert classify_decomposition(dec("E1", ("E1", 1))) == Embedded()

    @pytest.mark.parametrize("g", [1, 2, 3])
    @pytest.mark.parametrize("n", range(6))
    def test_trivial_is_embedded_for_every_exceptional_class(self, g, n):
        """Test that E = (E) is embedded for every exceptional class."""
        for E in exceptional_set(ManifoldDescriptor(g, n)):
            assert classify_decomposition(Decomposition(E, ((E, 1),))) == Embedded()

    def test_mild(self):
        """Test that (E1 - E2) + (E2) is a mild pair."""
        status = classify_decomposition(dec("E1", ("E1 - E2", 1), ("E2", 1)))
        assert status == Mild(cls("E1 - E2"), cls("E2"))

    def test_three_parts_are_bad(self):
        """Test that a three-part decomposition is bad."""
        d = dec("E1", ("E1 - E2", 1), ("E2 - E3", 1), ("E3", 1), desc=G1N3)
        status = classify_decomposition(d)
        assert isinstance(status, Bad)
        assert str(status.dec) == "E1 = (E1 - E2) + (E2 - E3) + (E3)"

    def test_parts_must_sum_to_total(self):
        with pytest.raises(InvalidDecomposition, match="sum"):
            classify_decomposition(dec("E1", ("E1 - E2", 1)))

    def test_parts_must_be_fiber_type(self):
        """Test that section-type parts are refused."""
        with pytest.raises(InvalidDecomposition, match="fiber-type"):
            classify_decomposition(dec("F - E1", ("B - E1", 1), ("F - B", 1)))

    def test_check_mild_pair_reasons(self):
        assert check_mild_pair(cls("E1"), cls("E1 - E2"), cls("E2")) is None
        assert "not exceptional" in check_mild_pair(cls("E1"), cls("E1 - E2"), cls("F"))


class TestCoverPairing:
    @pytest.mark.parametrize(
        "text,m,value,forced",
        [("E1", 2, 1, True), ("E1 - E2", 2, 3, True), ("E1", 1, -1, False)],
    )
    def test_values(self, text, m, value, forced):
        """Test the pairing with the m-fold cover and whether it forces positivity."""
        result = cover_pairing(cls(text), m)
        assert result.value == value
        assert result.forced_positive is forced


COLLECTION_POOL = [
    "E1 - E2",
    "E2 - E3",
    "E1 - E3",
    "F - E1 - E2",
    "B - E1",
    "B - E3",
    "B - E1 - E2",
    "B - F",
]


class TestAdmissibleCodim:
    def test_single_reduction_class(self):
        """Test the codimension of a single reduction class."""
        assert admissible_codim([cls("E1 - E2", G1N3)]) == 2

    def test_section_and_fiber_class(self):
        assert admissible_codim([cls("B - E1", G1N3), cls("E2 - E3", G1N3)]) == 4

    def test_chain(self):
        """Test that a chain of reduction classes sums its codimensions."""
        assert admissible_codim([cls("E1 - E2", G1N3), cls("E2 - E3", G1N3)]) == 4

    def test_negative_intersection(self):
        """Test that the first negatively intersecting pair is reported."""
        with pytest.raises(NotAdmissible) as info:
            admissible_codim([cls("E1 - E2", G1N3), cls("E1 - E3", G1N3)])
        assert info.value.pair == (cls("E1 - E2", G1N3), cls("E1 - E3", G1N3))

    def test_nonpositive_codim(self):
        with pytest.raises(NotAdmissible):
            admissible_codim([cls("F")])

    @given(
        st.lists(st.sampled_from(COLLECTION_POOL), max_size=3),
        st.lists(st.sampled_from(COLLECTION_POOL), max_size=3),
    )
    def test_codim_is_additive_over_unions(self, first, second):
        """Test that joining two admissible collections adds their codimensions."""
        C1 = [cls(text, G1N3) for text in first]
        C2 = [cls(text, G1N3) for text in second]
        try:
            total = admissible_codim(C1) + admissible_codim(C2)
        except NotAdmissible:
            with pytest.raises(NotAdmissible):
                admissible_codim(C1 + C2)
            return
        if all(pair(A, B) >= 0 for A in C1 for B in C2):
            assert admissible_codim(C1 + C2) == total
        else:
            with pytest.raises(NotAdmissible):
                admissible_codim(C1 + C2)


U3 = normalized(3, [Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)])
SECTION_ROWS = {"none": (), "index=-2": ("B - E1",), "index<-2": ("B - E1 - E2",)}
COLUMNS = {
    "embedded": None,
    "mild": Mild(cls("E1 - E2", G1N3), cls("E2", G1N3)),
    "bad": Bad(dec("E1", ("E1 - E2", 1), ("E2 - E3", 1), ("E3", 1), desc=G1N3)),
}
EXPECTED_KIND = {
    ("none", "embedded"): "top",
    ("none", "mild"): "cod2-mild",
    ("none", "bad"): "high",
    ("index=-2", "embedded"): "cod2-section",
    ("index=-2", "mild"): "high",
    ("index=-2", "bad"): "high",
    ("index<-2", "embedded"): "high",
    ("index<-2", "mild"): "high",
    ("index<-2", "bad"): "high",
}


def profile(row: str, column: str) -> JProfile:
    sections = [cls(s, G1N3) for s in SECTION_ROWS[row]]
    base = JProfile.all_embedded(G1N3, sections)
    exc = dict(base.exc)
    if COLUMNS[column] is not None:
        exc[cls("E1", G1N3)] = COLUMNS[column]
    return JProfile(exc, base.sections)


def with_bad_entry(*parts) -> JProfile:
    exc = dict(JProfile.all_embedded(G1N3).exc)
    exc[cls("E1", G1N3)] = Bad(dec("E1", *parts, desc=G1N3))
    return JProfile(exc)


class TestClassifyProfile:
    @pytest.mark.parametrize("row,column", sorted(EXPECTED_KIND))
    def test_partition_table(self, row, column):
        """Test every cell of the section row by exceptional column table."""
        p = profile(row, column)
        label = classify_profile(p, U3, G1N3)
        assert label.kind == EXPECTED_KIND[(row, column)]
        assert table_cell(p) == (row, column)
        if label.kind == "top":
            assert label.codim_lower_bound == 0
        elif label.kind.startswith("cod2"):
            assert label.codim_lower_bound == 2
        else:
            assert label.codim_lower_bound >= 4

    def test_witnesses(self):
        """Test that cod2 labels name the class responsible."""
        assert classify_profile(profile("none", "mild"), U3, G1N3).witness == cls("E1", G1N3)
        label = classify_profile(profile("index=-2", "embedded"), U3, G1N3)
        assert label.witness == cls("B - E1", G1N3)

    def test_high_bound_adds_witnesses(self):
        label = classify_profile(profile("index<-2", "bad"), U3, G1N3)
        assert label.codim_lower_bound == 8
        assert [value for _, value in witness_codims(profile("index<-2", "bad"))] == [2, 2, 4]

    def test_sections_of_nonnegative_index_stay_top(self):
        """Test that a section of index >= 0 does not leave the top stratum."""
        p = JProfile.all_embedded(G1N3, [cls("B", G1N3)])
        assert classify_profile(p, U3, G1N3).kind == "top"

    def test_missing_keys(self):
        """Test that a profile must cover every exceptional class."""
        p = JProfile({cls("E1", G1N3): Embedded()})
        with pytest.raises(InconsistentProfile, match="keys"):
            classify_profile(p, U3, G1N3)

    def test_section_must_be_section_type(self):
        with pytest.raises(InconsistentProfile, match="section-type"):
            classify_profile(JProfile.all_embedded(G1N3, [cls("F - E1", G1N3)]), U3, G1N3)

    def test_section_must_have_positive_area(self):
        p = JProfile.all_embedded(G1N3, [cls("B - 3F - E1", G1N3)])
        with pytest.raises(InconsistentProfile, match="area"):
            classify_profile(p, U3, G1N3)

    def test_mild_entry_must_be_a_mild_pair(self):
        """Test that a mild entry whose parts are not a mild pair is refused."""
        base = JProfile.all_embedded(G1N3)
        exc = dict(base.exc)
        exc[cls("E1", G1N3)] = Mild(cls("E1 - E3", G1N3), cls("E2", G1N3))
        with pytest.raises(InconsistentProfile, match="mild"):
            classify_profile(JProfile(exc), U3, G1N3)

    def test_bad_entry_parts_must_sum_to_its_class(self):
        """Test that a bad entry whose parts sum to another class is refused."""
        with pytest.raises(InconsistentProfile, match="bad entry"):
            classify_profile(with_bad_entry(("E2", 1)), U3, G1N3)

    @pytest.mark.parametrize(
        "parts,kind",
        [((("E1", 1),), "embedded"), ((("E1 - E2", 1), ("E2", 1)), "mild")],
    )
    def test_bad_entry_must_really_be_bad(self, parts, kind):
        """Test that a bad entry holding an embedded or mild decomposition is refused."""
        with pytest.raises(InconsistentProfile, match=f"is a {kind} decomposition"):
            classify_profile(with_bad_entry(*parts), U3, G1N3)

    @pytest.mark.parametrize("bad", [[{"class": "E2", "mult": 1}], [{"class": "E1"}]])
    def test_loaded_bad_entry_is_checked(self, bad):
        """Test that bad entries read from a document are checked on classification."""
        exc = {"E1": {"bad": bad}, "E2": "embedded", "F - E1": "embedded", "F - E2": "embedded"}
        data = {"exc": exc, "sections": []}
        p = profile_from_dict(data, G1N2)
        with pytest.raises(InconsistentProfile, match="bad entry"):
            classify_profile(p, normalized(3, [Fraction(3, 4), Fraction(1, 4)]), G1N2)
