from __future__ import annotations

from fractions import Fraction

import pytest

from conecalc.cli import main
from conecalc.cone import index_subsets, normalized, section_candidates, slice_arrangement
from conecalc.config import MAX_ENUMERATION_N, get_settings
from conecalc.errors import BoundTooLarge
from conecalc.export import slice_to_svg
from conecalc.homlattice import ManifoldDescriptor


def test_defaults():
    """Test the default settings."""
    settings = get_settings()
    assert settings.max_subsets == 1 << 16
    assert settings.coeff_bound == 5
    assert settings.max_parts == 6
    assert settings.log_level == "WARNING"


def test_subset_guard_from_environment(monkeypatch):
    monkeypatch.setenv("CONECALC_MAX_SUBSETS", "4")
    get_settings.cache_clear()
    half = Fraction(1, 2)
    with pytest.raises(BoundTooLarge):
        section_candidates(normalized(5, [half, half, half]), ManifoldDescriptor(1, 3))
    # two blow-ups still fit
    assert len(list(index_subsets(2))) == 4


def test_hard_ceiling_on_blowups():
    """Test that the blow-up guard cannot exceed its ceiling."""
    with pytest.raises(BoundTooLarge):
        list(index_subsets(MAX_ENUMERATION_N + 1))


def test_svg_scale_from_environment(monkeypatch):
    monkeypatch.setenv("CONECALC_SVG_SCALE", "10")
    monkeypatch.setenv("CONECALC_SVG_MARGIN", "0")
    get_settings.cache_clear()
    arr = slice_arrangement(
        ManifoldDescriptor(1, 1),
        {},
        {"mu": (Fraction(1), Fraction(3)), "c1": (Fraction(0), Fraction(1))},
    )
    assert 'width="20px"' in slice_to_svg(arr)


def test_search_window_default_from_environment(monkeypatch, capsys):
    """Test that the CLI search window falls back to the environment."""
    monkeypatch.setenv("CONECALC_COEFF_BOUND", "1")
    get_settings.cache_clear()
    status = main(
        ["decompose", "--u", "mu=5 c=9/10,9/10,9/10", "--e", "E1", "--require-complete"]
    )
    assert status == 4
    assert "coeff bound 1" in capsys.readouterr().err
