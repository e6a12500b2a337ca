"""Seed derivation, float formatting, p-values, and CSV helpers."""

from __future__ import annotations

import math

import pytest
import scipy.stats
from hypothesis import given
from hypothesis import strategies as st

from writelab.util import (
    derive_seed,
    fmt_float,
    normal_cdf,
    parse_optional_float,
    parse_optional_int,
    read_csv_rows,
    two_sided_p_value,
    write_csv_atomic,
    write_text_atomic,
)


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(7, "bootstrap", "T1", "Y2") == derive_seed(7, "bootstrap", "T1", "Y2")

    def test_tags_change_stream(self):
        seeds = {
            derive_seed(7),
            derive_seed(7, "a"),
            derive_seed(7, "b"),
            derive_seed(7, "a", "b"),
            derive_seed(8, "a"),
        }
        assert len(seeds) == 5

    def test_non_negative(self):
        for base in (0, 1, 2**31):
            assert derive_seed(base, "x") >= 0

    def test_order_sensitive(self):
        assert derive_seed(1, "a", "b") != derive_seed(1, "b", "a")


class TestFmtFloat:
    def test_shortest_repr(self):
        assert fmt_float(0.1) == "0.1"
        assert fmt_float(1.0) == "1.0"
        assert fmt_float(2) == "2"
        assert fmt_float(None) == ""

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_round_trips_exactly(self, value):
        assert float(fmt_float(value)) == value


class TestTwoSidedPValue:
    def test_matches_reference_normal_tail(self):
        # Independent oracle: the scipy normal distribution.
        for reference, mean, sd in [
            (0.0, 0.0, 1.0),
            (1.0, 0.0, 1.0),
            (1.5, 1.45, 0.03),
            (-2.0, 0.5, 0.7),
            (0.3, 0.3, 2.0),
        ]:
            expected = 2.0 * scipy.stats.norm.sf(abs(reference - mean) / sd)
            assert two_sided_p_value(reference, mean, sd) == pytest.approx(expected, abs=1e-12)

    def test_cdf_matches_scipy(self):
        for z in (-4.0, -1.3, 0.0, 0.5, 2.7):
            assert normal_cdf(z) == pytest.approx(scipy.stats.norm.cdf(z), abs=1e-12)

    def test_degenerate_spread(self):
        assert two_sided_p_value(1.0, 1.0, 0.0) == 1.0
        assert two_sided_p_value(1.0, 0.0, 0.0) == 0.0
        assert two_sided_p_value(0.0, 0.0, float("nan")) == 1.0

    def test_range(self):
        assert 0.0 <= two_sided_p_value(3.0, 0.0, 0.5) <= 1.0


class TestCsvHelpers:
    def test_lf_endings_and_repr_floats(self, tmp_path):
        path = tmp_path / "table.csv"
        write_csv_atomic(path, ("a", "b"), [(0.1, 1.0), (2, None)])
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert raw == b"a,b\n0.1,1.0\n2,\n"

    def test_round_trip(self, tmp_path):
        path = tmp_path / "table.csv"
        write_csv_atomic(path, ("x", "y"), [(1.25, "s01"), (-0.5, "s02")])
        rows = read_csv_rows(path)
        assert rows == [{"x": "1.25", "y": "s01"}, {"x": "-0.5", "y": "s02"}]

    def test_no_temp_files_left(self, tmp_path):
        write_csv_atomic(tmp_path / "t.csv", ("a",), [(1,)])
        write_text_atomic(tmp_path / "t.txt", "hello\n")
        assert sorted(p.name for p in tmp_path.iterdir()) == ["t.csv", "t.txt"]

    def test_optional_parsers(self):
        assert parse_optional_float("") is None
        assert parse_optional_float("1.5") == 1.5
        assert parse_optional_int("") is None
        assert parse_optional_int("3") == 3
