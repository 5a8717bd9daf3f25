"""Tests for the verification service and report rendering."""

import json
from fractions import Fraction
from unittest.mock import patch

import pytest

from src.core.errors import SingularGramError
from src.core.haar import parse_word
from src.core.levy import laplace
from src.core.sphere import Family, SphereKind
from src.services import CheckResult, OutputFormat, Report, ReportService, VerificationService
from src.services.reports import format_float


@pytest.fixture
def verification():
    """Verification service with the default seed."""
    return VerificationService()


class TestVerificationService:
    """Tests for individual checks and run_all."""

    @pytest.mark.parametrize(
        "name",
        [
            "check_exact_division",
            "check_cross_family_q2",
            "check_star_recurrence",
            "check_free_golden",
            "check_phi_not_tracial",
            "check_free_cross_oracle",
            "check_central",
            "check_free_half_n2",
            "check_multiplicities",
        ],
    )
    def test_check_passes(self, verification, name):
        """Test a fast subset of the suite passes."""
        assert getattr(verification, name)() is None

    def test_check_names_unique(self, verification):
        """Test every check has a distinct module.name."""
        names = [(module, name) for module, name, _ in verification.checks()]
        assert len(names) == len(set(names))

    def test_run_all_records_failures(self, verification):
        """Test failing and raising checks become failed results."""

        def raising():
            raise SingularGramError("no pivot")

        checks = [("a", "ok", lambda: None), ("b", "bad", lambda: "s=3"), ("c", "boom", raising)]
        with patch.object(VerificationService, "checks", return_value=checks):
            results = verification.run_all()
        assert results == [
            CheckResult("a", "ok", True, ""),
            CheckResult("b", "bad", False, "s=3"),
            CheckResult("c", "boom", False, "singular Gram: no pivot"),
        ]


class TestReports:
    """Tests for report rendering."""

    def test_format_float(self):
        """Test 17 significant digits and integral floats without a point."""
        assert format_float(-2.0) == "-2"
        assert format_float(0.1) == "0.10000000000000001"

    def test_render_formats(self):
        """Test JSON, CSV and pretty renderings of one report."""
        report = Report({"value": "1/2"}, "1/2", ("k", "v"), [(0, "1/2")])
        assert report.render(OutputFormat.JSON) == '{\n  "value": "1/2"\n}\n'
        assert report.render(OutputFormat.CSV) == "k,v\n0,1/2\n"
        assert report.render(OutputFormat.PRETTY) == "1/2\n"

    def test_json_floats_use_float_digits(self):
        """Test JSON floats carry 17 significant digits and stay floats when integral."""
        report = Report({"z": 0.1, "values": [2.0, 1 / 3, 1e20]}, "")
        text = report.render(OutputFormat.JSON)
        assert text == '{\n  "z": 0.10000000000000001,\n  "values": [\n    2.0,\n    0.33333333333333331,\n    1e+20\n  ]\n}\n'
        assert json.loads(text) == {"z": 0.1, "values": [2.0, 1 / 3, 1e20]}

    def test_csv_without_table(self):
        """Test scalar reports fall back to a single value column."""
        assert Report({}, "7").to_csv() == "value\n7\n"

    def test_ebi_report(self):
        """Test the E_bi report carries coefficients and the verified flag."""
        word = parse_word("u11 u22^2", Family(SphereKind.FREE, 3))
        payload = ReportService().ebi(word).payload
        assert payload["coeffs"] == ["0", "1/4", "0", "1/4"]
        assert payload["verified"] is True
        assert payload["smax"] == 3

    def test_heat_trace_report(self):
        """Test the heat eigenvalues start at exactly 1."""
        payload = ReportService().heat_trace(laplace(Family(SphereKind.CLASSICAL, 3)), Fraction(1), 1).payload
        assert payload["eigenvalues"][0] == 1.0
        assert payload["t"] == "1"
