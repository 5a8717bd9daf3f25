"""Tests for the HTTP API endpoints."""

import logging

import pytest
from fastapi.testclient import TestClient
from httpx import ASGITransport, AsyncClient

from src import __version__
from src.server import app


@pytest.fixture
def client():
    """Create test client."""
    return TestClient(app)


class TestServiceEndpoints:
    """Tests for /health and /."""

    def test_health(self, client):
        """Test health check."""
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "healthy"}

    def test_root(self, client):
        """Test the service description."""
        data = client.get("/").json()
        assert data["service"] == "Sphere Spectra"
        assert data["version"] == __version__
        assert data["endpoints"]["spectrum"] == "/spectra/spectrum"


class TestHaarEndpoint:
    """Tests for GET /spectra/haar."""

    def test_free_value(self, client):
        """Test h(u11^2 u22^2) = 1/24 on O_5^+."""
        response = client.get("/spectra/haar", params={"model": "free", "N": 5, "word": "u11^2 u22^2"})
        assert response.status_code == 200
        data = response.json()
        assert data["value"] == "1/24"
        assert data["verified"] is True

    def test_unverified_flag(self, client):
        """Test half-liberated words off the row-one regime are flagged."""
        response = client.get("/spectra/haar", params={"model": "half", "N": 3, "word": "u22^2"})
        assert response.status_code == 200
        assert response.json()["verified"] is False

    def test_length_cap(self, client):
        """Test an over-long word is a 400 with the length cap prefix."""
        response = client.get("/spectra/haar", params={"model": "classical", "word": "u11^10"})
        assert response.status_code == 400
        assert response.json()["detail"].startswith("length cap: ")

    def test_unknown_family(self, client):
        """Test an unknown model name is a 400."""
        response = client.get("/spectra/haar", params={"model": "quantum", "word": "u11^2"})
        assert response.status_code == 400
        assert "unknown family" in response.json()["detail"]


class TestSpectrumEndpoints:
    """Tests for GET and POST /spectra/spectrum."""

    def test_laplace_default(self, client):
        """Test b defaults to N - 1."""
        response = client.get("/spectra/spectrum", params={"family": "classical", "N": 3, "smax": 2})
        assert response.status_code == 200
        data = response.json()
        assert data["b"] == "2"
        assert data["N"] == 3
        assert data["entries"] == [
            {"s": 0, "m": "1", "lambda": "0"},
            {"s": 1, "m": "3", "lambda": "-2"},
            {"s": 2, "m": "5", "lambda": "-6"},
        ]

    def test_malformed_drift(self, client):
        """Test b = 1/0 is a 400 with the malformed rational prefix."""
        response = client.get("/spectra/spectrum", params={"family": "free", "b": "1/0"})
        assert response.status_code == 400
        assert response.json()["detail"].startswith("malformed rational: ")

    def test_smax_limit(self, client):
        """Test smax beyond the API limit is rejected by validation."""
        response = client.get("/spectra/spectrum", params={"family": "free", "smax": 500})
        assert response.status_code == 422

    def test_post_with_jump_measure(self, client):
        """Test ν = δ_{-1} with b = 0 gives λ_1 = -1 and λ_2 = 0."""
        body = {"family": "classical", "N": 3, "b": "0", "smax": 2, "nu": {"atoms": [{"x": "-1", "w": "1"}]}}
        response = client.post("/spectra/spectrum", json=body)
        assert response.status_code == 200
        data = response.json()
        assert [e["lambda"] for e in data["entries"]] == ["0", "-1", "0"]
        assert data["nu"]["atoms"] == [{"x": "-1", "w": "1"}]

    def test_post_atom_at_one(self, client):
        """Test an atom at the normalization point is a 400."""
        body = {"family": "free", "b": "1", "nu": {"atoms": [{"x": "1", "w": "1"}]}}
        response = client.post("/spectra/spectrum", json=body)
        assert response.status_code == 400
        assert response.json()["detail"].startswith("atom at normalization point: ")

    def test_post_negative_density_warns(self, client, caplog):
        """Test a negative density piece is screened with a warning, as on the CLI."""
        body = {"family": "classical", "b": "1", "smax": 2, "nu": {"pieces": [{"lo": "-1", "hi": "0", "coeffs": ["-1"]}]}}
        with caplog.at_level(logging.WARNING, logger="src.core.measures"):
            response = client.post("/spectra/spectrum", json=body)
        assert response.status_code == 200
        assert "is negative" in caplog.text


class TestSpecdimEndpoint:
    """Tests for GET /spectra/specdim."""

    def test_free_infinite(self, client):
        """Test the free sphere at N = 3."""
        data = client.get("/spectra/specdim", params={"family": "free", "N": 3}).json()
        assert data["value"] == "infinite"
        assert data["method"] == "ExactOrder"

    def test_zero_drift(self, client):
        """Test b = 0 is a degenerate generator."""
        response = client.get("/spectra/specdim", params={"family": "classical", "b": "0"})
        assert response.status_code == 400
        assert response.json()["detail"].startswith("degenerate generator: ")

    async def test_async_client(self):
        """Test the endpoint through an async transport."""
        async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as async_client:
            response = await async_client.get("/spectra/specdim", params={"family": "classical", "N": 4})
        assert response.status_code == 200
        assert response.json()["value"] == "3"
