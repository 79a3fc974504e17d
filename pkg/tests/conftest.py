import random
from collections.abc import Callable
from fractions import Fraction

import pytest

from weightlin.algebra.series import SeriesContext, TruncatedSeries
from weightlin.algebra.vectorfields import VectorField
from weightlin.algebra.weighting import weighted_compositions
from weightlin.context import get_context
from weightlin.expressions import parse_field

ENV_VARS = (
    "WEIGHTLIN_PROFILE",
    "WEIGHTLIN_ORDER",
    "WEIGHTLIN_T_CAP",
    "WEIGHTLIN_METHOD",
    "WEIGHTLIN_FORMAT",
    "WEIGHTLIN_THREADS",
)


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the config layer at an empty directory and forget cached settings."""
    monkeypatch.setenv("WEIGHTLIN_CONFIG_DIR", str(tmp_path / "config"))
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    ctx = get_context()
    ctx.profile = None
    ctx.verbose = False
    ctx.reset()
    yield
    ctx.reset()


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def field() -> Callable[..., VectorField]:
    """Parse a field in a fresh context: ``field("x*d/dx", "x", (1,), 6)``."""

    def make(text: str, names: str, weights: tuple[int, ...], cutoff: int) -> VectorField:
        return parse_field(text, SeriesContext.create(weights, cutoff), names.split(","))

    return make


def _small_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-4, 4), rng.randint(1, 3))


def random_series(rng: random.Random, ctx: SeriesContext, min_degree: int = 0, terms: int = 4) -> TruncatedSeries:
    """Random series whose terms have weighted degree between ``min_degree`` and the cutoff."""
    data: dict[tuple[int, ...], Fraction] = {}
    for _ in range(terms):
        degree = rng.randint(min_degree, max(ctx.cutoff, min_degree))
        candidates = weighted_compositions(ctx.weighting, degree)
        if candidates:
            data[rng.choice(candidates)] = _small_fraction(rng)
    return TruncatedSeries(ctx, data)


def random_admissible_field(
    rng: random.Random, ctx: SeriesContext, min_slice: int = 0, terms: int = 3
) -> VectorField:
    """Random field whose slices all have degree at least ``min_slice``."""
    weights = ctx.weighting.weights
    return VectorField(ctx, [random_series(rng, ctx, weights[i] + min_slice, terms) for i in range(ctx.dimension)])
