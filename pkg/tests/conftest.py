"""Shared helpers: fixture discovery and seeded random samplers."""

from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest

from orbitdex import GermMap, Poly, parse_germ

SEED = 20260810


@pytest.fixture
def rng():
    return random.Random(SEED)


def fixture_dir() -> Path:
    return Path(str(resources.files("orbitdex") / "fixtures"))


def load_fixtures():
    """All bundled (name, document) pairs, sorted by name."""
    out = []
    for path in sorted(fixture_dir().glob("*.germ")):
        out.append((path.stem, parse_germ(path.read_text())))
    return out


def random_rational(rng, small=True) -> Fraction:
    num = rng.choice([-2, -1, 1, 2, 3]) if small else rng.randint(-9, 9) or 1
    den = rng.choice([1, 1, 1, 2, 3])
    return Fraction(num, den)


def random_poly(rng, nvars, max_degree, max_terms=4, modulus=1,
                min_degree=1) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            mono = tuple(rng.randint(0, max_degree) for _ in range(nvars))
            if min_degree <= sum(mono) <= max_degree:
                break
        terms[mono] = random_rational(rng)
    return Poly(nvars, modulus, terms)


def random_isolated_system(rng, nvars, max_degree=4):
    """A random germ map with an isolated zero at the origin: dominant
    pure powers per coordinate plus random higher noise."""
    from orbitdex import NotIsolatedWithinBound, multiplicity

    while True:
        coords = []
        for j in range(nvars):
            power = rng.randint(1, max_degree)
            p = Poly.variable(j, nvars) ** power
            p = p + random_poly(rng, nvars, max_degree,
                                max_terms=2, min_degree=max(power, 1))
            coords.append(p)
        f = GermMap(coords, nvars=nvars)
        if any(c.is_zero() for c in coords):
            continue
        try:
            value = multiplicity(f).value
        except NotIsolatedWithinBound:
            continue
        if value > 0:
            return f, value
