import numpy as np
import pytest

from zeroabel.parse import parse_poly

# Small fixed corpus: decomposable, Chebyshev, generic and degenerate cases.
CORPUS_TEXT = [
    "z^3-3*z",
    "z^4",
    "8*z^4-8*z^2+1",
    "z^4-z^2",
    "z^2*(z-1)^2",
    "z^5+z^2+1",
    "(z^2+z)^3",
    "z^6+z^3",
    "z^4+z^3+2*z",
    "(z^3+z)^2+z^3+z",
]


@pytest.fixture(scope="session")
def corpus():
    return [parse_poly(s) for s in CORPUS_TEXT]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
