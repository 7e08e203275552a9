import functools

import pytest

from boundext.cli import fixture_text
from boundext.extension import build_extension
from boundext.linalg import GF
from boundext.specfile import parse_spec

FIXTURES = ("ex6_1", "rea", "ex6_2", "nocycle4", "split_semisimple", "split_semisimple_cyclic", "matrix2")


@functools.lru_cache(maxsize=None)
def load(name, p=None):
    spec = parse_spec(fixture_text(name))
    if p is not None:
        spec = spec.with_field(GF(p))
    return build_extension(spec)


@pytest.fixture
def ext():
    return load
