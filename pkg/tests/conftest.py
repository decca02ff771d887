import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from confrel import ConfidenceRelation, make_space


@pytest.fixture
def s2():
    return make_space(["s1", "s2"])


@pytest.fixture
def s3():
    return make_space(["s1", "s2", "s3"])


def inclusion_relation(space):
    rows = tuple(
        sum(1 << b for b in range(space.size) if b & ~a == 0)
        for a in range(space.size)
    )
    return ConfidenceRelation(space, rows)


@pytest.fixture
def penguin_doc():
    return {
        "atoms": ["b", "f", "p"],
        "rules": [
            {"if": "b", "then": "f"},
            {"if": "p", "then": "b"},
            {"if": "p", "then": "!f"},
        ],
    }
