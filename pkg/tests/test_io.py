import json

import numpy as np
import pytest

from simplexwidth import regular_simplex
from simplexwidth.errors import DegenerateSimplex, InputError, SingularGenerators
from simplexwidth.io import dump_simplex, load_simplex, load_spherical_simplex, parse_simplex


def test_roundtrip(tmp_path):
    s = regular_simplex(4)
    p = tmp_path / "s.json"
    dump_simplex(s, p)
    assert np.array_equal(load_simplex(p).vertices, s.vertices)


@pytest.mark.parametrize(
    "data",
    [
        {"vertices": [[1, 0, 0]]},
        {"dim": "3", "vertices": []},
        {"dim": 3, "vertices": [[1, 0], [0, 1]]},
        {"dim": 3, "vertices": [["a", 0, 0]]},
        {"dim": 3, "vertices": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
        {"dim": 3, "vertices": [[2, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0]]},
        {"dim": 3, "vertices": [[float("nan"), 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0]]},
    ],
)
def test_schema_errors(data):
    with pytest.raises(InputError):
        parse_simplex(data)


def test_normalize_and_degenerate():
    s = parse_simplex({"dim": 3, "vertices": [[2, 0, 0], [0, 3, 0], [0, 0, 1], [-1, -1, -1]]}, normalize=True)
    np.testing.assert_allclose(np.linalg.norm(s.vertices, axis=1), 1.0)
    with pytest.raises(DegenerateSimplex):
        parse_simplex({"dim": 3, "vertices": [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]]})


def test_unreadable(tmp_path):
    with pytest.raises(InputError):
        load_simplex(tmp_path / "missing.json")
    p = tmp_path / "bad.json"
    p.write_text("[1, 2]")
    with pytest.raises(InputError):
        load_simplex(p)


def test_spherical_simplex_file(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"dim": 3, "generators": [[1, 0, 0], [1, 1, 0], [1, 0, 1]]}))
    ss = load_spherical_simplex(p)
    assert ss.dim == 3
    p.write_text(json.dumps({"dim": 3, "generators": [[1, 0, 0], [2, 0, 0], [1, 0, 1]]}))
    with pytest.raises(SingularGenerators):
        load_spherical_simplex(p)
