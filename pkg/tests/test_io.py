import json

import numpy as np
import pytest

from extremal_domains.geometry import PlanarDomain, area_perimeter
from extremal_domains.io import (
    DomainFileError,
    domain_from_json,
    domain_to_json,
    dumps,
    load_domain,
    load_laurent,
)

DATA = __import__("pathlib").Path(__file__).resolve().parent.parent / "data"


def test_shapes():
    d = domain_from_json({"shape": "annulus", "r_outer": 2, "r_inner": 1, "center": [0.5, 0]})
    assert d.connectivity == 2
    assert d.hole_points[0] == pytest.approx(0.5)
    e = domain_from_json({"shape": "ellipse", "a": 1, "b": 0.6})
    assert area_perimeter(e)[0] == pytest.approx(0.6 * np.pi)


def test_explicit_file_matches_shape():
    d = load_domain(DATA / "eccentric_annulus.json")
    ref = PlanarDomain.annulus(1.0, 0.3, 0j, 0.2)
    np.testing.assert_allclose(d.inners[0].points, ref.inners[0].points, atol=1e-15)


def test_roundtrip(ellipse_ring, tmp_path):
    p = tmp_path / "d.json"
    p.write_text(dumps(domain_to_json(ellipse_ring)))
    back = load_domain(p)
    for a, b in zip(back.curves, ellipse_ring.curves):
        np.testing.assert_array_equal(a.coeffs, b.coeffs)


def test_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "shape": "disk",\n  "radius": 1,,\n}\n')
    with pytest.raises(DomainFileError, match=r"bad\.json:3:"):
        load_domain(p)


def test_missing_key_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "outer": {\n    "coeffs": [[0, 0], [1, 0]]\n  }\n}\n')
    with pytest.raises(DomainFileError, match=r"bad\.json:2: .*'outer\.j_min'"):
        load_domain(p)


def test_invalid_domain(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"shape": "annulus", "r_outer": 1, "r_inner": 0.5, "inner_center": [0.7, 0]}))
    with pytest.raises(DomainFileError, match="invalid domain"):
        load_domain(p)


def test_missing_file(tmp_path):
    with pytest.raises(DomainFileError, match="cannot read"):
        load_domain(tmp_path / "nope.json")


def test_bad_value_types(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"outer": {"coeffs": [["a", 0]], "j_min": 0}}))
    with pytest.raises(DomainFileError, match="malformed"):
        load_domain(p)


def test_laurent_file():
    f = load_laurent(DATA / "airy_qd.json")
    assert f(0.3 + 0.1j) == pytest.approx(0.3 + 0.1j)


def test_dumps_is_canonical():
    a = dumps({"b": 1.0, "a": [1 + 2j, np.float64(np.nan)], "c": np.arange(2)})
    assert a == dumps({"c": [0, 1], "a": [[1.0, 2.0], None], "b": 1.0})
    assert json.loads(a)["a"] == [[1.0, 2.0], None]
