from fractions import Fraction

import pytest

import halfplane2d as hp


def vertices(region):
    """Exact polygon vertices from a snapshot: consecutive edge lines meet."""
    snap = region.snapshot()
    lines = [(Fraction(e["a"]), Fraction(e["b"]), Fraction(e["c"])) for e in snap]
    out = []
    for i, (a2, b2, c2) in enumerate(lines):
        a1, b1, c1 = lines[i - 1]
        d = a1 * b2 - a2 * b1
        out.append(((c1 * b2 - c2 * b1) / d, (a1 * c2 - a2 * c1) / d))
    return out


def test_round_up_kernel():
    third = hp.ru_div(1.0, 3.0)
    assert Fraction(third) > Fraction(1, 3)
    assert hp.ru_add(hp.LARGEST_FINITE, hp.LARGEST_FINITE) == float("inf")
    assert hp.ru_mul(-hp.LARGEST_FINITE, 2.0) == -hp.LARGEST_FINITE
    x, y = 0.1, 0.7
    s = hp.ru_add(x, y)
    assert Fraction(s) >= Fraction(x) + Fraction(y)


def test_exact_sign():
    assert hp.exact_sign([(False, 1.0, 1.0, 1.0), (False, 2.0**-60, 1.0, 1.0), (True, 1.0, 1.0, 1.0)]) == 1
    assert hp.exact_sign([(False, 3.0, 1.0, 1.0), (True, 3.0, 1.0, 1.0)]) == 0


def test_normalize_and_octants():
    assert hp.classify_octant(3.0, 1.0) == 0
    assert hp.classify_octant(-5.0, -5.0) == 5
    assert hp.normalize(2.0, 1.0, 4.0) == (0, 0.5, 2.0)
    assert hp.compare_directions(0, 0.25, 1, 0.9) == -1
    with pytest.raises(ValueError):
        hp.classify_octant(0.0, 0.0)


def test_square_pentagon_exact():
    r = hp.Region(10.0, 10.0)
    hp.reset_counters()
    r.add_constraint(1.0, 1.0, 5.0)
    assert hp.counters()["divisions"] <= 2
    assert r.kind == "polygon"
    assert r.validate() is None
    got = vertices(r)
    assert set(got) == {(0, 5), (5, 0), (10, 0), (10, 10), (0, 10)}


def test_degenerate_outcomes():
    r = hp.Region(10.0, 10.0)
    r.add_constraint(1.0, 1.0, 20.0)
    assert r.kind == "point"
    s = hp.Region(10.0, 10.0)
    s.add_constraint(1.0, 1.0, 20.000001)
    assert s.kind == "empty"
    with pytest.raises(ValueError):
        hp.Region(hp.LARGEST_FINITE, hp.LARGEST_FINITE)


def test_generated_polygon_reproduced():
    normals = hp.normal_set_32()
    assert hp.is_valid_subset(normals)
    p = hp.build_polygon(normals, 8, 42)
    r = hp.Region(p["box"], p["box"])
    for a, b, c in p["constraints"]:
        r.add_constraint(float(a), float(b), float(c))
    assert r.validate() is None
    assert set(vertices(r)) == set(zip(p["x"], p["y"]))


def test_copy_is_independent():
    r = hp.Region(10.0, 10.0)
    c = r.copy()
    c.add_constraint(1.0, 0.0, 11.0)
    assert c.kind == "empty" and r.kind == "polygon"


@pytest.mark.parametrize("kind", ["point", "segment", "empty"])
def test_degenerate_generator(kind):
    case = hp.gen_degenerate(kind, 4, 7)
    r = hp.Region(case["box"], case["box"])
    for a, b, c in case["constraints"]:
        r.add_constraint(float(a), float(b), float(c))
    assert r.kind == kind
