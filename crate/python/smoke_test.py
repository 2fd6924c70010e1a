"""Smoke test for the hallcalc extension module."""

import json
from fractions import Fraction

import hallcalc


def test_macmahon():
    assert hallcalc.macmahon(6) == [1, 1, 3, 6, 13, 24, 48]
    assert hallcalc.dt_zero(1, 2) == [1, -1, 3]


def test_rational():
    r = hallcalc.rational_from_periodic(2, [0, 1])
    assert r["table_symmetric"] and r["invariant"]
    assert hallcalc.symmetry_check({1: 1}, {0: 1, 1: -2, 2: 1})
    assert not hallcalc.symmetry_check({0: 1}, {0: 1, 1: -1})
    assert not hallcalc.rational_from_periodic(3, [1, 2, 3])["invariant"]


def test_model():
    m = hallcalc.Model.jordan(2, 3)
    labels = [c[0] for c in m.classes()]
    assert "(1)" in labels and "(1,1)" in labels
    prod = json.loads(m.mul("delta:(1)", "delta:(1)", "points:2"))
    coeffs = {
        c["class_label"]: c["coefficient"]
        for d in prod["degrees"]
        for c in d["classes"]
    }
    assert coeffs == {"(1,1)": "3", "(2)": "1"}
    ints = m.integrate("ss", "points:1")
    assert ints[((), 0)] == 1
    assert ints[((), 1)] == Fraction(1, 1)


def test_verify():
    spec = json.dumps({"type": "jordan", "q": 2, "bound": 3})
    for name in hallcalc.identities():
        report = hallcalc.verify(name, spec)
        assert report.passed, report.summary()
        assert json.loads(report.to_json())["schema"] == hallcalc.SCHEMA
    k = hallcalc.Model.kronecker(2, [1, 0], [0, 1], [2, 2])
    assert hallcalc.verify("hn", k.spec_json()).passed


def test_cli():
    code, out, _ = hallcalc.run_cli(["series", "macmahon", "--order", "4"])
    assert code == 0
    assert out.splitlines()[-1] == "4,13"
    code, _, _ = hallcalc.run_cli(["frobnicate"])
    assert code == 2


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
    print("ok")
