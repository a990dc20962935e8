"""Smoke test for the Python bindings.

Build the module first (see README), then run:
    python3 python/smoke_test.py
"""

from fractions import Fraction

import kahlerq


def main():
    inv = kahlerq.invariants(2, 1, 1)
    assert (inv.vol, inv.deg1, inv.chern11, inv.chern2) == (3, 5, 8, 4), inv
    assert inv.f() == -100
    assert kahlerq.f_definition(4, 1, 1) == 32384
    # the expanded form carries the factor (n-1)^2/n
    assert kahlerq.f_expanded(4, 1, 1) == Fraction(9, 4) * 32384

    # exact rationals in, exact rationals out
    x = kahlerq.f_definition(3, Fraction(1, 2), "2/3")
    assert isinstance(x, Fraction)
    assert kahlerq.f_expanded(3, Fraction(1, 2), Fraction(2, 3)) == Fraction(4, 3) * x
    try:
        kahlerq.invariants(3, 0.5, 1)
    except TypeError:
        pass
    else:
        raise AssertionError("floats must be rejected")
    try:
        kahlerq.invariants(1, 1, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("n = 1 must be rejected")

    scan = kahlerq.scan_min_n(1, 1, 20)
    assert scan.first_positive == 4 and scan.reversals == []
    assert len(scan.rows) == 19

    c1, c2 = kahlerq.chern_classes(3)
    assert (c1 ** 3).top() == 62
    assert kahlerq.ring_eval(3, "c1^3").top() == 62
    assert kahlerq.ring_eval(2, "(L+H)^2").lh == 3

    d = inv.class_data()
    report = d.csck_obstruction_check()
    assert report.verdict == "strict" and report.margin == 100
    assert d.bound_difference() == Fraction(11, 9)
    assert d.rescale(2).bound_difference() == Fraction(11, 9)

    assert all(ok for _, _, ok in kahlerq.verify_tensor())
    ids = kahlerq.verify_identities()
    assert ids["passed"]
    assert ids["besse"]["difference"] == "(2n - 4)/(n^2 + 2n)"
    assert kahlerq.identity_coefficient("integral3", "s2", 2) == Fraction(1, 24)

    code, out, _ = kahlerq.cli(["batyrev", "--n", "4", "--alpha", "1", "--beta", "1", "--json"])
    assert code == 0 and '"f": "32384"' in out
    code, _, err = kahlerq.cli(["batyrev", "--n", "1", "--alpha", "1", "--beta", "1"])
    assert code == 3 and err

    print("python smoke test: OK")


if __name__ == "__main__":
    main()
