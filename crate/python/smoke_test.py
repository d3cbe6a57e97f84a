"""Smoke test for the gchtw extension module.

Build and install first:
    maturin develop --release --manifest-path crates/py/Cargo.toml
then run:
    python python/smoke_test.py
"""

import math

import gchtw


def main():
    eqs = gchtw.equilibria("gch1", 0.5, 0.014)
    kinds = sorted(e["kind"] for e in eqs if e["origin"] == "regular")
    assert kinds == ["center", "saddle"], kinds

    assert gchtw.classify("gch2", 3.0, 0.1) == "none"

    g_star, phi_s, y_s = gchtw.gstar(2.0)
    assert abs(g_star - 0.8380525) < 1e-6, g_star
    assert abs(phi_s - math.sqrt(2.0)) < 1e-6

    sol = gchtw.series("gch1", 0.5, 0.014, m=10)
    a1 = sol.leading_coefficients[0]
    assert abs(a1 - 0.0357) < 5e-5, a1
    assert sol.verdicts == ["converging", "converging"], sol.verdicts
    assert sol.wave(1.0, 0.0) == sol.phi(1.0)
    assert abs(sol.wave(0.5, 1.0) - sol.phi(0.0)) < 1e-15

    back = gchtw.Solution.from_json(sol.to_json())
    assert back.to_json() == sol.to_json()

    try:
        gchtw.series("gch3", 0.5, 0.13, m=20, sign="reversed")
    except RuntimeError as e:
        assert "continuity" in str(e)
    else:
        raise AssertionError("expected no continuity root")

    print("gchtw", gchtw.__version__, "smoke test passed:", repr(sol))


if __name__ == "__main__":
    main()
