"""Smoke tests for the python bindings.

Run from the repository root (ctest sets the working directory) after
`pip install -e . --no-build-isolation`.
"""

import sys

import hgt_tools as hgt


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    names = hgt.crossed_modules()
    check("AUT:SU2" in names and "BU1" in names, "builtin module list")

    rep = hgt.verify_axioms("AUT:SU2", samples=20, seed=3)
    check(rep and all(c["pass"] for c in rep), "crossed-module axioms")
    check(max(c["max_residual"] for c in rep) < 1e-9, "axiom residuals")

    rep = hgt.dgla_suite("BU1", h=1e-3, samples=1, nforms=1, seed=5)
    check(rep and all(c["pass"] for c in rep), "dgla suite")

    rep = hgt.validate_cocycle("data/trivial_cocycle.json", samples=2)
    check(all(c["pass"] for c in rep), "trivial cocycle validates")
    check(max(c["max_residual"] for c in rep) < 1e-12, "trivial residuals")

    cls = hgt.classify_cocycle("data/trivial_cocycle.json", samples=2)
    check(cls["flat"] and cls["fake_flat"], "trivial cocycle is flat")

    rep = hgt.validate_cocycle("data/monopole.json", samples=2)
    check(all(c["pass"] for c in rep), "monopole validates")

    c1 = hgt.chern("data/monopole.json", grid_step=0.02)
    check(abs(c1 - 1.0) < 0.01, "monopole chern number, got %r" % c1)

    w = hgt.roundtrip("data/monopole.json")
    check(w < 1e-12, "monopole roundtrip discrepancy, got %r" % w)

    try:
        hgt.chern("data/trivial_cocycle.json")
        check(False, "chern on a 1d cover should raise")
    except hgt.HgtError:
        pass

    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
