"""Smoke test for the `goldman` extension module.

Build first with `cargo build -p goldman-py --release`; the script picks up
the shared library from `target/` when the module is not installed.
"""

import importlib
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        return importlib.import_module("goldman")
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libgoldman.so", "libgoldman.dylib", "goldman.dll"):
            path = os.path.join(ROOT, "target", profile, name)
            if os.path.exists(path):
                tmp = tempfile.mkdtemp()
                ext = ".pyd" if name.endswith(".dll") else ".so"
                shutil.copy(path, os.path.join(tmp, "goldman" + ext))
                sys.path.insert(0, tmp)
                return importlib.import_module("goldman")
    raise SystemExit("goldman extension not found; run `cargo build -p goldman-py --release`")


def main():
    g = load()

    report = g.figure_eight("1")
    assert report["b"] == "-2" and report["c"] == "1", report
    assert report["residual2"] == "0", report
    assert report["residual3"] == "1/6*[Y,[Y,X]]", report

    a = g.Tensor.letter(1, 1, 2, "A1")
    b = g.Tensor.letter(1, 1, 2, "B1")
    p = a.exp() * b.exp()
    assert p.coef(["A1", "B1"]) == "1" and p.coef(["A1", "A1"]) == "1/2"
    assert g.Tensor.from_json(p.to_json(), 1, 1) == p

    theta = g.Expansion.symplectic(1, 4)
    lhs = theta.twist("a1", "b1")
    rhs = theta.evaluate("b1 a1")
    assert lhs == rhs

    theta2 = g.Expansion.symplectic(2, 5)
    tau = theta2.johnson(["sep:1"])
    assert tau.low_degree() == 4
    assert tau == theta2.half_log_squared("a1 b1 a1^-1 b1^-1")
    assert g.membership(tau) == (True, True, True, True)

    assert g.annulus_check(5)

    try:
        theta.evaluate("q7")
    except ValueError as e:
        assert str(e).startswith("parse")
    else:
        raise AssertionError("expected a parse error")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
