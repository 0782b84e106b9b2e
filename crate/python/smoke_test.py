#!/usr/bin/env python3
"""Smoke test for the liouville_py extension module.

Builds nothing itself: expects the cdylib at target/{release,debug}/
(`cargo build -p liouville-py [--release]`), copies it next to a temp dir as
`liouville_py.so`, imports it, and exercises the main surface against known
closed forms.
"""

import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    names = ["libliouville_py.so", "liouville_py.so", "libliouville_py.dylib"]
    for profile in ("release", "debug"):
        for name in names:
            cand = ROOT / "target" / profile / name
            if cand.exists():
                tmp = Path(tempfile.mkdtemp(prefix="liouville_py_"))
                shutil.copy(cand, tmp / "liouville_py.so")
                sys.path.insert(0, str(tmp))
                import liouville_py  # noqa: PLC0415

                return liouville_py
    sys.exit(
        "liouville_py cdylib not found; run `cargo build -p liouville-py` first"
    )


def approx(a, b, tol=1e-8):
    assert abs(a - b) <= tol * max(1.0, abs(b)), f"{a} != {b} (tol {tol})"


def main():
    lp = load_module()

    # Identity suite at alpha = 2.
    r = lp.identities(2)
    approx(r["id1"], -math.pi / 4)
    approx(r["id3"], math.pi / 24)
    approx(r["quantization"], 16 * math.pi)
    assert abs(r["id2"]) < 1e-8

    # Shift invariance.
    r = lp.identities(3, xi=(0.5, 0.25), tol=1e-9)
    approx(r["id1"], -math.pi / 6, tol=1e-6)

    # Reduced map: F(0) = 0 and DF(0) diagonal with the Beta-oracle entry.
    v = lp.reduced_map((0.0, 0.0), 2, tol=1e-10, jacobian=True)
    assert abs(v["F"][0]) < 1e-9 and abs(v["F"][1]) < 1e-9
    approx(v["J"][0][0], math.pi**2 / 32, tol=1e-7)
    approx(lp.jacobian_at_zero(2), math.pi**2 / 32, tol=1e-7)

    # Greens function on the unit disk: G(x,0) = -(1/2π) log|x|, H ≡ 0.
    disk = lp.Domain.unit_disk()
    approx(disk.green((0.5, 0.0), (0.0, 0.0)), math.log(2) / (2 * math.pi), tol=1e-12)
    assert abs(disk.regular_part((0.3, 0.2), (0.0, 0.0))) < 1e-14
    assert disk.symmetry_check(7)

    flower = lp.Domain.flower(3, 0.1)
    assert flower.symmetry_check(3) and not flower.symmetry_check(2)
    approx(flower.radius_at(0.0), 1.1, tol=1e-14)

    # δ-rule on the disk with a ≡ 1: δ^4 = λ/32 at alpha = 2.
    d = lp.delta_from_lambda(disk, 3.2e-3, (0.0, 0.0), 2, 1.0, (0.0, 0.0), 0.0, 0.0)
    approx(d, 0.1, tol=1e-12)

    # Bubble: quantized peak values and vanishing boundary trace of PW.
    bub = lp.Bubble(disk, 2, 0.2, (0.02, 0.01))
    peak = bub.roots()[0]
    approx(bub.z(0, peak), 1.0, tol=1e-10)
    assert abs(bub.pw((0.9999999, 0.0))) < 1e-6
    assert bub.weight((0.3, 0.1)) > 0

    # A tiny end-to-end experiment through the JSON interface.
    cfg = {
        "experiment": "identities",
        "domain": {"kind": "unit_disk"},
        "potential": {"a0": 1.0},
        "N": 1,
        "alphas": [1, 2],
        "output_dir": tempfile.mkdtemp(prefix="liouville_out_"),
    }
    report = json.loads(lp.run_experiment(json.dumps(cfg)))
    assert report["worst_relative_deviation"] < 1e-8

    print("liouville_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
