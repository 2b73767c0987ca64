#!/usr/bin/env python3
"""Smoke test for the sumbounds_py extension module.

Builds nothing itself: it locates the cdylib produced by
`cargo build [--release] -p sumbounds-py`, copies it next to a temp dir
under the importable name, and exercises the main types and operations.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "libsumbounds_py.so",
        REPO / "target" / "debug" / "libsumbounds_py.so",
        REPO / "target" / "release" / "libsumbounds_py.dylib",
        REPO / "target" / "debug" / "libsumbounds_py.dylib",
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit(
            "extension not built; run `cargo build --release -p sumbounds-py` first"
        )
    newest = max(built, key=lambda p: p.stat().st_mtime)
    staging = Path(tempfile.mkdtemp(prefix="sumbounds_py_"))
    # CPython loads extension modules from .so on both Linux and macOS.
    shutil.copy2(newest, staging / "sumbounds_py.so")
    sys.path.insert(0, str(staging))
    import sumbounds_py

    print(f"loaded {newest}")
    return sumbounds_py


def check(label, ok):
    print(f"{'ok' if ok else 'FAIL'}  {label}")
    if not ok:
        sys.exit(1)


def main():
    sb = load_module()

    # Normal kernels against frozen values.
    check("phi_cdf(0) = 1/2", sb.phi_cdf(0.0) == 0.5)
    check(
        "phi_cdf(1.96)",
        abs(sb.phi_cdf(1.96) - 0.9750021048517796) <= 1e-9,
    )
    check(
        "phi_pdf(1)",
        abs(sb.phi_pdf(1.0) - 0.2419707245191433) <= 1e-9,
    )
    check(
        "phi_inv(0.975)",
        abs(sb.phi_inv(0.975) - 1.959963984540054) <= 1e-6,
    )
    try:
        sb.phi_inv(1.5)
        check("phi_inv domain error", False)
    except ValueError:
        check("phi_inv domain error", True)

    # Bounds for the reference problem.
    x = sb.NormalMarginal(1.0, 0.1)
    y = sb.NormalMarginal(1.5, 0.15)
    problem = sb.SumProblem(x, y)
    check("mean_sum", problem.mean_sum == 2.5)
    check(
        "lower_bound(2.5)",
        abs(problem.lower_bound(2.5) - 0.09679004632150949) <= 1e-12,
    )
    check(
        "upper_bound(2.5)",
        abs(problem.upper_bound(2.5) - 0.9032099536784905) <= 1e-12,
    )
    qc = problem.quadratic_coefficients(2.5)
    check("alpha", abs(qc.alpha - 27.77777777777778) <= 1e-9)
    check("discriminant", abs(qc.discriminant - 45.05167867868493) <= 1e-8)
    check("not linear", not qc.is_linear)
    pts = problem.critical_points(2.5)
    check(
        "critical points",
        len(pts) == 2
        and abs(pts[0] - 0.8791830148865901) <= 1e-9
        and abs(pts[1] - 1.1208169851134099) <= 1e-9,
    )

    grid = sb.linspace(1.8, 3.2, 200)
    curve = problem.bound_curve(grid)
    check("curve length", len(curve) == 200)
    check(
        "curve monotone",
        all(a[1] <= b[1] and a[2] <= b[2] for a, b in zip(curve, curve[1:])),
    )

    # The generic envelope oracle with plain Python callables.
    lower, upper = sb.grid_oracle(
        lambda t: sb.phi_cdf((t - 1.0) / 0.1),
        lambda t: sb.phi_cdf((t - 1.5) / 0.15),
        2.5,
        0.0,
        2.5,
        0.005,
    )
    check("grid oracle lower", abs(lower - problem.lower_bound(2.5)) <= 5e-5)
    check("grid oracle upper", abs(upper - problem.upper_bound(2.5)) <= 5e-5)

    # Copulas.
    clayton = sb.DependenceModel.clayton(2.5)
    gumbel = sb.DependenceModel.gumbel(2.5)
    check("clayton cdf", abs(clayton.cdf(0.5, 0.5) - 0.3932186057515896) <= 1e-9)
    check("gumbel cdf", abs(gumbel.cdf(0.5, 0.5) - 0.4006715806636453) <= 1e-9)
    check("frechet lower", abs(sb.frechet_lower(0.8, 0.9) - 0.7) <= 1e-15)
    check("frechet upper", sb.frechet_upper(0.3, 0.4) == 0.3)
    check("dual", sb.dual_w(0.8, 0.9) == 1.0)
    try:
        sb.DependenceModel.gumbel(0.5)
        check("gumbel domain error", False)
    except ValueError:
        check("gumbel domain error", True)

    # Monte-Carlo pipeline.
    eps = sb.dkw_epsilon(100_000, 0.01)
    check("dkw epsilon", abs(eps - 0.005146997847) <= 1e-9)
    sums = sb.sample_sums(problem, clayton, 20_000, 42)
    check("sample count", len(sums) == 20_000)
    mean = sum(sums) / len(sums)
    check("sample mean", abs(mean - 2.5) <= 0.005)
    for model in (
        sb.DependenceModel.gaussian(0.0),
        sb.DependenceModel.gaussian(1.0),
        clayton,
        gumbel,
    ):
        report = sb.verify_containment(problem, model, 20_000, grid, 42)
        check(f"containment {report.model}", report.passed)

    check(
        "exact gaussian sum cdf",
        abs(sb.gaussian_sum_cdf(problem, 0.0, 2.5) - 0.5) <= 1e-15
        and abs(
            sb.gaussian_sum_cdf(problem, 0.0, 2.5 + math.sqrt(0.0325))
            - 0.8413447460685429
        )
        <= 1e-9,
    )

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
