#!/usr/bin/env python3
"""Smoke test for the qudit_grover_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/, stages
it under an importable name, and exercises the main surface end to end.

    cargo build -p qudit-grover-py          (or --release)
    python3 python/smoke_test.py
"""

import cmath
import math
import pathlib
import shutil
import sys
import tempfile

REPO = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libqudit_grover_py.so", "qudit_grover_py.so", "libqudit_grover_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension not built; run: cargo build -p qudit-grover-py")
    staging = pathlib.Path(tempfile.mkdtemp(prefix="qudit_grover_py_"))
    shutil.copy2(built, staging / "qudit_grover_py.so")
    sys.path.insert(0, str(staging))
    import qudit_grover_py

    return qudit_grover_py


def approx(a, b, tol=1e-10):
    return abs(a - b) <= tol


def main():
    qg = load_module()
    checks = 0

    def ok(condition, label):
        nonlocal checks
        if not condition:
            sys.exit(f"FAIL: {label}")
        checks += 1
        print(f"  ok: {label}")

    # gates and roots
    ok(approx(qg.root_of_unity(4, 1), 1j, 0), "root_of_unity(4, 1) == i")
    ok(qg.root_of_unity(3, -1) == qg.root_of_unity(3, 2), "roots cycle mod d")
    h = qg.elementary_gate("H", 2)
    ok(approx(h[1][1], -1 / math.sqrt(2), 1e-15), "Hadamard entry")
    cnot = qg.controlled_inc(2, 2)
    ok(cnot[3][2] == 1 and cnot[2][3] == 1, "controlled increment is CNOT at d=2")

    # diffusion operator: product and closed form agree
    prod = qg.diffusion_operator(3, 2, "product")
    closed = qg.diffusion_operator(3, 2, "closed")
    gap = max(
        abs(prod[i][j] - closed[i][j]) for i in range(9) for j in range(9)
    )
    ok(gap <= 1e-10, f"product vs closed form (gap {gap:.1e})")

    # subspace: restriction of the full operator matches the analytic one
    cfg = qg.GroverConfig(3, 2, tau=5)
    delta_sub, oracle_sub, iteration = qg.subspace_operators(cfg)
    restricted = qg.restrict(closed, cfg)
    gap = max(
        abs(restricted[i][j] - delta_sub[i][j]) for i in range(3) for j in range(3)
    )
    ok(gap <= 1e-9, f"restrict(diffusion) == analytic subspace form (gap {gap:.1e})")

    # embed/restrict roundtrip through the oracle
    oracle_full = qg.embed(oracle_sub, cfg)
    back = qg.restrict(oracle_full, cfg)
    gap = max(abs(back[i][j] - oracle_sub[i][j]) for i in range(3) for j in range(3))
    ok(gap <= 1e-10, f"restrict(embed(oracle)) roundtrip (gap {gap:.1e})")

    # full vs subspace probability curves
    curve = qg.tau_probability_curve(cfg, 10)
    for r in (0, 3, 7):
        ok(
            approx(qg.full_tau_probability(cfg, r), curve[r], 1e-8),
            f"full/subspace agreement at r={r}",
        )
    ok(approx(curve[0], 1 / 9, 1e-12), "r=0 probability is 1/N")

    # linear algebra helpers
    j2 = [[1, 1], [1, 1]]
    ok(
        all(v == 1 for row in qg.kron(j2, j2) for v in row),
        "kron of all-ones is all-ones",
    )
    rot = qg.mat_exp([[0, 2 * 0.3], [-2 * 0.3, 0]])
    ok(approx(rot[0][0], math.cos(0.6), 1e-12), "mat_exp rotation block")
    ok(approx(qg.det([[2, 0], [0, 3j]]), 6j, 1e-12), "det of a diagonal")

    # complexity figures
    rep = qg.binary_complexity(1024)
    ok(rep.r_opt == 25, "binary peak at r=25 for N=1024")
    exact = qg.exact_complexity(qg.GroverConfig(3, 6), 60)
    ok(abs(exact.r_opt - qg.ternary_optimal_iterations(729)) <= 1.0, "ternary peak")
    rho_hat, p_hat = qg.optimal_scaling(3, "peak")
    ok(approx(p_hat, 0.5, 1e-9), "ternary peak probability 1/2")
    ok(approx(qg.expected_calls(3, rho_hat), 2.565, 1e-3), "E(rho_hat) = 2.565")
    rho_star, calls_star = qg.optimal_scaling(3, "expected_calls")
    ok(approx(calls_star, 2.253, 1e-3), "E(rho_star) = 2.253")
    x = qg.half_tangent_root()
    ok(approx(x / math.sin(x) ** 2, 1.380, 1e-3), "universal constant 1.380")

    # eigensystem sanity at N=81
    q, eigenvalues, q_inv = qg.ternary_eigensystem(81, 1)
    ok(approx(eigenvalues[1], cmath.exp(1j * math.acos(1 - 3 / 81)), 1e-12), "e^{iT}")

    # seeded protocol determinism
    stats_a = qg.repeated_run_protocol(qg.GroverConfig(3, 6), rho_hat, 11)
    stats_b = qg.repeated_run_protocol(qg.GroverConfig(3, 6), rho_hat, 11)
    ok(
        (stats_a.answer, stats_a.runs, stats_a.oracle_calls)
        == (stats_b.answer, stats_b.runs, stats_b.oracle_calls),
        "protocol is seed-deterministic",
    )
    batch = qg.run_trials(qg.GroverConfig(3, 6), rho_hat, 50, 11)
    rate = sum(s.success for s in batch) / len(batch)
    ok(rate >= 0.9, f"protocol success rate {rate:.2f}")
    ok(batch[0].rng_algorithm == qg.RNG_ALGORITHM, "rng algorithm recorded")

    # named verification suite
    results = qg.verify(3, 2)
    ok(all(passed for _, passed, _ in results), "verify(3, 2) all green")
    ok(any(name == "lemma_1_1" for name, _, _ in results), "lemma_1_1 present")

    print(f"smoke test passed ({checks} checks)")


if __name__ == "__main__":
    main()
