"""Time the compiled coverage kernels against the pure-numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_backends.py [--repeats 20]

The two backends follow the same panel decomposition and quadrature rule,
so the comparison is pure implementation overhead.
"""

import argparse
import time

from uavcov._core import get_backend

BETA_BAR = 1.1914923520864221e-07

CASES = {
    "link_coverage_tbs": dict(
        R_o=150.0, d_anchor=170.0, h_b=10.0, mu=1.0,
        beta_b=BETA_BAR, alpha_b=3.0),
    "link_coverage_uav": dict(
        R_o=150.0, d_anchor=170.0, h_u=100.0, m=2, beta_u=BETA_BAR,
        alpha_u=2.7, eta_l=10.0 ** 0.16, eta_n=10.0 ** 2.3,
        a_r=13.0, b_r=0.22),
    "system_coverage": dict(
        R_o=150.0, d_bo=170.0, d_bu=197.23, chi=0.1354, h_b=10.0, h_u=100.0,
        mu=1.0, m=2, beta_b=BETA_BAR, beta_u=BETA_BAR, alpha_b=3.0,
        alpha_u=2.7, eta_l=10.0 ** 0.16, eta_n=10.0 ** 2.3,
        a_r=13.0, b_r=0.22, power_ratio=1.0),
}


def time_call(fn, kwargs, repeats):
    fn(**kwargs)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        result = fn(**kwargs)
    elapsed = (time.perf_counter() - t0) / repeats
    return elapsed, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    pure = get_backend("pure")
    try:
        compiled = get_backend("compiled")
    except RuntimeError:
        print("compiled backend not built; run pip install -e . first")
        return

    print(f"{'kernel':<22}{'pure':>12}{'compiled':>12}{'speedup':>10}{'max diff':>12}")
    for name, kwargs in CASES.items():
        t_pure, r_pure = time_call(getattr(pure, name), kwargs, max(1, args.repeats // 10))
        t_comp, r_comp = time_call(getattr(compiled, name), kwargs, args.repeats)
        vals_p = r_pure if isinstance(r_pure, tuple) else (r_pure,)
        vals_c = r_comp if isinstance(r_comp, tuple) else (r_comp,)
        diff = max(abs(a - b) for a, b in zip(vals_p, vals_c))
        print(f"{name:<22}{1e3 * t_pure:>10.2f}ms{1e3 * t_comp:>10.3f}ms"
              f"{t_pure / t_comp:>9.0f}x{diff:>12.2e}")
        if diff > 1e-9:
            raise SystemExit(f"backend mismatch on {name}: {diff}")


if __name__ == "__main__":
    main()
