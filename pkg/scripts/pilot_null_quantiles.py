"""Development pilot: null distribution of the statistic vs candidate cvs."""

import numpy as np

from tmatest import (
    InnovationSpec,
    ModelOrders,
    TmaParams,
    gen_innovations,
    simulate_tma,
    threshold_grid,
)
from tmatest.lr_test import lr_profile

ORDERS = ModelOrders(1, 1, 2)


def stats_for(n, phi, reps, seed):
    out = np.empty(reps)
    params = TmaParams([phi], [0.0], r=0.0)
    for k in range(reps):
        spec = InnovationSpec(seed=seed, stream=k)
        eps = gen_innovations(spec, n + 200)
        y = simulate_tma(ORDERS, params, eps, 200)
        grid = threshold_grid(y, 0.1, 0.9, 400)
        out[k] = lr_profile(y, ORDERS, grid).lr_n
    return out


def main():
    for n in (200, 400):
        for phi in (0.5, -0.5):
            s = stats_for(n, phi, 3000, seed=101)
            q = np.quantile(s, [0.90, 0.95])
            sizes = {cv: float(np.mean(s > cv)) for cv in (7.392, 7.63, 7.745, 8.936, 9.31, 9.288)}
            print(
                f"n={n} phi={phi:+.1f}: null quantiles 90%={q[0]:.3f} 95%={q[1]:.3f}; "
                f"P(>7.392)={sizes[7.392]:.3f} P(>7.63)={sizes[7.63]:.3f} "
                f"P(>7.745)={sizes[7.745]:.3f} | P(>8.936)={sizes[8.936]:.3f} "
                f"P(>9.288)={sizes[9.288]:.3f} P(>9.31)={sizes[9.31]:.3f}",
                flush=True,
            )


if __name__ == "__main__":
    main()
