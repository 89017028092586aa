"""Development pilot: run all Table-1-style cells at 500 replications."""

import time

from tmatest import ExperimentConfig, ModelOrders, run_experiment

ORDERS = ModelOrders(1, 1, 2)
PAPER = {
    ("null-ma", -0.5, 200): (0.044, 0.097),
    ("null-ma", -0.5, 400): (0.058, 0.102),
    ("null-ma", 0.5, 200): (0.059, 0.112),
    ("null-ma", 0.5, 400): (0.051, 0.101),
    ("tma-alternative", -0.5, 200): (0.836, 0.909),
    ("tma-alternative", -0.3, 200): (0.318, 0.514),
    ("tma-alternative", -0.1, 200): (0.076, 0.156),
    ("tma-alternative", 0.1, 200): (0.103, 0.167),
    ("tma-alternative", 0.3, 200): (0.599, 0.717),
    ("tma-alternative", 0.5, 200): (0.989, 0.993),
    ("tma-alternative", -0.5, 400): (0.993, 0.999),
    ("tma-alternative", -0.3, 400): (0.710, 0.815),
    ("tma-alternative", -0.1, 400): (0.123, 0.191),
    ("tma-alternative", 0.1, 400): (0.143, 0.237),
    ("tma-alternative", 0.3, 400): (0.916, 0.953),
    ("tma-alternative", 0.5, 400): (1.000, 1.000),
}


def main():
    total = time.perf_counter()
    for (design, coef, n), (p05, p10) in PAPER.items():
        if design == "null-ma":
            kw = dict(phi=(coef,))
        else:
            kw = dict(phi=(0.5,), psi=(coef,), r0=0.0)
        cfg = ExperimentConfig(
            design=design,
            orders=ORDERS,
            n=n,
            replications=500,
            alphas=(0.05, 0.10),
            base_seed=20,
            grid_max_points=400,
            **kw,
        )
        rep = run_experiment(cfg)
        r05 = rep.rejection_rates[0.05]
        r10 = rep.rejection_rates[0.10]
        band05 = 3 * (p05 * (1 - p05) / 500) ** 0.5
        band10 = 3 * (p10 * (1 - p10) / 500) ** 0.5
        ok05 = abs(r05 - p05) <= max(band05, 0.01)
        ok10 = abs(r10 - p10) <= max(band10, 0.01)
        print(
            f"{design:16s} coef={coef:+.1f} n={n}: "
            f"5% {r05:.3f} vs {p05:.3f} (±{band05:.3f}) {'OK' if ok05 else 'MISS'}  "
            f"10% {r10:.3f} vs {p10:.3f} (±{band10:.3f}) {'OK' if ok10 else 'MISS'}  "
            f"[{rep.wall_time:.0f}s]",
            flush=True,
        )
    print(f"total {time.perf_counter() - total:.0f}s")


if __name__ == "__main__":
    main()
