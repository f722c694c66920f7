"""Sweep the common curing rate and record steady-state curvature.

For each graph family the script solves the metastable steady state on a
grid of common curing rates delta (all nodes moved together, infection
rates fixed at beta) and evaluates the second derivative of every
component along that direction.  Regular graphs come out exactly affine;
on stars, paths, and lattices the most-exposed nodes are strictly
concave.  The star hub admits a closed form, printed for comparison:

    v_hub(delta) = (L beta^2 - delta^2) / (beta (L beta + delta))

with L leaves, so v_hub'' = -2 L (L - 1) beta / (delta + L beta)^3,
which for beta = 2, L = 4 is -48 / (delta + 8)^3 < 0.
"""

import argparse

import numpy as np

from hetsis import Graph, RateConfig, classify, second_derivatives, solve


def star(leaves: int) -> Graph:
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges([(i, j) for i in range(n) for j in range(i + 1, n)])


def lattice(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return Graph.from_edges(edges)


FAMILIES = {
    "k4": complete(4),
    "k5": complete(5),
    "star5": star(4),
    "star7": star(6),
    "path5": path(5),
    "lattice33": lattice(3, 3),
}


def sweep(g: Graph, beta: float, points: int) -> tuple[float, float, float]:
    """(min d2, mean d2, argmin delta) over the endemic part of the grid."""
    lam = classify(g, RateConfig.for_graph(g, beta, 1.0)).lambda_max_R
    # lambda_max(R) = beta * lambda_max(A) / delta here, so the endemic
    # range is delta < beta * lambda_max(A)
    delta_hi = beta * lam
    worst = (np.inf, 0.0, 0.0)
    means = []
    for delta in np.linspace(0.05 * delta_hi, 0.97 * delta_hi, points):
        rates = RateConfig.for_graph(g, beta, float(delta))
        if classify(g, rates).regime != "infected":
            continue
        ss = solve(g, rates, tol=1e-12)
        d2 = second_derivatives(g, rates, ss, mode="tied")
        means.append(d2.mean())
        if d2.min() < worst[0]:
            worst = (float(d2.min()), float(d2.mean()), float(delta))
    return worst[0], float(np.mean(means)), worst[2]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--beta", type=float, default=2.0, help="common infection rate")
    ap.add_argument("--points", type=int, default=40, help="grid points per family")
    args = ap.parse_args()

    print(f"common-rate curvature sweep, beta = {args.beta}, {args.points} points")
    print(f"{'family':<10} {'min d2':>12} {'mean d2':>12} {'argmin delta':>13}")
    for name, g in FAMILIES.items():
        lo, mean, at = sweep(g, args.beta, args.points)
        print(f"{name:<10} {lo:>12.6f} {mean:>12.6f} {at:>13.3f}")

    # closed-form check on the star hub
    g = star(4)
    beta = 2.0
    print("\nstar5 hub versus closed form, beta = 2:")
    print(f"{'delta':>6} {'v_hub':>12} {'closed':>12} {'d2_hub':>12} {'-48/(d+8)^3':>12}")
    for delta in (0.5, 1.0, 2.0, 3.0):
        rates = RateConfig.for_graph(g, beta, delta)
        ss = solve(g, rates, tol=1e-13)
        d2 = second_derivatives(g, rates, ss, mode="tied")
        closed_v = (16.0 - delta ** 2) / (2.0 * (8.0 + delta))
        closed_d2 = -48.0 / (delta + 8.0) ** 3
        print(
            f"{delta:>6.2f} {ss.v_inf[0]:>12.8f} {closed_v:>12.8f} "
            f"{d2[0]:>12.8f} {closed_d2:>12.8f}"
        )


if __name__ == "__main__":
    main()
