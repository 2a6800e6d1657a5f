"""Compare every receiver's minimum distance with the 2^eta / 2^(eta+1)-PSK
bounds, on the bundled codes and on random problems."""

import argparse

from icpsk import analysis, code, fixtures, mapper, metrics, problem
from reproduce_tables import CODES


def violations(p, L):
    m = mapper.algorithm1(p, L)
    M = 2**L.N
    out = []
    for i, r in enumerate(p.receivers):
        eta = analysis.eta(p, L, i)
        if eta >= L.N:
            continue
        gap = min(
            (g for C in analysis.receiver_codebooks(L, r) for g in metrics._pair_gaps([m.point_of[x] for x in C], M)),
            default=M,
        )
        if not M // 2 ** (eta + 1) <= gap <= M // 2**eta:
            out.append((i + 1, eta, gap))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random", type=int, default=200, help="number of random problems")
    ap.add_argument("--n", type=int, default=6)
    args = ap.parse_args()
    for name, codes in CODES.items():
        for c in codes:
            v = violations(fixtures.problem(name), fixtures.matrix(c))
            if v:
                print(c, v)
    hits = 0
    for seed in range(args.random):
        p = problem.random_problem(args.n, 5, seed)
        _, L = code.find_minrank(p)
        hits += bool(violations(p, L))
    print(f"random problems with a violation: {hits}/{args.random}")


if __name__ == "__main__":
    main()
