"""Print distance and gain tables for every bundled example and code."""

import argparse

from icpsk import analysis, fixtures, mapper, metrics

CODES = {
    "example1": ["example1_L"],
    "example2": ["example2_L"],
    "example3": ["example3_L"],
    "example4": ["example4_L"],
    "example5": ["example5_L1", "example5_L2", "example5_L3"],
    "example6": ["example6_L1", "example6_L2", "example6_L3"],
}


def table(name, code_name, priority=None):
    p, L = fixtures.problem(name), fixtures.matrix(code_name)
    rep = metrics.gain_report(p, L, mapper.algorithm1(p, L, priority))
    cols = [f"R{r.receiver}" for r in rep.receivers]
    rows = {
        "eta": [r.eta for r in rep.receivers],
        "d2_psk": [f"{r.d2_psk:.2f}" for r in rep.receivers],
        "d2_binary": [f"{r.d2_binary:g}" for r in rep.receivers],
        "bandwidth": [f"{r.bandwidth_gain:g}" for r in rep.receivers],
        "sicg_db": [f"{r.sicg_db:.2f}" for r in rep.receivers],
        "acg_db": [f"{r.acg_db:.2f}" for r in rep.receivers],
    }
    title = f"{name} / {code_name} ({2 ** L.N}-PSK)"
    if priority:
        title += " priority " + ",".join(f"R{i + 1}" for i in priority)
    print(title)
    print(f"{'':>10} " + " ".join(f"{c:>7}" for c in cols))
    for k, vals in rows.items():
        print(f"{k:>10} " + " ".join(f"{v:>7}" for v in vals))
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--spectra", action="store_true", help="also print Example 4 distance spectra")
    args = ap.parse_args()
    for name, codes in CODES.items():
        for c in codes:
            table(name, c)
    table("example4", "example4_L", analysis.parse_priority("R2"))
    if args.spectra:
        p, L = fixtures.problem("example4"), fixtures.matrix("example4")
        rep = metrics.gain_report(p, L, mapper.algorithm1(p, L))
        for r in rep.receivers:
            print(f"R{r.receiver}: " + ", ".join(f"{d:.2f}x{c}" for d, c in r.distance_distribution))


if __name__ == "__main__":
    main()
