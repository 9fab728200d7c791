"""Cheeger constants against min-max eigenvalues on a few small graphs.

For each graph prints h_k, the min-max value hhat_k of the 1-Laplacian and
lambda_k at p = 2, then checks the two-sided bound at p = 2.
"""

from plap import by_name, cheeger_constants, minmax_spectrum_delta1, spectrum_p2


def main():
    for name in ("g6", "p6", "c6", "seven_edge", "star5"):
        g = by_name(name)
        hs = cheeger_constants(g)
        mm = minmax_spectrum_delta1(g)
        lam2 = spectrum_p2(g)
        print(f"{name}:")
        print(f"  {'k':>2} {'h_k':>6} {'hhat_k':>7} {'lambda_k(p=2)':>14}  hhat^2/2 <= lambda <= 2 hhat")
        for k in range(1, g.n + 1):
            h = str(hs[k - 1]) if k <= len(hs) else "-"
            hh = float(mm[k - 1])
            ok = hh ** 2 / 2 <= lam2[k - 1] + 1e-9 and lam2[k - 1] <= 2 * hh + 1e-9
            print(f"  {k:>2} {h:>6} {str(mm[k - 1]):>7} {lam2[k - 1]:>14.6f}  {'holds' if ok else 'FAILS'}")


if __name__ == "__main__":
    main()
