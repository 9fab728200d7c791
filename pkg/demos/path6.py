"""The path on six vertices: an eigenvalue that is neither min-max nor homological.

On a tree the min-max values equal the multi-way Cheeger constants, and 1/3
is a certified eigenvalue that sublevel homology does not see.
"""

from plap import (
    cheeger_constants,
    enumerate_delta1_spectrum,
    homological_spectrum,
    minmax_spectrum_delta1,
    path,
)
from plap.graph import members


def fmt(values):
    return "{" + ", ".join(str(v) for v in values) + "}"


def main():
    g = path(6)
    spec = enumerate_delta1_spectrum(g)
    print(f"P6 eigenvalues:          {fmt(spec.values)}")
    for lam in spec.values:
        w = spec.witnesses[lam]
        print(f"  {str(lam):>4}  witness A = {members(w.a)}, B = {members(w.b)}")
    print(f"homological eigenvalues: {fmt(homological_spectrum(g).values)}")
    print(f"min-max values:          {fmt(minmax_spectrum_delta1(g))}")
    print(f"Cheeger constants h_k:   {fmt(cheeger_constants(g))}")


if __name__ == "__main__":
    main()
