"""Compare the Szego kernel of G_n with the weighted Bergman kernels along a ray.

The Hardy kernel is not a power of the Bergman kernel once n >= 2; the last
column shows how far K_lam / K_szego^lam drifts from 1.
"""
import argparse

import numpy as np

from symkernel import bergman_kernel_symmetrized, szego_kernel_symmetrized


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--lam", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=8)
    args = ap.parse_args()

    base = np.exp(2j * np.pi * np.arange(args.n) / (args.n + 1)) * np.linspace(1, 0.5, args.n)
    print(f"{'r':>6} {'szego':>14} {'bergman':>14} {'ratio':>12}")
    for r in np.linspace(0.05, 0.9, args.steps):
        z = r * base
        s = szego_kernel_symmetrized(z, z).value.real
        b = bergman_kernel_symmetrized(z, z, args.lam).value.real
        print(f"{r:6.3f} {s:14.6e} {b:14.6e} {b / s**args.lam:12.6f}")


if __name__ == "__main__":
    main()
