"""Independent high-precision evaluation of the derived constants.

Run directly to print the frozen values used by the C++ tests.
"""
import json
import sys

from mpmath import mp, mpf, sqrt, findroot

mp.dps = 40


def constants(n, l, p):
    n, l, p = mpf(n), mpf(l), mpf(p)
    m = (l + 2) / (p - 1)
    lp1 = m * (n - 2 - m)
    L = lp1 ** (1 / (p - 1))
    a = n - 2 - 2 * m
    disc = a * a - 4 * (l + 2) * (n - 2 - m)
    lam2 = (a + sqrt(disc)) / 2 if disc >= 0 else None
    if n > 10 + 4 * l:
        pc = ((n - 2) ** 2 - 2 * (l + 2) * (n + l)
              + 2 * (l + 2) * sqrt((n + l) ** 2 - (n - 2) ** 2)) / (
                  (n - 2) * (n - 10 - 4 * l))
    else:
        pc = None
    return dict(m=m, Lp1=lp1, L=L, a=a, lambda2=lam2, p_c=pc)


def b_max(k0, p, lp1):
    k0, p, lp1 = mpf(k0), mpf(p), mpf(lp1)
    zs = (lp1 / (p * k0)) ** (1 / (p - 1))
    return lp1 * zs - k0 * zs ** p


def roots(k0, p, lp1, b):
    k0, p, lp1, b = mpf(k0), mpf(p), mpf(lp1), mpf(b)
    zs = (lp1 / (p * k0)) ** (1 / (p - 1))
    phi = lambda z: k0 * z ** p - lp1 * z + b
    z1 = mpf(0) if b == 0 else findroot(phi, (mpf(0), zs), solver="anderson")
    hi = (2 * lp1 / k0) ** (1 / (p - 1)) + 1
    z2 = findroot(phi, (zs, hi), solver="anderson")
    return z1, z2


def main():
    out = {}
    for n, l, p in [(15, 0, 3), (5, 0, 3), (11, 0, 3), (12, 0.5, 2.5)]:
        c = constants(n, l, p)
        c["b_max"] = b_max(1, p, c["Lp1"])
        out[f"{n},{l},{p}"] = {k: (None if v is None else float(v)) for k, v in c.items()}
    out["roots b=11"] = [float(x) for x in roots(1, 3, 12, 11)]
    out["b_max(1,2,1)"] = float(b_max(1, 2, 1))
    out["b_max(1e6,3,12)"] = float(b_max(1e6, 3, 12))
    json.dump(out, sys.stdout, indent=1)
    print()


if __name__ == "__main__":
    main()
