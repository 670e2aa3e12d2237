#!/usr/bin/env python3
"""Independent evaluation of psi intersection numbers on Mbar_{g,n}.

Uses string and dilaton to strip tau_0 and tau_1 insertions, then the
Virasoro/DVV recursion pivoting on the smallest exponent >= 2. Writes one
line per correlator: g a_1 ... a_n p/q.
"""
import sys
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement


def dfact(n):
    r = 1
    while n > 1:
        r *= n
        n -= 2
    return r


@lru_cache(maxsize=None)
def corr(g, a):
    a = tuple(sorted(a))
    n = len(a)
    if g < 0 or 2 * g - 2 + n <= 0 or any(x < 0 for x in a):
        return Fraction(0)
    if sum(a) != 3 * g - 3 + n:
        return Fraction(0)
    if g == 0 and n == 3:
        return Fraction(1)
    if g == 1 and n == 1:
        return Fraction(1, 24)
    if 0 in a:  # string
        i = a.index(0)
        rest = a[:i] + a[i + 1:]
        total = Fraction(0)
        for j in range(len(rest)):
            b = list(rest)
            b[j] -= 1
            total += corr(g, tuple(b))
        return total
    if 1 in a:  # dilaton
        i = a.index(1)
        rest = a[:i] + a[i + 1:]
        return (2 * g - 2 + len(rest)) * corr(g, rest)
    # DVV on the smallest exponent
    k = a[0] - 1
    d = a[1:]
    m = len(d)
    s = Fraction(0)
    for j in range(m):
        b = list(d)
        b[j] += k
        s += Fraction(dfact(2 * k + 2 * d[j] + 1), dfact(2 * d[j] - 1)) * corr(g, tuple(b))
    h = Fraction(0)
    for r in range(k):
        t = k - 1 - r
        w = dfact(2 * r + 1) * dfact(2 * t + 1)
        inner = corr(g - 1, d + (r, t))
        for mask in range(1 << m):
            left = (r,) + tuple(d[j] for j in range(m) if mask >> j & 1)
            right = (t,) + tuple(d[j] for j in range(m) if not mask >> j & 1)
            for g1 in range(g + 1):
                inner += corr(g1, left) * corr(g - g1, right)
        h += w * inner
    return (s + h / 2) / dfact(2 * k + 3)


def main():
    out = sys.stdout
    for g, nmax in ((2, 4), (3, 2)):
        for n in range(1, nmax + 1):
            top = 3 * g - 3 + n
            for a in combinations_with_replacement(range(top + 1), n):
                if sum(a) != top:
                    continue
                v = corr(g, a)
                out.write("%d %s %d/%d\n" % (g, " ".join(map(str, a)), v.numerator, v.denominator))


if __name__ == "__main__":
    main()
