#!/usr/bin/env python3
"""Generate the bundled weight-2 newform eigenvalue data.

Produces, for the levels whose spaces are small enough to pin down offline:

  data/newforms/level_<N>.nf   eigenvalue files in the repository's local
                               format (charpolys of a_ell per prime ell)
  data/newforms/curves.txt     one representative elliptic curve per
                               rational class (used for trace cross-checks)

Method
------
1.  A box search over integral Weierstrass models, keeping curves whose
    discriminant is {2,3,5,7}-smooth, plus quadratic-twist closure.
2.  Tate's algorithm for the exact conductor (validated against a battery
    of curves with known conductors before use).
3.  Isogeny classes are separated by their a_ell fingerprints.
4.  Completeness is certified -- not assumed from the box size -- by the
    Eichler-Selberg trace formula: at each emitted level the new-subspace
    dimension, the class count, and the trace identities
        TrNew T_ell = sum of a_ell over all classes
    must hold for every prime 11 <= ell <= 97.  The formula itself is
    first validated against genus numbers and known small traces.
5.  Level 840 has one irrational class of degree 2 (its two conjugate
    forms share a quadratic charpoly); the charpoly x^2 - p1 x + q is
    recovered from TrNew T_ell and TrNew T_{ell^2} and sanity-checked
    (integrality, positive non-square discriminant, Hasse bound).

Every assertion in this script is a hard failure: if any cross-check
fails, no data is written.
"""

import argparse
import math
import os
import sys
from fractions import Fraction
from functools import lru_cache

import numpy as np

# ---------------------------------------------------------------------------
# basic number theory
# ---------------------------------------------------------------------------

def primes_upto(n):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


SMALL_PRIMES = primes_upto(200)
GOOD_PRIMES = [p for p in SMALL_PRIMES if 11 <= p <= 97]


def valuation(n, p):
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorize(n):
    n = abs(n)
    out = {}
    for p in SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n != 1:
        raise ValueError("factor out of range: %d" % n)
    return out


def divisors(n):
    fac = factorize(n)
    out = [1]
    for p, e in fac.items():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n):
    res = n
    for p in factorize(n):
        res = res // p * (p - 1)
    return res


def is_square(n):
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


# ---------------------------------------------------------------------------
# Weierstrass invariants and Tate's algorithm
# ---------------------------------------------------------------------------

def b_invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def discriminant(a):
    b2, b4, b6, b8 = b_invariants(*a)
    return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


def c_invariants(a):
    b2, b4, b6, _ = b_invariants(*a)
    return b2 * b2 - 24 * b4, -b2 ** 3 + 36 * b2 * b4 - 216 * b6


def transform(a, r, s, t, u=1):
    """(x,y) -> (u^2 x + r, u^3 y + s u^2 x + t): new a-invariants."""
    a1, a2, a3, a4, a6 = a
    b1 = (a1 + 2 * s)
    b2_ = (a2 - s * a1 + 3 * r - s * s)
    b3 = (a3 + r * a1 + 2 * t)
    b4_ = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t)
    b6_ = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1)
    for name, val, pw in (("a1", b1, 1), ("a2", b2_, 2), ("a3", b3, 3),
                          ("a4", b4_, 4), ("a6", b6_, 6)):
        if val % u ** pw != 0:
            raise ValueError("non-integral transform")
    return (b1 // u, b2_ // u ** 2, b3 // u ** 3, b4_ // u ** 4, b6_ // u ** 6)


def _poly_root_multiplicities(coeffs, p):
    """Roots with multiplicity of a polynomial over F_p.

    coeffs: high-to-low degree.  Returns dict root -> multiplicity."""
    out = {}
    for r in range(p):
        c = [x % p for x in coeffs]
        mult = 0
        while True:
            # synthetic division of c by (X - r)
            acc = 0
            q = []
            for coef in c:
                acc = (acc * r + coef) % p
                q.append(acc)
            if q[-1] % p != 0:
                break
            mult += 1
            c = q[:-1]
            if not c:
                break
        if mult:
            out[r] = mult
    return out


def tate_conductor_exponent(a, p):
    """Exponent of p in the conductor of the integral model a (any model)."""
    a = tuple(int(x) for x in a)
    while True:
        a1, a2, a3, a4, a6 = a
        delta = discriminant(a)
        if delta == 0:
            raise ValueError("singular curve")
        n = valuation(delta, p) if delta % p == 0 else 0
        if n == 0:
            return 0  # good reduction
        # move the singular point of the reduction to the origin
        sing = None
        for x0 in range(p):
            for y0 in range(p):
                f = (y0 * y0 + a1 * x0 * y0 + a3 * y0
                     - x0 ** 3 - a2 * x0 * x0 - a4 * x0 - a6) % p
                fx = (a1 * y0 - 3 * x0 * x0 - 2 * a2 * x0 - a4) % p
                fy = (2 * y0 + a1 * x0 + a3) % p
                if f == 0 and fx == 0 and fy == 0:
                    sing = (x0, y0)
                    break
            if sing:
                break
        if sing is None:
            raise RuntimeError("no singular point though p | Delta")
        a = transform(a, sing[0], 0, sing[1])
        a1, a2, a3, a4, a6 = a
        c4, _ = c_invariants(a)
        if c4 % p != 0:
            return 1  # multiplicative, type I_n
        if a6 % p ** 2 != 0:
            return n  # type II
        _, _, _, b8 = b_invariants(*a)
        if b8 % p ** 3 != 0:
            return n - 1  # type III
        b6 = a3 * a3 + 4 * a6
        if b6 % p ** 3 != 0:
            return n - 2  # type IV
        # normalize: p|a1, p|a2, p^2|a3, p^2|a4, p^3|a6
        found = None
        for s in range(p):
            for t in range(p * p):
                aa = transform(a, 0, s, t)
                if (aa[0] % p == 0 and aa[1] % p == 0 and aa[2] % p ** 2 == 0
                        and aa[3] % p ** 2 == 0 and aa[4] % p ** 3 == 0):
                    found = aa
                    break
            if found:
                break
        if found is None:
            raise RuntimeError("step-6 normalization failed")
        a = found
        a1, a2, a3, a4, a6 = a
        P = [1, a2 // p, a4 // p ** 2, a6 // p ** 3]  # cubic, high-to-low
        roots = _poly_root_multiplicities(P, p)
        total_mult = max(roots.values()) if roots else 1
        # distinct roots over the algebraic closure <=> discriminant != 0;
        # over F_p check: no root of multiplicity >= 2 AND cubic discriminant
        # nonzero (a multiple root could live in an extension only if it is
        # rational for cubics with a repeated root -- repeated roots of a
        # cubic over F_p are always rational since they are roots of the gcd
        # with the derivative, a polynomial of degree <= 1 when mult = 2...
        # for safety use the discriminant).
        b, c, d = P[1], P[2], P[3]
        discP = (18 * b * c * d - 4 * b ** 3 * d + b * b * c * c
                 - 4 * c ** 3 - 27 * d * d)
        if discP % p != 0:
            return n - 4  # type I_0*
        if total_mult == 2:
            # type I_m*: translate the double root to 0
            dbl = [r for r, m in roots.items() if m == 2][0]
            a = transform(a, p * dbl, 0, 0)
            a1, a2, a3, a4, a6 = a
            assert a2 % p == 0 and a2 % p ** 2 != 0
            assert a4 % p ** 3 == 0 and a6 % p ** 4 == 0
            k = 1
            while True:
                # odd m = 2k-1: quadratic Y^2 + (a3/p^{k+1}) Y - a6/p^{2k+2}
                B = a3 // p ** (k + 1)
                C = -(a6 // p ** (2 * k + 2))
                if (B * B - 4 * C) % p != 0:
                    return n - 4 - (2 * k - 1)
                y1 = _poly_root_multiplicities([1, B, C], p)
                y1 = [r for r, m in y1.items() if m == 2][0]
                a = transform(a, 0, 0, p ** (k + 1) * y1)
                a1, a2, a3, a4, a6 = a
                # even m = 2k: (a2/p) X^2 + (a4/p^{k+2}) X + a6/p^{2k+3}
                A2 = a2 // p
                B = a4 // p ** (k + 2)
                C = a6 // p ** (2 * k + 3)
                if (B * B - 4 * A2 * C) % p != 0:
                    return n - 4 - 2 * k
                # double root of A2 X^2 + B X + C mod p
                x1 = None
                for r in range(p):
                    if (A2 * r * r + B * r + C) % p == 0 and \
                       (2 * A2 * r + B) % p == 0:
                        x1 = r
                        break
                if x1 is None:
                    raise RuntimeError("I_m* even step: no double root")
                a = transform(a, p ** (k + 1) * x1, 0, 0)
                a1, a2, a3, a4, a6 = a
                k += 1
        # triple root: translate to 0
        trp = [r for r, m in roots.items() if m == 3][0]
        a = transform(a, p * trp, 0, 0)
        a1, a2, a3, a4, a6 = a
        assert a2 % p ** 2 == 0 and a4 % p ** 3 == 0 and a6 % p ** 4 == 0
        B = a3 // p ** 2
        C = -(a6 // p ** 4)
        if (B * B - 4 * C) % p != 0:
            return n - 6  # type IV*
        y1 = _poly_root_multiplicities([1, B, C], p)
        y1 = [r for r, m in y1.items() if m == 2][0]
        a = transform(a, 0, 0, p ** 2 * y1)
        a1, a2, a3, a4, a6 = a
        if a4 % p ** 4 != 0:
            return n - 7  # type III*
        if a6 % p ** 6 != 0:
            return n - 8  # type II*
        # non-minimal: scale down and restart
        a = transform(a, 0, 0, 0, u=p)


def conductor(a):
    delta = discriminant(a)
    if delta == 0:
        raise ValueError("singular")
    N = 1
    for p in factorize(delta):
        N *= p ** tate_conductor_exponent(a, p)
    return N


# conductor exponent patterns (f2, f3, f5, f7) of the emitted levels
TARGET_PATTERNS = {
    (1, 0, 1, 1): 70,
    (1, 1, 1, 1): 210,
    (3, 1, 1, 1): 840,
    (1, 1, 2, 1): 1050,
}


def _fp_exact_ge5(c4, delta, p):
    """Exact conductor exponent at a prime p >= 5 from c4 and Delta alone."""
    vd = valuation(delta, p) if delta % p == 0 else 0
    vc = valuation(c4, p) if c4 != 0 and c4 % p == 0 else (99 if c4 == 0 else 0)
    while vd >= 12 and vc >= 4:
        vd -= 12
        vc -= 4
    if vd == 0:
        return 0
    if vc == 0:
        return 1
    return 2


def conductor_if_target(a):
    """Conductor of the model if it lies in TARGET_PATTERNS, else None.

    Uses cheap exact exponents at 5 and 7, and falls back to Tate's
    algorithm at 2 and 3 only when the cheap tests are inconclusive."""
    delta = discriminant(a)
    if delta == 0:
        return None
    c4, _ = c_invariants(a)
    f7 = _fp_exact_ge5(c4, delta, 7)
    if f7 != 1:
        return None
    f5 = _fp_exact_ge5(c4, delta, 5)
    if f5 not in (1, 2):
        return None
    # prime 3: quick classification, Tate only when possibly non-minimal
    if delta % 3 != 0:
        f3 = 0
    elif c4 % 3 != 0:
        f3 = 1
    elif valuation(delta, 3) < 12:
        return None  # genuinely additive at 3: exponent >= 2
    else:
        f3 = tate_conductor_exponent(a, 3)
    if f3 not in (0, 1):
        return None
    # prime 2: multiplicative is cheap, otherwise Tate
    if delta % 2 != 0:
        return None  # all target levels are even
    if c4 % 2 != 0:
        f2 = 1
    else:
        f2 = tate_conductor_exponent(a, 2)
    return TARGET_PATTERNS.get((f2, f3, f5, f7))


# ---------------------------------------------------------------------------
# point counts
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def chi_table(ell):
    t = [0] * ell
    for x in range(1, ell):
        t[x * x % ell] = 1
    for x in range(1, ell):
        if t[x] == 0:
            t[x] = -1
    return tuple(t)


def a_ell(a, ell):
    """Trace of Frobenius at a good odd prime ell."""
    b2, b4, b6, _ = b_invariants(*a)
    chi = chi_table(ell)
    s = 0
    for x in range(ell):
        s += chi[(((4 * x + b2) * x + 2 * b4) * x + b6) % ell]
    return -s


# ---------------------------------------------------------------------------
# Eichler-Selberg trace formula for S_2(Gamma_0(N)), gcd(n, N) = 1
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def psi(N):
    r = N
    for p in factorize(N):
        r += r // p
    return r


def _class_number_loop(D):
    """Direct count of primitive reduced positive-definite forms."""
    count = 0
    amax = math.isqrt(-D // 3) + 1
    for aa in range(1, amax + 1):
        for b in range(-aa + 1, aa + 1):
            if (b * b - D) % (4 * aa) != 0:
                continue
            cc = (b * b - D) // (4 * aa)
            if cc < aa:
                continue
            if b < 0 and (abs(b) == aa or aa == cc):
                continue
            if math.gcd(math.gcd(aa, abs(b)), cc) != 1:
                continue
            count += 1
    return count


_HW_TABLE = None
_HW_BOUND = 40000


def _build_hw_table(bound):
    """table[|D|] = number of primitive reduced forms, for 0 < |D| <= bound.

    One sweep over all reduced forms (a, b, c): -a < b <= a <= c,
    b >= 0 when a == c, gcd(a, b, c) = 1, 0 < 4ac - b^2 <= bound."""
    H = np.zeros(bound + 1, dtype=np.int64)
    amax = math.isqrt(bound // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            cmax = (b * b + bound) // (4 * a)
            if cmax < a:
                continue
            c = np.arange(a, cmax + 1, dtype=np.int64)
            D = 4 * a * c - b * b
            ok = D > 0
            if b < 0:
                ok &= c != a  # a == c requires b >= 0
            g = np.gcd(np.gcd(a, abs(b)), c)
            ok &= g == 1
            np.add.at(H, D[ok], 1)
    return H


def class_number_weighted(D):
    """h_w(D): 1/3 for -3, 1/2 for -4, else the primitive class number."""
    assert D < 0 and D % 4 in (0, 1)
    if D == -3:
        return Fraction(1, 3)
    if D == -4:
        return Fraction(1, 2)
    global _HW_TABLE
    if _HW_TABLE is None:
        _HW_TABLE = _build_hw_table(_HW_BOUND)
    assert -D <= _HW_BOUND, "class number table too small for %d" % D
    return Fraction(int(_HW_TABLE[-D]))


@lru_cache(maxsize=None)
def _sol_count_pp(pe, t, n):
    """#{x mod p^e : x^2 - t x + n == 0}."""
    return sum(1 for x in range(pe) if (x * x - t * x + n) % pe == 0)


def sol_count(M, t, n):
    if M == 1:
        return 1
    total = 1
    for p, e in factorize(M).items():
        pe = p ** e
        total *= _sol_count_pp(pe, t % pe, n % pe)
        if total == 0:
            return 0
    return total


@lru_cache(maxsize=None)
def trace_full(N, n):
    """Trace of T_n on S_2(Gamma_0(N)) for gcd(n, N) = 1."""
    assert math.gcd(n, N) == 1
    psiN = psi(N)
    A1 = Fraction(psiN, 12) if is_square(n) else Fraction(0)
    A2 = Fraction(0)
    tmax = math.isqrt(4 * n - 1)
    for t in range(-tmax, tmax + 1):
        D0 = t * t - 4 * n
        inner = Fraction(0)
        f = 1
        while f * f <= -D0:
            if D0 % (f * f) == 0 and (D0 // (f * f)) % 4 in (0, 1):
                Nf = math.gcd(N, f)
                mu = Fraction(psiN, psi(N // Nf)) * Fraction(1, Nf) \
                    * sol_count(N * Nf, t, n)
                inner += class_number_weighted(D0 // (f * f)) * mu
            f += 1
        A2 += inner
    A2 = A2 / 2
    # A3: sum over divisor pairs
    def cdd(d, dp):
        s = 0
        for c in divisors(N):
            g = math.gcd(c, N // c)
            if (d - dp) % g == 0:
                s += euler_phi(g)
        return s
    A3 = Fraction(0)
    for d in divisors(n):
        if d * d < n:
            A3 += d * cdd(d, n // d)
        elif d * d == n:
            A3 += Fraction(d * cdd(d, d), 2)
    A4 = sum(c for c in divisors(n) if math.gcd(c, N) == 1)
    tr = A1 - A2 - A3 + A4
    assert tr.denominator == 1, (N, n, tr)
    return int(tr)


def beta(m):
    r = 1
    for _, e in factorize(m).items():
        if e == 1:
            r *= -2
        elif e == 2:
            r *= 1
        else:
            return 0
    return r


@lru_cache(maxsize=None)
def trace_new(N, n):
    return sum(beta(N // M) * trace_full(M, n) for M in divisors(N))


def genus_x0(N):
    fac = factorize(N)
    nu2 = 0 if N % 4 == 0 else math.prod(
        1 + ({1: 1, 3: -1}.get(p % 4, 0)) for p in fac)
    nu3 = 0 if N % 9 == 0 else math.prod(
        1 + ({1: 1, 2: -1}.get(p % 3, 0)) for p in fac)
    nuinf = sum(euler_phi(math.gcd(d, N // d)) for d in divisors(N))
    g = Fraction(psi(N), 12) - Fraction(nu2, 4) - Fraction(nu3, 3) \
        - Fraction(nuinf, 2) + 1
    assert g.denominator == 1
    return int(g)


# ---------------------------------------------------------------------------
# published space data (dimension, classes, degree histogram) per level
# ---------------------------------------------------------------------------

SPACE_TABLE = {
    70:     (1,   1,   [(1, 1)]),
    210:    (5,   5,   [(1, 5)]),
    350:    (10,  8,   [(1, 6), (2, 4)]),
    840:    (12,  11,  [(1, 10), (2, 2)]),
    1050:   (18,  18,  [(1, 18)]),
    1120:   (24,  20,  [(1, 16), (2, 8)]),
    4200:   (58,  43,  [(1, 32), (2, 14), (3, 12)]),
    5600:   (114, 52,  [(1, 22), (2, 32), (3, 12), (4, 16), (5, 20), (6, 12)]),
    8960:   (192, 64,  [(1, 20), (2, 24), (3, 36), (4, 16), (6, 96)]),
    13440:  (192, 112, [(1, 64), (2, 56), (3, 36), (4, 16), (5, 20)]),
    26880:  (384, 128, [(1, 48), (2, 32), (3, 48), (4, 112), (6, 48), (8, 96)]),
    44800:  (912, 196, [(1, 52), (2, 64), (3, 36), (4, 88), (5, 40), (6, 168),
                        (8, 96), (9, 72), (12, 192), (16, 32), (18, 72)]),
    67200:  (912, 356, [(1, 176), (2, 128), (3, 36), (4, 144), (5, 140),
                        (6, 48), (7, 168), (9, 72)]),
    134400: (1824, 396, [(1, 124), (2, 120), (3, 60), (4, 208), (5, 40),
                         (6, 240), (8, 224), (9, 72), (10, 80), (11, 88),
                         (12, 192), (13, 104), (16, 192), (20, 80)]),
}

# levels this script emits data for (rational except one quadratic at 840)
EMIT_LEVELS = [70, 210, 840, 1050]


# ---------------------------------------------------------------------------
# validation battery
# ---------------------------------------------------------------------------

def validate_tate():
    known = [
        # (a-invariants, conductor)
        ((0, -1, 1, -10, -20), 11),        # the classical level-11 curve
        ((1, 0, 1, 4, -6), 14),
        ((0, 0, 0, -1, 0), 32),            # y^2 = x^3 - x
        ((0, 0, 0, 0, 1), 36),             # y^2 = x^3 + 1
        ((0, 200, 0, -12000, -2400000), 134400),  # cubic from the quartic descent
        ((0, -43, 0, 280, 0), 840),        # second Frey model at the known solution
        ((0, 100, 0, 70, 0), 134400),      # first Frey model at the known solution
    ]
    for a, N in known:
        got = conductor(a)
        assert got == N, "Tate: conductor(%s) = %d, expected %d" % (a, got, N)
    # a deliberately non-minimal model must give the same conductor
    a = (0, -1, 1, -10, -20)
    scaled = tuple(ai * 2 ** k for ai, k in zip(a, (1, 2, 3, 4, 6)))
    assert conductor(scaled) == 11, "Tate: non-minimal restart broken"
    print("tate: validation battery passed")


def validate_trace_formula():
    # the vectorized class-number table must agree with the direct count
    import random
    rng = random.Random(20260825)
    for _ in range(300):
        D = -rng.randrange(3, _HW_BOUND)
        if D % 4 not in (0, 1) or D in (-3, -4):
            continue
        assert class_number_weighted(D) == _class_number_loop(D), D
    # genus of X_0(M) = Tr T_1 for every divisor of every table level
    levels = set()
    for N in SPACE_TABLE:
        levels.update(divisors(N))
    for M in sorted(levels):
        assert trace_full(M, 1) == genus_x0(M), "TrT1 != genus at %d" % M
    # frozen small traces
    assert trace_full(11, 2) == -2
    assert trace_full(2, 9) == 0
    assert trace_full(4, 9) == 0
    assert trace_full(9, 2) == 0
    assert trace_full(9, 4) == 0
    # new-subspace dimension equals the published table at all 14 levels
    for N, (dim, _, hist) in SPACE_TABLE.items():
        assert sum(m for _, m in hist) == dim
        assert all(m % d == 0 for d, m in hist)
        got = trace_new(N, 1)
        assert got == dim, "dim_new(%d) = %d, table says %d" % (N, got, dim)
    print("trace formula: validation battery passed "
          f"(genus checks at {len(levels)} levels, 14 dimension checks)")


# ---------------------------------------------------------------------------
# curve search
# ---------------------------------------------------------------------------

def smooth_survivors(a4_range, a6_range):
    """(a1,a2,a3,a4,a6) tuples with nonzero {2,3,5,7}-smooth discriminant."""
    out = []
    a6v = np.arange(-a6_range, a6_range + 1, dtype=np.int64)
    for a1 in (0, 1):
        for a2 in (-1, 0, 1):
            for a3 in (0, 1):
                for a4 in range(-a4_range, a4_range + 1):
                    b2 = a1 * a1 + 4 * a2
                    b4 = 2 * a4 + a1 * a3
                    b6 = a3 * a3 + 4 * a6v
                    b8 = (a1 * a1) * a6v + 4 * a2 * a6v - a1 * a3 * a4 \
                        + a2 * a3 * a3 - a4 * a4
                    delta = (-b2 * b2) * b8 - 8 * b4 ** 3 - 27 * b6 * b6 \
                        + 9 * b2 * b4 * b6
                    d = np.abs(delta)
                    nz = d > 0
                    d = np.where(nz, d, 1)
                    d //= d & -d  # strip all factors of 2 at once
                    for p in (3, 5, 7):
                        idx = np.nonzero(d % p == 0)[0]
                        sub = d[idx]
                        while idx.size:
                            sub //= p
                            d[idx] = sub
                            keep = np.nonzero(sub % p == 0)[0]
                            idx = idx[keep]
                            sub = sub[keep]
                    idx = np.nonzero(nz & (d == 1))[0]
                    for i in idx:
                        out.append((a1, a2, a3, a4, int(a6v[i])))
    return out


def twist_units():
    """Squarefree {2,3,5,7}-units (quadratic twist multipliers)."""
    out = []
    for s in (1, -1):
        for e2 in (1, 2):
            for e3 in (1, 3):
                for e5 in (1, 5):
                    for e7 in (1, 7):
                        out.append(s * e2 * e3 * e5 * e7)
    return out


def find_classes(targets, a4_range=1000, a6_range=8000):
    """Isogeny classes of elliptic curves at the target conductors.

    Models are deduplicated by j-invariant (two curves with the same
    j != 0, 1728 are quadratic twists of each other, and j = 0, 1728
    cannot occur at the target levels), then each j-representative is
    expanded by all quadratic twists with squarefree {2,3,5,7}-smooth
    multiplier.  Returns {N: [(fingerprint, model), ...]}."""
    print(f"box search: |a4| <= {a4_range}, |a6| <= {a6_range} ...")
    models = smooth_survivors(a4_range, a6_range)
    print(f"  {len(models)} smooth-discriminant models")
    by_j = {}
    for a in models:
        c4, _ = c_invariants(a)
        j = Fraction(c4 ** 3, discriminant(a))
        by_j.setdefault(j, a)
    print(f"  {len(by_j)} distinct j-invariants")
    pool = set()
    for a in by_j.values():
        pool.add(a)
        c4, c6 = c_invariants(a)
        for d in twist_units():
            pool.add((0, 0, 0, -27 * d * d * c4, -54 * d ** 3 * c6))
    print(f"  {len(pool)} models after twist closure")
    buckets = {N: {} for N in targets}
    for a in sorted(pool):
        N = conductor_if_target(a)
        if N is None or N not in buckets:
            continue
        fp = tuple(a_ell(a, p) for p in GOOD_PRIMES)
        if fp not in buckets[N]:
            buckets[N][fp] = a
    return {N: sorted(buckets[N].items()) for N in targets}


# ---------------------------------------------------------------------------
# completion of a level from residual traces
#
# When the curve search finds all but a few classes, the missing ones are
# pinned down exactly by the trace formula.  With residual sums
#     A_l  = TrNew T_l        - sum of found a_l
#     B_l  = TrNew T_{l^2} + dim*l - sum of found a_l^2
#     C_ll' = TrNew T_{ll'}   - sum of found a_l a_l'
# the missing classes' eigenvalues satisfy
#     sum a_l = A_l,   sum a_l^2 = B_l,   sum a_l a_l' = C_ll'
# (sums over all missing embedded forms), which determines them for one
# or two missing rational classes, and for one rational plus one
# quadratic class.  Everything is then re-verified against additional
# cross traces not used in the derivation.
# ---------------------------------------------------------------------------

def residuals(N, found_fps):
    dim = SPACE_TABLE[N][0]
    A = {}
    B = {}
    for i, ell in enumerate(GOOD_PRIMES):
        A[ell] = trace_new(N, ell) - sum(fp[i] for fp in found_fps)
        B[ell] = trace_new(N, ell * ell) + dim * ell \
            - sum(fp[i] ** 2 for fp in found_fps)
    def C(l1, l2):
        i1, i2 = GOOD_PRIMES.index(l1), GOOD_PRIMES.index(l2)
        return trace_new(N, l1 * l2) - sum(fp[i1] * fp[i2]
                                           for fp in found_fps)
    return A, B, C


def resolve_two_rational(N, found_fps):
    """Return the two missing rational fingerprints at level N."""
    A, B, C = residuals(N, found_fps)
    pairs = {}
    for ell in GOOD_PRIMES:
        disc = 2 * B[ell] - A[ell] ** 2  # (x - y)^2
        assert disc >= 0 and is_square(disc), (N, ell, disc)
        r = math.isqrt(disc)
        assert (A[ell] + r) % 2 == 0, (N, ell)
        pairs[ell] = ((A[ell] + r) // 2, (A[ell] - r) // 2)
    anchor = next(l for l in GOOD_PRIMES if pairs[l][0] != pairs[l][1])
    xa, ya = pairs[anchor]
    x = {anchor: xa}
    y = {anchor: ya}
    for ell in GOOD_PRIMES:
        if ell == anchor:
            continue
        u, v = pairs[ell]
        c = C(anchor, ell)
        matched = [(p, q) for (p, q) in ((u, v), (v, u))
                   if xa * p + ya * q == c]
        assert len(set(matched)) == 1, (N, ell, matched)
        x[ell], y[ell] = matched[0]
    fx = tuple(x[l] for l in GOOD_PRIMES)
    fy = tuple(y[l] for l in GOOD_PRIMES)
    # verification with cross traces not used above
    import random
    rng = random.Random(N)
    others = [l for l in GOOD_PRIMES if l != anchor]
    for _ in range(25):
        l1, l2 = rng.sample(others, 2)
        i1, i2 = GOOD_PRIMES.index(l1), GOOD_PRIMES.index(l2)
        assert fx[i1] * fx[i2] + fy[i1] * fy[i2] == C(l1, l2), (N, l1, l2)
    return fx, fy


def resolve_rational_plus_quadratic(N, found_fps):
    """Missing classes at N: one rational, one quadratic (conjugate pair).

    Returns (rational fingerprint, {ell: (e1, e2)}) with the quadratic
    class's charpoly x^2 - e1 x + e2 at each prime."""
    A, B, C = residuals(N, found_fps)
    # a + u + v = A_l;  a^2 + u^2 + v^2 = B_l;  cross terms via anchor.
    # Write e1 = u + v, h^2 = (u - v)^2.  For anchor l0 and prime l:
    #   h_{l0} h_l = 2 C_{l0,l} - 2 a_{l0} a_l - e1_{l0} e1_l =: H_l
    #   h_{l0}^2 (2 B_l - 2 a_l^2 - e1_l^2) = H_l^2
    solset = None
    solset_anchor = None
    for anchor in GOOD_PRIMES:
        cand_anchor = []
        for a0 in range(-math.isqrt(4 * anchor), math.isqrt(4 * anchor) + 1):
            e10 = A[anchor] - a0
            h0sq = 2 * B[anchor] - 2 * a0 * a0 - e10 * e10
            if h0sq <= 0:  # conjugates must differ at the anchor
                continue
            if (e10 * e10 - h0sq) % 4 != 0:
                continue
            cand_anchor.append((a0, e10, h0sq))
        for a0, e10, h0sq in cand_anchor:
            ok = True
            sol = {anchor: (a0, e10, h0sq, h0sq)}  # a, e1, h^2, H=h0*h_l
            for ell in GOOD_PRIMES:
                if ell == anchor:
                    continue
                hits = []
                bound = math.isqrt(4 * ell)
                for a in range(-bound, bound + 1):
                    e1 = A[ell] - a
                    hsq = 2 * B[ell] - 2 * a * a - e1 * e1
                    if hsq < 0 or (e1 * e1 - hsq) % 4 != 0:
                        continue
                    H = 2 * C(anchor, ell) - 2 * a0 * a - e10 * e1
                    if h0sq * hsq != H * H:
                        continue
                    hits.append((a, e1, hsq, H))
                if len(hits) != 1:
                    ok = False
                    break
                sol[ell] = hits[0]
            if ok:
                assert solset is None, "ambiguous resolution at %d" % N
                solset = sol
                solset_anchor = anchor
        if solset:
            break
    assert solset is not None, "no resolution at level %d" % N
    h0sq = solset[solset_anchor][2]
    # full cross-trace verification, including the quadratic class's
    # root products: h_l h_l' = H_l H_l' / h0^2
    import random
    rng = random.Random(N)
    for _ in range(40):
        l1, l2 = rng.sample(GOOD_PRIMES, 2)
        a1v, e11, h1sq, H1 = solset[l1]
        a2v, e12, h2sq, H2 = solset[l2]
        num = H1 * H2
        assert num % h0sq == 0
        hh = num // h0sq
        assert hh * hh == h1sq * h2sq, (l1, l2)
        lhs = a1v * a2v + Fraction(e11 * e12 + hh, 2)
        assert lhs == C(l1, l2), (N, l1, l2, lhs)
    rational = tuple(solset[l][0] for l in GOOD_PRIMES)
    quad = {}
    for ell in GOOD_PRIMES:
        _, e1, hsq, _ = solset[ell]
        e2 = (e1 * e1 - hsq) // 4
        quad[ell] = (e1, e2)
    # the quadratic class generates one real quadratic field: the
    # squarefree kernels of all nonzero h^2 must agree
    kernels = set()
    for ell in GOOD_PRIMES:
        hsq = solset[ell][2]
        if hsq > 0:
            k = hsq
            for p in SMALL_PRIMES:
                while k % (p * p) == 0:
                    k //= p * p
            kernels.add(k)
    assert len(kernels) == 1, kernels
    assert kernels.pop() > 1, "quadratic class collapsed to rationals"
    return rational, quad


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def hasse_ok_deg1(aell, ell):
    return aell * aell <= 4 * ell


def hasse_ok_deg2(p1, q, ell):
    # roots of x^2 - p1 x + q, required real (totally real field), distinct,
    # and within [-2 sqrt(ell), 2 sqrt(ell)]
    disc = p1 * p1 - 4 * q
    if disc <= 0 or is_square(disc):
        return False
    # |p1| + sqrt(disc) <= 4 sqrt(ell)  <=>  (4l + q')... exact:
    # both roots in bound <=> p(2√l) >= 0, p(-2√l) >= 0 and |p1/2| <= 2√l
    # work with squares: p(±2√l) = q ± ... use: (4l + q)^2 >= 4 p1^2 l and 4l + q >= 0
    if 4 * ell + q < 0:
        return False
    return (4 * ell + q) ** 2 >= 4 * p1 * p1 * ell


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        "data", "newforms"))
    ap.add_argument("--a4", type=int, default=1000)
    ap.add_argument("--a6", type=int, default=8000)
    args = ap.parse_args()

    validate_tate()
    validate_trace_formula()

    classes = find_classes(EMIT_LEVELS, args.a4, args.a6)

    records = {}   # N -> list of (label, degree, {ell: charpoly low-to-high})
    curves = {}    # N -> list of (label, model)

    for N in EMIT_LEVELS:
        dim, ncls, hist = SPACE_TABLE[N]
        n_rational = dict(hist)[1]
        found = classes[N]
        print(f"level {N}: curve search found {len(found)} of {n_rational} "
              "rational classes")
        fps = [fp for fp, _ in found]
        model_of = dict(found)
        quad = None
        missing = n_rational - len(found)
        if N == 840:
            assert hist == [(1, 10), (2, 2)]
            assert missing == 1, "expected exactly one missing class at 840"
            rat, quad = resolve_rational_plus_quadratic(N, fps)
            assert rat not in fps
            fps.append(rat)
            print(f"  completed rational class via traces: a_11={rat[0]}, "
                  f"a_13={rat[1]}, a_17={rat[2]}")
            print(f"  quadratic class: charpoly at 11 is x^2 - ({quad[11][0]})x"
                  f" + ({quad[11][1]})")
        elif missing == 2:
            fx, fy = resolve_two_rational(N, fps)
            assert fx not in fps and fy not in fps and fx != fy
            fps.extend([fx, fy])
            print(f"  completed two rational classes via traces: "
                  f"a_11 = {fx[0]}, {fy[0]}")
        else:
            assert missing == 0, \
                f"level {N}: {missing} classes missing; enlarge the box"
        assert len(set(fps)) == n_rational
        # final identity battery over the full class list
        import random
        rng = random.Random(N + 1)
        for ell in GOOD_PRIMES:
            i = GOOD_PRIMES.index(ell)
            s1 = sum(fp[i] for fp in fps)
            s2 = sum(fp[i] ** 2 for fp in fps)
            if quad:
                e1, e2 = quad[ell]
                s1 += e1
                s2 += e1 * e1 - 2 * e2
            assert s1 == trace_new(N, ell), (N, ell, "sum")
            assert s2 == trace_new(N, ell * ell) + dim * ell, (N, ell, "sq")
        if not quad:
            for _ in range(20):
                l1, l2 = rng.sample(GOOD_PRIMES, 2)
                i1, i2 = GOOD_PRIMES.index(l1), GOOD_PRIMES.index(l2)
                s = sum(fp[i1] * fp[i2] for fp in fps)
                assert s == trace_new(N, l1 * l2), (N, l1, l2, "cross")
        print(f"  trace identity battery passed at {len(GOOD_PRIMES)} primes")
        # deterministic ordering: rational classes by fingerprint, then
        # higher degree
        fps.sort()
        recs = []
        cur = []
        for i, fp in enumerate(fps):
            label = f"{N}.2.a.{chr(ord('a') + i)}"
            cp = {}
            for ell, aell in zip(GOOD_PRIMES, fp):
                assert hasse_ok_deg1(aell, ell), (N, label, ell, aell)
                cp[ell] = [-aell, 1]
            recs.append((label, 1, cp))
            if fp in model_of:
                cur.append((label, model_of[fp]))
        if quad:
            label = f"{N}.2.a.{chr(ord('a') + len(fps))}"
            cp = {}
            for ell in GOOD_PRIMES:
                e1, e2 = quad[ell]
                assert hasse_ok_deg2(e1, e2, ell) or \
                    (e1 * e1 == 4 * e2 and e1 * e1 <= 16 * ell), (ell, e1, e2)
                cp[ell] = [e2, -e1, 1]
            recs.append((label, 2, cp))
        records[N] = recs
        curves[N] = cur

    os.makedirs(args.out, exist_ok=True)
    for N, recs in records.items():
        path = os.path.join(args.out, f"level_{N}.nf")
        with open(path, "w") as fh:
            fh.write(f"# weight-2 trivial-character newform data, level {N}\n")
            fh.write(f"# {len(recs)} Galois classes; charpoly lines are "
                     "'ell : c0 c1 ... 1' (low-to-high)\n")
            for label, deg, cp in recs:
                fh.write(f"form {N} {label} {deg}\n")
                for ell in sorted(cp):
                    coeffs = " ".join(str(c) for c in cp[ell])
                    fh.write(f"{ell} : {coeffs}\n")
                fh.write("end\n")
        print(f"wrote {path}")
    path = os.path.join(args.out, "curves.txt")
    with open(path, "w") as fh:
        fh.write("# one representative elliptic curve per rational class\n")
        fh.write("# curve <level> <label> <a1> <a2> <a3> <a4> <a6>\n")
        for N in EMIT_LEVELS:
            for label, a in curves[N]:
                fh.write("curve %d %s %d %d %d %d %d\n" % ((N, label) + a))
    print(f"wrote {path}")
    print("all corroborations passed")


if __name__ == "__main__":
    sys.exit(main())
