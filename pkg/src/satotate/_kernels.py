"""Compiled point-counting kernels.

All arithmetic is in int64; inputs are reduced mod p first, so every product
stays below p^2 < 2^62 for p < 2^31.
"""

import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is too old; skip it instead of warning on first parallel call
numba.config.THREADING_LAYER = "workqueue"

# Below this bound the O(p) count is cheaper than baby-step giant-step.
BSGS_THRESHOLD = 1000
_MAX_POINTS = 8


@njit(cache=True)
def _powmod(b, e, p):
    r = 1
    b %= p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def _inv(a, p):
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def _square_table(p):
    table = np.zeros(p, dtype=np.int8)
    for y in range(p):
        table[y * y % p] = 1
    table[0] = 0
    out = np.empty(p, dtype=np.int8)
    for i in range(p):
        out[i] = 2 * table[i] - 1
    out[0] = 0
    return out


@njit(cache=True)
def ec_trace_direct(a, b, p):
    """a_p = -sum_x chi(x^3 + a x + b) by exhaustive character sum."""
    chi = _square_table(p)
    a %= p
    b %= p
    s = 0
    for x in range(p):
        v = ((x * x % p + a) * x + b) % p
        s += chi[v]
    return -s


@njit(cache=True)
def _ec_add(x1, y1, o1, x2, y2, o2, A, p):
    if o1:
        return x2, y2, o2
    if o2:
        return x1, y1, o1
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return 0, 0, True
        lam = ((3 * x1 % p) * x1 + A) % p * _inv(2 * y1, p) % p
    else:
        lam = (y2 - y1) % p * _inv(x2 - x1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * ((x1 - x3) % p) - y1) % p
    return x3, y3, False


@njit(cache=True)
def _ec_mul(k, x, y, o, A, p):
    rx, ry, ro = 0, 0, True
    bx, by, bo = x, y, o
    while k > 0:
        if k & 1:
            rx, ry, ro = _ec_add(rx, ry, ro, bx, by, bo, A, p)
        bx, by, bo = _ec_add(bx, by, bo, bx, by, bo, A, p)
        k >>= 1
    return rx, ry, ro


@njit(cache=True)
def _some_multiple(x, y, A, p, lo, width):
    """Some M > 0 with [M]P = O, searched over [lo - s, lo + width + s]."""
    s = int(np.sqrt(width)) + 1
    bx = np.empty(s, dtype=np.int64)
    by = np.empty(s, dtype=np.int64)
    cx, cy, co = x, y, False
    for j in range(1, s + 1):
        # a point of order <= s shows up as the identity here
        if co:
            return j
        bx[j - 1] = cx
        by[j - 1] = cy
        cx, cy, co = _ec_add(cx, cy, co, x, y, False, A, p)
    order = np.argsort(bx)
    sx = bx[order]
    gx, gy, go = _ec_mul(s, x, y, False, A, p)
    tx, ty, to = _ec_mul(lo, x, y, False, A, p)
    for i in range(width // s + 2):
        if to:
            return lo + i * s
        k = np.searchsorted(sx, tx)
        while k < s and sx[k] == tx:
            j = order[k] + 1
            if by[order[k]] == (p - ty) % p:
                return lo + i * s + j
            return lo + i * s - j
        tx, ty, to = _ec_add(tx, ty, to, gx, gy, go, A, p)
    return -1


@njit(cache=True)
def _point_order(m, x, y, A, p):
    r = m
    n = m
    q = 2
    while q * q <= n:
        if n % q == 0:
            while n % q == 0:
                n //= q
            while r % q == 0:
                _, _, o = _ec_mul(r // q, x, y, False, A, p)
                if not o:
                    break
                r //= q
        q += 1
    if n > 1:
        if r % n == 0:
            _, _, o = _ec_mul(r // n, x, y, False, A, p)
            if o:
                r //= n
    return r


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def ec_trace_bsgs(a, b, p):
    """a_p from the group order, found by baby-step giant-step in the Hasse interval.

    Points come from x with d = f(x) a nonzero square: (x d, d^2) lies on
    y^2 = X^3 + a d^2 X + b d^3, which is isomorphic to the curve. Falls back
    to the exhaustive count when the exponent leaves the order ambiguous.
    """
    a %= p
    b %= p
    w = int(2.0 * np.sqrt(p))
    while w * w > 4 * p:
        w -= 1
    while (w + 1) * (w + 1) <= 4 * p:
        w += 1
    lo = p + 1 - w
    hi = p + 1 + w
    lcm = 1
    used = 0
    x = 0
    while used < _MAX_POINTS and x < p:
        d = ((x * x % p + a) * x + b) % p
        x += 1
        if d == 0 or _powmod(d, (p - 1) // 2, p) != 1:
            continue
        used += 1
        px = (x - 1) * d % p
        py = d * d % p
        A = a * (d * d % p) % p
        m = _some_multiple(px, py, A, p, lo, hi - lo)
        if m <= 0:
            continue
        r = _point_order(m, px, py, A, p)
        lcm = lcm // _gcd(lcm, r) * r
        first = (lo + lcm - 1) // lcm * lcm
        if first <= hi and first + lcm > hi:
            return p + 1 - first
    return ec_trace_direct(a, b, p)


@njit(cache=True)
def ec_trace(a, b, p):
    if p < BSGS_THRESHOLD:
        return ec_trace_direct(a, b, p)
    return ec_trace_bsgs(a, b, p)


@njit(cache=True, parallel=True)
def ec_traces(a, b, primes):
    out = np.empty(primes.shape[0], dtype=np.int64)
    for i in prange(primes.shape[0]):
        out[i] = ec_trace(a, b, primes[i])
    return out


@njit(cache=True)
def g2_character_sums(coeffs, p, r):
    """(sum over F_p, sum over F_{p^2}) of chi(f(x)) for f with ascending coeffs.

    F_{p^2} = F_p[w]/(w^2 - r); chi on F_{p^2} is chi_p of the norm.
    """
    chi = _square_table(p)
    n = coeffs.shape[0]
    c = np.empty(n, dtype=np.int64)
    for i in range(n):
        c[i] = coeffs[i] % p
    s1 = 0
    for x in range(p):
        acc = 0
        for i in range(n - 1, -1, -1):
            acc = (acc * x + c[i]) % p
        s1 += chi[acc]
    # v = 0: chi(N(f(u))) = chi(f(u)^2), i.e. 1 unless f(u) = 0
    s2 = 0
    for x in range(p):
        acc = 0
        for i in range(n - 1, -1, -1):
            acc = (acc * x + c[i]) % p
        if acc != 0:
            s2 += 1
    # v and -v give conjugate values of f, hence equal norms
    da = np.zeros(7, dtype=np.int64)
    db = np.zeros(7, dtype=np.int64)
    sq = np.empty(p, dtype=np.int64)
    rsq = np.empty(p, dtype=np.int64)
    for x in range(p):
        sq[x] = x * x % p
        rsq[x] = r * sq[x] % p
    half = 0
    for v in range(1, (p - 1) // 2 + 1):
        # f(u + v w) = A(u) + B(u) w with deg A, B <= 6: tabulate at u = 0..6,
        # take forward differences, then step u by additions only
        for u in range(7):
            ax = 0
            bx = 0
            for i in range(n - 1, -1, -1):
                na = (ax * u + (r * bx % p) * v + c[i]) % p
                nb = (ax * v + bx * u) % p
                ax = na
                bx = nb
            da[u] = ax
            db[u] = bx
        for k in range(1, 7):
            for u in range(6, k - 1, -1):
                da[u] = (da[u] - da[u - 1]) % p
                db[u] = (db[u] - db[u - 1]) % p
        a0, a1, a2, a3, a4, a5, a6 = da[0], da[1], da[2], da[3], da[4], da[5], da[6]
        b0, b1, b2, b3, b4, b5, b6 = db[0], db[1], db[2], db[3], db[4], db[5], db[6]
        for u in range(p):
            nrm = sq[a0] - rsq[b0]
            if nrm < 0:
                nrm += p
            half += chi[nrm]
            a0 += a1
            a0 -= p if a0 >= p else 0
            a1 += a2
            a1 -= p if a1 >= p else 0
            a2 += a3
            a2 -= p if a2 >= p else 0
            a3 += a4
            a3 -= p if a3 >= p else 0
            a4 += a5
            a4 -= p if a4 >= p else 0
            a5 += a6
            a5 -= p if a5 >= p else 0
            b0 += b1
            b0 -= p if b0 >= p else 0
            b1 += b2
            b1 -= p if b1 >= p else 0
            b2 += b3
            b2 -= p if b2 >= p else 0
            b3 += b4
            b3 -= p if b3 >= p else 0
            b4 += b5
            b4 -= p if b4 >= p else 0
            b5 += b6
            b5 -= p if b5 >= p else 0
    s2 += 2 * half
    return s1, s2
