# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled p-adic kernels; mirrors ``_kernels_py`` exactly."""

from libc.stdint cimport uint64_t

MASK64 = (1 << 64) - 1


cdef dict _POW = {}


cpdef object ppow(long long p, long long e):
    # Python-int arithmetic: C shifts would overflow past 63 bits
    cdef list row
    if p == 2:
        return (<object>1) << e
    if 0 <= e < 512:
        row = _POW.get(p)
        if row is None:
            if len(_POW) >= 64:
                return (<object>p) ** e
            row = [(<object>p) ** i for i in range(512)]
            _POW[p] = row
        return row[e]
    return (<object>p) ** e


cdef object _inv(object u, object m):
    # for a word-sized u: inv = (1 + m*t) / u with m*t = -1 (mod u), so only
    # a word-sized modular inverse is needed
    cdef long long uu, r, rr, t, old_r, old_s, s, q
    if not (0 < u < 0x4000000000000000):
        return pow(u, -1, m)
    uu = u
    if uu == 1:
        return 1
    r = m % u
    old_r, rr = r, uu
    old_s, s = 1, 0
    while rr:
        q = old_r // rr
        old_r, rr = rr, old_r - q * rr
        old_s, s = s, old_s - q * s
    # old_s * r = 1 (mod u)
    t = (-old_s) % uu
    if t < 0:
        t += uu
    return (1 + m * t) // u


cpdef tuple split(object n, long long p):
    cdef long long v = 0
    cdef object q, r, low
    if n == 0:
        raise ValueError("valuation of zero is not finite")
    cdef long long c
    if p == 2:
        low = n & -n
        v = low.bit_length() - 1
        return v, n >> v
    if -0x4000000000000000 < n < 0x4000000000000000:
        c = n
        while c % p == 0:
            c //= p
            v += 1
        return v, c
    q, r = divmod(n, p)
    while r == 0:
        n = q
        v += 1
        q, r = divmod(n, p)
    return v, n


cpdef tuple normalize(long long p, long long v, object u, long long a):
    cdef long long s
    if a <= v or u == 0:
        return a, 0, a
    u = u % ppow(p, a - v)
    if u == 0:
        return a, 0, a
    s, u = split(u, p)
    v += s
    if s:
        u = u % ppow(p, a - v)
    return v, u, a


cpdef tuple add(long long p, long long va, object ua, long long aa,
                long long vb, object ub, long long ab):
    cdef long long a = aa if aa < ab else ab
    if ua == 0:
        if ub == 0:
            return a, 0, a
        return normalize(p, vb, ub, a)
    if ub == 0:
        return normalize(p, va, ua, a)
    if va <= vb:
        return normalize(p, va, ua + ub * ppow(p, vb - va), a)
    return normalize(p, vb, ub + ua * ppow(p, va - vb), a)


cpdef tuple neg(long long p, long long v, object u, long long a):
    if u == 0:
        return a, 0, a
    return v, (-u) % ppow(p, a - v), a


cpdef tuple mul(long long p, long long va, object ua, long long aa,
                long long vb, object ub, long long ab):
    cdef long long ra, rb, rel, v
    if ua == 0:
        if ub == 0:
            return aa + ab, 0, aa + ab
        return aa + vb, 0, aa + vb
    if ub == 0:
        return ab + va, 0, ab + va
    ra = aa - va
    rb = ab - vb
    rel = ra if ra < rb else rb
    v = va + vb
    return v, (ua * ub) % ppow(p, rel), v + rel


cpdef tuple div(long long p, long long va, object ua, long long aa,
                long long vb, object ub, long long ab):
    cdef long long ra, rb, rel, v
    cdef object m
    if ub == 0:
        raise ZeroDivisionError("p-adic division by zero")
    if ua == 0:
        return aa - vb, 0, aa - vb
    ra = aa - va
    rb = ab - vb
    rel = ra if ra < rb else rb
    m = ppow(p, rel)
    v = va - vb
    return v, (ua * _inv(ub, m)) % m, v + rel


cpdef tuple from_fraction(object num, object den, long long p, long long a):
    cdef long long vn, vd, v
    cdef object un, ud, m
    if num == 0:
        return a, 0, a
    vn, un = split(num, p)
    vd, ud = split(den, p)
    v = vn - vd
    if a <= v:
        return a, 0, a
    m = ppow(p, a - v)
    return v, (un * _inv(ud, m)) % m, a


cpdef tuple from_fraction_rel(object num, object den, long long p, long long rel):
    """Embed ``num/den`` (both nonzero) with ``rel`` digits of relative precision."""
    cdef long long vn, vd, v
    cdef object un, ud, m
    vn, un = split(num, p)
    vd, ud = split(den, p)
    v = vn - vd
    m = ppow(p, rel)
    return v, (un * _inv(ud, m)) % m, v + rel


cdef inline uint64_t _splitmix(uint64_t z):
    z = z + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cpdef object mix64(object seed, object x):
    cdef uint64_t h = _splitmix(<uint64_t>(seed & MASK64))
    cdef object n
    h = _splitmix(h ^ (1 if x < 0 else 2))
    n = -x if x < 0 else x
    while True:
        h = _splitmix(h ^ <uint64_t>(n & MASK64))
        n >>= 64
        if not n:
            return h
