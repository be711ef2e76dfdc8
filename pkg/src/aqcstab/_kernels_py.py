"""Pure-Python p-adic kernels.

Values travel as ``(v, u, a)`` triples of plain ints: the element is
``p**v * u`` known modulo ``p**a``.  A zero known to precision ``a`` is
``(a, 0, a)``.  Exact zeros (infinite precision) never reach this layer.

The compiled module ``_kernels`` exposes the same functions with the same
semantics; ``aqcstab.kernels`` picks one at import time.
"""

MASK64 = (1 << 64) - 1


def ppow(p, e):
    if p == 2:
        return 1 << e
    return p ** e


def split(n, p):
    """Return ``(v, u)`` with ``n == p**v * u`` and ``p`` not dividing ``u``."""
    if n == 0:
        raise ValueError("valuation of zero is not finite")
    v = 0
    if p == 2:
        low = n & -n
        v = low.bit_length() - 1
        return v, n >> v
    q, r = divmod(n, p)
    while r == 0:
        n = q
        v += 1
        q, r = divmod(n, p)
    return v, n


def normalize(p, v, u, a):
    if a <= v or u == 0:
        return a, 0, a
    m = ppow(p, a - v)
    u %= m
    if u == 0:
        return a, 0, a
    s, u = split(u, p)
    v += s
    if s:
        u %= ppow(p, a - v)
    return v, u, a


def add(p, va, ua, aa, vb, ub, ab):
    a = aa if aa < ab else ab
    if ua == 0:
        if ub == 0:
            return a, 0, a
        return normalize(p, vb, ub, a)
    if ub == 0:
        return normalize(p, va, ua, a)
    if va <= vb:
        return normalize(p, va, ua + ub * ppow(p, vb - va), a)
    return normalize(p, vb, ub + ua * ppow(p, va - vb), a)


def neg(p, v, u, a):
    if u == 0:
        return a, 0, a
    return v, (-u) % ppow(p, a - v), a


def mul(p, va, ua, aa, vb, ub, ab):
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


def div(p, va, ua, aa, vb, ub, ab):
    if ub == 0:
        raise ZeroDivisionError("p-adic division by zero")
    if ua == 0:
        return aa - vb, 0, aa - vb
    ra = aa - va
    rb = ab - vb
    rel = ra if ra < rb else rb
    m = ppow(p, rel)
    v = va - vb
    return v, (ua * pow(ub, -1, m)) % m, v + rel


def from_fraction(num, den, p, a):
    """Embed ``num/den`` (den != 0) known modulo ``p**a``."""
    if num == 0:
        return a, 0, a
    vn, un = split(num, p)
    vd, ud = split(den, p)
    v = vn - vd
    if a <= v:
        return a, 0, a
    m = ppow(p, a - v)
    return v, (un * pow(ud, -1, m)) % m, a


def from_fraction_rel(num, den, p, rel):
    """Embed ``num/den`` (both nonzero) with ``rel`` digits of relative precision."""
    vn, un = split(num, p)
    vd, ud = split(den, p)
    v = vn - vd
    m = ppow(p, rel)
    return v, (un * pow(ud, -1, m)) % m, v + rel


def _splitmix(z):
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix64(seed, x):
    """Deterministic 64-bit hash of ``(seed, x)`` for arbitrary-size ``x``."""
    h = _splitmix(seed & MASK64)
    h = _splitmix(h ^ (1 if x < 0 else 2))
    n = -x if x < 0 else x
    while True:
        h = _splitmix(h ^ (n & MASK64))
        n >>= 64
        if not n:
            return h
