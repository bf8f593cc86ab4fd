"""Dense integer polynomials as little-endian coefficient lists.

These are exact helpers over Z (or Z/N when a modulus is passed); they back
the cyclotomic factors Phi_{p^k}, the omega elements and quotient-ring
reduction.  A polynomial ``[c0, c1, c2]`` means ``c0 + c1*t + c2*t^2``.
"""

from functools import lru_cache


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f):
    return len(trim(f)) - 1


def add(f, g, modulus=None):
    n = max(len(f), len(g))
    out = [(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)]
    if modulus is not None:
        out = [c % modulus for c in out]
    return trim(out)


def sub(f, g, modulus=None):
    return add(f, [-c for c in g], modulus)


def mul(f, g, modulus=None):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    if modulus is not None:
        out = [c % modulus for c in out]
    return trim(out)


def power(f, e, modulus=None):
    result = [1]
    base = list(f)
    while e:
        if e & 1:
            result = mul(result, base, modulus)
        base = mul(base, base, modulus)
        e >>= 1
    return result


def divmod_monic(f, g, modulus=None):
    """Divide ``f`` by the monic polynomial ``g``; returns ``(q, r)``."""
    g = trim(g)
    if not g or g[-1] != 1:
        raise ValueError("divisor must be monic")
    r = list(trim(f))
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], r
    q = [0] * (len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if modulus is not None:
            c %= modulus
        if c == 0:
            continue
        q[i - dg] = c
        for j in range(dg + 1):
            r[i - dg + j] -= c * g[j]
    r = r[:dg]
    if modulus is not None:
        r = [c % modulus for c in r]
        q = [c % modulus for c in q]
    return trim(q), trim(r)


def reduce_cyclic(f, N, modulus=None):
    """Reduce modulo ``t^N - 1`` into a dense list of length ``N``."""
    out = [0] * N
    for i, c in enumerate(f):
        out[i % N] += c
    if modulus is not None:
        out = [c % modulus for c in out]
    return out


@lru_cache(maxsize=None)
def _cyclotomic_ppower(p, k):
    if k == 0:
        return (-1, 1)
    step = p ** (k - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for j in range(p):
        coeffs[j * step] = 1
    return tuple(coeffs)


def cyclotomic_ppower(p, k):
    """Coefficients of Phi_{p^k}(t); ``k = 0`` gives Phi_1 = t - 1."""
    return list(_cyclotomic_ppower(p, k))


def monomial(i, c=1):
    return [0] * i + [c]


def evaluate(f, x, modulus=None):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
        if modulus is not None:
            acc %= modulus
    return acc


def _pack(coeffs, width):
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in coeffs), "little")


def _unpack(x, width, count):
    data = x.to_bytes(width * count, "little")
    return [int.from_bytes(data[i * width : (i + 1) * width], "little") for i in range(count)]


def mul_nonneg(f, g, bound):
    """Product of polynomials with coefficients in [0, bound), by Kronecker substitution.

    Returns the full (untrimmed) coefficient list of length len(f)+len(g)-1.
    """
    if not f or not g:
        return []
    bits = 2 * max(bound - 1, 1).bit_length() + min(len(f), len(g)).bit_length() + 1
    width = (bits + 7) // 8
    count = len(f) + len(g) - 1
    return _unpack(_pack(f, width) * _pack(g, width), width, count)


def cyclic_mul(f, g, N, modulus):
    """f * g in (Z/modulus)[t]/(t^N - 1); inputs are length-N lists reduced mod ``modulus``."""
    return reduce_cyclic(mul_nonneg(f, g, modulus), N, modulus)
