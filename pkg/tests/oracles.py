"""Independent brute-force oracles.  Nothing here reuses the package's algorithms."""

from itertools import permutations, product


def naive_cyclic_mul(f, g, N, mod):
    out = [0] * N
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[(i + j) % N] = (out[(i + j) % N] + a * b) % mod
    return out


def poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def cyclotomic(p, k):
    """Phi_{p^k} by exact division of t^(p^k) - 1 by t^(p^(k-1)) - 1."""
    if k == 0:
        return [-1, 1]
    num = [-1] + [0] * (p**k - 1) + [1]
    den = [-1] + [0] * (p ** (k - 1) - 1) + [1]
    q = [0] * (len(num) - len(den) + 1)
    r = list(num)
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(den) - 1]
        q[i] = c
        for j, d in enumerate(den):
            r[i + j] -= c * d
    assert not any(r)
    return q


def span_closure(gens, mod, dim):
    """All Z/mod-combinations of ``gens`` (as a set of tuples), by closure under addition."""
    seen = {tuple([0] * dim)}
    frontier = list(seen)
    gens = [tuple(g) for g in gens]
    while frontier:
        new = []
        for s in frontier:
            for g in gens:
                t = tuple((a + b) % mod for a, b in zip(s, g))
                if t not in seen:
                    seen.add(t)
                    new.append(t)
        frontier = new
    return seen


def ideal_elements(gens, N, mod):
    """Ideal of (Z/mod)[t]/(t^N - 1) generated by ``gens``."""
    shifted = []
    for g in gens:
        g = list(g) + [0] * (N - len(g))
        for i in range(N):
            shifted.append(tuple(g[(j - i) % N] for j in range(N)))
    return span_closure(shifted, mod, N)


def leibniz_det(matrix, N, mod):
    """Determinant over (Z/mod)[t]/(t^N - 1) by the permutation expansion."""
    size = len(matrix)
    total = [0] * N
    for perm in permutations(range(size)):
        sign = 1
        for i in range(size):
            for j in range(i + 1, size):
                if perm[i] > perm[j]:
                    sign = -sign
        term = [1] + [0] * (N - 1)
        for i, j in enumerate(perm):
            term = naive_cyclic_mul(term, matrix[i][j], N, mod)
        total = [(a + sign * b) % mod for a, b in zip(total, term)]
    return tuple(total)


def all_ring_elements(N, mod):
    return (tuple(v) for v in product(range(mod), repeat=N))


class BruteTorus:
    """(O/p^m)^x / (Z/p^m)^x by explicit representatives and brute-force logs."""

    def __init__(self, p, d, m):
        self.p, self.d, self.m = p, d, m
        self.mod = p**m

    def units(self):
        p, mod = self.p, self.mod
        for x in range(mod):
            for y in range(mod):
                if (x * x - self.d * y * y) % p:
                    yield (x, y)

    def same_class(self, u, w):
        return (u[0] * w[1] - u[1] * w[0]) % self.mod == 0

    def mul(self, u, w):
        mod = self.mod
        return ((u[0] * w[0] + self.d * u[1] * w[1]) % mod, (u[0] * w[1] + u[1] * w[0]) % mod)

    def power(self, u, e):
        out = (1, 0)
        for _ in range(e):
            out = self.mul(out, u)
        return out

    def exponent(self, u):
        """c with u^(p+1) ~ g^((p+1) c), g = 1 + p sqrt(d), c mod p^(m-1)."""
        p, m = self.p, self.m
        order = p ** (m - 1)
        target = self.power(u, p + 1)
        g = (1, p % self.mod)
        acc = (1, 0)
        for e in range(order):
            if self.same_class(acc, target):
                return e * pow(p + 1, -1, order) % order if order > 1 else 0
            acc = self.mul(acc, g)
        raise AssertionError("pro-p part not found")


def brute_fitting(rows, ngens, N, mod):
    """Ideal of all ngens x ngens minors (Leibniz), enumerated as a set of tuples."""
    from itertools import combinations

    if ngens == 0:
        return ideal_elements([[1]], N, mod)
    minors = [
        leibniz_det([rows[i] for i in subset], N, mod) for subset in combinations(range(len(rows)), ngens)
    ]
    minors = [m for m in minors if any(m)]
    if not minors:
        return {tuple([0] * N)}
    return ideal_elements(minors, N, mod)


def brute_product(gens_I, gens_J, N, mod):
    return ideal_elements(
        [naive_cyclic_mul(f, g, N, mod) for f in gens_I for g in gens_J] or [[0]], N, mod
    )


def random_presentation(rng, p, a, n, max_gens=2, max_rels=3):
    """(ngens, rows) with entries as length-p^n coefficient lists."""
    N, mod = p**n, p**a
    ngens = rng.randint(1, max_gens)
    nrels = rng.randint(ngens, max_rels)
    rows = []
    for _ in range(nrels):
        row = []
        for _ in range(ngens):
            if rng.random() < 0.25:
                row.append([0] * N)
            else:
                row.append([rng.randrange(mod) for _ in range(N)])
        rows.append(row)
    return ngens, rows
