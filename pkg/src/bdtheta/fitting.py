"""Finitely presented modules over R_n and their zeroth Fitting ideals.

A presentation is a k x l matrix over R_n (or a quotient R_n/(omega)); its
rows are relations among l generators, so the module is R^l / rowspan.  For
exact-sequence bookkeeping a module is flattened to (Z/p^a)^(l*dim), where
the relation submodule is the Z/p^a-span of every t^i * row.
"""

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import NotExact, PresentationTooLarge, RingMismatch
from .groupring import GroupRingElement
from .howell import howell, kernel_rows
from .ideals import (
    QuotientRing,
    ideal_from_generators,
    ideal_product,
    is_subset,
    membership_trail,
    unit_ideal,
    zero_ideal,
)
from .padic import from_digits, to_digits

MAX_GENERATORS = 5
_PRUNE_THRESHOLD = 64


def encode_element(ring, x):
    return [to_digits(c, ring.p, ring.a) for c in x]


def decode_element(ring, record):
    if isinstance(record, dict):
        elem = GroupRingElement.from_json(record)
        return ring.reduce(elem.to_ints())
    coeffs = [from_digits(c, ring.p) if isinstance(c, list) else int(c) for c in record]
    return ring.reduce(coeffs)


class Presentation:
    def __init__(self, ring, ngens, rows):
        self.ring = ring
        self.ngens = ngens
        self.rows = [tuple(_vec(ring, x) for x in row) for row in rows]
        for row in self.rows:
            if len(row) != ngens:
                raise ValueError(f"relation has {len(row)} entries, expected {ngens}")

    @property
    def nrels(self):
        return len(self.rows)

    def __repr__(self):
        return f"Presentation({self.ring!r}, gens={self.ngens}, rels={self.nrels})"

    def to_json(self):
        return {
            "ring": self.ring.descriptor(),
            "generators": self.ngens,
            "rows": [[encode_element(self.ring, x) for x in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, record):
        ring = QuotientRing.from_descriptor(record["ring"])
        rows = [[decode_element(ring, x) for x in row] for row in record["rows"]]
        ngens = record.get("generators", len(rows[0]) if rows else 0)
        return cls(ring, ngens, rows)

    def with_precision(self, a):
        ring = self.ring.with_precision(a)
        return Presentation(ring, self.ngens, [[ring.reduce(x) for x in row] for row in self.rows])

    def flat_relations(self):
        """Z/p^a generators of the relation submodule of (Z/p^a)^(l*dim)."""
        out = []
        for row in self.rows:
            for shifted in _t_orbit(self.ring, row):
                flat = _flatten(shifted)
                if any(flat):
                    out.append(flat)
        return out

    def relation_span(self):
        return howell(self.flat_relations(), self.ring.p, self.ring.a, self.ngens * self.ring.dim)

    def pruned(self):
        """Same module, keeping only relations not already in the span of earlier ones."""
        p, a = self.ring.p, self.ring.a
        width = self.ngens * self.ring.dim
        kept, span_rows = [], []
        basis = howell([], p, a, width)
        for row in self.rows:
            orbit = [_flatten(r) for r in _t_orbit(self.ring, row)]
            if all(basis.contains(v) for v in orbit):
                continue
            kept.append(row)
            span_rows.extend(v for v in orbit if any(v))
            basis = howell(span_rows, p, a, width)
        return Presentation(self.ring, self.ngens, kept)


def _vec(ring, x):
    if isinstance(x, GroupRingElement):
        x = x.to_ints()
    if isinstance(x, int):
        x = [x]
    x = tuple(x)
    if len(x) != ring.dim:
        return ring.reduce(x)
    return tuple(c % ring.modulus for c in x)


def _t_orbit(ring, row):
    current = tuple(row)
    for _ in range(ring.dim):
        yield current
        current = tuple(ring.times_t(x) for x in current)


def _flatten(row):
    return [c for x in row for c in x]


def _unflatten(ring, flat, ngens):
    d = ring.dim
    return [tuple(flat[j * d : (j + 1) * d]) for j in range(ngens)]


# determinants


def determinant(ring, matrix):
    """Cofactor expansion along the first row (exact, l <= MAX_GENERATORS)."""
    size = len(matrix)
    if size == 0:
        return ring.one()
    if size == 1:
        return matrix[0][0]
    total = ring.zero()
    for j, entry in enumerate(matrix[0]):
        if not any(entry):
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = ring.mul(entry, determinant(ring, minor))
        total = ring.add(total, term) if j % 2 == 0 else ring.sub(total, term)
    return total


def maximal_minors(P):
    l = P.ngens
    for subset in combinations(range(P.nrels), l):
        yield determinant(P.ring, [list(P.rows[i]) for i in subset])


def fitting_ideal(P):
    """Ideal of l x l minors of the relation matrix (zeroth Fitting ideal of the cokernel)."""
    ring = P.ring
    if ring.dim == 0:
        return zero_ideal(ring)
    if P.ngens > MAX_GENERATORS:
        raise PresentationTooLarge(f"{P.ngens} generators exceed the cap of {MAX_GENERATORS}")
    if P.ngens == 0:
        return unit_ideal(ring)
    if comb(P.nrels, P.ngens) > _PRUNE_THRESHOLD:
        P = P.pruned()
    if P.nrels < P.ngens:
        return zero_ideal(ring)
    minors = [m for m in maximal_minors(P) if any(m)]
    return ideal_from_generators(ring, minors) if minors else zero_ideal(ring)


def reduce_presentation(P, omega):
    """The same relations read in R_n/(omega)."""
    target = P.ring.quotient(omega)
    return Presentation(target, P.ngens, [[target.reduce(x) for x in row] for row in P.rows])


def direct_sum(P, Q):
    if P.ring != Q.ring:
        raise RingMismatch(f"{P.ring!r} vs {Q.ring!r}")
    zero = P.ring.zero()
    rows = [list(r) + [zero] * Q.ngens for r in P.rows]
    rows += [[zero] * P.ngens + list(r) for r in Q.rows]
    return Presentation(P.ring, P.ngens + Q.ngens, rows)


def diagonal(ring, elems):
    zero = ring.zero()
    rows = []
    for i, x in enumerate(elems):
        row = [zero] * len(elems)
        row[i] = _vec(ring, x)
        rows.append(row)
    return Presentation(ring, len(elems), rows)


def cyclic_module(ring, g):
    """R/(g)."""
    return Presentation(ring, 1, [[g]])


def free_module(ring, rank):
    return Presentation(ring, rank, [])


def zero_module(ring, ngens=1):
    return diagonal(ring, [ring.one()] * ngens)


# module maps and exact sequences


def _map_rows(ring, matrix):
    return [tuple(_vec(ring, x) for x in row) for row in matrix]


def _apply(ring, row, F, ncols):
    """row (in R^l) times the l x ncols matrix F."""
    out = [ring.zero()] * ncols
    for x, frow in zip(row, F):
        if not any(x):
            continue
        for j in range(ncols):
            out[j] = ring.add(out[j], ring.mul(x, frow[j]))
    return tuple(out)


def _basis_images(ring, F, nsrc, ndst):
    """Flattened images of the Z/p^a basis t^i e_j of R^nsrc."""
    images = []
    for j in range(nsrc):
        for i in range(ring.dim):
            e = [ring.zero()] * nsrc
            e[j] = ring.t_power(i) if ring.is_cyclic else ring.reduce([0] * i + [1])
            images.append(_flatten(_apply(ring, e, F, ndst)))
    return images


@dataclass
class ExactSeqVerdict:
    fitt_A: object
    fitt_A_mod_ker: object
    fitt_B: object
    fitt_C: object
    product_in_B: bool
    A_in_A_mod_ker: bool

    @property
    def holds(self):
        return self.product_in_B and self.A_in_A_mod_ker

    def to_json(self):
        return {
            "product_in_fitt_B": self.product_in_B,
            "fitt_A_in_fitt_A_mod_ker": self.A_in_A_mod_ker,
            "fitt_A": self.fitt_A.to_json(),
            "fitt_A_mod_ker": self.fitt_A_mod_ker.to_json(),
            "fitt_B": self.fitt_B.to_json(),
            "fitt_C": self.fitt_C.to_json(),
        }


def check_exact_seq(A, B, C, f, g):
    """Verify A -f-> B -g-> C -> 0 and the Fitting-ideal inclusions it implies.

    ``f`` is an l_A x l_B matrix (row j = image of the j-th generator of A),
    ``g`` likewise l_B x l_C.  Raises NotExact with a detail record when the
    maps are not well defined, g is not onto, or ker g differs from im f.
    """
    ring = B.ring
    for M in (A, C):
        if M.ring != ring:
            raise RingMismatch(f"{M.ring!r} vs {ring!r}")
    p, a, d = ring.p, ring.a, ring.dim
    f = _map_rows(ring, f)
    g = _map_rows(ring, g)
    if len(f) != A.ngens or len(g) != B.ngens:
        raise ValueError("map matrices do not match the generator counts")
    relA, relB, relC = A.relation_span(), B.relation_span(), C.relation_span()

    for name, src, F, tgt, rel in (("f", A, f, B, relB), ("g", B, g, C, relC)):
        for idx, row in enumerate(src.rows):
            if not rel.contains(_flatten(_apply(ring, row, F, tgt.ngens))):
                raise NotExact(f"{name} does not respect relation {idx}", {"check": f"{name}_well_defined", "relation": idx})
    for j, frow in enumerate(f):
        if not relC.contains(_flatten(_apply(ring, frow, g, C.ngens))):
            raise NotExact("g o f is not zero", {"check": "composite_zero", "generator": j})

    g_images = _basis_images(ring, g, B.ngens, C.ngens)
    onto = howell(g_images + list(relC.rows), p, a, C.ngens * d)
    if onto.cardinality() != p ** (a * C.ngens * d):
        raise NotExact("g is not surjective", {"check": "surjective", "image_size": onto.cardinality()})

    ker_g = kernel_rows(g_images, p, a, list(relC.rows))
    f_images = _basis_images(ring, f, A.ngens, B.ngens)
    im_f = howell(f_images + list(relB.rows), p, a, B.ngens * d)
    for idx, v in enumerate(ker_g.rows):
        if not im_f.contains(v):
            raise NotExact("ker g is larger than im f", {"check": "exact_at_B", "kernel_row": list(v)})

    # A / ker f presented by the preimage of the relations of B
    pre = kernel_rows(f_images, p, a, list(relB.rows))
    A_mod_ker = Presentation(ring, A.ngens, [_unflatten(ring, v, A.ngens) for v in pre.rows])
    FA, FAk, FB, FC = (fitting_ideal(M) for M in (A, A_mod_ker, B, C))
    return ExactSeqVerdict(
        FA,
        FAk,
        FB,
        FC,
        is_subset(ideal_product(FAk, FC), FB),
        is_subset(FA, FAk),
    )


def split_extension_maps(A, C):
    """Canonical inclusion and projection for B = A (+) C."""
    ring = A.ring
    zero, one = ring.zero(), ring.one()
    lA, lC = A.ngens, C.ngens
    f = [[one if j == i else zero for j in range(lA)] + [zero] * lC for i in range(lA)]
    g = [[zero] * lC for _ in range(lA)] + [[one if j == i else zero for j in range(lC)] for i in range(lC)]
    return direct_sum(A, C), f, g


# membership certificates


def _digest(record):
    blob = json.dumps(record, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def membership_certificate(command, x, P):
    """Decide x in Fitt(P) at the certified precision and record how."""
    if isinstance(x, GroupRingElement):
        if (x.p, x.n) != (P.ring.p, P.ring.n) or not P.ring.is_cyclic and x.N != P.ring.N:
            raise RingMismatch("element and presentation live over different group rings")
        prec = min(x.prec, P.ring.a)
        vec = x.to_ints()
    else:
        prec = P.ring.a
        vec = x
    Pk = P.with_precision(prec)
    ring = Pk.ring
    vec = ring.reduce(list(vec))
    ideal = fitting_ideal(Pk)
    member, trail = membership_trail(ideal, vec)
    inputs = {"element": encode_element(ring, vec), "presentation": Pk.to_json()}
    return {
        "command": command,
        "inputs": inputs,
        "inputs_digest": _digest(inputs),
        "verdict": "member" if member else "non_member",
        "prec": prec,
        "ideal": ideal.to_json(),
        "trail": [[i, to_digits(m, ring.p, prec)] for i, m in trail],
    }


def wmc_check(Lp, SelPres):
    """Weak-main-conjecture style verdict: is Lp in Fitt(SelPres)?"""
    if isinstance(Lp, GroupRingElement) and Lp.ring.kind != "zp":
        raise RingMismatch("Lp must have Z/p^a coefficients")
    return membership_certificate("wmc", Lp, SelPres)


def verify_certificate(cert):
    """Replay a membership certificate; returns (ok, list of problems)."""
    problems = []
    inputs = cert["inputs"]
    if _digest(inputs) != cert.get("inputs_digest"):
        problems.append("inputs digest mismatch")
    P = Presentation.from_json(inputs["presentation"])
    ring = P.ring
    vec = decode_element(ring, inputs["element"])
    replay = membership_certificate(cert["command"], vec, P)
    for key in ("verdict", "prec", "ideal", "trail"):
        if replay[key] != cert.get(key):
            problems.append(f"{key} differs on replay")
    if cert.get("verdict") == "member":
        # independent check: the trail must rebuild the element
        rows = cert["ideal"]["rows"]
        total = [0] * ring.dim
        for i, mult in cert["trail"]:
            m = from_digits(mult, ring.p)
            total = [(t + m * r) % ring.modulus for t, r in zip(total, rows[i])]
        if tuple(total) != tuple(vec):
            problems.append("trail does not reproduce the element")
    return not problems, problems
