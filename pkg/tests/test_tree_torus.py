from collections import deque
from fractions import Fraction

import pytest

from bdtheta.errors import DepthTooSmall, LevelMismatch, PrecisionUnderflow
from bdtheta.padic import PrecisionProfile
from bdtheta.torus import AnticyclotomicTorus
from bdtheta.tree import BruhatTitsTree, GL2Element, TreeVertex

from oracles import BruteTorus

PROF = PrecisionProfile(5, 8, 2)


@pytest.fixture(scope="module")
def tree():
    return BruhatTitsTree(PROF)


@pytest.fixture(scope="module")
def torus():
    return AnticyclotomicTorus(PROF)


def bfs_distances(tree, start, radius):
    dist = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for w in tree.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def test_sphere_sizes(tree):
    assert [len(tree.sphere(tree.v0, r)) for r in range(5)] == [1, 6, 30, 150, 750]


def test_distance_formula_matches_bfs(tree):
    dist = bfs_distances(tree, tree.v0, 3)
    for v, d in dist.items():
        assert tree.distance(tree.v0, v) == d
        assert v.depth == d
    some = sorted(dist)[::17]
    for v in some:
        local = bfs_distances(tree, v, 2)
        for w, d in local.items():
            assert tree.distance(v, w) == d


def test_neighbors_of_v0(tree):
    nbrs = tree.neighbors(tree.v0)
    assert len(set(nbrs)) == 6
    assert all(tree.distance(tree.v0, w) == 1 for w in nbrs)


def test_canonicalize_examples(tree):
    a = tree.canonicalize(((5, 0), (0, 1)))
    b = tree.canonicalize(((1, 0), (0, 5)))
    assert a == TreeVertex(5, 1, Fraction(0))
    assert tree.distance(tree.v0, a) == tree.distance(tree.v0, b) == 1
    assert tree.distance(a, b) == 2
    assert tree.canonicalize(((7, 3), (2, 9))) == tree.v0  # GL2(Z_p) fixes v0


def test_homothety_invariance(tree):
    M = GL2Element.of(((25, 3), (5, 2)))
    assert tree.canonicalize(M) == tree.canonicalize(M.scale(Fraction(1, 5)))


def test_action_is_isometric(tree):
    g = GL2Element.of(((3, 5), (1, 2)))
    verts = tree.sphere(tree.v0, 2)[:12]
    for v in verts:
        for w in verts:
            assert tree.distance(tree.act(g, v), tree.act(g, w)) == tree.distance(v, w)


def test_busemann(tree):
    assert tree.busemann(tree.ray_vertex(1), 4) == -1
    assert tree.busemann(tree.vertex(1, 1), 4) == 1
    with pytest.raises(DepthTooSmall):
        tree.busemann(tree.ray_vertex(3), 3)


def test_depth_budget(tree):
    with pytest.raises(PrecisionUnderflow):
        tree.vertex(7, 0)


def test_vertex_json_round_trip(tree):
    for v in tree.sphere(tree.v0, 2):
        assert TreeVertex.from_json(v.to_json()) == v


def test_dot_export(tree):
    text = tree.to_dot(tree.v0, 1)
    assert text.startswith("graph") and text.count("--") == 6


def test_coset_count_and_identity(torus):
    for m in (1, 2, 3):
        cos = torus.cosets(m)
        assert len(cos) == torus.order(m) == 6 * 5 ** (m - 1)
        assert len(set(cos)) == len(cos)
        assert cos[0] == torus.identity(m)


def test_cosets_match_brute_force_classes(torus):
    brute = BruteTorus(5, torus.d, 2)
    classes = []
    for u in brute.units():
        if not any(brute.same_class(u, c) for c in classes):
            classes.append(u)
    assert len(classes) == len(torus.cosets(2))
    for u in classes:
        assert torus.canonical(2, *u) in torus.cosets(2)


def test_group_law(torus):
    m = 2
    cos = torus.cosets(m)
    e = torus.identity(m)
    for s in cos[::5]:
        assert torus.group_law(s, torus.inverse(s)) == e
        for t in cos[::7]:
            assert torus.group_law(s, t) == torus.group_law(t, s)
    with pytest.raises(LevelMismatch):
        torus.group_law(cos[1], torus.identity(1))


def test_sqrt_d_squares_to_identity(torus):
    s = torus.canonical(2, 0, 1)
    assert torus.group_law(s, s) == torus.identity(2)


def test_cyclic_exponent_matches_discrete_log(torus):
    for m in (1, 2, 3):
        brute = BruteTorus(5, torus.d, m)
        for s in torus.cosets(m):
            assert torus.cyclic_exponent(s) == brute.exponent((s.x, s.y))


def test_cyclic_exponent_homomorphism(torus):
    m = 3
    order = 5 ** (m - 1)
    cos = torus.cosets(m)
    for s in cos[::11]:
        for t in cos[::13]:
            lhs = torus.cyclic_exponent(torus.group_law(s, t))
            assert lhs == (torus.cyclic_exponent(s) + torus.cyclic_exponent(t)) % order
    kernel = [s for s in cos if torus.cyclic_exponent(s) == 0]
    assert len(kernel) == 6


def test_filtration_levels(torus):
    assert torus.filtration_level(torus.generator(2)) == 1
    assert torus.filtration_level(torus.canonical(2, 3, 1)) == 0
    assert torus.filtration_level(torus.identity(2)) == 2


@pytest.mark.parametrize("m", [1, 2, 3])
def test_orbit_map_bijection(tree, torus, m):
    image = {torus.orbit_vertex(s) for s in torus.cosets(m)}
    assert image == set(tree.sphere(tree.v0, m))


def test_stabilizer_is_filtration_subgroup(torus):
    for m in (1, 2):
        for s in torus.cosets(m):
            for n in range(m + 1):
                fixed = torus.orbit_vertex(s, n) == torus.base_vertex(n)
                assert fixed == (torus.filtration_level(s) >= n)


def test_coset_table_rows(torus):
    rows = torus.coset_table(2)
    assert len(rows) == 30
    assert {r["cyclic_exponent"] for r in rows} == set(range(5))
