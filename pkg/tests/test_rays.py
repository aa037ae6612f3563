import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bases_by_combinations

from bksbench.errors import DimensionMismatch, ZeroVector
from bksbench.rays import (
    Ray,
    RaySet,
    SignedPermutation,
    apply_symmetry,
    canonicalize,
    enumerate_bases,
    factorize,
    in_span,
    inner,
    orthogonality_graph,
    projector,
    tensor,
)

ONE_BASIS = [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)]

components = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=12),
                      min_size=4, max_size=4).filter(any)
nonzero = st.fractions(min_value=-100, max_value=100, max_denominator=9).filter(bool)


@pytest.mark.parametrize("raw, expected", [
    ((2, -2, 0, 0), (1, -1, 0, 0)),
    ((0, 0, 0, -3), (0, 0, 0, 1)),
    ((Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), 0), (1, -1, -1, 0)),
    (("1/3", "-2/3", 0, "4"), (1, -2, 0, 12)),
])
def test_canonicalize(raw, expected):
    assert canonicalize(raw) == expected


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        canonicalize([0, 0, 0, 0])


@given(components, nonzero)
def test_canonicalize_idempotent_and_scale_invariant(v, lam):
    c = canonicalize(v)
    assert canonicalize(c) == c
    assert canonicalize([lam * x for x in v]) == c
    first = next(x for x in c if x)
    assert first > 0


@pytest.mark.parametrize("a, b", [
    ((1, 1, 0, 0), (1, -1, 0, 0)),
    ((1, 1, 1, 1), (1, 0, -1, 0)),
    ((0, 1, 0, 0), (0, 0, 1, 0)),
])
def test_inner_zero(a, b):
    assert inner(Ray(a), Ray(b)) == 0 == inner(Ray(b), Ray(a))


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        inner(Ray((1, 0)), Ray((1, 0, 0)))


def test_graph_small_cases():
    assert orthogonality_graph(RaySet([(1, 0, 0, 0)])) == {0: set()}
    g = orthogonality_graph(RaySet(ONE_BASIS))
    assert all(g[i] == set(range(4)) - {i} for i in range(4))


def test_graph_ceg18_degree_seven(ceg18):
    assert {len(v) for v in orthogonality_graph(ceg18).values()} == {7}


def _ray_bases(s, bases):
    return sorted(sorted(str(s[i]) for i in b) for b in bases)


@pytest.mark.parametrize("key", ["ceg18", "peres24"])
def test_bases_match_golden_oracle(key, golden):
    from bksbench import catalog

    s = catalog.get(key).ray_set
    frozen = json.loads((golden / f"bases_{key}.json").read_text())
    assert _ray_bases(s, enumerate_bases(s)) == frozen["bases"]
    assert len(enumerate_bases(s)) == frozen["count"]


def test_ceg18_bases_are_the_nine_printed(ceg18):
    from bksbench import catalog

    bases = enumerate_bases(ceg18)
    assert sorted(bases) == sorted(catalog.ceg18().declared_bases)
    counts = [sum(i in b for b in bases) for i in range(18)]
    assert counts == [2] * 18


def test_peres24_contains_ceg18_bases(ceg18, peres24):
    p_bases = {frozenset(peres24[i] for i in b) for b in enumerate_bases(peres24)}
    for b in enumerate_bases(ceg18):
        assert frozenset(ceg18[i] for i in b) in p_bases


def test_bases_agree_with_combination_oracle_on_random_subsets(peres24):
    rng = random.Random(7)
    for _ in range(40):
        ids = rng.sample(range(24), rng.randint(4, 24))
        s = peres24.subset(ids)
        vecs = [tuple(r) for r in s]
        assert enumerate_bases(s) == sorted(bases_by_combinations(vecs, 4))


def test_bases_general_dimension():
    s = RaySet([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, -1, 0)])
    assert enumerate_bases(s) == [(0, 1, 2), (2, 3, 4)]


@pytest.mark.parametrize("seed", range(5))
def test_bases_independent_of_input_order(peres24, seed):
    rays = list(peres24)
    random.Random(seed).shuffle(rays)
    shuffled = RaySet(rays)
    assert _ray_bases(shuffled, enumerate_bases(shuffled)) == _ray_bases(peres24, enumerate_bases(peres24))


@pytest.mark.parametrize("key", ["ceg18", "peres24"])
def test_basis_projectors_sum_to_identity(key):
    from bksbench import catalog

    s = catalog.get(key).ray_set
    for b in enumerate_bases(s):
        total = [[Fraction(0)] * 4 for _ in range(4)]
        for i in b:
            p = projector(s[i])
            total = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(total, p)]
        assert total == [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]


def test_in_span():
    target = Ray((0, 1, -1, 0))
    assert in_span(target, [Ray((0, 0, 1, 0)), Ray((1, 1, 0, 0)), Ray((1, -1, 0, 0))])
    assert in_span(target, [target])
    assert not in_span(Ray((0, 0, 0, 1)), [Ray((1, 0, 0, 0)), Ray((0, 1, 0, 0))])
    assert not in_span(target, [])
    with pytest.raises(DimensionMismatch):
        in_span(target, [Ray((1, 0))])


@pytest.mark.parametrize("a, b, expected", [
    ((1, 0), (1, -1), (1, -1, 0, 0)),
    ((1, 1), (1, 1), (1, 1, 1, 1)),
    ((0, 1), (0, 1), (0, 0, 0, 1)),
])
def test_tensor(a, b, expected):
    assert tensor(Ray(a), Ray(b)) == Ray(expected)


def test_factorize_examples(ceg18):
    f = factorize(Ray((1, -1, 0, 0)))
    assert (f.first, f.second) == (Ray((1, 0)), Ray((1, -1)))
    assert factorize(Ray((0, 1, -1, 0))) is None
    fact = [r for r in ceg18 if factorize(r) is not None]
    assert len(fact) == 12
    from bksbench.catalog import CEG18_BASES

    first_four = {Ray(v) for basis in CEG18_BASES[:4] for v in basis}
    assert set(fact) == first_four


qubit = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(any)


@given(qubit, qubit)
def test_factorize_inverts_tensor(a, b):
    u = tensor(Ray(a), Ray(b))
    f = factorize(u)
    assert f is not None and tensor(f.first, f.second) == u


def test_symmetry_examples(ceg18):
    assert apply_symmetry(SignedPermutation.identity(4), ceg18) == ceg18
    swap = SignedPermutation((3, 1, 2, 0), (1, 1, 1, 1))
    assert apply_symmetry(swap, Ray((0, 0, 0, 1))) == Ray((1, 0, 0, 0))
    with pytest.raises(DimensionMismatch):
        apply_symmetry(swap, Ray((1, 0, 0)))


def test_hyperoctahedral_group_size():
    assert len(list(SignedPermutation.all(4))) == 384


def test_symmetry_reaches_every_hardy_ray():
    from bksbench import catalog

    eta = Ray((1, -1, -1, 0))
    images = {apply_symmetry(g, eta) for g in SignedPermutation.all(4)}
    assert set(catalog.hardy_rays().ray_set) <= images


@settings(max_examples=50)
@given(st.sampled_from(list(SignedPermutation.all(4))))
def test_symmetry_preserves_orthogonality(g):
    from bksbench import catalog

    s = catalog.peres24().ray_set
    t = apply_symmetry(g, s)
    assert orthogonality_graph(t) == orthogonality_graph(s)
    assert set(t) == set(s)
