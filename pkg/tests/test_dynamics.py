"""Polynomial dynamics: fixed points, Lipschitz data, certified balls,
orbits, stable-set membership."""

import random
from fractions import Fraction
from math import inf as INF

import pytest

from ultradyn.dynamics import (
    CERTIFIED_MEMBER,
    CERTIFIED_NON_MEMBER,
    CONTRACTING,
    HAS_EXPANSION,
    ISOMETRIC,
    PolyMap,
    STABLY_NEUTRAL,
    UNIFORMLY_ATTRACTIVE,
    classify_fixed_point,
    invariant_ball,
    jacobian,
    linearization_radius,
    orbit,
    remainder_lipschitz,
    shift_to_fixed_point,
    stable_membership,
)
from ultradyn.errors import NotAFixedPoint
from ultradyn.spectral import adapted_norm

from helpers import rand_poly_map, rand_unit

F = Fraction


def pmap(tables, p):
    return PolyMap.from_tables(tables, p, len(tables))


def bench(p=2):
    """F(x, y) = (2x, y/2 + x^2)."""
    return pmap([{(1, 0): F(2)}, {(0, 1): F(1, 2), (2, 0): F(1)}], p)


# -- fixed-point shift and jacobian -----------------------------------------


def test_shift_oracle():
    f = pmap([{(2,): F(1)}], 2)  # x^2 fixes 1
    g = shift_to_fixed_point(f, [F(1)])
    assert g.tables() == [{(1,): F(2), (2,): F(1)}]


def test_shift_rejects_non_fixed_point():
    f = pmap([{(2,): F(1)}], 2)
    with pytest.raises(NotAFixedPoint):
        shift_to_fixed_point(f, [F(3)])


def test_jacobian_oracle():
    assert jacobian(bench()) == [[F(2), F(0)], [F(0), F(1, 2)]]


def test_jacobian_at_point():
    f = pmap([{(2,): F(1)}], 2)
    assert jacobian(f, [F(3)]) == [[F(6)]]


# -- Lipschitz data of the remainder ----------------------------------------


def test_remainder_lipschitz_oracle_bench():
    f = bench()
    n = adapted_norm(jacobian(f), 2)
    # on the ball of radius 1/2 the quadratic term contracts by 1/2
    assert remainder_lipschitz(f, F(1), n) == F(1)


def test_remainder_lipschitz_oracle_cubic():
    f = pmap([{(1,): F(1), (3,): F(1)}], 2)
    n = adapted_norm(jacobian(f), 2)
    assert remainder_lipschitz(f, F(1), n) == F(2)  # Lip 1/4 at radius 1/2


def test_remainder_lipschitz_linear_map_is_infinite():
    f = pmap([{(1,): F(2)}], 2)
    n = adapted_norm(jacobian(f), 2)
    assert remainder_lipschitz(f, F(1), n) == INF


def test_linearization_radius_oracle_bench():
    f = bench()
    n = adapted_norm(jacobian(f), 2)
    assert linearization_radius(f, n) == F(2)  # radius 1/4


def test_linearization_radius_oracle_p3():
    f = pmap([{(1,): F(1), (2,): F(1)}], 3)
    n = adapted_norm(jacobian(f), 3)
    assert linearization_radius(f, n) == F(1)  # radius 1/3


# -- classifier and ball certificates ---------------------------------------


def test_classify_attractive():
    f = pmap([{(1,): F(2), (2,): F(1)}], 2)
    r = classify_fixed_point(f)
    assert r.label == UNIFORMLY_ATTRACTIVE
    assert r.certificate is not None
    assert r.certificate.mode == CONTRACTING
    assert r.certificate.radius_exp == 1          # ball radius 1/2
    assert r.certificate.contraction_exp == F(1)  # rate 1/2


def test_classify_neutral():
    f = pmap([{(1,): F(1), (2,): F(1)}], 3)
    r = classify_fixed_point(f)
    assert r.label == STABLY_NEUTRAL
    assert r.certificate is not None
    assert r.certificate.mode == ISOMETRIC
    assert r.certificate.radius_exp == 1          # ball radius 1/3


def test_classify_bench_has_expansion():
    r = classify_fixed_point(bench())
    assert r.label == HAS_EXPANSION


def test_classify_degenerate_jacobian():
    f = pmap([{(2,): F(1)}], 2)
    r = classify_fixed_point(f)
    assert r.degenerate is True
    assert (INF, 1) in r.spectrum


def test_classify_away_from_origin():
    f = pmap([{(2,): F(1)}], 2)  # fixed point 1, multiplier 2
    r = classify_fixed_point(f, [F(1)])
    assert r.label == UNIFORMLY_ATTRACTIVE


def test_invariant_ball_isometric_cubic():
    f = pmap([{(1,): F(1), (3,): F(1)}], 2)
    n = adapted_norm(jacobian(f), 2)
    c = invariant_ball(f, ISOMETRIC, n)
    assert c.radius_exp == 1  # radius 1/2


def test_invariant_ball_contraction_verified_pointwise():
    rng = random.Random(9)
    f = pmap([{(1,): F(2), (2,): F(1)}], 2)
    n = adapted_norm(jacobian(f), 2)
    c = invariant_ball(f, CONTRACTING, n)
    for _ in range(50):
        x = [rand_unit(rng, 2) * F(2) ** rng.randint(c.radius_exp, c.radius_exp + 4)]
        assert n.norm_exp(f(x)) >= n.norm_exp(x) + c.contraction_exp


# -- orbits ------------------------------------------------------------------


def test_orbit_oracle():
    pts = orbit(bench(), [F(1), F(2, 7)], 2)
    assert [list(z) for z, _ in pts] == \
        [[F(1), F(2, 7)], [F(2), F(8, 7)], [F(4), F(32, 7)]]
    assert [e for _, e in pts] == [F(0), F(1), F(2)]


# -- stable-set membership ---------------------------------------------------


def test_membership_bench_on_graph():
    v = stable_membership(bench(), F(1), [F(1), F(2, 7)])
    assert v.verdict == CERTIFIED_MEMBER


def test_membership_bench_unstable_axis():
    v = stable_membership(bench(), F(1), [F(0), F(1)])
    assert v.verdict == CERTIFIED_NON_MEMBER


def test_membership_origin_always_member():
    v = stable_membership(bench(), F(1), [F(0), F(0)])
    assert v.verdict == CERTIFIED_MEMBER


def test_membership_linear_oracle():
    f = pmap([{(1, 0): F(2)}, {(0, 1): F(1, 2)}], 2)
    a = F(3, 4)
    assert stable_membership(f, a, [F(1), F(0)]).verdict == CERTIFIED_MEMBER
    assert stable_membership(f, a, [F(0), F(1)]).verdict == CERTIFIED_NON_MEMBER


def test_membership_contracting_map_small_points():
    f = pmap([{(1,): F(2), (2,): F(1)}], 2)
    for x in (F(2), F(6), F(4, 3)):
        assert stable_membership(f, F(1), [x]).verdict == CERTIFIED_MEMBER


def test_membership_expanding_map_small_points():
    f = pmap([{(1,): F(1, 2), (2,): F(1)}], 2)
    for x in (F(2), F(4)):
        assert stable_membership(f, F(1), [x]).verdict == CERTIFIED_NON_MEMBER
    assert stable_membership(f, F(1), [F(0)]).verdict == CERTIFIED_MEMBER


def test_membership_verdicts_certified_on_random_linear(seed=123):
    rng = random.Random(seed)
    for p in (2, 3):
        for _ in range(5):
            f = rand_poly_map(rng, p, 2, 1, nterms=0)
            for _ in range(5):
                x = [rand_unit(rng, p) * F(p) ** rng.randint(-1, 3)
                     for _ in range(2)]
                v = stable_membership(f, F(1), x)
                assert v.verdict in (CERTIFIED_MEMBER, CERTIFIED_NON_MEMBER)


# -- local isometry within the linearization radius --------------------------


def test_local_isometry_property():
    rng = random.Random(77)
    for p in (2, 3):
        for _ in range(3):
            f = rand_poly_map(rng, p, 2, 2)
            a = jacobian(f)
            n = adapted_norm(a, p)
            k = linearization_radius(f, n)
            for _ in range(20):
                z = [rand_unit(rng, p) * F(p) ** (int(k) + rng.randint(2, 5))
                     for _ in range(2)]
                y = [rand_unit(rng, p) * F(p) ** (int(k) + rng.randint(2, 5))
                     for _ in range(2)]
                if n.norm_exp(z) < k or n.norm_exp(y) < k or z == y:
                    continue
                dz = [f(z)[i] - f(y)[i] for i in range(2)]
                lin = [sum(a[i][j] * (z[j] - y[j]) for j in range(2))
                       for i in range(2)]
                assert n.norm_exp(dz) == n.norm_exp(lin)
