"""Spectrum, hyperbolicity, invariant splittings, adapted norms, witnesses."""

import random
from fractions import Fraction
from math import inf as INF

import pytest

from ultradyn.errors import PreconditionViolated
from ultradyn.field import RationalContext, compare_threshold
from ultradyn.polyalg import mat_vec, residual_in_span
from ultradyn.spectral import (
    adapted_norm,
    eigenspace_sum,
    is_hyperbolic,
    nonhyperbolicity_witness,
    operator_norm,
    spectral_data,
    spectrum_abs,
    splitting_at,
)

from helpers import rand_conjugated, rand_vector

F = Fraction


def _mat(rows):
    return [[F(c) for c in r] for r in rows]


BENCH = _mat([[0, 8], [1, 2]])  # eigenvalues -2 and 4: valuations 1 and 2
DIAG = _mat([[2, 0, 0], [0, 1, 0], [0, 0, F(1, 2)]])


# -- spectrum ----------------------------------------------------------------


def test_spectrum_oracle_bench():
    assert spectrum_abs(BENCH, 2) == [(F(1), 1), (F(2), 1)]


def test_spectrum_oracle_diag():
    assert spectrum_abs(DIAG, 2) == [(F(-1), 1), (F(0), 1), (F(1), 1)]


def test_spectrum_nilpotent():
    m = _mat([[0, 1], [0, 0]])
    assert spectrum_abs(m, 2) == [(INF, 2)]


def test_spectrum_matches_construction_random():
    rng = random.Random(21)
    for p in (2, 3, 5):
        for _ in range(5):
            m, spectrum, _ = rand_conjugated(rng, p, 4)
            assert spectrum_abs(m, p) == spectrum


# -- hyperbolicity -----------------------------------------------------------


def test_is_hyperbolic_oracle():
    assert is_hyperbolic(BENCH, 2, F(1)) is True
    assert is_hyperbolic(BENCH, 2, F(3, 4)) is True
    assert is_hyperbolic(BENCH, 2, F(1, 2)) is False
    assert is_hyperbolic(DIAG, 2, F(1)) is False


# -- eigenspace sums and splittings -----------------------------------------


def test_eigenspace_sum_dims_and_invariance():
    data = spectral_data(BENCH, 2)
    assert data.spectrum == [(F(1), 1), (F(2), 1)]
    ctx = RationalContext(2)
    for v, mult in data.spectrum:
        basis = eigenspace_sum(BENCH, 2, v)
        assert len(basis) == mult
        for x in basis:
            assert residual_in_span(mat_vec(BENCH, x), basis, ctx) == INF


def test_eigenspace_sum_absent_valuation():
    assert eigenspace_sum(BENCH, 2, F(5)) == []


def test_splitting_oracle_diag():
    s = splitting_at(DIAG, 2, F(1))
    assert s.dims() == (1, 1, 1)
    # stable direction is the contraction axis x1 (eigenvalue 2)
    assert [v != 0 for v in s.stable[0]] == [True, False, False]
    assert [v != 0 for v in s.centre[0]] == [False, True, False]
    assert [v != 0 for v in s.unstable[0]] == [False, False, True]


def test_splitting_invariance_random():
    rng = random.Random(33)
    ctx3 = RationalContext(3)
    for _ in range(5):
        m, spectrum, _ = rand_conjugated(rng, 3, 4, allow_fractional=False)
        finite = [v for v, _ in spectrum if v != INF]
        gaps = [F(3) ** (-v) * F(2, 3) for v in finite] + [F(5, 2)]
        for a in gaps:
            s = splitting_at(m, 3, a)
            assert sum(s.dims()) == 4
            for part in (s.stable, s.centre, s.unstable):
                for x in part:
                    r = residual_in_span(mat_vec(m, list(x)),
                                         [list(b) for b in part], ctx3)
                    assert r == INF


# -- adapted norms -----------------------------------------------------------


def test_adapted_norm_exact_on_eigen_directions():
    n = adapted_norm(DIAG, 2)
    e1, e2, e3 = [F(1), F(0), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(1)]
    for x, rho in ((e1, F(1)), (e2, F(0)), (e3, F(-1))):
        assert n.norm_exp(mat_vec(DIAG, x)) == n.norm_exp(x) + rho


def test_adapted_norm_nilpotent_weights():
    m = _mat([[0, 1], [0, 0]])
    n = adapted_norm(m, 2, eps=F(1, 2))
    assert list(n.weights) == [F(0), F(-2)]
    assert operator_norm(m, 2, n) == F(2)  # operator norm 1/4 < eps


def test_adapted_norm_is_ultranorm():
    rng = random.Random(44)
    n = adapted_norm(BENCH, 2)
    for _ in range(30):
        x = rand_vector(rng, 2, 2)
        y = rand_vector(rng, 2, 2)
        nx, ny = n.norm_exp(x), n.norm_exp(y)
        ns = n.norm_exp([a + b for a, b in zip(x, y)])
        assert ns >= min(nx, ny)
        lam = F(12, 5)  # v_2 = 2, so the norm shrinks by 1/4
        assert n.norm_exp([lam * c for c in x]) == \
            (INF if nx == INF else nx + 2)
    assert n.norm_exp([F(0), F(0)]) == INF


def test_operator_norm_equals_spectral_radius_exp():
    # adapted to itself, |M| equals the largest eigenvalue absolute value
    n = adapted_norm(BENCH, 2)
    assert operator_norm(BENCH, 2, n) == F(1)
    n2 = adapted_norm(DIAG, 2)
    assert operator_norm(DIAG, 2, n2) == F(-1)


def test_operator_norm_ramified():
    m = _mat([[0, 2], [1, 0]])  # eigenvalues +-sqrt(2): valuation 1/2
    n = adapted_norm(m, 2)
    assert n.ram == 2
    assert operator_norm(m, 2, n) == F(1, 2)


# -- non-hyperbolicity witness ----------------------------------------------


def test_witness_oracle_diag():
    w = nonhyperbolicity_witness(DIAG, 2, F(1))
    assert w.constant is True
    assert w.rho == F(0)
    assert list(w.vector) == [F(0), F(1), F(0)]
    assert len(w.exponents) == 21
    assert len(set(w.exponents)) == 1


def test_witness_unipotent():
    m = _mat([[1, 1], [0, 1]])
    w = nonhyperbolicity_witness(m, 3, F(1))
    assert w.constant is True


def test_witness_requires_nonhyperbolic():
    with pytest.raises(PreconditionViolated):
        nonhyperbolicity_witness(BENCH, 2, F(1))
