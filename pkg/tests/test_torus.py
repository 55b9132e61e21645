"""Flat-torus two-sided identity: the fully independent cross-check of the
smoothing/spectral machinery on a space where both sides are elementary."""

import math

import numpy as np
import pytest

from orbitcount.errors import BudgetError, InputError
from orbitcount.special import bessel_k1
from orbitcount.torus import (
    TorusParams,
    torus_geometric_side,
    torus_identity_check,
    torus_kernel,
    torus_spectral_side,
)


def test_params_validation():
    with pytest.raises(InputError):
        TorusParams(n=4, nu=2, lam=-1.0)
    with pytest.raises(InputError):
        TorusParams(n=1, nu=3, lam=-1.0)
    with pytest.raises(InputError):
        TorusParams(n=1, nu=1, lam=0.5)
    p = TorusParams(n=2, nu=2, lam=-4.0)
    assert p.kappa == pytest.approx(2.0)


def test_divergent_cells_are_refused():
    # 2 nu <= n: the spectral sum diverges, so construction must fail loudly
    for n, nu in ((2, 1), (3, 1)):
        with pytest.raises(InputError, match="convergent"):
            TorusParams(n=n, nu=nu, lam=-1.0)


def test_kernel_closed_forms():
    r = 0.9
    k1 = TorusParams(n=1, nu=1, lam=-1.0)
    assert float(torus_kernel(k1, r)) == pytest.approx(
        math.exp(-r) / 2.0, rel=1e-14
    )
    k12 = TorusParams(n=1, nu=2, lam=-1.0)
    assert float(torus_kernel(k12, r)) == pytest.approx(
        math.exp(-r) * (1.0 + r) / 4.0, rel=1e-14
    )
    k22 = TorusParams(n=2, nu=2, lam=-1.0)
    assert float(torus_kernel(k22, r)) == pytest.approx(
        r * float(bessel_k1(r)) / (4.0 * math.pi), rel=1e-13
    )
    k32 = TorusParams(n=3, nu=2, lam=-1.0)
    assert float(torus_kernel(k32, r)) == pytest.approx(
        math.exp(-r) / (8.0 * math.pi), rel=1e-14
    )


def test_planar_kernel_origin_limit():
    k22 = TorusParams(n=2, nu=2, lam=-1.0)
    at_zero = float(torus_kernel(k22, 0.0))
    assert at_zero == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-12)
    assert float(torus_kernel(k22, 1e-9)) == pytest.approx(at_zero, rel=1e-6)


def test_headline_cell_tight_budget():
    p = TorusParams(n=1, nu=1, lam=-1.0)
    cmp = torus_identity_check(p, (0.0,))
    assert cmp.budget <= 1e-10
    assert cmp.discrepancy <= cmp.budget
    assert cmp.accelerated
    # frozen two-sided value of the headline cell
    assert cmp.geometric == pytest.approx(1.0819767068693262, abs=1e-11)


def test_grid_within_budget():
    for n, nu in ((1, 1), (1, 2), (2, 2), (3, 2)):
        for lam in (-1.0, -3.0):
            for first in (0.0, 0.3):
                x = tuple([first] + [0.0] * (n - 1))
                cmp = torus_identity_check(TorusParams(n=n, nu=nu, lam=lam), x)
                assert cmp.within_budget, (n, nu, lam, x)


def test_acceleration_matches_brute_force():
    # the accelerated x = 0 path against a straight heavy truncation; the
    # two certified tails must cover the gap between them
    # 1e-12 sits above the x = 0 detection threshold but perturbs the sum
    # by < 1e-18, so it forces the plain truncated path at the same value
    near_zero = (1e-12,)
    for nu in (1, 2):
        fast = torus_spectral_side(TorusParams(n=1, nu=nu, lam=-2.0), (0.0,))
        brute = torus_spectral_side(
            TorusParams(n=1, nu=nu, lam=-2.0, spectral_trunc=2_000_000), near_zero
        )
        assert fast[2] is True  # accelerated
        assert brute[2] is False
        assert abs(fast[0] - brute[0]) <= fast[1] + brute[1] + 1e-12
    # at nu = 2 the k^-4 truncation tail is negligible, so the values agree
    fast2 = torus_spectral_side(TorusParams(n=1, nu=2, lam=-2.0), (0.0,))
    brute2 = torus_spectral_side(
        TorusParams(n=1, nu=2, lam=-2.0, spectral_trunc=200_000), near_zero
    )
    assert fast2[0] == pytest.approx(brute2[0], rel=1e-12)


def test_geometric_side_is_periodic_and_even():
    p = TorusParams(n=2, nu=2, lam=-1.5)
    g0, _ = torus_geometric_side(p, (0.3, 0.1))
    g1, _ = torus_geometric_side(p, (1.3, 0.1))
    g2, _ = torus_geometric_side(p, (-0.3, -0.1))
    assert g0 == pytest.approx(g1, rel=1e-13)
    assert g0 == pytest.approx(g2, rel=1e-13)


def test_point_dimension_checked():
    p = TorusParams(n=2, nu=2, lam=-1.0)
    with pytest.raises(InputError):
        torus_identity_check(p, (0.0,))


def test_spectral_box_budget():
    p = TorusParams(n=3, nu=2, lam=-1.0, spectral_trunc=10_000)
    with pytest.raises(BudgetError):
        torus_spectral_side(p, (0.3, 0.0, 0.0))
