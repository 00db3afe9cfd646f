import math

import numpy as np
import pytest

from edl.dirac import RadialGrid, euclidean_obstruction_field
from edl.obstruction import (
    AnnuliPartition,
    ConormalReport,
    MaxPrincipleResult,
    WeightProfile,
    annuli_decay,
    annulus_energy_norms,
    conormal_rate,
    discrete_max_principle,
    gram_matrix,
    gram_tail_trend,
    obstruction_profiles,
    project_to_obstruction,
    sample_max_principle_instance,
    solve_mode_bvp,
)
from edl.series import FourierSeries1D

RNG = np.random.default_rng(20260815)


# -- projection ---------------------------------------------------------------


def test_projection_is_delta_on_the_family():
    g = RadialGrid.geometric(10.0, 1200, r_min_factor=1e-6)
    psi2 = euclidean_obstruction_field(2, g, nt=17)
    coefs = project_to_obstruction(psi2, [1, 2, 3, -2])
    want = 4.0 * math.pi**2
    assert abs(coefs[1] - want) / want < 1e-4
    for i in (0, 2, 3):
        assert abs(coefs[i]) < 1e-10 * want


def test_projection_validates_t_resolution():
    g = RadialGrid.geometric(4.0, 100, r_min_factor=1e-3)
    psi = euclidean_obstruction_field(1, g, nt=9)
    with pytest.raises(ValueError):
        project_to_obstruction(psi, [5])
    with pytest.raises(ValueError):
        obstruction_profiles([0], g)


def test_projection_matches_direct_quadrature():
    # generic multi-mode field: projector agrees with assembling <f, Psi_l>
    # from the profile rows by hand
    g = RadialGrid.geometric(6.0, 700, r_min_factor=1e-5)
    prof = np.exp(-g.r) * np.sqrt(g.r)
    nt, nth = 17, 8
    t = np.arange(nt) * (2.0 * math.pi / nt)
    phase = (1.3 * np.exp(1j * t) - 0.4j * np.exp(-3j * t))[:, None, None]
    plus = phase * prof[None, :, None] * np.ones((1, 1, nth))
    minus = 0.5j * plus
    from edl.dirac import SpinorField

    f = SpinorField(g, plus, minus)
    coefs = project_to_obstruction(f, [1, -3])
    rows = obstruction_profiles([1, -3], g)
    w = g.area_weights()
    # l = +1: t coefficient 1.3, spinor combination plus + sgn(l) * minus
    want1 = (2 * math.pi) ** 2 * 1.3 * np.sum((prof + 0.5j * prof) * rows[0] * w)
    want3 = (2 * math.pi) ** 2 * (-0.4j) * np.sum((prof - 0.5j * prof) * rows[1] * w)
    assert abs(coefs[0] - want1) < 1e-10 * abs(want1)
    assert abs(coefs[1] - want3) < 1e-10 * abs(want3)


# -- conormal rates --------------------------------------------------------------


def _broad_t_series(l_values):
    modes = {}
    for l in l_values:
        modes[int(l)] = 1.0
    return FourierSeries1D.from_modes(modes)


def test_conormal_rate_matches_exponent_and_prefactor():
    l_values = [8, 12, 16, 24, 32, 48, 64]
    f = _broad_t_series(l_values)
    for p, want in ((0.0, -1.0), (0.5, -1.5), (1.0, -2.0)):
        rep = conormal_rate(p, f, l_values)
        assert rep.fit_valid
        assert abs(rep.slope - want) < 0.05
        assert abs(rep.prefactor_ratio - 1.0) < 0.01


def test_conormal_rate_flags_missing_data():
    f = FourierSeries1D.from_modes({8: 1.0, 16: 1.0})
    rep = conormal_rate(0.0, f, [8, 12, 16])
    assert rep.flagged_modes == [12]


def test_conormal_rejects_super_polynomial_probe():
    l_values = [8, 12, 16, 24, 32, 48, 64]
    f = _broad_t_series(l_values)
    rgrid = RadialGrid.geometric(2.0, 2500, r_min_factor=1e-7)

    def away_from_axis(r):
        x = (r - 1.0) / 0.25
        inside = np.abs(x) < 1.0
        xs = np.where(inside, x, 0.0)
        return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - xs**2)), 0.0)

    rep = conormal_rate(0.0, f, l_values, rgrid=rgrid, radial_profile=away_from_axis)
    assert rep.super_polynomial
    assert not rep.fit_valid


def test_conormal_rejects_nonpositive_modes():
    with pytest.raises(ValueError):
        conormal_rate(0.0, _broad_t_series([4]), [4, -4])


# -- Gram matrices ----------------------------------------------------------------


def test_gram_diagonal_and_sign_structure():
    w = WeightProfile.cosine(amplitude=0.1)
    ls = [1, 2, 3, -1, -2, -3]
    a = gram_matrix(ls, w)
    # diagonal: weight fluctuation integrates to zero in t, so only the
    # truncated-axis quadrature separates it from 1
    for i in range(6):
        assert abs(a[i, i] - 1.0) < 1e-5
    # opposite-sign pairs vanish identically
    for i, j in ((0, 3), (1, 4), (0, 4), (2, 3)):
        assert a[i, j] == 0.0
    assert np.max(np.abs(a - a.conj().T)) < 1e-12


def test_gram_weight_does_not_touch_diagonal():
    ls = [1, 2, 4, 8]
    flat = gram_matrix(ls, WeightProfile.cosine(amplitude=0.0))
    bent = gram_matrix(ls, WeightProfile.cosine(amplitude=0.1))
    assert np.max(np.abs(np.diag(flat) - np.diag(bent))) < 1e-14


def test_gram_adjacent_entries_scale_like_inverse_mode():
    w = WeightProfile.cosine(amplitude=0.1)
    ls = list(range(1, 11))
    a = gram_matrix(ls, w)
    for k in range(2, 9):
        got = abs(a[k - 1, k])  # pairs modes k and k+1
        # exact ramped overlap: amp sqrt(k(k+1)) (1 - e^{-(2k+1)}) / (2k+1)^2
        aa = 2.0 * k + 1.0
        want = 0.1 * math.sqrt(k * (k + 1.0)) * (1.0 - math.exp(-aa)) / aa**2
        assert got == pytest.approx(want, rel=1e-3)
    # ~ amp/(4k) for large k: quadrupling the mode quarters the coupling
    assert abs(a[1, 2]) / abs(a[7, 8]) == pytest.approx(4.0, rel=0.25)
    # only adjacent modes couple for a single-harmonic weight
    assert abs(a[0, 5]) == 0.0


def test_gram_tail_trend_envelope():
    w = WeightProfile.broadband(amplitude=0.1, n_modes=12)
    ls = list(range(1, 49))
    rep = gram_tail_trend(ls, w, cutoffs=[1, 2, 4, 8, 16, 24])
    assert np.all(rep.tail_norms > 0.0)  # non-vacuous: every tail still couples
    assert rep.envelope_ok
    assert rep.monotone
    assert rep.tightness_at_base == pytest.approx(1.0)
    assert np.isfinite(rep.smoothing_norm) and rep.smoothing_norm > 0.0
    # honest decay is much faster than the certified envelope
    assert rep.tail_norms[-1] < 0.2 * rep.tail_norms[0]


# -- radial solves and annuli -------------------------------------------------------


def test_solve_mode_bvp_manufactured_solution():
    g = RadialGrid.geometric(3.0, 900, r_min_factor=1e-3)
    nu, l = 1.0, 2.0
    u_exact = np.exp(-g.r**2)

    def forcing(r):
        return (4.0 - 4.0 * r**2 + nu**2 / r**2 + l**2) * np.exp(-(r**2))

    u = solve_mode_bvp(nu, l, g, forcing,
                       boundary=(u_exact[0], u_exact[-1]))
    err = np.sqrt(g.integrate(np.abs(u - u_exact) ** 2))
    ref = np.sqrt(g.integrate(u_exact**2))
    assert err / ref < 1e-6


def test_annuli_decay_rate_uniform_in_mode():
    rates = []
    for l in (4, 16, 64):
        rep = annuli_decay(0.5, l, r_scale=1.0)
        rates.append(rep.rate_per_annulus)
        assert rep.rate_per_annulus == pytest.approx(2.0, rel=0.1)
    assert max(rates) - min(rates) < 0.2


def test_annuli_partition_validation():
    with pytest.raises(ValueError):
        AnnuliPartition(r_start=0.0, width=1.0, count=4)
    with pytest.raises(ValueError):
        AnnuliPartition(r_start=1.0, width=1.0, count=1)
    part = AnnuliPartition(r_start=1.0, width=0.5, count=3)
    assert np.allclose(part.edges(), [1.0, 1.5, 2.0, 2.5])


def test_annulus_norms_capture_known_profile():
    # e^{-r}/sqrt(r) has a flat r-weighted density, so the energy norm loses
    # a clean factor e^{-1} per unit annulus once r is a few units out
    g = RadialGrid.geometric(9.0, 1400, r_min_factor=1e-3)
    u = np.exp(-g.r) / np.sqrt(g.r)
    part = AnnuliPartition(r_start=3.0, width=1.0, count=5)
    norms = annulus_energy_norms(u, 0.5, 1.0, g, part)
    slopes = np.diff(np.log(norms))
    assert np.all(np.abs(-slopes - 1.0) < 0.05)


# -- discrete maximum principle ------------------------------------------------------


def test_max_principle_certifies_random_valid_instances():
    for _ in range(300):
        seq, barrier = sample_max_principle_instance(RNG, size=30, lam=0.45)
        res = discrete_max_principle(seq, barrier, lam=0.45)
        assert res.certified
        assert res.hypothesis_violation is None
        assert res.conclusion_violation is None


def test_max_principle_pinpoints_hypothesis_violations():
    barrier = np.zeros(6)
    seq = np.array([-1.0, -1.0, -1.0, -1.0, -1.0, 0.5])
    res = discrete_max_principle(seq, barrier, lam=0.4)
    assert not res.certified and res.hypothesis_violation == ("endpoint", 5)

    seq = np.array([-1.0, 0.2, -1.0, -1.0, -1.0, -1.0])
    res = discrete_max_principle(seq, barrier, lam=0.4)
    assert not res.certified and res.hypothesis_violation == ("interior", 1)

    with pytest.raises(ValueError):
        discrete_max_principle(seq, barrier, lam=0.5)
    with pytest.raises(ValueError):
        discrete_max_principle(seq[:2], barrier[:2], lam=0.4)


def test_max_principle_conclusion_path():
    # with hypothesis checking off, a sequence poking above its barrier is
    # reported through the conclusion check instead
    barrier = np.zeros(5)
    seq = np.array([-1.0, -1.0, 0.3, -1.0, -1.0])
    res = discrete_max_principle(seq, barrier, lam=0.4, verify_hypotheses=False)
    assert not res.certified
    assert res.conclusion_violation == 2
    assert isinstance(res, MaxPrincipleResult)
