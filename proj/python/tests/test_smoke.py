import math

import numpy as np
import pytest

import aggdiff


def test_two_particle_energy():
    s = aggdiff.ParticleState([-0.5, 0.5])
    e = aggdiff.discrete_energy(s, aggdiff.PhysParams(1.5, -0.5, 1.0))
    assert e["entropy"] == pytest.approx(0.70710678, rel=1e-8)
    assert e["total"] == pytest.approx(-0.29289322, rel=1e-7)
    rescaled = aggdiff.discrete_energy(s, aggdiff.PhysParams(1.5, -0.5, 1.0, rescaled=True))
    assert rescaled["total"] == pytest.approx(-0.16789322, rel=1e-7)


def test_gradient_and_hessian_shapes():
    s = aggdiff.gaussian_init(0.32, 12)
    p = aggdiff.PhysParams(1.5, -0.5, 0.2, rescaled=True)
    g = aggdiff.discrete_gradient(s, p)
    h = aggdiff.discrete_hessian(s, p)
    assert g.shape == (12,)
    assert h.shape == (12, 12)
    assert np.allclose(h, h.T)
    # Interaction forces cancel; only the confinement drift survives.
    assert g.sum() == pytest.approx(sum(s.positions), abs=1e-12)


def test_regime_and_validation():
    assert aggdiff.classify_regime(aggdiff.PhysParams(1.5, -0.5, 1.0)) == (
        "FairCompetition",
        "PorousMedium",
    )
    with pytest.raises(ValueError):
        aggdiff.PhysParams(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        aggdiff.ParticleState([1.0, 0.0])


def test_initial_data():
    s = aggdiff.gaussian_init(1.0, 2)
    assert s.positions[1] == pytest.approx(0.67448975, rel=1e-8)
    c = aggdiff.cauchy_init(1.0, 4)
    assert c.positions[3] == pytest.approx(math.tan(3 * math.pi / 8), rel=1e-12)
    u = aggdiff.indicator_init(0.5, 10)
    _, rho = aggdiff.to_density(u)
    assert np.allclose(rho, 1.0)


def test_evolve_and_rate():
    num = aggdiff.NumParams()
    num.dt = 1e-2
    num.t_max = 40.0
    num.snapshot_stride = 1
    p = aggdiff.PhysParams(1.5, -0.5, 0.2, rescaled=True)
    run = aggdiff.evolve(aggdiff.gaussian_init(0.32, 30), p, num)
    assert run["status"] == "Steady"
    traj = run["trajectory"]
    energy = traj["energy"]
    assert all(b <= a + 1e-12 * (1 + abs(a)) for a, b in zip(energy, energy[1:]))
    fit = aggdiff.fit_exponential_rate(traj["t"], traj["wasserstein_to_final"], 0.0, 1.0)
    assert fit["slope"] < -1.0
    final = run["final_state"]
    assert abs(aggdiff.virial_residual(final, p)) < 1e-2 * abs(
        aggdiff.discrete_energy(final, p)["total"]
    )


def test_blowup_and_reconstruct():
    num = aggdiff.NumParams()
    num.dt = 1e-2
    run = aggdiff.evolve(
        aggdiff.gaussian_init(0.32, 30), aggdiff.PhysParams(1.5, -0.5, 1.0), num
    )
    assert run["status"] == "BlowUp"
    s = aggdiff.gaussian_init(0.32, 9)
    r = aggdiff.self_similar_reconstruct(s, -0.5, 1.0)
    assert aggdiff.second_moment(r) == pytest.approx(
        aggdiff.second_moment(s) * 3.5 ** (2 / 2.5), rel=1e-13
    )


def test_small_sweep():
    num = aggdiff.NumParams()
    num.dt = 1e-2
    num.t_max = 6.0
    chi_c = aggdiff.critical_chi_sweep([0.0], [0.5, 1.5], num, n=20)
    assert chi_c[0.0] == 0.5
    assert aggdiff.parse_grid("0.8:1.2:0.02")[-1] == 1.2
