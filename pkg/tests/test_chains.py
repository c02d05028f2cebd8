"""Finite-chain diagonalization oracle."""

import numpy as np
import pytest

from fcspin import build_spin_rep, build_twist
from fcspin.chains import (
    _site_op,
    build_chain,
    correlation_profile,
    gap_scan,
    gibbs,
    ground,
    rp_gram_check,
    translation_operator,
    two_site_expectation,
)
from fcspin.errors import ResourceLimitError


def test_two_site_spectrum_d2():
    # J S.S on two sites: eigenvalues J/2 [j(j+1) - 2 s(s+1)] = {-3J/4, J/4}
    system = build_chain(2, 2, 1.0, periodic=False)
    w = np.linalg.eigvalsh(system.H.toarray())
    assert np.abs(w - np.array([-0.75, 0.25, 0.25, 0.25])).max() < 1e-12
    # in the Pauli convention sigma = 2S this is the textbook {-3J, J}
    assert np.abs(4 * w - np.array([-3.0, 1.0, 1.0, 1.0])).max() < 1e-12


def test_two_site_spectrum_d3():
    system = build_chain(3, 2, 1.0, periodic=False)
    w = np.unique(np.round(np.linalg.eigvalsh(system.H.toarray()), 10))
    assert np.abs(w - np.array([-2.0, -1.0, 1.0])).max() < 1e-10


def test_singlet_ground_and_ferro_triplet():
    assert ground(build_chain(2, 2, 1.0, periodic=False)).degeneracy == 1
    assert ground(build_chain(2, 2, -1.0, periodic=False)).degeneracy == 3


def test_commutation_invariants():
    system = build_chain(3, 4)
    rep = build_spin_rep(3)
    T = translation_operator(3, 4)
    assert abs((system.H @ T - T @ system.H)).max() < 1e-10
    for S in rep.generators():
        tot = sum(_site_op({p: S}, 3, 4) for p in range(4))
        assert abs((system.H @ tot - tot @ system.H)).max() < 1e-10


def test_d3_n4_ground_is_total_singlet():
    system = build_chain(3, 4)
    rep = build_spin_rep(3)
    g = ground(system)
    assert g.degeneracy == 1
    psi = g.vectors[:, 0]
    cas = sum(
        (sum(_site_op({p: S}, 3, 4) for p in range(4))) ** 2
        for S in rep.generators()
    )
    assert abs(psi.conj() @ (cas @ psi)) < 1e-10


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_xxx_d2_even_unique_ground(n):
    assert ground(build_chain(2, n)).degeneracy == 1


@pytest.mark.parametrize("n", [5, 7])
def test_xxx_d2_odd_frustrated_degeneracy(n):
    # odd periodic antiferromagnetic rings are frustrated: the ground
    # space is a fourfold multiplet, not a unique singlet
    assert ground(build_chain(2, n)).degeneracy == 4


def test_resource_refusal():
    with pytest.raises(ResourceLimitError):
        build_chain(3, 12)


def test_model_validation():
    with pytest.raises(ValueError):
        build_chain(2, 4, model="aklt-parent")
    with pytest.raises(ValueError):
        build_chain(3, 4, model="nope")


def test_gibbs_limits():
    system = build_chain(2, 4)
    hot = gibbs(system, 0.0)
    assert np.abs(hot.rho - np.eye(16) / 16).max() < 1e-12
    g = ground(system)
    cold = gibbs(system, 50.0)
    proj = g.vectors @ g.vectors.conj().T / g.degeneracy
    assert np.abs(cold.rho - proj).max() < 1e-6
    # energy nonincreasing in beta
    H = system.H.toarray()
    energies = [float(np.trace(gibbs(system, b).rho @ H).real)
                for b in (0.1, 0.5, 1.0, 2.0, 5.0)]
    assert all(e2 <= e1 + 1e-12 for e1, e2 in zip(energies, energies[1:]))


def test_gibbs_one_site_marginal_translation_invariant():
    system = build_chain(2, 4)
    state = gibbs(system, 1.3)
    rep = build_spin_rep(2)
    vals = [
        complex(np.trace(state.rho @ _site_op({p: rep.Sz}, 2, 4).toarray()))
        for p in range(4)
    ]
    assert max(abs(v - vals[0]) for v in vals) < 1e-12


def test_ferromagnetic_product_profile():
    system = build_chain(2, 6)
    up = np.zeros(2 ** 6)
    up[0] = 1.0  # all spins up
    rep = build_spin_rep(2)
    for r in range(1, 4):
        raw = two_site_expectation(system, up, rep.Sz, rep.Sz, 0, r)
        assert abs(raw - 0.25) < 1e-12  # constant, no decay
    rows = correlation_profile(system, up, 3)
    assert all(abs(row.zz) < 1e-12 for row in rows)  # connected part vanishes


def test_heisenberg_d3_profile_alternating():
    system = build_chain(3, 8)
    g = ground(system)
    rows = correlation_profile(system, g.vectors[:, 0], 3)
    signs = [np.sign(row.total) for row in rows]
    assert signs == [-1.0, 1.0, -1.0]
    mags = [abs(row.total) for row in rows]
    assert mags[0] > mags[1] > mags[2]


def test_aklt_parent_matches_transfer_values():
    system = build_chain(3, 8, model="aklt-parent")
    g = ground(system)
    assert g.degeneracy == 1
    assert abs(g.energy) < 1e-8  # frustration-free parent model
    rows = correlation_profile(system, g.vectors[:, 0], 3)
    assert abs(rows[0].zz - (-4 / 9)) / (4 / 9) < 0.05
    assert abs(rows[1].total / rows[0].total - (-1 / 3)) / (1 / 3) < 0.10


def test_ground_energy_per_bond_monotone():
    # periodic rings approach the infinite-volume value from below, so the
    # per-bond energy increases monotonically toward its limit
    per_bond = []
    for n in (4, 6, 8):
        g = ground(build_chain(2, n))
        per_bond.append(g.energy / n)
    assert per_bond[0] <= per_bond[1] <= per_bond[2]


def test_gap_scan():
    rows3 = gap_scan(3, 1.0, [4, 6])
    assert all(gap_val > 0.1 for _, gap_val in rows3)
    rows2 = gap_scan(2, 1.0, [4, 6, 8, 10])
    gaps = [gap_val for _, gap_val in rows2]
    assert gaps == sorted(gaps, reverse=True)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_rp_gram_xxx(d, beta):
    system = build_chain(d, 4)
    tw = build_twist(build_spin_rep(d))
    v = rp_gram_check(system, beta, tw)
    assert v.passed
    assert v.details["min_eig"] >= -1e-9


def test_rp_gram_ground_vector():
    system = build_chain(2, 4)
    g = ground(system)
    tw = build_twist(build_spin_rep(2))
    assert rp_gram_check(system, g.vectors[:, 0], tw).passed


def test_rp_gram_field_control_fails():
    tw = build_twist(build_spin_rep(2))
    system = build_chain(2, 4, field=(0.0, 0.0, 1.5))
    v = rp_gram_check(system, 1.0, tw)
    assert not v.passed
    assert v.details["min_eig"] < -1e-3


def test_rp_gram_needs_even_chain():
    system = build_chain(2, 5)
    tw = build_twist(build_spin_rep(2))
    with pytest.raises(ValueError):
        rp_gram_check(system, 1.0, tw)
