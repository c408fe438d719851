"""Shared fixtures: the default box, factorized systems and solved spectra.

Everything here is session-scoped; building a 2001-point system and solving
both partners takes a noticeable fraction of a second, and many tests share
the same four superpotentials.
"""

import numpy as np
import pytest

import susyqm as sq

BOX = (-10.0, 10.0, 2001)
W_NAMES = ("harmonic", "cubic", "shifted_cubic", "tanh")
N_LEVELS = 6


@pytest.fixture(scope="session")
def grid2001():
    return sq.make_grid(*BOX)


@pytest.fixture(scope="session")
def systems(grid2001):
    return {
        name: sq.build_susy_system(sq.get_superpotential(name), grid2001)
        for name in W_NAMES
    }


@pytest.fixture(scope="session")
def spectra(systems, grid2001):
    """(plus, minus) eigenpair lists, k = N_LEVELS + 1 per side.

    The extra slot holds the zero mode (minus side) or the boundary-closure
    artifact of the square factorization (plus side).
    """
    out = {}
    for name, system in systems.items():
        plus = sq.solve_spectrum(system.H_plus, N_LEVELS + 1,
                                 grid=grid2001, partner_tag="plus")
        minus = sq.solve_spectrum(system.H_minus, N_LEVELS + 1,
                                  grid=grid2001, partner_tag="minus")
        out[name] = (plus, minus)
    return out


@pytest.fixture(scope="session")
def nonzero_levels(spectra):
    """Paired eigenstates above the zero-mode threshold, per superpotential."""
    out = {}
    for name, (plus, minus) in spectra.items():
        plus_nz = [p for p in plus if p.energy >= sq.EPS0]
        minus_nz = [m for m in minus if m.energy >= sq.EPS0]
        out[name] = (plus_nz, minus_nz)
    return out


@pytest.fixture(scope="session")
def jc_default():
    return sq.build_jc(1.0, 0.1, 64)


@pytest.fixture(scope="session")
def jc_match(jc_default):
    return sq.numeric_vs_analytic(jc_default)


@pytest.fixture(scope="session")
def free_superpotential():
    return sq.Superpotential("free", lambda x: np.zeros_like(x), (-1, +1), "odd")
