"""Eigenproblems of the partner Hamiltonians.

Solving, degeneracy pairing, the zero mode, and the intertwining maps between
partner eigenstates. Energies below EPS0 = 1e-10 count as zero modes; the
division by sqrt(E) in the intertwining maps is guarded by the same threshold.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg as sla

from .errors import DegeneracyError, SignConditionError
from .grid import Grid, Wavefunction, fix_phase, inner_product
from .operators import SusySystem, check_sign_condition

__all__ = [
    "EPS0",
    "EigenPair",
    "LevelPair",
    "DegeneracyReport",
    "solve_spectrum",
    "pair_partner_levels",
    "zero_mode",
    "zero_mode_profile_overlap",
    "intertwine_down",
    "intertwine_up",
    "align_phase",
    "operator_norm",
    "eigen_residual",
]

EPS0 = 1e-10


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its eigenstate.

    `state` is a Wavefunction when the matrix acts on a grid, otherwise a bare
    unit vector (the solver also serves abstract symmetric matrices).
    """

    energy: float
    state: Union[Wavefunction, np.ndarray]
    partner_tag: Optional[str] = None

    def amplitudes(self) -> np.ndarray:
        if isinstance(self.state, Wavefunction):
            return self.state.amplitudes
        return self.state


def _tridiagonal_bands(H: np.ndarray):
    """(diag, offdiag) if H is exactly symmetric tridiagonal, else None."""
    rows, cols = np.nonzero(H)
    if rows.size and np.max(np.abs(rows - cols)) > 1:
        return None
    e_up = np.diagonal(H, 1)
    if not np.array_equal(np.diagonal(H, -1), e_up):
        return None
    return np.diagonal(H).copy(), e_up.copy()


def solve_spectrum(
    H: np.ndarray,
    k: int,
    grid: Optional[Grid] = None,
    partner_tag: Optional[str] = None,
):
    """k lowest eigenpairs of a symmetric matrix, energies ascending.

    Exactly tridiagonal input (all factorized Hamiltonians, including the
    block-diagonal 2n x 2n one) goes through LAPACK's bisection driver, which
    resolves the near-kernel eigenvalue at machine scale instead of the
    ~eps*||H|| blur of the generic drivers. Everything else falls back to a
    dense symmetric solve. Deterministic: fixed drivers, fixed phase fix.
    """
    H = np.asarray(H)
    n = H.shape[0]
    if H.ndim != 2 or H.shape[1] != n:
        raise ValueError("H must be square")
    k = int(k)
    if not 1 <= k <= n:
        raise ValueError(f"k = {k} out of range [1, {n}]")

    bands = _tridiagonal_bands(H) if not np.iscomplexobj(H) else None
    if bands is not None:
        d, e = bands
        # tol well under any eigenvalue gap: bisection converges to machine width
        energies, vectors = sla.eigh_tridiagonal(
            d, e, select="i", select_range=(0, k - 1),
            lapack_driver="stebz", tol=1e-300,
        )
    else:
        dev = np.max(np.abs(H - H.conj().T))
        scale = np.max(np.abs(H))
        if dev > 1e-12 * max(scale, 1.0):
            raise ValueError(f"matrix is not symmetric: max |H - H^T| = {dev:.3e}")
        energies, vectors = sla.eigh(H, subset_by_index=[0, k - 1])

    pairs = []
    for j in range(k):
        v = fix_phase(vectors[:, j])
        if grid is not None:
            state = Wavefunction(grid, v / np.sqrt(grid.dx))
        else:
            state = v.copy()
            state.flags.writeable = False
        pairs.append(EigenPair(float(energies[j]), state, partner_tag))
    return pairs


@dataclass(frozen=True)
class LevelPair:
    e_plus: float
    e_minus: float
    gap: float


@dataclass(frozen=True)
class DegeneracyReport:
    """Outcome of pairing the partner spectra.

    `zero_mode_energy` is the sub-EPS0 eigenvalue of H- (the physical zero
    mode); sub-EPS0 eigenvalues of H+ are boundary-closure artifacts of the
    square factorization and land in `closure_artifacts`, excluded from
    pairing. Levels left over when one list runs out are recorded in
    `unpaired_tail` rather than treated as violations.
    """

    pairs: tuple
    zero_mode_energy: Optional[float]
    closure_artifacts: tuple
    unpaired_tail: tuple

    @property
    def max_gap(self) -> float:
        return max((p.gap for p in self.pairs), default=0.0)


def _check_ascending(values, label):
    arr = np.asarray(values, dtype=float)
    if arr.size > 1 and np.any(np.diff(arr) < 0):
        raise ValueError(f"{label} spectrum must be sorted ascending")
    return arr


def pair_partner_levels(
    spec_plus: Sequence[float], spec_minus: Sequence[float], tol: float
) -> DegeneracyReport:
    """Greedy minimal-gap matching of the nonzero partner levels.

    Both inputs ascending. A mid-stream gap above tol raises DegeneracyError
    carrying the H+ level that failed to find a partner.
    """
    plus = _check_ascending(spec_plus, "H+")
    minus = _check_ascending(spec_minus, "H-")

    plus_zero = [float(e) for e in plus if e < EPS0]
    minus_zero = [float(e) for e in minus if e < EPS0]
    plus_nz = [float(e) for e in plus if e >= EPS0]
    minus_nz = [float(e) for e in minus if e >= EPS0]

    if len(minus_zero) > 1:
        raise DegeneracyError(
            f"H- has {len(minus_zero)} eigenvalues below {EPS0}; "
            "the zero mode must be unique",
            level=minus_zero[1],
        )

    pairs = []
    for ep, em in zip(plus_nz, minus_nz):
        gap = abs(ep - em)
        if gap > tol:
            raise DegeneracyError(
                f"level {ep!r} of H+ has no partner within tol = {tol} "
                f"(nearest H- level {em!r}, gap {gap:.3e})",
                level=ep,
            )
        pairs.append(LevelPair(ep, em, gap))

    m = len(pairs)
    tail = [("plus", e) for e in plus_nz[m:]] + [("minus", e) for e in minus_nz[m:]]

    return DegeneracyReport(
        pairs=tuple(pairs),
        zero_mode_energy=minus_zero[0] if minus_zero else None,
        closure_artifacts=tuple(plus_zero),
        unpaired_tail=tuple(tail),
    )


def zero_mode(sys: SusySystem) -> Wavefunction:
    """Discrete kernel vector of B by forward recursion, normalized.

    psi_{i+1} = psi_i (1 - dx W_i) solves the first n-1 rows of B psi = 0
    exactly. The running product is kept exact by power-of-two rescaling
    (frexp/ldexp); if a factor drops to <= 0 (strong superpotentials where
    dx W > 1) the true kernel vector is zero from that node on.
    """
    if not check_sign_condition(sys.W, sys.grid):
        raise SignConditionError(
            f"superpotential {sys.W.name!r} violates the sign condition "
            "(W < 0 at x_min, W > 0 at x_max); no normalizable zero mode"
        )
    grid = sys.grid
    w = np.asarray(sys.W(grid.nodes()), dtype=float)
    dx = grid.dx
    n = grid.n_points

    mants = np.zeros(n)
    exps = np.zeros(n, dtype=np.int64)
    mants[0] = 0.5
    exps[0] = 1  # 0.5 * 2^1 = 1.0
    c, ex = 0.5, 1
    for i in range(n - 1):
        f = 1.0 - dx * w[i]
        if f <= 0.0:
            break  # kernel vector is exactly zero beyond this node
        c *= f
        m, e = np.frexp(c)
        c, ex = float(m), ex + int(e)
        mants[i + 1] = c
        exps[i + 1] = ex

    ref = int(np.max(exps[mants != 0.0]))
    amps = np.ldexp(mants, exps - ref)  # exact; far tails underflow to 0
    nrm = np.sqrt(np.sum(amps * amps) * dx)
    return Wavefunction(grid, amps / nrm)


def zero_mode_profile_overlap(sys: SusySystem) -> float:
    """Overlap of the recursion zero mode with the sampled exp(-int W) profile.

    The cumulative integral of W is taken by the trapezoid rule on the grid;
    the additive constant drops out in the normalization. Independent
    consistency oracle for zero_mode, not used to construct anything.
    """
    psi = zero_mode(sys)
    grid = sys.grid
    w = np.asarray(sys.W(grid.nodes()), dtype=float)
    cum = np.concatenate([[0.0], np.cumsum((w[1:] + w[:-1]) * (grid.dx / 2.0))])
    prof = np.exp(-(cum - np.min(cum)))
    prof /= np.sqrt(np.sum(prof * prof) * grid.dx)
    return float(np.sum(psi.amplitudes * prof) * grid.dx)


def _require_above_threshold(energy: float):
    if energy <= EPS0:
        raise ValueError(
            f"energy {energy!r} is at or below the zero-mode threshold {EPS0}; "
            "the zero mode has no partner state"
        )


def intertwine_down(sys: SusySystem, pair_plus: EigenPair) -> Wavefunction:
    """B+ psi+ / sqrt(E): the H- eigenstate paired with an H+ eigenstate.

    Returned as the literal map, neither re-normalized nor re-phased: for a
    true eigenstate the norm lands within ~1e-8 of one, and downstream
    supercharge eigenstates need exactly this relative phase.
    """
    _require_above_threshold(pair_plus.energy)
    amps = np.dot(sys.B_adj, pair_plus.amplitudes()) / np.sqrt(pair_plus.energy)
    return Wavefunction(sys.grid, amps)


def intertwine_up(sys: SusySystem, pair_minus: EigenPair) -> Wavefunction:
    """B psi- / sqrt(E), mirror of intertwine_down."""
    _require_above_threshold(pair_minus.energy)
    amps = np.dot(sys.B, pair_minus.amplitudes()) / np.sqrt(pair_minus.energy)
    return Wavefunction(sys.grid, amps)


def align_phase(mapped: Wavefunction, reference: Wavefunction) -> Wavefunction:
    """Rotate `mapped` so its overlap with `reference` is real positive."""
    ov = inner_product(mapped, reference)
    if ov == 0:
        return mapped
    if np.iscomplexobj(mapped.amplitudes):
        return Wavefunction(mapped.grid, mapped.amplitudes * (ov / abs(ov)))
    return mapped if ov.real > 0 else Wavefunction(mapped.grid, -mapped.amplitudes)


def operator_norm(H: np.ndarray) -> float:
    """Spectral norm of a symmetric matrix (largest |eigenvalue|)."""
    bands = _tridiagonal_bands(np.asarray(H))
    n = H.shape[0]
    if bands is not None:
        d, e = bands
        lo = sla.eigh_tridiagonal(d, e, select="i", select_range=(0, 0),
                                  eigvals_only=True, lapack_driver="stebz")
        hi = sla.eigh_tridiagonal(d, e, select="i", select_range=(n - 1, n - 1),
                                  eigvals_only=True, lapack_driver="stebz")
        return float(max(abs(lo[0]), abs(hi[0])))
    vals = sla.eigh(H, eigvals_only=True, subset_by_index=[n - 1, n - 1])
    lo = sla.eigh(H, eigvals_only=True, subset_by_index=[0, 0])
    return float(max(abs(vals[0]), abs(lo[0])))


def eigen_residual(H: np.ndarray, pair: EigenPair, weight: float = 1.0) -> float:
    """|| H v - E v || with the quadrature weight of the state."""
    v = pair.amplitudes()
    r = np.dot(H, v) - pair.energy * v
    return float(np.sqrt(np.real(np.vdot(r, r)) * weight))
