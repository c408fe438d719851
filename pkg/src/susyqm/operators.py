"""Discrete SUSY factorization.

B = (D_fwd + W)/sqrt(2) with the forward difference (D psi)_i =
(psi_{i+1} - psi_i)/dx and Dirichlet closure on the last row. B_adj is the
literal matrix transpose, so H+ = B B_adj and H- = B_adj B are exactly
isospectral on nonzero eigenvalues as a matrix-level theorem, not just in the
dx -> 0 limit. The partner Hamiltonians are stored as the literal products.

One consequence worth knowing: the square bidiagonal B has nonzero diagonal
(W_i - 1/dx never vanishes for bounded W on a fine grid), hence is invertible,
hence H+ and H- are similar and share even the near-zero eigenvalue. The H+
copy is a boundary-closure artifact whose eigenvector hugs the wall; the
spectral module classifies it separately from the physical zero mode.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IndeterminateSignError
from .grid import Grid
from .superpotentials import Superpotential

__all__ = [
    "SusySystem",
    "build_annihilator",
    "build_susy_system",
    "build_susy_hamiltonian",
    "build_supercharges",
    "witten_parity",
    "check_sign_condition",
    "matrix_to_csv",
]

SQRT2 = np.sqrt(2.0)


def build_annihilator(W: Superpotential, grid: Grid) -> np.ndarray:
    """Dense matrix of B = (D_fwd + diag(W(x_i)))/sqrt(2)."""
    x = grid.nodes()
    w = np.asarray(W(x), dtype=float)
    if not np.all(np.isfinite(w)):
        bad = x[~np.isfinite(w)][0]
        raise ValueError(f"superpotential {W.name!r} is not finite at x = {bad}")
    n = grid.n_points
    inv_dx = 1.0 / grid.dx
    B = np.diag(w - inv_dx)
    idx = np.arange(n - 1)
    B[idx, idx + 1] = inv_dx  # Dirichlet: the last row keeps only the diagonal
    B /= SQRT2
    return B


@dataclass(frozen=True)
class SusySystem:
    """Grid, superpotential, B, its adjoint, and the partner Hamiltonians."""

    grid: Grid
    W: Superpotential
    B: np.ndarray
    B_adj: np.ndarray
    H_plus: np.ndarray
    H_minus: np.ndarray


def build_susy_system(W: Superpotential, grid: Grid) -> SusySystem:
    B = build_annihilator(W, grid)
    B_adj = B.T.copy()
    # literal products; with B_adj = B.T these come out exactly symmetric
    H_plus = np.dot(B, B_adj)
    H_minus = np.dot(B_adj, B)
    for M in (B, B_adj, H_plus, H_minus):
        M.flags.writeable = False
    return SusySystem(grid, W, B, B_adj, H_plus, H_minus)


def build_susy_hamiltonian(sys: SusySystem) -> np.ndarray:
    """2n x 2n block-diagonal diag(H+, H-), spin-up block first."""
    n = sys.grid.n_points
    H = np.zeros((2 * n, 2 * n))
    H[:n, :n] = sys.H_plus
    H[n:, n:] = sys.H_minus
    return H


def build_supercharges(sys: SusySystem):
    """Q1 = [[0, B], [B+, 0]] and Q2 = [[0, -iB], [iB+, 0]], both Hermitian."""
    n = sys.grid.n_points
    Q1 = np.zeros((2 * n, 2 * n))
    Q1[:n, n:] = sys.B
    Q1[n:, :n] = sys.B_adj
    Q2 = np.zeros((2 * n, 2 * n), dtype=complex)
    Q2[:n, n:] = -1j * sys.B
    Q2[n:, :n] = 1j * sys.B_adj
    return Q1, Q2


def witten_parity(n: int) -> np.ndarray:
    """diag(I_n, -I_n); anticommutes with both supercharges."""
    P = np.eye(2 * n)
    P[n:, n:] *= -1.0
    return P


def check_sign_condition(W: Superpotential, grid: Grid) -> bool:
    """True iff W < 0 at x_min and W > 0 at x_max (normalizable zero mode)."""
    w_lo = float(W(grid.x_min))
    w_hi = float(W(grid.x_max))
    if w_lo == 0.0 or w_hi == 0.0:
        raise IndeterminateSignError(
            f"W({W.name!r}) vanishes at a boundary node, sign condition indeterminate"
        )
    return w_lo < 0.0 < w_hi


def matrix_to_csv(M: np.ndarray) -> str:
    """Debug export: one CSV row per matrix row, 17 significant digits."""
    M = np.asarray(M)
    if np.iscomplexobj(M):
        rows = (",".join(f"{v.real:.17g}{v.imag:+.17g}j" for v in row) for row in M)
    else:
        rows = (",".join(f"{v:.17g}" for v in row) for row in M)
    return "\n".join(rows) + "\n"
