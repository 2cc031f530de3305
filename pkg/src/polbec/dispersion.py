"""Plane-wave eigenproblem of the linearized double-Lambda medium.

The five slowly varying amplitudes (E+, E-, sigma_ge+, sigma_ge-, S) obey
omega*v = M(k_z, k_perp)*v after the plane-wave substitution. M is dense,
complex and 5x5; branches are tracked across a momentum grid by
eigenvector-overlap continuation and the dark branch is identified at k=0
by its vanishing excited-state content.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, HBAR
from .medium import MediumParams

AMPLITUDE_ORDER = ("e_plus", "e_minus", "sigma_plus", "sigma_minus", "s")

DARK_LABEL = "dark"


class DegenerateBranch(RuntimeError):
    """Eigenvector-overlap continuation hit a tie it refuses to break."""


class FitResidualTooLarge(RuntimeError):
    """Quadratic mass fit window is too wide for the requested accuracy."""


@dataclass(frozen=True)
class BlochMatrix:
    k_z: float
    k_perp: float
    entries: np.ndarray  # (5, 5) complex


def build_bloch_matrix(params: MediumParams, k_z: float, k_perp: float) -> BlochMatrix:
    """Assemble M for one (k_z, k_perp).

    Rows (amplitude order E+, E-, sigma+, sigma-, S):
      omega E_pm     = +-c k_z E_pm + (c/2k_p) k_perp^2 E_pm - g sqrt(n) sigma_pm
      omega sigma_pm = (Delta_pm - i gamma) sigma_pm - Omega_pm S - g sqrt(n) E_pm
      omega S        = -Omega_+ sigma_+ - Omega_- sigma_-
    """
    gn = params.g * np.sqrt(params.n)
    diff = C_LIGHT * k_perp**2 / (2.0 * params.k_p)
    m = np.zeros((5, 5), dtype=complex)
    m[0, 0] = C_LIGHT * k_z + diff
    m[1, 1] = -C_LIGHT * k_z + diff
    m[0, 2] = -gn
    m[1, 3] = -gn
    m[2, 0] = -gn
    m[3, 1] = -gn
    m[2, 2] = params.delta_plus - 1j * params.gamma
    m[3, 3] = params.delta_minus - 1j * params.gamma
    m[2, 4] = -params.omega_plus
    m[3, 4] = -params.omega_minus
    m[4, 2] = -params.omega_plus
    m[4, 3] = -params.omega_minus
    return BlochMatrix(k_z=k_z, k_perp=k_perp, entries=m)


def _normalize_vec(v: np.ndarray) -> np.ndarray:
    """Unit norm with the largest-magnitude component rotated to be real
    positive, removing the arbitrary global phase."""
    v = v / np.linalg.norm(v)
    i = int(np.argmax(np.abs(v)))
    phase = v[i] / abs(v[i])
    return v / phase


def _eigensystem(m: np.ndarray):
    w, v = np.linalg.eig(m)
    vecs = np.array([_normalize_vec(v[:, i]) for i in range(v.shape[1])])
    return w, vecs  # vecs[i] is the eigenvector of w[i]


def _dark_index_at_zero(eigvals: np.ndarray, eigvecs: np.ndarray) -> int:
    """Dark branch at k=0: eigenvalue closest to 0 among those whose
    eigenvector carries (numerically) no excited-state coherence."""
    sigma_weight = np.abs(eigvecs[:, 2]) ** 2 + np.abs(eigvecs[:, 3]) ** 2
    candidates = np.where(sigma_weight < 1e-8)[0]
    if candidates.size == 0:
        candidates = np.arange(eigvals.size)
    return int(candidates[np.argmin(np.abs(eigvals[candidates]))])


@dataclass
class BandStructure:
    k_grid: np.ndarray              # (nk,) rad/m
    omegas: np.ndarray              # (nk, 5) complex, branch-ordered
    eigenvectors: np.ndarray        # (nk, 5, 5); [i, b, :] is branch b at k_i
    labels: tuple[str, ...]         # per-branch labels, exactly one "dark"
    k_perp: float = 0.0
    dark_index: int = field(init=False)

    def __post_init__(self):
        self.dark_index = self.labels.index(DARK_LABEL)

    def dark_branch(self) -> np.ndarray:
        return self.omegas[:, self.dark_index]


def _match_branches(prev_vecs: np.ndarray, eigvals, eigvecs, tie_tol: float):
    """Assign new eigenpairs to branches by maximal overlap with the
    previous k-point's eigenvectors. Ties are an error, never guessed."""
    overlap = np.abs(prev_vecs.conj() @ eigvecs.T)  # [branch, new]
    order = np.full(5, -1, dtype=int)
    taken = np.zeros(5, dtype=bool)
    # greedy by descending best overlap keeps the assignment stable
    for branch in np.argsort(-overlap.max(axis=1)):
        row = np.where(taken, -np.inf, overlap[branch])
        best = int(np.argmax(row))
        rest = row.copy()
        rest[best] = -np.inf
        second = rest.max()
        if np.isfinite(second) and abs(row[best] - second) < tie_tol:
            raise DegenerateBranch(
                f"ambiguous branch continuation: overlaps {row[best]:.6g} vs {second:.6g}"
            )
        order[branch] = best
        taken[best] = True
    return eigvals[order], eigvecs[order]


def band_structure(
    params: MediumParams,
    k_grid: np.ndarray,
    k_perp: float = 0.0,
    tie_tol: float = 1e-6,
) -> BandStructure:
    """Diagonalize over a sorted k_z grid containing k=0 and track the five
    branches outward from k=0 by eigenvector overlap."""
    k_grid = np.asarray(k_grid, dtype=float)
    if np.any(np.diff(k_grid) <= 0):
        raise ValueError("k_grid must be strictly increasing")
    zero_hits = np.where(k_grid == 0.0)[0]
    if zero_hits.size == 0:
        raise ValueError("k_grid must contain k=0 (dark branch anchor)")
    i0 = int(zero_hits[0])

    nk = k_grid.size
    omegas = np.empty((nk, 5), dtype=complex)
    vecs = np.empty((nk, 5, 5), dtype=complex)

    w0, v0 = _eigensystem(build_bloch_matrix(params, 0.0, k_perp).entries)
    dark0 = _dark_index_at_zero(w0, v0)
    # put the dark branch at slot 0, order the rest by Re(omega)
    rest = [i for i in range(5) if i != dark0]
    rest.sort(key=lambda i: w0[i].real)
    perm = [dark0] + rest
    omegas[i0] = w0[perm]
    vecs[i0] = v0[perm]

    for direction in (+1, -1):
        prev = i0
        i = i0 + direction
        while 0 <= i < nk:
            w, v = _eigensystem(build_bloch_matrix(params, k_grid[i], k_perp).entries)
            omegas[i], vecs[i] = _match_branches(vecs[prev], w, v, tie_tol)
            prev = i
            i += direction

    labels = (DARK_LABEL,) + tuple(f"other_{j}" for j in range(1, 5))
    return BandStructure(k_grid=k_grid, omegas=omegas, eigenvectors=vecs,
                         labels=labels, k_perp=k_perp)


@dataclass(frozen=True)
class MassFit:
    curvature: complex      # C in omega ~ omega0 + a1 k + C k^2, m^2/s
    linear: complex         # a1, m/s
    m_par: complex          # hbar / (2 C), kg
    rel_residual: float


def extract_mass(band: BandStructure, max_residual: float = 1e-6) -> MassFit:
    """Least-squares quadratic fit of the dark branch through its k=0 value.

    The band must already be restricted to a small fit window (>= 7 points);
    the residual guard rejects windows wide enough for quartic terms.
    """
    k = band.k_grid
    if k.size < 7:
        raise ValueError("mass fit needs at least 7 k-points")
    omega = band.dark_branch()
    i0 = int(np.where(k == 0.0)[0][0])
    y = omega - omega[i0]
    a = np.stack([k.astype(complex), (k**2).astype(complex)], axis=1)
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    fit = a @ coef
    denom = np.linalg.norm(y)
    rel = float(np.linalg.norm(y - fit) / denom) if denom > 0 else 0.0
    if rel > max_residual:
        raise FitResidualTooLarge(
            f"relative fit residual {rel:.3e} > {max_residual:.1e}; narrow the k window"
        )
    curvature = complex(coef[1])
    return MassFit(
        curvature=curvature,
        linear=complex(coef[0]),
        m_par=HBAR / (2.0 * curvature),
        rel_residual=rel,
    )


def dark_mass_fit(
    params: MediumParams,
    k_max: float,
    n_points: int = 15,
    axis: str = "z",
    max_residual: float = 1e-6,
) -> MassFit:
    """Convenience: dedicated fine symmetric window around k=0 on the chosen
    axis ("z" sweeps k_z at k_perp=0, "perp" sweeps k_perp at k_z=0)."""
    k = np.linspace(-k_max, k_max, n_points if n_points % 2 else n_points + 1)
    k[np.argmin(np.abs(k))] = 0.0
    if axis == "z":
        band = band_structure(params, k)
    elif axis == "perp":
        # reuse the tracker with k_perp as the swept variable
        nk = k.size
        omegas = np.empty((nk, 5), dtype=complex)
        vecs = np.empty((nk, 5, 5), dtype=complex)
        i0 = int(np.where(k == 0.0)[0][0])
        w0, v0 = _eigensystem(build_bloch_matrix(params, 0.0, 0.0).entries)
        dark0 = _dark_index_at_zero(w0, v0)
        rest = [i for i in range(5) if i != dark0]
        rest.sort(key=lambda i: w0[i].real)
        perm = [dark0] + rest
        omegas[i0], vecs[i0] = w0[perm], v0[perm]
        for direction in (+1, -1):
            prev = i0
            i = i0 + direction
            while 0 <= i < nk:
                w, v = _eigensystem(build_bloch_matrix(params, 0.0, k[i]).entries)
                omegas[i], vecs[i] = _match_branches(vecs[prev], w, v, 1e-6)
                prev = i
                i += direction
        labels = (DARK_LABEL,) + tuple(f"other_{j}" for j in range(1, 5))
        band = BandStructure(k_grid=k, omegas=omegas, eigenvectors=vecs, labels=labels)
    else:
        raise ValueError("axis must be 'z' or 'perp'")
    return extract_mass(band, max_residual=max_residual)


def _cos2_theta(params: MediumParams) -> float:
    g2n = params.g**2 * params.n
    return params.omega_total_sq / (params.omega_total_sq + g2n)


def dark_curvature_closed_form(params: MediumParams) -> float:
    """Real part of the longitudinal dark-branch curvature,
    c^2 cos^2(theta) Delta / (g^2 n); gamma-free form of v_gr L_abs Delta/gamma."""
    g2n = params.g**2 * params.n
    return C_LIGHT**2 * _cos2_theta(params) * params.delta_mean / g2n


def transverse_curvature_closed_form(params: MediumParams) -> float:
    """Transverse dark-branch curvature v_gr / (2 k_p), gamma-free form."""
    return C_LIGHT * _cos2_theta(params) / (2.0 * params.k_p)


CSV_HEADER = (
    "k,branch,re_omega,im_omega,"
    "w_e_plus,w_e_minus,w_sigma_plus,w_sigma_minus,w_s"
)


def band_structure_rows(band: BandStructure):
    """Yield CSV rows (one per (k, branch)) matching CSV_HEADER."""
    for i, k in enumerate(band.k_grid):
        for b, label in enumerate(band.labels):
            w = np.abs(band.eigenvectors[i, b]) ** 2
            omega = band.omegas[i, b]
            yield (
                f"{k:.17g},{label},{omega.real:.17g},{omega.imag:.17g},"
                + ",".join(f"{x:.17g}" for x in w)
            )


def write_band_csv(band: BandStructure, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in band_structure_rows(band):
            fh.write(row + "\n")
