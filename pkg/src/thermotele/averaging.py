"""Brute-force input-state averages of the teleportation protocol.

The input qubit sqrt(a2)|0> + sqrt(1-a2) e^{i g}|1> is drawn uniformly in
(a2, g) over [0,1] x [0,2pi) with density 1/2pi (NOT uniform on the Bloch
sphere).  For every measurement outcome j and correction set this module
averages, by deterministic quadrature,

    qbar_j      = E[Q_j]                 (success rate of outcome j)
    fbar_j      = E[F_j Q_j] / E[Q_j]    (postselected efficiency)
    fbar_det    = E[sum_j F_j Q_j]       (deterministic efficiency)

Both Q_j and F_j Q_j are trigonometric polynomials of degree <= 2 in the
input phase g and polynomials of degree <= 2 in a2, so the default
Gauss-Legendre x uniform grid integrates them exactly; doubling the node
counts only moves results at roundoff level.

These averages define ground truth for every closed-form expression in
the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .densmat import DensityMatrix
from .teleport import CORRECTION_KEYS, CorrectionLabel, _U_BY_KEY

SET_ORDER = tuple(CorrectionLabel)

# below this average probability a conditional fidelity is undefined
UNDEFINED_QBAR = 1e-14

# |B_j(phi)> = cos(phi) * C_j + sin(phi) * S_j as 2x2 coefficient matrices
# over (qubit-1, qubit-2) indices
_BELL_COS = np.zeros((4, 2, 2))
_BELL_SIN = np.zeros((4, 2, 2))
_BELL_COS[0, 0, 0] = 1.0
_BELL_SIN[0, 1, 1] = 1.0
_BELL_COS[1, 1, 1] = -1.0
_BELL_SIN[1, 0, 0] = 1.0
_BELL_COS[2, 0, 1] = 1.0
_BELL_SIN[2, 1, 0] = 1.0
_BELL_COS[3, 1, 0] = -1.0
_BELL_SIN[3, 0, 1] = 1.0


@lru_cache(maxsize=32)
def _gauss_legendre_01(n: int):
    """Gauss-Legendre nodes and weights mapped to [0, 1] (weights sum to 1)."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Legendre nodes in a2, equally spaced nodes in the phase g."""

    n_alpha: int = 64
    n_gamma: int = 64

    def __post_init__(self):
        if self.n_alpha < 2 or self.n_gamma < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    def alpha_nodes(self):
        return _gauss_legendre_01(self.n_alpha)

    def gamma_nodes(self):
        g = 2.0 * np.pi * np.arange(self.n_gamma) / self.n_gamma
        w = np.full(self.n_gamma, 1.0 / self.n_gamma)
        return g, w


DEFAULT_GRID = QuadratureGrid()


@dataclass(frozen=True)
class AveragedQuantities:
    """Input-averaged success rates and fidelities at one basis angle.

    ``fbar_cond[j, e]`` is indexed by outcome j (rows, j = 1..4) and
    correction-set label e in ``SET_ORDER`` columns; entries with
    qbar below ``UNDEFINED_QBAR`` are NaN with ``defined`` False.
    Standard errors are populated by the Monte Carlo estimator only.
    """

    phi: float
    qbar: np.ndarray
    fbar_cond: np.ndarray
    fbar_det: np.ndarray
    defined: np.ndarray
    qbar_stderr: np.ndarray | None = None
    fbar_cond_stderr: np.ndarray | None = None
    fbar_det_stderr: np.ndarray | None = None

    def det_for(self, label: CorrectionLabel) -> float:
        return float(self.fbar_det[SET_ORDER.index(CorrectionLabel(label))])

    def cond_for(self, j: int, label: CorrectionLabel) -> float:
        return float(self.fbar_cond[j - 1, SET_ORDER.index(CorrectionLabel(label))])


def _channel_array(channel) -> np.ndarray:
    ch = channel.mat if isinstance(channel, DensityMatrix) else np.asarray(channel, dtype=complex)
    if ch.shape != (4, 4):
        raise ValueError("channel must be a 4x4 density matrix")
    return ch


def _state_batch(alpha_sq: np.ndarray, gamma: np.ndarray):
    """Kets and pure density matrices for a batch of input coordinates."""
    a = np.sqrt(alpha_sq)
    b = np.sqrt(1.0 - alpha_sq) * np.exp(1j * gamma)
    kets = np.stack([a.astype(complex), b], axis=1)
    rho = np.einsum("ai,aj->aij", kets, kets.conj())
    return kets, rho


def _grid_batch(grid: QuadratureGrid):
    a2, wa = grid.alpha_nodes()
    g, wg = grid.gamma_nodes()
    alpha_sq = np.repeat(a2, grid.n_gamma)
    gamma = np.tile(g, grid.n_alpha)
    weights = np.repeat(wa, grid.n_gamma) * np.tile(wg, grid.n_alpha)
    return weights, alpha_sq, gamma


def _rotated_kets(kets: np.ndarray):
    """kets premultiplied by U^dagger for each distinct correction Pauli."""
    return {key: kets @ u.conj() for key, u in _U_BY_KEY.items()}


def _reduce(weights, kets_rot, energy):
    """Weighted sums of Tr E and <psi|U E U^dag|psi> over the state batch."""
    qbar = float(np.einsum("a,aww->", weights, energy).real)
    nums = {}
    for key, kr in kets_rot.items():
        nums[key] = float(
            np.einsum("a,aw,awv,av->", weights, kr.conj(), energy, kr).real
        )
    return qbar, nums


def _assemble(qbar, nums):
    qbar = np.asarray(qbar)
    joint = np.array(
        [[nums[j][CORRECTION_KEYS[lab][j]] for lab in SET_ORDER] for j in range(4)]
    )
    fbar_det = joint.sum(axis=0)
    defined = qbar >= UNDEFINED_QBAR
    with np.errstate(divide="ignore", invalid="ignore"):
        fbar_cond = np.where(defined[:, None], joint / qbar[:, None], np.nan)
    return qbar, joint, fbar_det, defined, fbar_cond


def _average_on_batch(channel, phi, weights, alpha_sq, gamma):
    ch_t = _channel_array(channel).reshape(2, 2, 2, 2)
    kets, rho_in = _state_batch(alpha_sq, gamma)
    rot = _rotated_kets(kets)
    c, s = np.cos(phi), np.sin(phi)
    qbar = np.empty(4)
    nums = []  # per outcome: dict pauli-key -> E[F Q]
    for j in range(4):
        coeff = c * _BELL_COS[j] + s * _BELL_SIN[j]
        energy = np.einsum(
            "kl,mn,akm,lwnv->awv", coeff, coeff.conj(), rho_in, ch_t, optimize=True
        )
        qbar[j], num_j = _reduce(weights, rot, energy)
        nums.append(num_j)
    return qbar, nums


def average_all(channel, phi: float, grid: QuadratureGrid = DEFAULT_GRID) -> AveragedQuantities:
    """Quadrature averages of the full protocol at basis angle ``phi``.

    Conditional fidelities are computed strictly as the ratio of the two
    integrals E[F_j Q_j] / E[Q_j], never as a pointwise average of F_j.
    """
    if grid.n_alpha < 8 or grid.n_gamma < 8:
        raise ValueError("average_all requires at least 8 nodes per axis")
    weights, alpha_sq, gamma = _grid_batch(grid)
    qbar, nums = _average_on_batch(channel, phi, weights, alpha_sq, gamma)
    qbar, _, fbar_det, defined, fbar_cond = _assemble(qbar, nums)
    return AveragedQuantities(
        phi=float(phi),
        qbar=qbar,
        fbar_cond=fbar_cond,
        fbar_det=fbar_det,
        defined=defined,
    )


def average_all_montecarlo(
    channel, phi: float, samples: int, seed: int
) -> AveragedQuantities:
    """Monte Carlo estimate of the same averages, with standard errors.

    Sampling uses numpy's seeded PCG64 generator, so a fixed seed
    reproduces the output bit for bit.  Conditional-fidelity errors come
    from the delta method for the ratio estimator.
    """
    if samples < 1000:
        raise ValueError("use at least 1000 Monte Carlo samples")
    rng = np.random.default_rng(seed)
    alpha_sq = rng.uniform(0.0, 1.0, samples)
    gamma = rng.uniform(0.0, 2.0 * np.pi, samples)
    ch_t = _channel_array(channel).reshape(2, 2, 2, 2)
    kets, rho_in = _state_batch(alpha_sq, gamma)
    rot = _rotated_kets(kets)
    c, s = np.cos(phi), np.sin(phi)

    q_samples = np.empty((4, samples))
    fq_samples = {}  # (j, pauli-key) -> per-sample F_j Q_j
    for j in range(4):
        coeff = c * _BELL_COS[j] + s * _BELL_SIN[j]
        energy = np.einsum(
            "kl,mn,akm,lwnv->awv", coeff, coeff.conj(), rho_in, ch_t, optimize=True
        )
        q_samples[j] = np.einsum("aww->a", energy).real
        for key, kr in rot.items():
            fq_samples[(j, key)] = np.einsum(
                "aw,awv,av->a", kr.conj(), energy, kr
            ).real

    qbar = q_samples.mean(axis=1)
    qbar_se = q_samples.std(axis=1, ddof=1) / np.sqrt(samples)

    joint = np.empty((4, 4))
    joint_samples = np.empty((4, 4, samples))
    for j in range(4):
        for e, lab in enumerate(SET_ORDER):
            fq = fq_samples[(j, CORRECTION_KEYS[lab][j])]
            joint_samples[j, e] = fq
            joint[j, e] = fq.mean()

    defined = qbar >= UNDEFINED_QBAR
    with np.errstate(divide="ignore", invalid="ignore"):
        fbar_cond = np.where(defined[:, None], joint / qbar[:, None], np.nan)
    cond_se = np.full((4, 4), np.nan)
    for j in range(4):
        if not defined[j]:
            continue
        for e in range(4):
            resid = joint_samples[j, e] - fbar_cond[j, e] * q_samples[j]
            cond_se[j, e] = np.sqrt(resid.var(ddof=1) / samples) / qbar[j]

    det_samples = joint_samples.sum(axis=0)
    fbar_det = det_samples.mean(axis=1)
    det_se = det_samples.std(axis=1, ddof=1) / np.sqrt(samples)

    return AveragedQuantities(
        phi=float(phi),
        qbar=qbar,
        fbar_cond=fbar_cond,
        fbar_det=fbar_det,
        defined=defined,
        qbar_stderr=qbar_se,
        fbar_cond_stderr=cond_se,
        fbar_det_stderr=det_se,
    )


class HarmonicAverages:
    """The same quadrature averages, organized by their exact phi dependence.

    For every outcome the projected operator is quadratic in
    (cos phi, sin phi), so each averaged quantity is exactly

        u * cos(phi)**2 + v * sin(phi)**2 + s * cos(phi) sin(phi).

    The three coefficient tables are quadrature sums over the same input
    grid as :func:`average_all`; evaluating at any angle then costs a few
    flops, which makes dense angle scans over the oracle cheap.
    """

    def __init__(self, channel, grid: QuadratureGrid = DEFAULT_GRID):
        if grid.n_alpha < 8 or grid.n_gamma < 8:
            raise ValueError("HarmonicAverages requires at least 8 nodes per axis")
        self.grid = grid
        ch_t = _channel_array(channel).reshape(2, 2, 2, 2)
        weights, alpha_sq, gamma = _grid_batch(grid)
        kets, rho_in = _state_batch(alpha_sq, gamma)
        rot = _rotated_kets(kets)

        self._q_coef = np.empty((3, 4))  # (harmonic, outcome)
        self._joint_coef = np.empty((3, 4, 4))  # (harmonic, outcome, set)
        for j in range(4):
            cos_m, sin_m = _BELL_COS[j], _BELL_SIN[j]
            pieces = (
                (cos_m, cos_m, None),
                (sin_m, sin_m, None),
                (cos_m, sin_m, sin_m),  # cross term, symmetrized below
            )
            for h, (m1, m2, m3) in enumerate(pieces):
                energy = np.einsum(
                    "kl,mn,akm,lwnv->awv", m1, m2.conj(), rho_in, ch_t, optimize=True
                )
                if m3 is not None:
                    energy = energy + np.einsum(
                        "kl,mn,akm,lwnv->awv", m3, m1.conj(), rho_in, ch_t, optimize=True
                    )
                q, nums = _reduce(weights, rot, energy)
                self._q_coef[h, j] = q
                for e, lab in enumerate(SET_ORDER):
                    self._joint_coef[h, j, e] = nums[CORRECTION_KEYS[lab][j]]

    @staticmethod
    def _harmonics(phi):
        phi = np.asarray(phi, dtype=float)
        c, s = np.cos(phi), np.sin(phi)
        return np.stack([c * c, s * s, c * s], axis=-1)

    def qbar(self, phi):
        """Success rates; shape phi.shape + (4,)."""
        return self._harmonics(phi) @ self._q_coef

    def joint(self, phi):
        """E[F_j Q_j] per outcome and set; shape phi.shape + (4, 4)."""
        h = self._harmonics(phi)
        return np.einsum("...h,hje->...je", h, self._joint_coef)

    def det_values(self, phi):
        """Deterministic efficiency per set; shape phi.shape + (4,)."""
        return self.joint(phi).sum(axis=-2)

    def pair_probability(self, phi, pair=(1, 4)):
        q = self.qbar(phi)
        return q[..., pair[0] - 1] + q[..., pair[1] - 1]

    def pair_cond(self, phi, pair=(1, 4)):
        """Postselected efficiency of an outcome pair, per set.

        Undefined angles (vanishing pair probability) come back NaN.
        """
        jn = self.joint(phi)
        num = jn[..., pair[0] - 1, :] + jn[..., pair[1] - 1, :]
        den = self.pair_probability(phi, pair)[..., None]
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(den >= UNDEFINED_QBAR, num / den, np.nan)

    def at(self, phi: float) -> AveragedQuantities:
        """Package the averages at one angle like :func:`average_all`."""
        qbar = self.qbar(float(phi))
        joint = self.joint(float(phi))
        defined = qbar >= UNDEFINED_QBAR
        with np.errstate(divide="ignore", invalid="ignore"):
            fbar_cond = np.where(defined[:, None], joint / qbar[:, None], np.nan)
        return AveragedQuantities(
            phi=float(phi),
            qbar=qbar,
            fbar_cond=fbar_cond,
            fbar_det=joint.sum(axis=0),
            defined=defined,
        )
