"""Harmonic-bath input: spectral density, correlation function, discretized
influence-functional coefficients eta(k, k'), and influence-factor matrices.

Conventions
-----------
Spectral density (ohmic with exponential cutoff):

    J(w) = (pi/2) * alpha * w * exp(-w / omega_c)

Bath correlation function:

    C(t) = (1/pi) * int_0^inf J(w) [coth(beta w / 2) cos(w t) - i sin(w t)] dw

with coth -> 1 at infinite beta, where the closed form
C(t) = (alpha/2) * omega_c^2 / (1 + i omega_c t)^2 is used instead of
quadrature.  These choices make C(0) = alpha * omega_c^2 / 2 at zero
temperature.

Discretized coefficients are double integrals of C(t - t') over the time
windows owned by each pair of path points.  Window assignment per splitting:

* ``sym_sys`` and ``asym``: step k owns [k dt, (k+1) dt) uniformly, so all
  coefficients depend on the separation k - k' only and every role tag is
  "interior"/"self".
* ``sym_env``: interior step k owns the centered window
  [k dt - dt/2, k dt + dt/2]; the step at the measured end N owns the half
  window [N dt - dt/2, N dt], which is what makes the k = N entries differ
  from interior entries of equal separation.  The initial step keeps the
  full centered window, so entries with k' = 0 carry interior values; only
  the measured end is endpoint-corrected.  This is the assignment under
  which the one-step-memory matrix hierarchies truncate exactly (see the
  kernels module).

Self entries (k = k') integrate the triangular region t' < t within one
window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import EtaMissingError, QuadratureError, ValidationError
from .liouville import LiouvilleMatrix, SystemSpec, TimeGrid

SPLITTINGS = ("sym_env", "sym_sys", "asym")
ROLES = ("interior", "self", "left_endpoint", "right_endpoint", "both_endpoints")

# Quadrature controls (pinned so golden values are reproducible).
OMEGA_CUTOFF_FACTOR = 40.0
OMEGA_NODES_START = 128
OMEGA_NODES_MAX = 32768
OMEGA_RTOL = 1e-11
WINDOW_GAUSS_ORDERS = (24, 32, 48, 64, 96, 128, 192)
WINDOW_RTOL = 1e-12


@dataclass(frozen=True)
class SpectralDensity:
    """Bath spectral density; only the ohmic-exponential family is supported."""

    kind: str
    alpha: float
    omega_c: float

    def __post_init__(self):
        if self.kind != "ohmic_exponential":
            raise ValidationError(f"unsupported spectral density kind {self.kind!r}")
        if self.alpha < 0:
            raise ValidationError("alpha must be >= 0")
        if not self.omega_c > 0:
            raise ValidationError("omega_c must be > 0")

    def value(self, omega):
        """J(omega) for omega >= 0."""
        omega = np.asarray(omega, dtype=float)
        return 0.5 * np.pi * self.alpha * omega * np.exp(-omega / self.omega_c)


@dataclass(frozen=True)
class BathSpec:
    """Spectral density plus inverse temperature (math.inf = zero temperature)."""

    spectral_density: SpectralDensity
    beta: float

    def __post_init__(self):
        if not (self.beta > 0):
            raise ValidationError("beta must be positive (use math.inf for T = 0)")


@lru_cache(maxsize=64)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def _gauss_nodes(order: int, a: float, b: float):
    x, w = _leggauss(order)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def bath_correlation(bath: BathSpec, t, rtol: float = OMEGA_RTOL):
    """Bath correlation function C(t); accepts a scalar or an array of times.

    Zero temperature uses the closed form; finite temperature integrates over
    frequency on [0, 40 omega_c] with a node-doubling Gauss rule until the
    relative change drops below ``rtol``, raising QuadratureError on failure.
    """
    sd = bath.spectral_density
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    alpha, wc = sd.alpha, sd.omega_c
    if alpha == 0.0:
        out = np.zeros(t_arr.shape, dtype=complex)
        return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out

    if math.isinf(bath.beta):
        out = 0.5 * alpha * wc**2 / (1.0 + 1j * wc * t_arr) ** 2
    else:
        # chunk so the node-by-time phase arrays stay bounded in memory
        parts = [
            _correlation_quadrature(alpha, wc, bath.beta, t_arr[i : i + 4096], rtol)
            for i in range(0, t_arr.size, 4096)
        ]
        out = np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out


def _correlation_quadrature(alpha, wc, beta, t_arr, rtol):
    big_w = OMEGA_CUTOFF_FACTOR * wc
    prev = None
    n = OMEGA_NODES_START
    while n <= OMEGA_NODES_MAX:
        omega, w = _gauss_nodes(n, 0.0, big_w)
        # (alpha/2) * w * exp(-w/wc) * [coth(beta w/2) cos(wt) - i sin(wt)]
        coth = 1.0 / np.tanh(0.5 * beta * omega)
        base = 0.5 * alpha * omega * np.exp(-omega / wc) * w
        phase = np.outer(t_arr, omega)
        vals = np.cos(phase) @ (base * coth) - 1j * (np.sin(phase) @ base)
        if prev is not None:
            scale = max(np.max(np.abs(vals)), 1e-30)
            if np.max(np.abs(vals - prev)) <= rtol * scale:
                return vals
        prev = vals
        n *= 2
    raise QuadratureError("quadrature_failed: correlation integral did not converge")


# ---------------------------------------------------------------------------
# Window integrals
# ---------------------------------------------------------------------------


def _window_pair_integral(corr, win_a, win_b):
    """Integral of C(t - t') over t in win_a, t' in win_b (disjoint windows)."""
    (a0, a1), (b0, b1) = win_a, win_b
    prev = None
    for order in WINDOW_GAUSS_ORDERS:
        x, wx = _gauss_nodes(order, a0, a1)
        y, wy = _gauss_nodes(order, b0, b1)
        c = corr(np.subtract.outer(x, y).ravel()).reshape(order, order)
        val = wx @ c @ wy
        if prev is not None and abs(val - prev) <= WINDOW_RTOL * max(1.0, abs(val)):
            return complex(val)
        prev = val
    raise QuadratureError("quadrature_failed: window integral did not converge")


def _window_self_integral(corr, win):
    """Integral of C(t - t') over the triangle t' < t within one window."""
    a0, a1 = win
    width = a1 - a0
    prev = None
    for order in WINDOW_GAUSS_ORDERS:
        u, wu = _gauss_nodes(order, 0.0, width)
        s, ws = _gauss_nodes(order, 0.0, 1.0)
        # t - t' = u * (1 - s), Jacobian u
        args = np.multiply.outer(u, 1.0 - s).ravel()
        c = corr(args).reshape(order, order)
        val = (wu * u) @ c @ ws
        if prev is not None and abs(val - prev) <= WINDOW_RTOL * max(1.0, abs(val)):
            return complex(val)
        prev = val
    raise QuadratureError("quadrature_failed: self-window integral did not converge")


# ---------------------------------------------------------------------------
# Eta tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaTable:
    """Discretized influence-functional coefficients for one splitting.

    ``entries`` maps (k, k') with 0 <= k' <= k <= horizon to eta(k, k');
    ``roles`` carries the positional role tag of each entry.  ``sep_values``
    resolves (separation, role) to the coefficient, which is what path sums
    consume; every stored entry agrees with its (separation, role) value.
    """

    splitting: str
    dt: float
    horizon: int
    entries: dict = field(repr=False)
    roles: dict = field(repr=False)
    sep_values: dict = field(repr=False)

    def __post_init__(self):
        if self.splitting not in SPLITTINGS:
            raise ValidationError(f"unknown splitting {self.splitting!r}")

    def value(self, k: int, kp: int) -> complex:
        try:
            return self.entries[(k, kp)]
        except KeyError:
            raise EtaMissingError(f"eta_missing: no entry ({k}, {kp})") from None

    def role(self, k: int, kp: int) -> str:
        return self.roles[(k, kp)]

    def by_separation(self, separation: int, role: str) -> complex:
        """The coefficient for a (separation, role) combination."""
        if role not in ROLES:
            raise EtaMissingError(f"eta_missing: unknown role {role!r}")
        try:
            return self.sep_values[(separation, role)]
        except KeyError:
            raise EtaMissingError(
                f"eta_missing: no ({separation}, {role!r}) entry"
            ) from None


def _role_sym_env(k: int, kp: int, horizon: int) -> str:
    if k == horizon and kp == 0:
        return "both_endpoints"
    if k == horizon:
        return "right_endpoint"
    if kp == 0:
        return "left_endpoint"
    if k == kp:
        return "self"
    return "interior"


def eta_table_from_correlation(corr, grid: TimeGrid, splitting: str) -> EtaTable:
    """Build an EtaTable by integrating an arbitrary correlation function.

    ``corr`` must accept an ndarray of time differences >= 0 and return the
    complex correlation values.  ``eta_table`` wires in the physical bath;
    this entry point exists so synthetic correlation functions (finite
    memory, controlled smoothness) can drive the same machinery.
    """
    if splitting not in SPLITTINGS:
        raise ValidationError(f"unknown splitting {splitting!r}")
    dt = grid.dt
    n = grid.n_steps
    h = 0.5 * dt

    entries = {}
    roles = {}
    sep_values = {}

    if splitting in ("sym_sys", "asym"):
        # Uniform windows [k dt, (k+1) dt): one value per separation.
        eta_self = _window_self_integral(corr, (0.0, dt))
        eta_sep = {
            m: _window_pair_integral(corr, (m * dt, m * dt + dt), (0.0, dt))
            for m in range(1, n + 1)
        }
        sep_values[(0, "self")] = eta_self
        for m in range(1, n + 1):
            sep_values[(m, "interior")] = eta_sep[m]
        for k in range(n + 1):
            for kp in range(k + 1):
                m = k - kp
                if m == 0:
                    entries[(k, kp)] = eta_self
                    roles[(k, kp)] = "self"
                else:
                    entries[(k, kp)] = eta_sep[m]
                    roles[(k, kp)] = "interior"
        return EtaTable(splitting, dt, n, entries, roles, sep_values)

    # sym_env: centered windows; the measured end owns the trailing half window.
    eta_self = _window_self_integral(corr, (-h, h))
    eta_sep = {
        m: _window_pair_integral(corr, (m * dt - h, m * dt + h), (-h, h))
        for m in range(1, n + 1)
    }
    eta_right_self = _window_self_integral(corr, (-h, 0.0))
    eta_right = {
        m: _window_pair_integral(corr, (m * dt - h, m * dt), (-h, h))
        for m in range(1, n + 1)
    }
    sep_values[(0, "self")] = eta_self
    sep_values[(0, "left_endpoint")] = eta_self
    sep_values[(0, "right_endpoint")] = eta_right_self
    for m in range(1, n + 1):
        sep_values[(m, "interior")] = eta_sep[m]
        sep_values[(m, "left_endpoint")] = eta_sep[m]
        sep_values[(m, "right_endpoint")] = eta_right[m]
        sep_values[(m, "both_endpoints")] = eta_right[m]
    for k in range(n + 1):
        for kp in range(k + 1):
            m = k - kp
            role = _role_sym_env(k, kp, n)
            if k == n:
                entries[(k, kp)] = eta_right_self if m == 0 else eta_right[m]
            else:
                entries[(k, kp)] = eta_self if m == 0 else eta_sep[m]
            roles[(k, kp)] = role
    return EtaTable(splitting, dt, n, entries, roles, sep_values)


def eta_table(
    bath: BathSpec, grid: TimeGrid, splitting: str, rtol: float = OMEGA_RTOL
) -> EtaTable:
    """Discretized influence coefficients for the physical bath."""

    def corr(tau):
        return np.asarray(bath_correlation(bath, tau, rtol=rtol), dtype=complex)

    return eta_table_from_correlation(corr, grid, splitting)


def eta_truncated(table: EtaTable, max_separation: int) -> EtaTable:
    """Copy of a table with every entry beyond max_separation zeroed.

    Used to construct synthetic finite-memory baths ("the IF memory spans
    max_separation time steps") for the kernel nullity dichotomy.
    """
    entries = {
        key: (val if key[0] - key[1] <= max_separation else 0.0j)
        for key, val in table.entries.items()
    }
    sep_values = {
        key: (val if key[0] <= max_separation else 0.0j)
        for key, val in table.sep_values.items()
    }
    return EtaTable(
        table.splitting, table.dt, table.horizon, entries, dict(table.roles), sep_values
    )


# ---------------------------------------------------------------------------
# Influence-factor matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InfluenceFactorMatrix:
    """Pairwise (or, for separation 0, diagonal self-weight) influence factors.

    matrix[alpha, alpha'] = exp(-ds_alpha * (eta * s+_alpha' - conj(eta) * s-_alpha'))
    with ds_alpha = s+_alpha - s-_alpha.  ``diagonal`` flags the separation-0
    representation, whose only nonzero entries are the per-pair self weights
    on the diagonal.
    """

    separation: int
    role: str
    matrix: LiouvilleMatrix
    diagonal: bool


def _fb_coupling_values(sys: SystemSpec):
    s = np.asarray(sys.coupling_eigenvalues, dtype=float)
    s_fwd = np.repeat(s, sys.n)
    s_bwd = np.tile(s, sys.n)
    return s_fwd, s_bwd


def influence_self_weights(sys: SystemSpec, eta: complex) -> np.ndarray:
    """Length-n^2 vector of single-point influence weights exp(-ds(eta s+ - eta* s-))."""
    s_fwd, s_bwd = _fb_coupling_values(sys)
    ds = s_fwd - s_bwd
    return np.exp(-ds * (eta * s_fwd - np.conj(eta) * s_bwd))


def influence_pair_matrix(sys: SystemSpec, eta: complex) -> np.ndarray:
    """(n^2, n^2) matrix of pairwise influence factors for one coefficient."""
    s_fwd, s_bwd = _fb_coupling_values(sys)
    ds = s_fwd - s_bwd
    return np.exp(-np.outer(ds, eta * s_fwd - np.conj(eta) * s_bwd))


def influence_factor_matrix(
    sys: SystemSpec, table: EtaTable, separation: int, role: str
) -> InfluenceFactorMatrix:
    """Influence-factor matrix for a stored (separation, role) coefficient."""
    eta = table.by_separation(separation, role)
    if separation == 0:
        weights = influence_self_weights(sys, eta)
        return InfluenceFactorMatrix(separation, role, np.diag(weights), True)
    return InfluenceFactorMatrix(separation, role, influence_pair_matrix(sys, eta), False)


# ---------------------------------------------------------------------------
# Synthetic correlation functions
# ---------------------------------------------------------------------------


def bump_correlation(re_amp: float, im_amp: float, support: float):
    """An infinitely smooth correlation function supported on [0, support].

    C(u) = (re_amp - i im_amp u / support) * exp(1 - 1 / (1 - (u/support)^2))
    for 0 <= u < support and 0 beyond; every derivative vanishes at the
    support edge and Im C(0) = 0.  Influence coefficients built from it
    vanish identically beyond a known separation, which makes truncated
    kernel propagation exact; used for discretization-order studies.
    """
    if not support > 0:
        raise ValidationError("support must be positive")

    def corr(tau):
        tau = np.asarray(tau, dtype=float)
        x = tau / support
        inside = (x >= 0.0) & (x < 1.0)
        xc = np.where(inside, x, 0.0)
        with np.errstate(divide="ignore", over="ignore"):
            profile = np.where(inside, np.exp(1.0 - 1.0 / np.maximum(1.0 - xc * xc, 1e-300)), 0.0)
        out = (re_amp - 1j * im_amp * xc) * profile
        return out.astype(complex)

    return corr
