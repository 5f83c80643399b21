"""Brute-force path-sum oracle for the discretized reduced dynamics.

The reduced-density-matrix map after N steps is summed explicitly over all
forward-backward paths:

    U_N[a_N, a_0] = sum over a_1..a_{N-1} of
        prod_j G1[a_j, a_{j-1}] * prod_{k >= k'} F(k, k')[a_k, a_{k'}]

where G1 is the whole-step system propagator and F(k, k') are influence
factors built from the eta table of the requested splitting.  The oracle is
deliberately naive (no filtering, no contraction tricks); it exists to pin
down every other object in the package at desk scale.

Structure per splitting
-----------------------
sym_env
    Path points 0..N all carry influence factors; entries touching the
    measured end N take the endpoint-flavored coefficients, everything else
    interior.  The auxiliary map replaces the endpoint-flavored entries by
    interior values of equal separation (fully translation invariant).
sym_sys
    U_N = G_half . (auxiliary of length N-1) . G_half, where the auxiliary
    joins k+1 points with whole-step propagators and uniform-window factors.
    The length-0 auxiliary is the diagonal matrix of single-point factors.
asym
    The initial point carries no influence factors at all (I_{k,0} = 1); the
    auxiliary coincides with the full map.

Path enumeration runs an odometer over the interior indices in fixed batches
and accumulates in index order, so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bath import BathSpec, EtaTable, eta_table, influence_pair_matrix, influence_self_weights
from .errors import PathSumBudgetError, ValidationError
from .liouville import LiouvilleMatrix, SystemSpec, TimeGrid, check_finite, fb_propagator

DEFAULT_BUDGET = 10**8
_BATCH = 1 << 16


@dataclass(frozen=True)
class PathSumRequest:
    """One oracle evaluation: which map, which splitting, how many steps."""

    sys: SystemSpec
    grid: TimeGrid
    splitting: str
    target: str = "full_U"
    steps: int = 1
    bath: BathSpec | None = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.target not in ("full_U", "aux_U"):
            raise ValidationError(f"unknown target {self.target!r}")
        if self.steps < 0:
            raise ValidationError("steps must be >= 0")
        if self.steps > self.grid.n_steps:
            raise ValidationError("steps exceeds grid.n_steps")


def config_count(n: int, steps: int) -> int:
    """Number of summed interior configurations, n^(2 (steps-1)), exactly."""
    if steps <= 1:
        return 1
    return (n * n) ** (steps - 1)


def _check_budget(req: PathSumRequest, steps: int):
    count = config_count(req.sys.n, steps)
    if count > req.budget:
        raise PathSumBudgetError(
            f"pathsum_budget: {count} configurations exceed budget {req.budget}"
        )


def _resolve_table(req: PathSumRequest, eta: EtaTable | None) -> EtaTable:
    if eta is not None:
        if eta.splitting != req.splitting:
            raise ValidationError(
                f"eta table is for {eta.splitting!r}, request is {req.splitting!r}"
            )
        return eta
    if req.bath is None:
        raise ValidationError("need either a bath or a prebuilt eta table")
    return eta_table(req.bath, req.grid, req.splitting)


class _FactorSet:
    """Per-point self weights and per-pair factor matrices for one path sum."""

    def __init__(self, sys, table, steps, endpoint_flavored, bare_origin):
        d = sys.dim
        self.steps = steps
        self.dim = d
        self.selfw = {}
        self.pairs = {}
        cache = {}

        def pair(sep, role):
            key = (sep, role)
            if key not in cache:
                cache[key] = influence_pair_matrix(sys, table.by_separation(sep, role))
            return cache[key]

        for j in range(steps + 1):
            if bare_origin and j == 0:
                continue
            if endpoint_flavored and j == steps and steps > 0:
                self.selfw[j] = influence_self_weights(
                    sys, table.by_separation(0, "right_endpoint")
                )
            else:
                self.selfw[j] = influence_self_weights(sys, table.by_separation(0, "self"))
        for k in range(steps + 1):
            for kp in range(k):
                if bare_origin and kp == 0:
                    continue
                if endpoint_flavored and k == steps:
                    role = "both_endpoints" if kp == 0 else "right_endpoint"
                else:
                    role = "interior"
                self.pairs[(k, kp)] = pair(k - kp, role)


def _path_sum(g1: np.ndarray, factors: _FactorSet, budget_guard) -> np.ndarray:
    """Sum the weighted paths of a factor set joined by whole-step propagators."""
    d = factors.dim
    steps = factors.steps
    if steps == 0:
        if 0 in factors.selfw:
            return np.diag(factors.selfw[0].astype(complex))
        return np.eye(d, dtype=complex)

    budget_guard(steps)

    if steps == 1:
        out = g1.copy()
        if (1, 0) in factors.pairs:
            out = out * factors.pairs[(1, 0)]
        if 1 in factors.selfw:
            out = out * factors.selfw[1][:, None]
        if 0 in factors.selfw:
            out = out * factors.selfw[0][None, :]
        return check_finite(out, "path sum")

    n_int = steps - 1
    total = d**n_int
    shape = (d,) * n_int
    out = np.zeros((d, d), dtype=complex)
    g1_flat = g1.ravel()

    for start in range(0, total, _BATCH):
        stop = min(start + _BATCH, total)
        idx = np.unravel_index(np.arange(start, stop), shape)
        # idx[j-1] holds a_j for interior points j = 1..steps-1
        a = {j: idx[j - 1] for j in range(1, steps)}
        w = np.ones(stop - start, dtype=complex)
        # interior propagator links and self weights
        for j in range(2, steps):
            w *= g1_flat[a[j] * d + a[j - 1]]
        for j in range(1, steps):
            if j in factors.selfw:
                w *= factors.selfw[j][a[j]]
        # pair factors among interior points
        for (k, kp), mat in factors.pairs.items():
            if 1 <= kp and k <= steps - 1:
                w *= mat.ravel()[a[k] * d + a[kp]]
        # left boundary block: couplings of interior points (and the first link) to a_0
        left = g1[a[1], :].copy()
        for (k, kp), mat in factors.pairs.items():
            if kp == 0 and k <= steps - 1:
                left *= mat[a[k], :]
        if 0 in factors.selfw:
            left *= factors.selfw[0][None, :]
        # right boundary block: couplings of a_N to interior points (and the last link)
        right = g1[:, a[steps - 1]].copy()
        for (k, kp), mat in factors.pairs.items():
            if k == steps and kp >= 1:
                right *= mat[:, a[kp]]
        if steps in factors.selfw:
            right *= factors.selfw[steps][:, None]
        out += (right * w[None, :]) @ left

    if (steps, 0) in factors.pairs:
        out = out * factors.pairs[(steps, 0)]
    return check_finite(out, "path sum")


def rdm_exact(req: PathSumRequest, eta: EtaTable | None = None) -> LiouvilleMatrix:
    """Exact discretized RDM map U_N by explicit path summation."""
    if req.target != "full_U":
        raise ValidationError("rdm_exact expects a full_U request")
    table = _resolve_table(req, eta)
    n_steps = req.steps
    if n_steps == 0:
        return np.eye(req.sys.dim, dtype=complex)
    guard = lambda steps: _check_budget(req, steps)

    if req.splitting == "sym_env":
        g1 = fb_propagator(req.sys, req.grid.dt)
        factors = _FactorSet(req.sys, table, n_steps, endpoint_flavored=True, bare_origin=False)
        return _path_sum(g1, factors, guard)
    if req.splitting == "asym":
        g1 = fb_propagator(req.sys, req.grid.dt)
        factors = _FactorSet(req.sys, table, n_steps, endpoint_flavored=False, bare_origin=True)
        return _path_sum(g1, factors, guard)
    if req.splitting == "sym_sys":
        g_half = fb_propagator(req.sys, 0.5 * req.grid.dt)
        aux = aux_rdm_exact(
            PathSumRequest(
                req.sys, req.grid, req.splitting, "aux_U", n_steps - 1, req.bath, req.budget
            ),
            eta=table,
        )
        return check_finite(g_half @ aux @ g_half, "dressed path sum")
    raise ValidationError(f"unknown splitting {req.splitting!r}")


def aux_rdm_exact(req: PathSumRequest, eta: EtaTable | None = None) -> LiouvilleMatrix:
    """Exact auxiliary map by explicit path summation.

    sym_sys: the inner block of the dressed map, k+1 points joined by k
    whole-step propagators, all coefficients uniform.  sym_env: same path sum
    as the full map but with every endpoint-flavored entry replaced by the
    interior value of equal separation.  asym: identical to the full map.
    """
    if req.target != "aux_U":
        raise ValidationError("aux_rdm_exact expects an aux_U request")
    table = _resolve_table(req, eta)
    k = req.steps
    guard = lambda steps: _check_budget(req, steps)
    g1 = fb_propagator(req.sys, req.grid.dt)

    if req.splitting == "asym":
        if k == 0:
            return np.eye(req.sys.dim, dtype=complex)
        factors = _FactorSet(req.sys, table, k, endpoint_flavored=False, bare_origin=True)
        return _path_sum(g1, factors, guard)
    factors = _FactorSet(req.sys, table, k, endpoint_flavored=False, bare_origin=False)
    return _path_sum(g1, factors, guard)


def oracle_trajectory(
    sys: SystemSpec,
    grid: TimeGrid,
    splitting: str,
    steps: int,
    *,
    bath: BathSpec | None = None,
    eta: EtaTable | None = None,
    budget: int = DEFAULT_BUDGET,
):
    """Full and auxiliary map sequences U_1..U_steps, (aux0, Ũ_1..Ũ_steps).

    The trailing element of the auxiliary information is the index-0
    auxiliary (single-point factor matrix), needed as the terminal of the
    midpoint hierarchy.
    """
    req0 = PathSumRequest(sys, grid, splitting, "full_U", steps, bath, budget)
    table = _resolve_table(req0, eta)
    full = []
    aux = []
    for k in range(1, steps + 1):
        req = PathSumRequest(sys, grid, splitting, "full_U", k, bath, budget)
        full.append(rdm_exact(req, eta=table))
    for k in range(1, steps + 1):
        req = PathSumRequest(sys, grid, splitting, "aux_U", k, bath, budget)
        aux.append(aux_rdm_exact(req, eta=table))
    aux0 = aux_rdm_exact(
        PathSumRequest(sys, grid, splitting, "aux_U", 0, bath, budget), eta=table
    )
    return full, aux0, aux
