"""Maximization of Bell functionals and threshold searches.

The objective (functional value at given efficiency and noise fraction)
is smooth and low-dimensional but has many local maxima from the angle
periodicity, so the search is a multistart bounded Nelder-Mead simplex
seeded from a Sobol sequence.  Runs are deterministic for a fixed seed:
start points depend only on the seed and results are reduced in start
order with ties broken by the lowest start index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .bell import BellFunctional, BellValue, _check_compatible
from .scenarios import Scenario, probability_tables

# Violations smaller than this are treated as "no violation" when
# bracketing thresholds (well above roundoff, well below any genuine
# violation at the bisection resolution).
VIOLATION_CUTOFF = 1e-8


class OptimizationError(RuntimeError):
    """No multistart converged; carries per-start diagnostics."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


@dataclass(frozen=True)
class OptimOptions:
    multistarts: int = 64
    rng_seed: int = 0
    function_tolerance: float = 1e-9
    max_iterations: int = 5000
    # optional (lo, hi) arrays overriding the scenario's parameter bounds
    bounds_override: tuple | None = None

    def __post_init__(self):
        if self.multistarts < 1:
            raise ValueError("multistarts must be >= 1")
        if self.function_tolerance <= 0:
            raise ValueError("function_tolerance must be positive")

    def replace(self, **kw) -> "OptimOptions":
        from dataclasses import replace
        return replace(self, **kw)


@dataclass(frozen=True)
class ViolationResult:
    """Best point found by a multistart maximization."""

    value: BellValue  # scaled by the eta/noise the search was run at
    eta: float
    noise: float
    settings: np.ndarray
    entanglement: tuple  # resolved (a,) or (a, b), fixed or optimized
    entanglement_free: bool
    starts_converged: int
    best_duplicates: int
    best_start_index: int

    @property
    def total(self) -> float:
        return self.value.total


def _objective_parts(sc: Scenario, f: BellFunctional):
    """Term-index arrays for fast signed sums over probability tables."""
    ji, jj, jk, jl, js = (np.array(x) for x in zip(*f.joint_terms))
    sp, si, sk, ss = (np.array(x) for x in zip(*f.single_terms))
    def parts(coeffs, settings):
        joint, sa, sb = probability_tables(sc, coeffs, settings)
        j = float(np.dot(js, joint[ji, jj, jk, jl]))
        singles = np.where(sp == 0, sa[si, sk], sb[si, sk])
        return j, float(np.dot(ss, singles))
    return parts


def _search_space(sc: Scenario, fix_params, opts: OptimOptions):
    s_lo, s_hi = sc.settings_bounds()
    if fix_params is None:
        p_lo, p_hi = sc.entanglement_bounds()
        lo, hi = np.concatenate([s_lo, p_lo]), np.concatenate([s_hi, p_hi])
    else:
        fix = np.atleast_1d(np.asarray(fix_params, dtype=float))
        if fix.size != sc.n_entanglement_params:
            raise ValueError(
                f"{sc.kind} scenario takes {sc.n_entanglement_params} entanglement "
                f"parameter(s), got {fix.size}"
            )
        lo, hi = s_lo, s_hi
    if opts.bounds_override is not None:
        lo, hi = (np.asarray(b, dtype=float) for b in opts.bounds_override)
        if lo.shape != hi.shape or lo.size != s_lo.size + (0 if fix_params is not None else sc.n_entanglement_params):
            raise ValueError("bounds_override has the wrong shape")
    return lo, hi


def maximize(sc: Scenario, f: BellFunctional, eta: float = 1.0, noise: float = 0.0,
             fix_params=None, opts: OptimOptions = OptimOptions()) -> ViolationResult:
    """Maximize the functional over settings (and entanglement parameters
    unless fix_params pins them) at detection efficiency eta and noise
    fraction F.

    The objective is eta^2 * J_F + eta * S_F where J_F, S_F mix the pure
    state's parts with the maximally-mixed value linearly in F.
    """
    _check_compatible(f, sc)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"efficiency {eta} outside [0, 1]")
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise fraction {noise} outside [0, 1]")
    if noise > 0 and sc.local_dim < 3:
        raise ValueError("noise admixture is only defined for qutrit scenarios")
    n_set = sc.n_settings_params
    parts = _objective_parts(sc, f)
    d = sc.local_dim
    # maximally mixed contributions are settings-independent
    noise_j = sum(s for (_, _, _, _, s) in f.joint_terms) / d**2
    noise_s = sum(s for (_, _, _, s) in f.single_terms) / d

    fix = None if fix_params is None else np.atleast_1d(np.asarray(fix_params, dtype=float))

    def scaled_parts(x):
        if fix is None:
            coeffs = sc.schmidt_coefficients(x[n_set:])
        else:
            coeffs = sc.schmidt_coefficients(fix)
        j, s = parts(coeffs, x[:n_set])
        j = (1.0 - noise) * j + noise * noise_j
        s = (1.0 - noise) * s + noise * noise_s
        return eta * eta * j, eta * s

    def neg(x):
        j, s = scaled_parts(x)
        return -(j + s)

    lo, hi = _search_space(sc, fix_params, opts)
    sampler = qmc.Sobol(d=lo.size, scramble=True, seed=opts.rng_seed)
    # draw a full power-of-2 block (Sobol balance) and keep the first n
    n_draw = 1 << max(0, opts.multistarts - 1).bit_length()
    starts = lo + sampler.random(n_draw)[:opts.multistarts] * (hi - lo)

    best_val = -np.inf
    best_x = None
    best_idx = -1
    converged = 0
    finals = []
    diagnostics = []
    for idx, x0 in enumerate(starts):
        res = minimize(neg, x0, method="Nelder-Mead", bounds=list(zip(lo, hi)),
                       options=dict(maxiter=opts.max_iterations,
                                    fatol=opts.function_tolerance, xatol=1e-8))
        val = -res.fun
        finals.append(val)
        if res.success:
            converged += 1
        else:
            diagnostics.append((idx, res.message))
        # an iteration-capped simplex still yields a usable point; only a
        # non-finite objective disqualifies a start
        if np.isfinite(val) and val > best_val:
            best_val = val
            best_x = res.x
            best_idx = idx
    if best_x is None:
        raise OptimizationError(
            f"all {opts.multistarts} starts returned non-finite values", diagnostics)

    j, s = scaled_parts(best_x)
    settings = best_x[:n_set].copy()
    ent = tuple(fix) if fix is not None else tuple(best_x[n_set:])
    duplicates = int(sum(1 for v in finals if abs(v - best_val) <= 1e-6))
    return ViolationResult(
        value=BellValue(j, s), eta=eta, noise=noise,
        settings=settings, entanglement=ent, entanglement_free=fix is None,
        starts_converged=converged, best_duplicates=duplicates,
        best_start_index=best_idx)


def critical_efficiency(sc: Scenario, f: BellFunctional, fix_params=None,
                        opts: OptimOptions = OptimOptions(),
                        bracket=(0.5, 1.0), tol: float = 1e-4):
    """Smallest detection efficiency with a positive maximal violation.

    Bisects eta over the bracket, re-maximizing settings (and free
    entanglement parameters) at every probe.  Returns None when there is
    no violation at eta = 1.
    """
    top = maximize(sc, f, eta=bracket[1], fix_params=fix_params, opts=opts)
    if top.total <= VIOLATION_CUTOFF:
        return None
    lo, hi = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        probe = maximize(sc, f, eta=mid, fix_params=fix_params, opts=opts)
        if probe.total > VIOLATION_CUTOFF:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def closed_form_efficiency(v: BellValue):
    """Root of eta^2 J + eta S: eta* = -S / J.

    Exact when the optimal settings do not drift as eta decreases, which
    holds whenever the single-probability part is parameter-independent
    (e.g. the maximally entangled tritter state)."""
    if v.joint <= 0 or v.single >= 0:
        return None
    return -v.single / v.joint


def noise_threshold(sc: Scenario, f: BellFunctional, fix_params=None,
                    opts: OptimOptions = OptimOptions(),
                    method: str = "closed-form", tol: float = 1e-4):
    """Largest noise fraction F that still allows a violation.

    The maximally mixed contribution is settings-independent, so the
    maximal value at F is (1 - F) CH* + F CH_noise and the threshold has
    the closed form CH* / (CH* - CH_noise).  method='bisection'
    recomputes the inner maximization at every probe instead.  Returns
    None when there is no violation at F = 0.
    """
    if sc.local_dim < 3:
        raise ValueError("noise thresholds are defined for qutrit scenarios")
    base = maximize(sc, f, fix_params=fix_params, opts=opts)
    ch_star = base.total
    if ch_star <= VIOLATION_CUTOFF:
        return None
    if method == "closed-form":
        ch_noise = f.noise_value()
        if ch_noise >= 0:
            return 1.0
        return ch_star / (ch_star - ch_noise)
    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        probe = maximize(sc, f, noise=mid, fix_params=fix_params, opts=opts)
        if probe.total > VIOLATION_CUTOFF:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
