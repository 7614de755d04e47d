"""Potential-well geometry: embedding constants, the barrier function
Lambda, the thresholds derived from it, and classification of initial data.

All scalar roots in this module are simple roots of monotone functions, so
plain bisection driven to relative 1e-14 is both robust and cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .diagnostics import sign_functional, source_norms, total_energy
from .errors import DeltaOutOfRange, NoConvergence, ZeroState
from .grid import Grid1D, State, grad, grad_norm_sq, lp_norm_pow, quadratic_form
from .params import Exponents, MaterialParams

CLASSIFICATIONS = ("global-predicted", "blowup-predicted",
                   "blowup-predicted-negative", "indeterminate")


# ---------------------------------------------------------------------------
# discrete constants of the grid

def poincare_constant(grid: Grid1D, tol: float = 1e-14,
                      max_iter: int = 10000) -> float:
    """Best constant c with ||u||_2 <= c ||u_x||_2 for grid functions u(0)=0.

    c = 1/sqrt(lambda_min) of the generalized eigenproblem K u = lambda W u
    on the free nodes, with K the gradient stiffness matrix and W the
    trapezoid mass.  Solved by inverse power iteration on K^{-1} W.
    """
    n = grid.nx - 1           # free nodes 1..nx-1
    dx = grid.dx
    # K = dx * G^T G with G the forward-difference map including the
    # boundary cell attached to the clamped node.
    main = np.full(n, 2.0 / dx)
    main[-1] = 1.0 / dx
    off = np.full(n - 1, -1.0 / dx)
    k = sp.diags([off, main, off], [-1, 0, 1], format="csc")
    w = grid.weights[1:]
    solve = spla.splu(k).solve
    rng = np.random.default_rng(0)
    u = rng.standard_normal(n)
    lam = np.inf
    for _ in range(max_iter):
        u = solve(w * u)
        u /= np.sqrt(np.dot(w, u * u))
        lam_new = np.dot(u, k @ u) / np.dot(w, u * u)
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return 1.0 / np.sqrt(lam_new)
        lam = lam_new
    raise NoConvergence("Poincare power iteration stalled")


def _embedding_quotient(u: np.ndarray, q: float, grid: Grid1D) -> float:
    g = grad(u, grid)
    gn = grid.dx * np.dot(g, g)
    if gn == 0.0:
        return 0.0
    return float(np.dot(grid.weights, np.abs(u) ** q) / gn ** (q / 2.0))


def _stiffness_solve(grid: Grid1D):
    """Factorized solver for the free-node gradient stiffness matrix."""
    n = grid.nx - 1
    dx = grid.dx
    main = np.full(n, 2.0 / dx)
    main[-1] = 1.0 / dx
    off = np.full(n - 1, -1.0 / dx)
    k = sp.diags([off, main, off], [-1, 0, 1], format="csc")
    return spla.splu(k).solve


def embedding_constant(grid: Grid1D, q: float, restarts: int = 16,
                       iters: int = 500, step0: float = 0.5,
                       seed: int = 0) -> float:
    """Best discrete constant B = sup ||u||_q^q / ||grad u||_2^q, u(0) = 0.

    Projected-gradient ascent on the unit gradient sphere, preconditioned
    by the stiffness inverse (the natural gradient for this constraint),
    with backtracking and random smooth restarts.  The returned value is
    the best over all restarts, hence a certified lower bound on the
    discrete supremum.
    """
    if not 2.0 <= q < 7.0:
        raise ValueError(f"q = {q} outside the supported range [2, 7)")
    rng = np.random.default_rng(seed)
    solve = _stiffness_solve(grid)
    x = grid.nodes
    best = 0.0
    for _ in range(restarts):
        # smooth random start: a few low modes plus a ramp
        u = x / grid.L + sum(
            c * np.sin((k - 0.5) * np.pi * x / grid.L)
            for k, c in enumerate(rng.standard_normal(4), start=1))
        u[0] = 0.0
        u /= np.sqrt(max(grad_norm_sq(u, grid), 1e-300))
        val = _embedding_quotient(u, q, grid)
        step = step0
        for _ in range(iters):
            # natural-gradient direction for ||u||_q^q on the sphere
            d = q * grid.weights * np.abs(u) ** (q - 1.0) * np.sign(u)
            g = np.zeros(grid.nx)
            g[1:] = solve(d[1:])
            gn = np.sqrt(grad_norm_sq(g, grid))
            if gn == 0.0:
                break
            trial = u + step * g / gn
            trial[0] = 0.0
            trial /= np.sqrt(grad_norm_sq(trial, grid))
            tval = _embedding_quotient(trial, q, grid)
            if tval > val * (1.0 + 1e-15):
                u, val = trial, tval
                step = min(step * 1.3, 2.0)
            else:
                step *= 0.5
                if step < 1e-12:
                    break
        best = max(best, val)
    return best


def c_hat_constant(b1: float, b2: float, params: MaterialParams,
                   n1: float, n2: float) -> float:
    """C_hat = max{B1 M^((n1+1)/2), B2 M^((n2+1)/2)},
    M = max{(2 gamma^2 + 1)/alpha1, 2/beta}."""
    m = max((2.0 * params.gamma ** 2 + 1.0) / params.alpha1, 2.0 / params.beta)
    return max(b1 * m ** ((n1 + 1.0) / 2.0), b2 * m ** ((n2 + 1.0) / 2.0))


# ---------------------------------------------------------------------------
# scalar barrier analysis

def lambda_fn(s, c_hat_const: float, n1: float, n2: float):
    """Lambda(s) = s/2 - C s^((n1+1)/2)/(n1+1) - C s^((n2+1)/2)/(n2+1)."""
    s = np.asarray(s, dtype=float)
    return (0.5 * s
            - c_hat_const * s ** ((n1 + 1.0) / 2.0) / (n1 + 1.0)
            - c_hat_const * s ** ((n2 + 1.0) / 2.0) / (n2 + 1.0))


def lambda_prime(s, c_hat_const: float, n1: float, n2: float):
    s = np.asarray(s, dtype=float)
    return 0.5 - 0.5 * c_hat_const * (s ** ((n1 - 1.0) / 2.0)
                                      + s ** ((n2 - 1.0) / 2.0))


def _bisect_increasing(f, lo, hi, rel_tol=1e-15, max_iter=200):
    """Root of increasing f with f(lo) < 0 < f(hi)."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            break
    return 0.5 * (lo + hi)


def s_star_solve(c_hat_const: float, n1: float, n2: float):
    """Unique positive zero s* of Lambda', and the barrier height Lambda(s*)."""
    if c_hat_const <= 0 or n1 <= 1 or n2 <= 1:
        raise ValueError("need C_hat > 0 and n1, n2 > 1")

    def h(s):
        return 0.5 * c_hat_const * (s ** ((n1 - 1.0) / 2.0)
                                    + s ** ((n2 - 1.0) / 2.0)) - 0.5

    hi = 1.0
    while h(hi) < 0.0:
        hi *= 2.0
    s_star = _bisect_increasing(h, 0.0, hi)
    resid = abs(lambda_prime(s_star, c_hat_const, n1, n2))
    if resid > 1e-12:
        raise NoConvergence(f"Lambda'(s*) = {resid:.3g} > 1e-12")
    return s_star, float(lambda_fn(s_star, c_hat_const, n1, n2))


def y0_and_threshold(c_hat_const: float, n1: float, n2: float, c_hat: float):
    """y0 solving C(2y)^((n1-1)/2) + C(2y)^((n2-1)/2) = 1 (i.e. y0 = s*/2),
    and the blow-up energy threshold M = (c-2) y0 / (2(2+c))."""

    def h(y):
        return (c_hat_const * ((2.0 * y) ** ((n1 - 1.0) / 2.0)
                               + (2.0 * y) ** ((n2 - 1.0) / 2.0)) - 1.0)

    hi = 1.0
    while h(hi) < 0.0:
        hi *= 2.0
    y0 = _bisect_increasing(h, 0.0, hi)
    m_threshold = (c_hat - 2.0) / (2.0 * (2.0 + c_hat)) * y0
    return y0, m_threshold


def nehari_lambda_star(state: State, params: MaterialParams, exps: Exponents,
                       grid: Grid1D):
    """Scaling lambda* > 0 putting (lambda v, lambda p) on the Nehari set.

    Returns (lambda*, J at the maximum).  The ray potential
    phi(l) = l^2 Q/2 - l^(n1+1) a/(n1+1) - l^(n2+1) b/(n2+1) has a unique
    interior maximum; phi'' < 0 there is re-checked.
    """
    q = quadratic_form(state.v, state.p, grid, params)
    a, b = source_norms(state, exps, grid)
    if q <= 0.0 or a + b <= 0.0:
        raise ZeroState("Nehari projection needs a nonzero displacement pair")
    n1, n2 = exps.n1, exps.n2

    # Q = l^(n1-1) a + l^(n2-1) b, RHS increasing from 0
    def h(l):
        return l ** (n1 - 1.0) * a + l ** (n2 - 1.0) * b - q

    hi = 1.0
    while h(hi) < 0.0:
        hi *= 2.0
    lo = hi / 2.0 if hi > 1.0 else 0.0
    lam = _bisect_increasing(h, lo, hi)
    phi = (0.5 * lam ** 2 * q - lam ** (n1 + 1.0) * a / (n1 + 1.0)
           - lam ** (n2 + 1.0) * b / (n2 + 1.0))
    phi2 = q - n1 * lam ** (n1 - 1.0) * a - n2 * lam ** (n2 - 1.0) * b
    if not phi2 < 0.0:
        raise NoConvergence(f"phi''(lambda*) = {phi2:.3g} not negative")
    return lam, phi


def check_delta(delta: float, s_star: float, c_hat_const: float,
                n1: float, n2: float) -> dict:
    """Admissibility of the margin delta for the decay estimates.

    C_tilde(delta) = C[(s*-d)^((n1-1)/2) + (s*-d)^((n2-1)/2)]; delta is
    admissible when C_tilde times the exponent-asymmetry factor stays
    below 1.  Also reports the resulting absorption constant C(delta).
    """
    if not 0.0 < delta < s_star:
        raise DeltaOutOfRange(f"delta = {delta} not in (0, {s_star:.6g})")
    s = s_star - delta
    c_tilde = c_hat_const * (s ** ((n1 - 1.0) / 2.0) + s ** ((n2 - 1.0) / 2.0))
    factor = max((n2 + 1.0) * (n1 - 1.0) / ((n2 - 1.0) * (n1 + 1.0)),
                 (n1 + 1.0) * (n2 - 1.0) / ((n1 - 1.0) * (n2 + 1.0)))
    c_hat = min(n1 + 1.0, n2 + 1.0)
    c_delta = (2.0 * c_hat / (c_hat - 2.0)) * c_hat_const * (
        (0.5 - 1.0 / (n1 + 1.0)) * s ** ((n1 - 1.0) / 2.0)
        + (0.5 - 1.0 / (n2 + 1.0)) * s ** ((n2 - 1.0) / 2.0))
    return {"admissible": bool(c_tilde * factor < 1.0),
            "C_tilde": c_tilde, "C_delta": c_delta}


# ---------------------------------------------------------------------------
# report and classification

@dataclass
class WellReport:
    B1: float
    B2: float
    C_hat: float
    s_star: float
    Lambda_star: float
    y0: float
    M_threshold: float
    poincare_c: float
    classification: Optional[str] = None

    def as_dict(self) -> dict:
        return {"B1": self.B1, "B2": self.B2, "C_hat": self.C_hat,
                "s_star": self.s_star, "Lambda_star": self.Lambda_star,
                "y0": self.y0, "M_threshold": self.M_threshold,
                "poincare_c": self.poincare_c,
                "classification": self.classification}


def well_report(params: MaterialParams, exps: Exponents, grid: Grid1D,
                restarts: int = 16, seed: int = 0) -> WellReport:
    b1 = embedding_constant(grid, exps.n1 + 1.0, restarts=restarts, seed=seed)
    b2 = embedding_constant(grid, exps.n2 + 1.0, restarts=restarts,
                            seed=seed + 1)
    chat = c_hat_constant(b1, b2, params, exps.n1, exps.n2)
    s_star, lam_star = s_star_solve(chat, exps.n1, exps.n2)
    y0, m_thr = y0_and_threshold(chat, exps.n1, exps.n2, exps.c_hat)
    return WellReport(B1=b1, B2=b2, C_hat=chat, s_star=s_star,
                      Lambda_star=lam_star, y0=y0, M_threshold=m_thr,
                      poincare_c=poincare_constant(grid))


def classify_initial(state0: State, report: WellReport,
                     params: MaterialParams, exps: Exponents,
                     grid: Grid1D) -> str:
    """Predict the fate of initial data from the scalar thresholds.

    global-predicted           stable side with energy under the barrier
    blowup-predicted           unstable side with 0 <= energy < M threshold
    blowup-predicted-negative  negative initial energy
    indeterminate              none of the hypotheses hold
    """
    e0 = total_energy(state0, params, exps, grid)
    if e0 < 0.0:
        return "blowup-predicted-negative"
    q = quadratic_form(state0.v, state0.p, grid, params)
    s = sign_functional(state0, params, exps, grid)
    on_w1_side = q == 0.0 or s > 0.0
    if on_w1_side and e0 < report.Lambda_star:
        return "global-predicted"
    if (not on_w1_side) and s < 0.0 and e0 < report.M_threshold:
        return "blowup-predicted"
    return "indeterminate"
