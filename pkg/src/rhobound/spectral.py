"""Certified spectral radius computation for nonnegative matrices.

Two independent engines produce two-sided enclosures of rho(M):

* ``rho_power`` iterates x <- (M+I)x / ||(M+I)x||_1 and reads off the
  Collatz-Wielandt bounds min_i (Ax)_i/x_i - 1 <= rho <= max_i (Ax)_i/x_i - 1,
  which hold for every strictly positive x.  Running on M+I instead of M keeps
  the iterate positive and breaks the oscillation of periodic matrices
  (rho(M+I) = rho(M) + 1 for nonnegative M).

* ``rho_gelfand`` squares M repeatedly with per-step scaling and uses
  (min row sum of M^k)^(1/k) <= rho <= (max row sum of M^k)^(1/k).

``rho`` dispatches: exact value at n=1, the closed form
tr/2 + sqrt((tr/2)^2 - det) at n=2 (the discriminant of a nonnegative 2x2 is
((a-d)/2)^2 + bc >= 0), power iteration at n>=3 with the Gelfand enclosure
intersected in as a fallback when power iteration does not converge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EnclosureDisagreement
from .matrix import Matrix

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITERS = 100_000
DEFAULT_MAX_SQUARINGS = 40


@dataclass(frozen=True, eq=False)
class RhoEstimate:
    """Certified enclosure [lower, upper] of rho plus a point value.

    ``vector`` is the strictly positive test vector that witnesses the final
    Collatz-Wielandt bounds (uniform for engines that do not iterate one).
    ``value`` is the enclosure midpoint clamped to be nonnegative.
    """

    value: float
    lower: float
    upper: float
    iterations: int
    vector: np.ndarray
    converged: bool

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def __eq__(self, other) -> bool:
        if not isinstance(other, RhoEstimate):
            return NotImplemented
        return (
            self.value == other.value
            and self.lower == other.lower
            and self.upper == other.upper
            and self.iterations == other.iterations
            and self.converged == other.converged
            and bool(np.array_equal(self.vector, other.vector))
        )


def _estimate(lower: float, upper: float, iterations: int, vector, converged: bool) -> RhoEstimate:
    lower = max(0.0, min(lower, upper))
    value = max(0.0, (lower + upper) / 2.0)
    return RhoEstimate(value, lower, upper, iterations, np.asarray(vector, dtype=float), converged)


#: Iterations between convergence-rate checkpoints in the power engine.
_RATE_WINDOW = 32


def rho_power(m: Matrix, tol: float = DEFAULT_TOL, max_iters: int = DEFAULT_MAX_ITERS) -> RhoEstimate:
    """Collatz-Wielandt enclosure from power iteration on M+I.

    Starts from the uniform positive vector; each step is sound on its own, so
    stopping early always yields a valid (just wide) enclosure.  Iteration
    ends at convergence, at the iteration cap, or once the measured
    contraction rate of the enclosure width proves the tolerance cannot be
    reached within the remaining budget (reducible or defective dominant
    eigenvalues shrink the width like 1/k; grinding out the full cap on them
    gains nothing over the Gelfand fallback).
    """
    n = m.n
    shifted = m.entries + np.eye(n)
    x = np.full(n, 1.0 / n)
    lower, upper = 0.0, math.inf
    iterations = 0
    converged = False
    checkpoint_width = math.inf
    previous_rate = None
    for iterations in range(1, max_iters + 1):
        y = shifted @ x
        ratios = y / x
        lower = float(ratios.min()) - 1.0
        upper = float(ratios.max()) - 1.0
        x = y / y.sum()
        width = upper - lower
        target = tol * max(1.0, upper)
        if width <= target:
            converged = True
            break
        if iterations % _RATE_WINDOW == 0:
            if math.isfinite(checkpoint_width):
                rate = (width / checkpoint_width) ** (1.0 / _RATE_WINDOW)
                if rate >= 1.0:
                    break
                needed = math.log(target / width) / math.log(rate)
                if needed > max_iters - iterations:
                    break
                # a decelerating width (algebraic 1/k decay of defective or
                # reducible dominant eigenvalues) never meets a projection
                # made from the current rate; stop wasting the budget
                if previous_rate is not None and rate >= previous_rate and needed > 50 * _RATE_WINDOW:
                    break
                previous_rate = rate
            checkpoint_width = width
    return _estimate(lower, upper, iterations, x, converged)


def rho_gelfand(m: Matrix, tol: float = DEFAULT_TOL, max_squarings: int = DEFAULT_MAX_SQUARINGS) -> RhoEstimate:
    """Row-sum enclosure of rho from repeatedly squared, rescaled powers.

    Maintains M^k = N * exp(logscale) with N rescaled by its maximum row sum
    before each squaring, so no overflow occurs.  A power that becomes exactly
    zero proves nilpotency and returns rho = 0 with a zero-width enclosure.
    """
    n = m.n
    uniform = np.full(n, 1.0 / n)
    power = m.entries.astype(float).copy()
    logscale = 0.0
    k = 1
    squarings = 0
    lower, upper = 0.0, math.inf
    converged = False
    while True:
        sums = power.sum(axis=1)
        top = float(sums.max())
        if top == 0.0:
            return _estimate(0.0, 0.0, squarings, uniform, True)
        bottom = float(sums.min())
        upper = math.exp((math.log(top) + logscale) / k)
        lower = math.exp((math.log(bottom) + logscale) / k) if bottom > 0.0 else 0.0
        if upper - lower <= tol:
            converged = True
            break
        if squarings >= max_squarings:
            break
        power = power / top
        logscale += math.log(top)
        power = power @ power
        logscale *= 2.0
        k *= 2
        squarings += 1
    return _estimate(lower, upper, squarings, uniform, converged)


def _closed_form_2x2(entries: np.ndarray) -> float:
    a, b = float(entries[0, 0]), float(entries[0, 1])
    c, d = float(entries[1, 0]), float(entries[1, 1])
    half_tr = (a + d) / 2.0
    disc = ((a - d) / 2.0) ** 2 + b * c
    return half_tr + math.sqrt(disc)


def rho(m: Matrix, tol: float = DEFAULT_TOL, *, max_iters: int = DEFAULT_MAX_ITERS) -> RhoEstimate:
    """Spectral radius with a certified enclosure.

    n=1 and n=2 are exact (entry / closed form, zero-width enclosure).  For
    n>=3 the power engine is used; if it fails to converge its enclosure is
    intersected with the Gelfand engine's.  Disjoint enclosures mean one of
    the engines is broken and raise ``EnclosureDisagreement``.
    """
    n = m.n
    if n == 1:
        v = float(m.entries[0, 0])
        return RhoEstimate(v, v, v, 0, np.ones(1), True)
    if n == 2:
        v = _closed_form_2x2(m.entries)
        return RhoEstimate(v, v, v, 0, np.full(2, 0.5), True)
    power = rho_power(m, tol, max_iters)
    if power.converged:
        return power
    gelfand = rho_gelfand(m, tol)
    lower = max(power.lower, gelfand.lower)
    upper = min(power.upper, gelfand.upper)
    if lower > upper + tol * max(1.0, abs(upper)):
        raise EnclosureDisagreement(
            f"power enclosure [{power.lower}, {power.upper}] is disjoint from "
            f"gelfand enclosure [{gelfand.lower}, {gelfand.upper}]"
        )
    converged = upper - max(0.0, min(lower, upper)) <= tol * max(1.0, upper)
    return _estimate(
        lower, upper, power.iterations + gelfand.iterations, power.vector, converged
    )
