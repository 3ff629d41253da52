"""Seasonal ARMA(1,1)x(1,1)_s simulation and ACF/PACF estimation.

The process follows the multiplicative form

    (1 - phi*B)(1 - Phi*B^s) z_t = (1 + theta*B)(1 + Theta*B^s) w_t

with Gaussian innovations w_t ~ N(0, sigma^2) and zero-initialized history,
so a simulation is one linear filter over the innovation stream. These
processes shape melody contour layers; hyperparameters are picked by
inspecting ACF/PACF plots, which is what the estimation helpers feed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .contour import overlap_zero_mask
from .errors import (
    BadLayerIndex,
    ConstantSeries,
    NonStationaryParams,
    SeriesTooShort,
)

Seed = int | np.random.SeedSequence | None


@dataclass(frozen=True)
class SarmaParams:
    """Coefficients of one seasonal ARMA(1,1)x(1,1)_s layer process."""

    phi: float = 0.0
    theta: float = 0.0
    Phi: float = 0.0
    Theta: float = 0.0
    season: int = 4
    sigma: float = 1.0
    burn_in: int = 200

    def __post_init__(self):
        if abs(self.phi) >= 1.0 or abs(self.Phi) >= 1.0:
            raise NonStationaryParams(
                f"AR coefficients must satisfy |phi| < 1, |Phi| < 1: {self.phi}, {self.Phi}"
            )
        if abs(self.theta) > 1.0 or abs(self.Theta) > 1.0:
            raise NonStationaryParams(
                f"MA coefficients must satisfy |theta| <= 1, |Theta| <= 1: "
                f"{self.theta}, {self.Theta}"
            )
        if self.season < 1:
            raise ValueError(f"season must be >= 1, got {self.season}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")

    def scaled(self, factor: float) -> "SarmaParams":
        """Same dynamics with innovation scale multiplied by ``factor``."""
        return SarmaParams(self.phi, self.theta, self.Phi, self.Theta,
                           self.season, self.sigma * factor, self.burn_in)


@dataclass(frozen=True)
class SeriesStats:
    """Sample ACF (lags 0..L) and PACF of a series.

    Both arrays are indexed by lag; index 0 is 1.0 by convention.
    """

    acf: np.ndarray
    pacf: np.ndarray


def _filter_polys(params: SarmaParams) -> tuple[np.ndarray, np.ndarray]:
    s = params.season
    ar = np.zeros(s + 2)
    ma = np.zeros(s + 2)
    ar[0] = ma[0] = 1.0
    # += so the regular and seasonal terms collapse correctly when s == 1
    ar[1] += -params.phi
    ar[s] += -params.Phi
    ar[s + 1] += params.phi * params.Phi
    ma[1] += params.theta
    ma[s] += params.Theta
    ma[s + 1] += params.theta * params.Theta
    return ma, ar


def simulate(params: SarmaParams, length: int, seed: Seed = None) -> np.ndarray:
    """Draw ``length`` steps of the SARMA process, deterministic given ``seed``.

    ``burn_in`` extra steps are simulated first and discarded so the returned
    segment has forgotten the zero-initialized history.
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    rng = np.random.default_rng(seed)
    w = params.sigma * rng.standard_normal(params.burn_in + length)
    b, a = _filter_polys(params)
    z = lfilter(b, a, w)
    return z[params.burn_in:]


def white_noise(sigma: float, length: int, seed: Seed = None) -> np.ndarray:
    """i.i.d. N(0, sigma^2) draws; the all-coefficients-zero SARMA special case."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    rng = np.random.default_rng(seed)
    return sigma * rng.standard_normal(length)


def acf(series: np.ndarray, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 0..max_lag (biased estimator)."""
    series = np.asarray(series, dtype=float)
    n = len(series)
    if n <= max_lag:
        raise SeriesTooShort(f"series of length {n} cannot support lag {max_lag}")
    centered = series - series.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        raise ConstantSeries("autocorrelation undefined for a constant series")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for h in range(1, max_lag + 1):
        out[h] = float(centered[:-h] @ centered[h:]) / denom
    return out


def pacf(series: np.ndarray, max_lag: int) -> np.ndarray:
    """Sample partial autocorrelation via Durbin-Levinson on the sample ACF.

    Indexed by lag with pacf[0] = 1.0 by convention; pacf[1] == acf[1].
    """
    rho = acf(series, max_lag)
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    phi_prev = np.zeros(max_lag + 1)  # phi_prev[j] = phi_{h-1, j}
    for h in range(1, max_lag + 1):
        if h == 1:
            out[1] = rho[1]
        else:
            num = rho[h] - float(phi_prev[1:h] @ rho[h - 1:0:-1])
            den = 1.0 - float(phi_prev[1:h] @ rho[1:h])
            out[h] = num / den
        phi_h = phi_prev.copy()
        phi_h[h] = out[h]
        for j in range(1, h):
            phi_h[j] = phi_prev[j] - out[h] * phi_prev[h - j]
        phi_prev = phi_h
    return out


def series_stats(series: np.ndarray, max_lag: int) -> SeriesStats:
    return SeriesStats(acf=acf(series, max_lag), pacf=pacf(series, max_lag))


def generate_layer(params: SarmaParams, p: int, n: int, k: int,
                   seed: Seed = None) -> np.ndarray:
    """Simulate one full-length layered signal for layer ``k``.

    Draws a SARMA series over the layer-k grid (2**k points), zeroes the
    points shared with the coarser grid, and zero-order-hold upsamples to
    length n. The result satisfies the layered-signal overlap invariant by
    construction.
    """
    if not 1 <= k <= p:
        raise BadLayerIndex(f"layer index {k} outside 1..{p}")
    if n % (1 << p) != 0:
        raise BadLayerIndex(f"length {n} not divisible by 2**{p}")
    grid_len = 1 << k
    series = simulate(params, grid_len, seed)
    # Grid point j lies on the coarser grid exactly when j is even.
    series[0::2] = 0.0
    layer = np.repeat(series, n >> k)
    assert not layer[overlap_zero_mask(p, n, k)].any()
    return layer
