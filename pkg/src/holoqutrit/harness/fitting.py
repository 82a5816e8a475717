"""Sinusoid fits for phase sweeps and Ramsey fringes."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit


@dataclass(frozen=True)
class SineFit:
    """``y = offset + amplitude * sin(k x + phase)``."""

    offset: float
    amplitude: float
    phase: float
    k: float
    rms: float

    def __call__(self, x):
        return self.offset + self.amplitude * np.sin(self.k * np.asarray(x) + self.phase)

    def residuals(self, x, y):
        return np.asarray(y) - self(x)


def fit_sine(x, y, k=1.0):
    """Linear least squares on (1, sin kx, cos kx) at known angular period."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    basis = np.column_stack([np.ones_like(x), np.sin(k * x), np.cos(k * x)])
    (c, s, co), *_ = np.linalg.lstsq(basis, y, rcond=None)
    amp = math.hypot(s, co)
    fit = SineFit(float(c), amp, math.atan2(co, s), k, 0.0)
    rms = float(np.sqrt(np.mean(fit.residuals(x, y) ** 2)))
    return SineFit(fit.offset, fit.amplitude, fit.phase, k, rms)


def wrap_phase(phi):
    """Map to (-pi, pi]."""
    return -((-phi + math.pi) % (2 * math.pi) - math.pi)


def fit_fringe_frequency(t, y):
    """Frequency (cycles per unit of ``t``) of an undamped cosine fringe.

    Seeds a nonlinear fit of ``c + A cos(2 pi f t + p)`` from the FFT peak.
    """
    t, y = np.asarray(t, dtype=float), np.asarray(y, dtype=float)
    dt = t[1] - t[0]
    spec = np.abs(np.fft.rfft(y - y.mean()))
    freqs = np.fft.rfftfreq(len(y), dt)
    f0 = freqs[1 + int(np.argmax(spec[1:]))]
    lin = fit_sine(2 * math.pi * f0 * t, y)

    def model(tt, c, a, f, p):
        return c + a * np.cos(2 * math.pi * f * tt + p)

    p0 = [lin.offset, lin.amplitude, f0, lin.phase - math.pi / 2]
    popt, _ = curve_fit(model, t, y, p0=p0, maxfev=20000)
    return abs(float(popt[2]))
