"""Composite Gauss-Legendre quadrature and compactly supported bump functions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import DomainError

PANEL_SIZE = 64
DEFAULT_NODES = 2048


@lru_cache(maxsize=32)
def _leggauss(m):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_panels(a, b, n_nodes=DEFAULT_NODES, panel_size=PANEL_SIZE):
    """Nodes and weights of composite Gauss-Legendre on [a, b] with equal panels."""
    if not b > a:
        raise DomainError("quadrature interval must have b > a")
    if n_nodes < 1:
        raise DomainError("need at least one node")
    m = min(panel_size, n_nodes)
    panels = max(1, n_nodes // m)
    x, w = _leggauss(m)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def bump(u):
    """exp(-1/(1 - u^2)) on (-1, 1), zero elsewhere."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


@dataclass(frozen=True)
class TestFunction:
    """amplitude * bump((p - center) / halfwidth), supported in (center - halfwidth, center + halfwidth)."""

    __test__ = False  # not a pytest class

    center: float
    halfwidth: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise DomainError("halfwidth must be positive")

    @classmethod
    def on_interval(cls, lo, hi, amplitude=1.0):
        if not hi > lo:
            raise DomainError("interval must have hi > lo")
        return cls(0.5 * (lo + hi), 0.5 * (hi - lo), amplitude)

    @property
    def support(self):
        return (self.center - self.halfwidth, self.center + self.halfwidth)

    def __call__(self, p):
        return self.amplitude * bump((np.asarray(p, dtype=float) - self.center) / self.halfwidth)

    def quadrature(self, n_nodes=DEFAULT_NODES):
        """(nodes, weights, values) on the support."""
        lo, hi = self.support
        x, w = gauss_legendre_panels(lo, hi, n_nodes)
        return x, w, self(x)

    def transported(self, b, a):
        """Image under p -> a p + b with the unitary weight a^{-1/2}."""
        if not a > 0:
            raise DomainError("dilation factor must be positive")
        return TestFunction(a * self.center + b, a * self.halfwidth, self.amplitude / np.sqrt(a))

    def within(self, lo, hi, tol=0.0):
        s0, s1 = self.support
        return s0 >= lo - tol and s1 <= hi + tol

    def l2_norm_squared(self, n_nodes=DEFAULT_NODES):
        x, w, v = self.quadrature(n_nodes)
        return float(np.sum(w * v * v))


def interval_family(lo, hi, count, width_fraction=0.35):
    """``count`` bumps placed affinely inside (lo, hi); covariant under p -> a p + b."""
    if count < 1:
        raise DomainError("count must be positive")
    length = hi - lo
    hw = 0.5 * width_fraction * length
    centers = lo + hw + (length - 2 * hw) * (np.arange(count) + 0.5) / count
    return [TestFunction(float(c), float(hw)) for c in centers]
