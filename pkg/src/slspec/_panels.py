"""Composite Chebyshev-Lobatto panels with spectral cumulative integration.

Panels are aligned with the breakpoints of a potential so that jumps of
sigma fall on panel boundaries.  Adjacent panels share their endpoint
abscissa but keep separate samples, which is how left and right limits
of a discontinuous sigma are represented.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C


@lru_cache(maxsize=None)
def _lobatto(n: int):
    # nodes on [-1, 1] in increasing order, plus cumulative-integral matrix
    t = -np.cos(np.pi * np.arange(n) / (n - 1))
    V = C.chebvander(t, n - 1)
    Vinv = np.linalg.inv(V)
    integ = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        integ[:, j] = C.chebval(t, C.chebint(e, lbnd=-1.0))
    Q = integ @ Vinv
    w = Q[-1].copy()
    return t, Q, w


class PanelGrid:
    """Nodes on [0, pi] split into panels of ``order`` Lobatto points.

    Parameters
    ----------
    breaks : sequence of float
        Increasing breakpoints including 0 and pi.
    panels : int
        Minimum total number of panels; each segment between breakpoints
        gets a share proportional to its length (at least one).
    order : int
        Points per panel.
    """

    def __init__(self, breaks, panels: int = 32, order: int = 16):
        breaks = np.asarray(breaks, dtype=float)
        total = breaks[-1] - breaks[0]
        t, Q, w = _lobatto(order)
        self.order = order
        self._Q = Q
        self._w = w
        edges = []
        seg_of_panel = []
        for s, (a, b) in enumerate(zip(breaks[:-1], breaks[1:])):
            if b <= a:
                continue
            npan = max(1, int(np.ceil(panels * (b - a) / total)))
            e = np.linspace(a, b, npan + 1)
            for lo, hi in zip(e[:-1], e[1:]):
                edges.append((lo, hi))
                seg_of_panel.append(s)
        self.edges = np.array(edges)
        self.segment = np.array(seg_of_panel)
        half = 0.5 * (self.edges[:, 1] - self.edges[:, 0])
        mid = 0.5 * (self.edges[:, 1] + self.edges[:, 0])
        self._half = half
        self.x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
        self.weights = (half[:, None] * w[None, :]).ravel()

    @property
    def npanels(self) -> int:
        return len(self.edges)

    def cumint(self, values: np.ndarray) -> np.ndarray:
        """Integral from 0 to each node of the sampled function.

        ``values`` may carry extra trailing axes (one column per
        independent integrand).
        """
        v = np.asarray(values)
        shape = v.shape
        v = v.reshape(self.npanels, self.order, -1)
        local = np.einsum("ij,pjk->pik", self._Q, v) * self._half[:, None, None]
        offsets = np.concatenate(
            [np.zeros((1, v.shape[2]), dtype=local.dtype),
             np.cumsum(local[:, -1, :], axis=0)[:-1]]
        )
        return (local + offsets[:, None, :]).reshape(shape)

    def integral(self, values: np.ndarray):
        v = np.asarray(values)
        return np.tensordot(self.weights, v, axes=(0, 0))

    def last(self, values: np.ndarray):
        """Value at x = pi (last node of the last panel)."""
        return np.asarray(values)[-1]
