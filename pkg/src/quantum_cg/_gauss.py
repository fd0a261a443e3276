"""Gauss-Legendre helpers shared by the special-function and contour code."""
from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gl_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on consecutive panels given by ``edges``."""
    x, w = gl_rule(n)
    a = edges[:-1, None]
    h = (edges[1:] - edges[:-1])[:, None] / 2
    nodes = a + h * (x[None, :] + 1)
    weights = h * w[None, :]
    return nodes.ravel(), weights.ravel()
