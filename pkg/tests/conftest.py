"""Shared helpers for the test suite."""

import numpy as np
import pytest

from resnet.network import Network, VertexMeasure


def random_connected_net(rng, n_max=15, n_min=2, c_low=1e-3, c_high=1e3, extra_edge_p=0.3):
    """Random connected network: uniform random tree plus extra edges,
    conductances log-uniform in [c_low, c_high]."""
    n = int(rng.integers(n_min, n_max + 1))
    edges = {}

    def draw_c():
        return float(np.exp(rng.uniform(np.log(c_low), np.log(c_high))))

    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges[(u, v)] = draw_c()
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_edge_p:
                edges[(u, v)] = draw_c()
    return Network(edges, vertices=range(n))


def random_measure(rng, net, m_low=0.1, m_high=10.0):
    """Log-uniform positive weights on the network's vertices."""
    w = np.exp(rng.uniform(np.log(m_low), np.log(m_high), size=net.n_vertices))
    return VertexMeasure({v: float(w[i]) for i, v in enumerate(net.vertices)})


def random_potential(rng, net, scale=1.0):
    return {v: float(rng.normal(0, scale)) for v in net.vertices}


@pytest.fixture
def rng():
    return np.random.default_rng(20260822)
