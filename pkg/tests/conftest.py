import math

import numpy as np
import pytest

from aperiodic_qw import InitialStateSpec, make_localized_state


def kron_floquet(angles):
    """Reference one-step operator built from textbook Kronecker products.

    Basis index is ``2*n + s`` (site-major, s=0 up, s=1 down); independent of
    the package's own basis ordering and construction.
    """
    n = len(angles)
    coin = np.zeros((2 * n, 2 * n))
    for site, th in enumerate(angles):
        proj = np.zeros((n, n))
        proj[site, site] = 1.0
        c, s = math.cos(th), math.sin(th)
        coin += np.kron(proj, np.array([[c, s], [s, -c]]))
    right = np.roll(np.eye(n), 1, axis=0)  # |n+1><n|
    left = np.roll(np.eye(n), -1, axis=0)  # |n-1><n|
    up = np.diag([1.0, 0.0])
    down = np.diag([0.0, 1.0])
    shift = np.kron(right, up) + np.kron(left, down)
    return shift @ coin


def to_site_major(vec):
    n = vec.size // 2
    out = np.empty_like(vec)
    out[0::2] = vec[:n]
    out[1::2] = vec[n:]
    return out


@pytest.fixture
def localized():
    def make(n0, n_sites, up=1.0, down=0.0):
        return make_localized_state(InitialStateSpec(n0, up, down), n_sites)

    return make
