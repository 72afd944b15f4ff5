"""Pure-numpy implementations of the hot batch kernels.

Semantics must stay bit-compatible with core._native up to floating
non-associativity; the benchmark suite compares the two backends.
"""

from __future__ import annotations

import numpy as np


def green_potential_batch(points, atoms, masses, r_const):
    """Sum of mass * G(x, atom) for each row x of `points`.

    points: (k, n), atoms: (m, n), masses: (m,).  Returns (k,).
    """
    points = np.ascontiguousarray(points, dtype=float)
    atoms = np.ascontiguousarray(atoms, dtype=float)
    masses = np.ascontiguousarray(masses, dtype=float)
    if atoms.shape[0] == 0:
        return np.zeros(points.shape[0])
    n = points.shape[1]
    refl = atoms.copy()
    refl[:, -1] = -refl[:, -1]
    diff = points[:, None, :] - atoms[None, :, :]
    dist = np.sqrt(np.einsum("kmj,kmj->km", diff, diff))
    diff_r = points[:, None, :] - refl[None, :, :]
    dist_r = np.sqrt(np.einsum("kmj,kmj->km", diff_r, diff_r))
    g = -r_const * (dist ** (2 - n) - dist_r ** (2 - n))
    return g @ masses


def maximal_batch(points, atoms, masses, beta):
    """Exact fractional maximal function of a discrete measure, batched.

    For each row x: sup over r > 0 of mu(B(x, r)) / r^beta with open balls,
    attained in the limit r -> d_k^+ at atom distances d_k.  Returns +inf
    where an atom coincides with x and beta > 0; total mass when beta == 0.
    """
    points = np.ascontiguousarray(points, dtype=float)
    atoms = np.ascontiguousarray(atoms, dtype=float)
    masses = np.ascontiguousarray(masses, dtype=float)
    k = points.shape[0]
    if atoms.shape[0] == 0:
        return np.zeros(k)
    total = float(masses.sum())
    if beta == 0.0:
        return np.full(k, total)
    diff = points[:, None, :] - atoms[None, :, :]
    dist = np.sqrt(np.einsum("kmj,kmj->km", diff, diff))
    order = np.argsort(dist, axis=1, kind="stable")
    dist_sorted = np.take_along_axis(dist, order, axis=1)
    mass_sorted = np.take_along_axis(
        np.broadcast_to(masses, dist.shape), order, axis=1
    )
    cum = np.cumsum(mass_sorted, axis=1)
    with np.errstate(divide="ignore"):
        vals = cum / dist_sorted**beta
    out = np.max(np.where(dist_sorted > 0.0, vals, 0.0), axis=1)
    out[dist_sorted[:, 0] == 0.0] = np.inf
    return out
