"""Shared oracles for the test suite.

The dense uniformized matrix exponential below is an independent route to the
heat kernel: it never touches the character/DFT code path, so agreement with
`spectral.heat_kernel_row` cross-checks both implementations.
"""

import math

import numpy as np
from scipy import stats

from cayley_cutoff.groups import (GeneratorMultiset, GroupSpec, add, element_of,
                                  index_of, neg)


def dense_transition(group: GroupSpec, Z: GeneratorMultiset, model: str) -> np.ndarray:
    """One-step transition matrix of the Cayley walk, built entry by entry."""
    n = group.n
    P = np.zeros((n, n))
    for g in range(n):
        x = element_of(group, g)
        for z in Z.generators:
            if model == "directed":
                P[g, index_of(group, add(group, x, z))] += 1.0 / Z.k
            else:
                P[g, index_of(group, add(group, x, z))] += 0.5 / Z.k
                P[g, index_of(group, add(group, x, neg(group, z)))] += 0.5 / Z.k
    return P


def uniformized_row(P: np.ndarray, t: float, tol: float = 1e-16) -> np.ndarray:
    """Row 0 of e^{-t(I-P)} by uniformization: sum_j Po(t)(j) * (P^j)[0, :]."""
    n = P.shape[0]
    v = np.zeros(n)
    v[0] = 1.0
    top = int(t + 12.0 * math.sqrt(t) + 60.0)
    weights = stats.poisson.pmf(np.arange(top + 1), t)
    out = np.zeros(n)
    for j in range(top + 1):
        out += weights[j] * v
        v = v @ P
    return out


def tv_from_uniform(row: np.ndarray) -> float:
    n = row.size
    return 0.5 * float(np.abs(row - 1.0 / n).sum())
