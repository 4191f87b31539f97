"""Arithmetic, enumeration and random generator sampling for finite Abelian groups.

A group is a direct sum of cyclic factors Z_{m_1} + ... + Z_{m_d}.  Elements are
tuples of canonical coordinates, and every element also has a mixed-radix index
in {0, ..., n-1} (first coordinate most significant, matching C-order reshapes
of flat arrays).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Largest supported group size; keeps all index arithmetic exact in 64-bit.
MAX_GROUP_SIZE = 2 ** 48

Element = tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    """A finite Abelian group given by its list of cyclic moduli."""

    moduli: tuple[int, ...]
    n: int
    radix_weights: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.moduli)

    def __repr__(self) -> str:  # compact, e.g. GroupSpec(4,9,25)
        return "GroupSpec(%s)" % ",".join(str(m) for m in self.moduli)


@dataclass(frozen=True)
class GeneratorMultiset:
    """k group elements sampled (or chosen) as Cayley-graph generators; repeats allowed."""

    generators: tuple[Element, ...]
    k: int

    def __post_init__(self):
        if self.k != len(self.generators):
            raise ValueError("k does not match the number of generators")


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the three admissibility clauses relating n, k, d and eta."""

    eta: float
    min_modulus_ok: bool
    small_k_ok: bool
    large_k_ok: bool
    passes: bool


def make_group(moduli) -> GroupSpec:
    """Build a GroupSpec from a list of cyclic moduli (each >= 2)."""
    mods = tuple(int(m) for m in moduli)
    if len(mods) == 0:
        raise ValueError("at least one modulus is required")
    for m in mods:
        if m < 2:
            raise ValueError(f"modulus {m} < 2")
    n = math.prod(mods)
    if n > MAX_GROUP_SIZE:
        raise OverflowError(f"group size {n} exceeds cap {MAX_GROUP_SIZE}")
    # Place value of coordinate j: product of the moduli after it.
    weights = []
    w = 1
    for m in reversed(mods):
        weights.append(w)
        w *= m
    weights.reverse()
    return GroupSpec(moduli=mods, n=n, radix_weights=tuple(weights))


def parse_group(literal: str) -> GroupSpec:
    """Parse the CLI group literal, a comma-separated moduli string like "4,9,25"."""
    parts = [p.strip() for p in literal.split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty group literal: {literal!r}")
    return make_group(int(p) for p in parts)


def zero(group: GroupSpec) -> Element:
    return (0,) * group.d


def validate_element(group: GroupSpec, x: Element) -> None:
    if len(x) != group.d:
        raise ValueError("element dimension mismatch")
    for c, m in zip(x, group.moduli):
        if not 0 <= c < m:
            raise ValueError(f"coordinate {c} out of range [0, {m})")


def add(group: GroupSpec, a: Element, b: Element) -> Element:
    """Coordinate-wise sum modulo the group moduli."""
    if len(a) != group.d or len(b) != group.d:
        raise ValueError("element dimension mismatch")
    return tuple((x + y) % m for x, y, m in zip(a, b, group.moduli))


def neg(group: GroupSpec, a: Element) -> Element:
    """Additive inverse, coordinate-wise."""
    if len(a) != group.d:
        raise ValueError("element dimension mismatch")
    return tuple((-x) % m for x, m in zip(a, group.moduli))


def index_of(group: GroupSpec, x: Element) -> int:
    """Mixed-radix index of an element in {0, ..., n-1}."""
    validate_element(group, x)
    return sum(c * w for c, w in zip(x, group.radix_weights))


def element_of(group: GroupSpec, index: int) -> Element:
    """Inverse of index_of."""
    if not 0 <= index < group.n:
        raise ValueError("element index out of range")
    coords = []
    for w, m in zip(group.radix_weights, group.moduli):
        coords.append((index // w) % m)
    return tuple(coords)


def dot(group: GroupSpec, w, Z: GeneratorMultiset) -> Element:
    """Integer combination sum_i w_i * Z_i reduced coordinate-wise mod m_j.

    Entries of w may be negative; Python's floored modulo yields the canonical
    representative.
    """
    w = list(w)
    if len(w) != Z.k:
        raise ValueError("weight vector length does not match k")
    coords = [0] * group.d
    for wi, z in zip(w, Z.generators):
        for j in range(group.d):
            coords[j] += wi * z[j]
    return tuple(c % m for c, m in zip(coords, group.moduli))


def sample_generators(group: GroupSpec, k: int, rng: np.random.Generator) -> GeneratorMultiset:
    """Draw k iid uniform elements (with replacement) from the group."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cols = [rng.integers(0, m, size=k) for m in group.moduli]
    gens = tuple(tuple(int(cols[j][i]) for j in range(group.d)) for i in range(k))
    return GeneratorMultiset(generators=gens, k=k)


def check_hypotheses(group: GroupSpec, k: int, eta: float) -> HypothesisReport:
    """Evaluate the three admissibility clauses (all logarithms natural).

    1. every m_j > n^{1/k} * (ln k)^2;
    2. if k <= eta * ln n / ln ln n then d <= (1 - 2 eta) * k;
    3. if k > eta * ln n / ln ln n then d <= (1/20) * eta * ln n / ln ln n.

    A conditional clause whose condition does not apply counts as holding.
    """
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if k < 2:
        raise ValueError("k must be >= 2")
    n, d = group.n, group.d
    log_n = math.log(n)
    loglog_n = math.log(log_n)
    threshold = eta * log_n / loglog_n

    min_modulus_ok = all(m > n ** (1.0 / k) * math.log(k) ** 2 for m in group.moduli)
    small_k_ok = (k > threshold) or (d <= (1 - 2 * eta) * k)
    large_k_ok = (k <= threshold) or (d <= threshold / 20)
    return HypothesisReport(
        eta=eta,
        min_modulus_ok=min_modulus_ok,
        small_k_ok=small_k_ok,
        large_k_ok=large_k_ok,
        passes=min_modulus_ok and small_k_ok and large_k_ok,
    )


def replicate_rng(base_seed: int, replicate: int) -> np.random.Generator:
    """Counter-based stream for one replicate: Philox keyed by (base_seed, replicate).

    Streams for distinct replicates are independent and order-free, so parallel
    and serial runs see identical randomness.
    """
    key = (int(base_seed) % 2 ** 64, int(replicate) % 2 ** 64)
    return np.random.Generator(np.random.Philox(key=key))
