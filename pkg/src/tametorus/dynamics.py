"""Torus-orbit simulation and empirical convergence/escape probes.

This is the only floating-point layer in the package: points on the
d-torus live in [0, 2*pi)^d as float64 arrays. Everything involving
frequencies or matrix powers stays exact (Python ints via exactalg) and
is merely consumed here.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExceededError, DimensionMismatchError
from .exactalg import IntMatrix, mat_mul

__all__ = [
    "TWO_PI",
    "MAX_INDEPENDENCE_FUNCTIONS",
    "AffineMap",
    "FrequencyOrbit",
    "IndependenceQuery",
    "reduce_angles",
    "torus_dist",
    "torus_grid",
    "frequency_orbit",
    "escape_probe",
    "convergence_probe",
    "independence_check",
    "exp_grid_average",
]

TWO_PI = 2.0 * math.pi

# Grids larger than this total are clamped by shrinking the per-axis count.
GRID_POINT_CAP = 32 ** 3

MAX_INDEPENDENCE_FUNCTIONS = 12


def reduce_angles(x) -> np.ndarray:
    """Map angles into [0, 2*pi) componentwise."""
    out = np.mod(np.asarray(x, dtype=float), TWO_PI)
    # np.mod can round tiny negatives up to exactly 2*pi.
    out[out >= TWO_PI] = 0.0
    return out


def torus_dist(x, y) -> float:
    """Sup over coordinates of the circular distance min(|dx|, 2*pi - |dx|)."""
    delta = np.mod(np.asarray(x, dtype=float) - np.asarray(y, dtype=float), TWO_PI)
    return float(np.max(np.minimum(delta, TWO_PI - delta)))


def torus_grid(d: int, per_axis: int | None = None) -> np.ndarray:
    """Uniform grid on [0, 2*pi)^d, shape (per_axis**d, d).

    Defaults to 32 points per axis for d <= 3; for higher d the per-axis
    count shrinks to keep the total at most GRID_POINT_CAP points.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if per_axis is None:
        per_axis = 32 if d <= 3 else max(2, int(GRID_POINT_CAP ** (1.0 / d)))
    if per_axis < 1:
        raise ValueError("per_axis must be >= 1")
    axis = np.arange(per_axis) * (TWO_PI / per_axis)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


class AffineMap:
    """Affine self-map x -> Ax + b of the d-torus.

    A is an exact integer matrix; b is a translation vector of angles,
    reduced into [0, 2*pi). Applications run in double precision.
    """

    def __init__(self, a: IntMatrix, b=None):
        self.a = a
        if b is None:
            b = np.zeros(a.d)
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if b.shape != (a.d,):
            raise DimensionMismatchError(
                "translation of shape %s does not match dimension %d" % (b.shape, a.d)
            )
        self.b = reduce_angles(b)
        self._a_float = np.array(a.entries, dtype=float)

    @property
    def d(self) -> int:
        return self.a.d

    def apply(self, x) -> np.ndarray:
        """One application, reduced mod 2*pi."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.d,):
            raise DimensionMismatchError(
                "point of shape %s does not match dimension %d" % (x.shape, self.d)
            )
        return reduce_angles(self._a_float @ x + self.b)

    def orbit(self, x0, n: int) -> np.ndarray:
        """[x0, phi(x0), ..., phi^n(x0)] as an (n+1, d) array."""
        if n < 1:
            raise ValueError("orbit length must be >= 1")
        out = np.empty((n + 1, self.d))
        out[0] = reduce_angles(np.atleast_1d(np.asarray(x0, dtype=float)))
        for i in range(n):
            out[i + 1] = self.apply(out[i])
        return out

    def iterate_translations(self, n: int) -> np.ndarray:
        """Translation parts of phi^0 .. phi^n, i.e. the orbit of 0."""
        return self.orbit(np.zeros(self.d), n)

    def __repr__(self):
        return "AffineMap(%r, b=%s)" % (self.a, np.array2string(self.b, precision=6))


@dataclass(frozen=True)
class FrequencyOrbit:
    """Exact orbit of a frequency vector under the transposed matrix."""

    u: tuple[int, ...]
    terms: tuple[tuple[int, ...], ...]


def frequency_orbit(a: IntMatrix, u: Sequence[int], n: int) -> FrequencyOrbit:
    """Terms (A^T)^j u for j = 0..n, over exact integers.

    Composing the exponential with frequency u with x -> Ax + b yields the
    exponential with frequency A^T u (up to a unimodular constant), so
    these orbits are exactly the frequency sets the iterates act on.
    """
    u = tuple(operator.index(c) for c in u)
    if len(u) != a.d:
        raise DimensionMismatchError(
            "frequency of length %d does not match dimension %d" % (len(u), a.d)
        )
    if n < 1:
        raise ValueError("orbit length must be >= 1")
    at = a.transpose()
    terms = [u]
    for _ in range(n):
        terms.append(at.apply(terms[-1]))
    return FrequencyOrbit(u=u, terms=tuple(terms))


def escape_probe(fo: FrequencyOrbit, bound: int):
    """First index whose term exceeds the sup-norm bound, if any.

    Returns (escaped, first_index). An orbit that escapes every bound
    certifies an unbounded frequency family, hence a sequence of
    exponentials with no pointwise-convergent subsequence.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    for i, term in enumerate(fo.terms):
        if max(abs(c) for c in term) > bound:
            return True, i
    return False, None


def convergence_probe(phi: AffineMap, indices: Sequence[int], grid: np.ndarray, tol: float):
    """Search iterate indices for a pointwise-convergent-looking sub-list.

    Strategy (deterministic): group the indices by the exact integer
    matrix A^n; inside the largest group (ties: the group holding the
    smallest index), sort indices by their float translation parts and
    emit the longest run whose consecutive translations are within tol in
    the torus sup-metric (ties: earliest run). Returns the run's indices
    in ascending order together with the worst observed deviation between
    consecutive images over the whole grid.

    When the linear part generates a finite power semigroup, a group of
    size >= 2 exists by pigeonhole once enough indices are supplied, so
    a nontrivial sub-list is always found for tame generators.
    """
    indices = [operator.index(i) for i in indices]
    if not indices:
        raise ValueError("need at least one index")
    if any(i < 0 for i in indices):
        raise ValueError("indices must be nonnegative")
    if tol <= 0:
        raise ValueError("tol must be positive")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2 or grid.shape[1] != phi.d:
        raise DimensionMismatchError("grid must have shape (npoints, %d)" % phi.d)

    n_max = max(indices)
    powers = [IntMatrix.identity(phi.d)]
    for _ in range(n_max):
        powers.append(mat_mul(powers[-1], phi.a))
    translations = phi.iterate_translations(n_max)

    groups: dict[tuple, list[int]] = {}
    for n in sorted(set(indices)):
        groups.setdefault(powers[n].entries, []).append(n)
    group = max(groups.values(), key=lambda g: (len(g), -g[0]))

    # Snap coordinates that drifted across the 0/2pi seam so a cluster of
    # equal translations cannot be split by the lexicographic sort.
    snap = min(1e-12, tol / 2)
    keyed = []
    for n in group:
        t = translations[n].copy()
        t[TWO_PI - t < snap] = 0.0
        keyed.append((tuple(t), n))
    keyed.sort()

    best_start, best_len = 0, 1
    run_start = 0
    for i in range(1, len(keyed)):
        if torus_dist(keyed[i - 1][0], keyed[i][0]) < tol:
            if i - run_start + 1 > best_len:
                best_start, best_len = run_start, i - run_start + 1
        else:
            run_start = i
    chain = [n for _, n in keyed[best_start : best_start + best_len]]

    max_dev = 0.0
    mat = np.array(powers[chain[0]].entries, dtype=float)
    images = [reduce_angles(grid @ mat.T + translations[n]) for n in chain]
    for prev, cur in zip(images, images[1:]):
        delta = np.mod(prev - cur, TWO_PI)
        dev = float(np.max(np.minimum(delta, TWO_PI - delta))) if delta.size else 0.0
        max_dev = max(max_dev, dev)
    return sorted(chain), max_dev


@dataclass
class IndependenceQuery:
    """Sampled function family plus the two thresholds a < b."""

    functions: Sequence[np.ndarray]
    a: float
    b: float

    def __post_init__(self):
        self.functions = [np.atleast_1d(np.asarray(f, dtype=float)) for f in self.functions]
        if self.functions:
            npoints = self.functions[0].shape[0]
            if npoints < 1:
                raise ValueError("sample grid must be nonempty")
            if any(f.shape != (npoints,) for f in self.functions):
                raise DimensionMismatchError("all sample arrays must share one grid")
        if not self.a < self.b:
            raise ValueError("thresholds must satisfy a < b")


def independence_check(query: IndependenceQuery, cap: int = MAX_INDEPENDENCE_FUNCTIONS) -> bool:
    """Brute-force test of the independence pattern condition.

    True iff for every pair of disjoint index subsets P, Q some sampled
    point x has f_p(x) < a for all p in P and f_q(x) > b for all q in Q.
    All 3^n below/above/skip patterns are enumerated over point bitmasks;
    a pattern whose witness set empties out fails immediately (every
    extension of it is also a pattern).
    """
    n = len(query.functions)
    if n > cap:
        raise CapExceededError("independence check capped at %d functions, got %d" % (cap, n))
    if n == 0:
        return True
    npoints = query.functions[0].shape[0]
    full = (1 << npoints) - 1

    def mask_of(bools) -> int:
        m = 0
        for i, flag in enumerate(bools):
            if flag:
                m |= 1 << i
        return m

    below = [mask_of(f < query.a) for f in query.functions]
    above = [mask_of(f > query.b) for f in query.functions]

    def walk(i: int, mask: int) -> bool:
        if mask == 0:
            return False
        if i == n:
            return True
        return (
            walk(i + 1, mask)
            and walk(i + 1, mask & below[i])
            and walk(i + 1, mask & above[i])
        )

    return walk(0, full)


def exp_grid_average(freq: Sequence[int], per_axis: int) -> complex:
    """Average of e^{i <freq, x>} over the uniform per_axis^d grid.

    The discrete orthogonality identity makes this exactly 1 when every
    component of freq is divisible by per_axis and 0 otherwise; computed
    here by direct summation (fixed order) as a floating diagnostic.
    """
    freq = [operator.index(c) for c in freq]
    grid = torus_grid(len(freq), per_axis)
    phases = grid @ np.asarray(freq, dtype=float)
    return complex(np.exp(1j * phases).mean())
