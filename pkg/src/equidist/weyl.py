"""Exponential-sum diagnostics: W_N(m) = (1/N) sum_k e(m . beta_k).

Equidistribution of a sequence in [0,1)^d is equivalent to W_N(m) -> 0
for every nonzero integer multi-index m, so the per-m trajectories over a
growing checkpoint grid are the package's primary evidence object.  A
trajectory pinned at magnitude 1 certifies the opposite: the phases
m . beta_k are constant, and m is a degenerate direction for the family.

Numerical contract: for exact samples the phase m . beta_k is reduced
mod 1 in integer/rational arithmetic and rounded to float once, term
accumulation is compensated, and the only other lossy step is the cosine
and sine themselves.  Magnitudes therefore never exceed 1 by more than a
few ulps, independent of N.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import StreamLengthError
from .generators import (
    GeneratorSpec,
    UnitSample,
    WindowConfig,
    interleaved_vectors,
    residue_stream,
    residues_to_floats,
    stream_floats,
    unit_float,
    beta_stream,
    windows_array,
)

CHECKPOINT_RATIO = 1.5
CHECKPOINT_FIRST_EXPONENT = 8
MAGNITUDE_SLACK = 1e-12


def checkpoint_grid(n_max: int, ratio: float = CHECKPOINT_RATIO) -> list[int]:
    """Geometric checkpoint grid {ceil(ratio^j)} capped and closed at n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    grid = set()
    j = CHECKPOINT_FIRST_EXPONENT
    while True:
        n = math.ceil(ratio**j)
        if n > n_max:
            break
        grid.add(n)
        j += 1
    grid.add(n_max)
    return sorted(grid)


@dataclass(frozen=True)
class MultiIndex:
    """Nonzero integer frequency vector m with weight r(m) = prod max(1,|m_i|)."""

    components: tuple[int, ...]

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("multi-index needs at least one component")
        if all(c == 0 for c in comps):
            raise ValueError("multi-index must be nonzero")

    @property
    def d(self) -> int:
        return len(self.components)

    @property
    def weight(self) -> int:
        out = 1
        for c in self.components:
            out *= max(1, abs(c))
        return out

    @property
    def canonical(self) -> bool:
        for c in self.components:
            if c:
                return c > 0
        return False

    def __neg__(self) -> "MultiIndex":
        return MultiIndex(tuple(-c for c in self.components))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.components) + ")"


def as_multi_index(m) -> MultiIndex:
    return m if isinstance(m, MultiIndex) else MultiIndex(tuple(m))


def multi_indices(d: int, radius: int) -> list[MultiIndex]:
    """All nonzero m with sup-norm at most radius, lexicographic order."""
    if d < 1 or radius < 1:
        raise ValueError("d and radius must be positive")
    out = []
    for comps in itertools.product(range(-radius, radius + 1), repeat=d):
        if any(comps):
            out.append(MultiIndex(comps))
    return out


def canonical_half(d: int, radius: int) -> list[MultiIndex]:
    """One representative per {m, -m} pair: first nonzero component positive."""
    return [m for m in multi_indices(d, radius) if m.canonical]


@dataclass(frozen=True)
class WeylSeries:
    """W_N(m) along a checkpoint grid."""

    m: MultiIndex
    checkpoints: tuple[int, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if len(self.checkpoints) != len(self.values):
            raise ValueError("checkpoints and values must align")
        worst = max((abs(v) for v in self.values), default=0.0)
        if worst > 1 + MAGNITUDE_SLACK:
            raise ValueError(f"|W_N| = {worst} exceeds 1 beyond rounding slack")

    @property
    def magnitudes(self) -> list[float]:
        return [abs(v) for v in self.values]

    @property
    def final_magnitude(self) -> float:
        return abs(self.values[-1])

    def conjugate(self) -> "WeylSeries":
        return WeylSeries(
            -self.m, self.checkpoints, tuple(v.conjugate() for v in self.values)
        )


def _neumaier(values) -> float:
    total = 0.0
    comp = 0.0
    for x in values:
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
    return total + comp


def _checkpoints_for(n: int, checkpoints) -> tuple[int, ...]:
    if checkpoints is None:
        cps = (n,)
    else:
        cps = tuple(int(c) for c in checkpoints)
    if not cps:
        raise ValueError("need at least one checkpoint")
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    if cps[0] < 1:
        raise ValueError("checkpoints start at 1")
    if cps[-1] > n:
        raise StreamLengthError(f"checkpoint {cps[-1]} beyond {n} points")
    return cps


def _series_from_phases(m, phases: np.ndarray, cps) -> WeylSeries:
    """Compensated prefix means of e(phase) at the checkpoints.

    Pairwise segment sums combined by Neumaier accumulation keep the error
    of every W_N at O(eps) independent of N.
    """
    angles = 2.0 * np.pi * phases
    re = np.cos(angles)
    im = np.sin(angles)
    bounds = [0, *cps]
    seg_re = [float(np.sum(re[a:b])) for a, b in zip(bounds, bounds[1:])]
    seg_im = [float(np.sum(im[a:b])) for a, b in zip(bounds, bounds[1:])]
    values = []
    for i, n in enumerate(cps):
        values.append(
            complex(_neumaier(seg_re[: i + 1]) / n, _neumaier(seg_im[: i + 1]) / n)
        )
    return WeylSeries(m, cps, tuple(values))


def _exact_phases(points, m: MultiIndex) -> np.ndarray:
    """Phases m . beta_k mod 1, reduced exactly, one float rounding each."""
    comps = m.components
    out = np.empty(len(points), dtype=float)
    for i, vec in enumerate(points):
        if len(vec) != len(comps):
            raise ValueError("point dimension does not match multi-index")
        first = vec[0]
        if isinstance(first, UnitSample) and first.exact:
            q = first.denominator
            if all(isinstance(s, UnitSample) and s.exact and s.denominator == q for s in vec):
                dot = 0
                for c, s in zip(comps, vec):
                    dot += c * s.residue
                out[i] = unit_float(dot % q, q)
                continue
        total = Fraction(0)
        for c, s in zip(comps, vec):
            value = s.value if isinstance(s, UnitSample) else Fraction(s)
            total += c * value
        total -= math.floor(total)
        out[i] = unit_float(total.numerator, total.denominator)
    return out


def weyl_sum(points, m, checkpoints=None) -> WeylSeries:
    """W_N(m) at the checkpoints for exact or float point sequences.

    Exact points (UnitSample vectors or rational tuples) go through the
    exact phase reduction; float arrays reduce phases in double precision.
    The sum for a non-canonical m is computed on -m and conjugated, so
    W_N(-m) == conj(W_N(m)) holds bit-exactly by construction.
    """
    m = as_multi_index(m)
    if not m.canonical:
        return weyl_sum(points, -m, checkpoints).conjugate()
    if isinstance(points, np.ndarray):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != m.d:
            raise ValueError("expected a (N, d) float array")
        cps = _checkpoints_for(pts.shape[0], checkpoints)
        phases = np.mod(pts @ np.array(m.components, dtype=float), 1.0)
        return _series_from_phases(m, phases, cps)
    points = list(points)
    if points and isinstance(points[0], (tuple, list)) and points[0] and isinstance(points[0][0], float):
        return weyl_sum(np.array(points, dtype=float), m, checkpoints)
    cps = _checkpoints_for(len(points), checkpoints)
    phases = _exact_phases(points[: cps[-1]], m)
    return _series_from_phases(m, phases, cps)


@dataclass(frozen=True)
class ScanResult:
    """Per-m Weyl series over a common checkpoint grid."""

    series: dict
    checkpoints: tuple[int, ...]

    @property
    def worst_m(self) -> MultiIndex:
        return max(self.series, key=lambda m: self.series[m].final_magnitude)

    @property
    def worst_final_magnitude(self) -> float:
        return self.series[self.worst_m].final_magnitude

    def flagged(self, threshold: float) -> list[MultiIndex]:
        return sorted(
            (m for m, s in self.series.items() if s.final_magnitude >= threshold),
            key=lambda m: m.components,
        )


def scan_points(
    spec: GeneratorSpec,
    seed,
    cfg: WindowConfig,
    count: int,
    frac_bits: int = 64,
) -> np.ndarray:
    """Float window matrix (count, d) for a family/seed/window triple.

    This is where exact residues cross into floats (one rounding per
    scalar sample); every scan consumes this snapshot.
    """
    if cfg.construction == "interleaved_a":
        seeds = list(seed) if isinstance(seed, (list, tuple)) else [seed]
        if len(seeds) != cfg.d:
            raise ValueError(f"interleaved_a needs {cfg.d} seeds, got {len(seeds)}")
        vectors = interleaved_vectors(spec, seeds, count)
        return np.array(
            [[s.as_float() for s in vec] for vec in vectors], dtype=float
        )
    if isinstance(seed, (list, tuple)):
        raise ValueError("sliding_bc takes a single seed")
    n_scalars = cfg.stream_length(count)
    if spec.family == "koksma":
        values = stream_floats(beta_stream(spec, seed, n_scalars, frac_bits=frac_bits))
    else:
        residues, q = residue_stream(spec, seed, n_scalars)
        values = residues_to_floats(residues, q)
    return windows_array(values, cfg, count)


def criterion_scan(
    spec: GeneratorSpec,
    seed,
    cfg: WindowConfig,
    m_radius: int,
    n_max: int,
    checkpoints=None,
) -> ScanResult:
    """Weyl series for every nonzero m with sup-norm <= m_radius.

    Computes the canonical half of the lattice and fills the mirror image
    by conjugation, halving the work without touching the contract.
    """
    cps = tuple(checkpoints) if checkpoints is not None else tuple(checkpoint_grid(n_max))
    points = scan_points(spec, seed, cfg, max(cps))
    series: dict[MultiIndex, WeylSeries] = {}
    for m in canonical_half(cfg.d, m_radius):
        s = weyl_sum(points, m, cps)
        series[m] = s
        series[-m] = s.conjugate()
    return ScanResult(series=series, checkpoints=cps)


def degenerate_m_weyl(p: int) -> MultiIndex:
    """Kernel direction for polynomial streams k^p under (p+1)-wide windows.

    Solves the exact linear system demanding sum_j m_j (k+j-1)^p be
    constant in k (p difference equations, p+1 unknowns, rank p), scales
    the one-dimensional kernel to coprime integers, first nonzero entry
    positive.  Every phase m . beta_k then equals t * const, so |W_N| = 1
    identically: the window dimension p+1 is degenerate for this family.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    width = p + 1
    rows = [
        [Fraction((k + j) ** p - (k + j - 1) ** p) for j in range(1, width + 1)]
        for k in range(1, p + 1)
    ]
    pivots: list[int] = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, p) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(p):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == p:
            break
    free = [c for c in range(width) if c not in pivots]
    if len(free) != 1:
        raise RuntimeError(f"kernel dimension {len(free)}, expected 1")
    sol = [Fraction(0)] * width
    sol[free[0]] = Fraction(1)
    for row_i, c in enumerate(pivots):
        sol[c] = -rows[row_i][free[0]]
    scale = math.lcm(*(f.denominator for f in sol))
    ints = [int(f * scale) for f in sol]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    first = next(v for v in ints if v)
    if first < 0:
        ints = [-v for v in ints]
    return MultiIndex(tuple(ints))


def degenerate_m_multiplicative(base: int) -> MultiIndex:
    """m = (M, -1): phases M*x_k - x_{k+1} vanish identically for M^k t."""
    if base < 2:
        raise ValueError("base must be at least 2")
    return MultiIndex((base, -1))
