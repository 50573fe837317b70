"""Parametric sequence families and window constructions on the unit cube.

A generator family maps an index k and a seed t to x_k(t); the unit-cube
sample is beta_k = x_k(t) mod 1.  The integer-coefficient families reduce
exactly: beta_k = (c_k * p mod q) / q for t = p/q.  The power family t^k
has no such reduction and runs on the fixed-point carrier instead.

Multidimensional points come from two constructions over scalar streams:
interleaved blocks over d independent seeds, or sliding/shifted windows
over a single stream (shift h = 1 overlaps, h = d tiles, any h >= 1 with
an offset o is accepted).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .arithmetic import (
    RationalSeed,
    fixed_point_power_stream,
    FixedPointReal,
)
from .errors import StreamLengthError

FAMILIES = (
    "weyl_power",
    "multiplicative",
    "factorial",
    "self_power",
    "linear_integer",
    "koksma",
)

CONSTRUCTIONS = ("interleaved_a", "sliding_bc")


@dataclass(frozen=True)
class ArithmeticIndices:
    """Index/coefficient descriptor a_i = start + (i-1)*stride."""

    start: int = 1
    stride: int = 1

    def __post_init__(self):
        if self.start < 1 or self.stride < 1:
            raise ValueError("start and stride must be positive")

    def at(self, i: int) -> int:
        return self.start + (i - 1) * self.stride


IndexDescriptor = "tuple[int, ...] | ArithmeticIndices"


def _descriptor_at(desc, i: int) -> int:
    if isinstance(desc, ArithmeticIndices):
        return desc.at(i)
    if i > len(desc):
        raise StreamLengthError(
            f"descriptor has {len(desc)} entries, index {i} requested"
        )
    return desc[i - 1]


@dataclass(frozen=True)
class GeneratorSpec:
    """One sequence family with its parameters and an optional reindexing.

    `permutation` rewires the output stream to beta_{a_1}, beta_{a_2}, ...;
    indices must be positive and pairwise distinct over the consumed prefix.
    """

    family: str
    power: int | None = None
    base: int | None = None
    coefficients: tuple | ArithmeticIndices | None = None
    interval: tuple[Fraction, Fraction] | None = None
    permutation: tuple | ArithmeticIndices | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "weyl_power" and (self.power is None or self.power < 1):
            raise ValueError("weyl_power needs a positive exponent")
        if self.family == "multiplicative" and (self.base is None or self.base < 2):
            raise ValueError("multiplicative needs an integer base >= 2")
        if self.family == "linear_integer" and self.coefficients is None:
            raise ValueError("linear_integer needs a coefficient descriptor")
        if self.family == "koksma":
            iv = self.interval
            if iv is None or not Fraction(1) <= iv[0] or iv[0] >= iv[1]:
                raise ValueError("koksma needs an interval (1, a) with a > 1")

    # -- constructors ----------------------------------------------------

    @classmethod
    def weyl(cls, power: int) -> "GeneratorSpec":
        return cls("weyl_power", power=power)

    @classmethod
    def multiplicative(cls, base: int) -> "GeneratorSpec":
        return cls("multiplicative", base=base)

    @classmethod
    def factorial(cls) -> "GeneratorSpec":
        return cls("factorial")

    @classmethod
    def self_power(cls) -> "GeneratorSpec":
        return cls("self_power")

    @classmethod
    def linear(cls, coefficients) -> "GeneratorSpec":
        if not isinstance(coefficients, ArithmeticIndices):
            coefficients = tuple(int(c) for c in coefficients)
        return cls("linear_integer", coefficients=coefficients)

    @classmethod
    def koksma(cls, hi: Fraction | int = 2) -> "GeneratorSpec":
        return cls("koksma", interval=(Fraction(1), Fraction(hi)))

    def permuted(self, indices) -> "GeneratorSpec":
        if not isinstance(indices, ArithmeticIndices):
            indices = tuple(int(i) for i in indices)
        return replace(self, permutation=indices)

    def seed_interval(self) -> tuple[Fraction, Fraction]:
        if self.family == "koksma":
            return self.interval
        return (Fraction(0), Fraction(1))


@dataclass(frozen=True)
class WindowConfig:
    """Window layout: dimension d, shift h, offset o, construction name."""

    d: int = 1
    h: int = 1
    o: int = 0
    construction: str = "sliding_bc"

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.h < 1:
            raise ValueError("h must be at least 1")
        if self.o < 0:
            raise ValueError("offset must be nonnegative")
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {self.construction!r}")

    def stream_length(self, count: int) -> int:
        """Scalar samples needed for `count` windows."""
        if count == 0:
            return 0
        return self.o + (count - 1) * self.h + self.d


@dataclass(frozen=True)
class UnitSample:
    """One point of [0, 1): exact residue/denominator or fixed-point carrier.

    k is the generator index the sample came from (not the output position;
    the two differ under a permutation wrapper).
    """

    k: int
    residue: int | None = None
    denominator: int | None = None
    fixed: FixedPointReal | None = None

    def __post_init__(self):
        has_exact = self.residue is not None or self.denominator is not None
        if has_exact == (self.fixed is not None):
            raise ValueError("exactly one carrier (residue/denominator or fixed)")
        if has_exact:
            if self.residue is None or self.denominator is None:
                raise ValueError("residue and denominator go together")
            if not 0 <= self.residue < self.denominator:
                raise ValueError("residue out of range")

    @property
    def exact(self) -> bool:
        return self.residue is not None

    @property
    def value(self) -> Fraction:
        if self.exact:
            return Fraction(self.residue, self.denominator)
        return self.fixed.frac().to_fraction()

    def as_float(self) -> float:
        if self.exact:
            return unit_float(self.residue, self.denominator)
        return self.fixed.frac().to_float()


def unit_float(numerator: int, denominator: int) -> float:
    """Correctly rounded float of numerator/denominator, clamped into [0, 1).

    Integer true division rounds to nearest; the clamp only fires when the
    ratio sits within half an ulp of 1.  This is the single lossy step
    between exact residues and the float analysis paths; everything
    upstream is exact integer arithmetic.
    """
    out = numerator / denominator
    if out >= 1.0:
        out = math.nextafter(1.0, 0.0)
    return out


# -- scalar streams ------------------------------------------------------


def _linear_residues_at(spec: GeneratorSpec, seed: RationalSeed, indices) -> list[int]:
    """Exact residues c_k * p mod q at the given generator indices."""
    q, p = seed.denominator, seed.numerator
    fam = spec.family
    if fam == "factorial":
        want = set(indices)
        top = max(want, default=0)
        values = {}
        acc = p % q
        for k in range(1, top + 1):
            acc = acc * k % q
            if k in want:
                values[k] = acc
        return [values[k] for k in indices]
    if fam == "weyl_power":
        return [pow(k, spec.power, q) * p % q for k in indices]
    if fam == "multiplicative":
        return [pow(spec.base, k, q) * p % q for k in indices]
    if fam == "self_power":
        return [pow(k, k, q) * p % q for k in indices]
    if fam == "linear_integer":
        out = []
        for k in indices:
            c = _descriptor_at(spec.coefficients, k)
            if c < 1:
                raise ValueError(f"coefficient at index {k} must be positive, got {c}")
            out.append(c % q * p % q)
        return out
    raise ValueError(f"{fam} has no exact residue path")


def residue_stream(
    spec: GeneratorSpec, seed: RationalSeed, count: int
) -> tuple[list[int], int]:
    """Exact residues of the first `count` outputs plus the denominator.

    Consecutive indices use one-multiply recurrences (factorial and
    multiplicative) or one modular power per index; a permutation wrapper
    evaluates the inner family at the rewired indices.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if spec.family == "koksma":
        raise ValueError("koksma has no exact residue path; use beta_stream")
    _check_seed(spec, seed)
    indices = stream_indices(spec, count)
    q, p = seed.denominator, seed.numerator
    if spec.permutation is None:
        fam = spec.family
        if fam == "factorial":
            out = []
            acc = p % q
            for k in range(1, count + 1):
                acc = acc * k % q
                out.append(acc)
            return out, q
        if fam == "multiplicative":
            out = []
            acc = p % q
            for _ in range(count):
                acc = acc * spec.base % q
                out.append(acc)
            return out, q
        if fam == "weyl_power" and spec.power == 1:
            out = []
            acc = 0
            step = p % q
            for _ in range(count):
                acc = (acc + step) % q
                out.append(acc)
            return out, q
    return _linear_residues_at(spec, seed, indices), q


def stream_indices(spec: GeneratorSpec, count: int) -> list[int]:
    """Generator indices of the first `count` outputs (permutation applied)."""
    if spec.permutation is None:
        return list(range(1, count + 1))
    indices = [_descriptor_at(spec.permutation, i) for i in range(1, count + 1)]
    if any(a < 1 for a in indices):
        raise ValueError("permutation indices must be positive")
    if len(set(indices)) != len(indices):
        raise ValueError("permutation indices must be pairwise distinct")
    return indices


def _check_seed(spec: GeneratorSpec, seed: RationalSeed) -> None:
    lo, hi = spec.seed_interval()
    if not lo < seed.value < hi:
        raise ValueError(f"seed {seed} outside the family interval ({lo}, {hi})")


def beta_stream(
    spec: GeneratorSpec,
    seed: RationalSeed,
    count: int,
    *,
    frac_bits: int = 64,
    max_power_steps: int | None = None,
) -> list[UnitSample]:
    """First `count` unit-cube samples beta_k = x_k(t) mod 1.

    Integer-coefficient families return exact residue samples.  The koksma
    family returns fixed-point samples carrying their own error bound; its
    index budget is capped by the precision budget (see
    `fixed_point_power_stream`).
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    _check_seed(spec, seed)
    if spec.family != "koksma":
        residues, q = residue_stream(spec, seed, count)
        indices = stream_indices(spec, count)
        return [
            UnitSample(k=k, residue=r, denominator=q)
            for k, r in zip(indices, residues)
        ]
    indices = stream_indices(spec, count)
    top = max(indices, default=0)
    kwargs = {}
    if max_power_steps is not None:
        kwargs["max_steps"] = max_power_steps
    stream = fixed_point_power_stream(
        seed.value, top, spec.interval[1], target_frac_bits=frac_bits, **kwargs
    )
    by_index = {}
    want = set(indices)
    for k, sample in enumerate(stream, start=1):
        if k in want:
            by_index[k] = sample
    return [UnitSample(k=k, fixed=by_index[k]) for k in indices]


# -- window constructions ------------------------------------------------


def window_vectors(
    stream, cfg: WindowConfig, count: int | None = None
) -> list[tuple]:
    """d-dimensional points from one scalar stream by shifted windows.

    Point k (1-based) collects stream elements (k-1)*h + o + 1 .. + d.
    With h >= d the windows are index-disjoint; h = 1 is the overlapping
    sliding construction.
    """
    if cfg.construction != "sliding_bc":
        raise ValueError("window_vectors applies to the sliding_bc construction")
    stream = list(stream)
    room = len(stream) - cfg.o - cfg.d
    available = room // cfg.h + 1 if room >= 0 else 0
    if count is None:
        count = available
    elif count > available:
        raise StreamLengthError(
            f"stream of {len(stream)} supports {available} windows, {count} requested"
        )
    return [
        tuple(stream[(k - 1) * cfg.h + cfg.o : (k - 1) * cfg.h + cfg.o + cfg.d])
        for k in range(1, count + 1)
    ]


def interleaved_vectors(
    spec: GeneratorSpec, seeds, count: int, d: int | None = None
) -> list[tuple[UnitSample, ...]]:
    """d-dimensional points from d seeds of one family, interleaved blocks.

    Coordinate j of point k is x_{(k-1)d+j}(t_j) mod 1: each coordinate
    runs the same family at its own seed while the index sweeps through
    all the integers block by block.  d defaults to the seed count and is
    checked against it when given.
    """
    seeds = list(seeds)
    if d is None:
        d = len(seeds)
    if len(seeds) != d:
        raise ValueError(f"{len(seeds)} seeds for d={d} coordinates")
    if d < 1:
        raise ValueError("need at least one seed")
    if count < 0:
        raise ValueError("count must be nonnegative")
    if spec.permutation is not None:
        raise ValueError("interleaving a permuted stream is not defined")
    for seed in seeds:
        _check_seed(spec, seed)
    columns = []
    for j, seed in enumerate(seeds, start=1):
        indices = [(k - 1) * d + j for k in range(1, count + 1)]
        if spec.family == "koksma":
            column = beta_stream(spec.permuted(tuple(indices)), seed, count)
        else:
            residues = _linear_residues_at(spec, seed, indices)
            column = [
                UnitSample(k=k, residue=r, denominator=seed.denominator)
                for k, r in zip(indices, residues)
            ]
        columns.append(column)
    return [tuple(col[i] for col in columns) for i in range(count)]


# -- float consumption ---------------------------------------------------


def residues_to_floats(residues, denominator: int) -> np.ndarray:
    return np.array([unit_float(r, denominator) for r in residues], dtype=float)


def stream_floats(stream) -> np.ndarray:
    return np.array([s.as_float() for s in stream], dtype=float)


def windows_array(values: np.ndarray, cfg: WindowConfig, count: int | None = None) -> np.ndarray:
    """Float window matrix (count, d) over a scalar float stream."""
    if cfg.construction != "sliding_bc":
        raise ValueError("windows_array applies to the sliding_bc construction")
    values = np.asarray(values, dtype=float)
    room = values.size - cfg.o - cfg.d
    available = room // cfg.h + 1 if room >= 0 else 0
    if count is None:
        count = available
    elif count > available:
        raise StreamLengthError(
            f"stream of {values.size} supports {available} windows, {count} requested"
        )
    view = np.lib.stride_tricks.sliding_window_view(values, cfg.d)
    return view[cfg.o : cfg.o + (count - 1) * cfg.h + 1 : cfg.h] if count else np.empty((0, cfg.d))


# -- stream files --------------------------------------------------------


def export_stream_csv(path, stream) -> None:
    """Stream snapshot: k,residue,denominator for exact samples, k,value else."""
    stream = list(stream)
    exact = all(s.exact for s in stream)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if exact:
            writer.writerow(["k", "residue", "denominator"])
            for s in stream:
                writer.writerow([s.k, s.residue, s.denominator])
        else:
            writer.writerow(["k", "value"])
            for s in stream:
                writer.writerow([s.k, repr(s.as_float())])


def read_index_file(path) -> tuple[int, ...]:
    """One positive integer per line; blank lines and # comments skipped."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(int(line))
    return tuple(out)
