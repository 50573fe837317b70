"""Exact rational seeds and error-tracked fixed-point kernels.

Every analysis in this package starts from a seed t = p/q held exactly.
Integer-coefficient sequences (k*t, M^k*t, k!*t, k^k*t, a_k*t) are then
computed as residues c_k*p mod q, so the unit-interval samples are exact
rationals at any reachable index.  The denominator is a freshly drawn
B-bit odd prime (default B = 256).  Primality matters: composite or
small-factor denominators collapse generators whose coefficients pick up
those factors (k! mod 2^B is eventually 0, killing the factorial family),
while a prime q keeps every coefficient not divisible by q invertible.

Width adequacy heuristic: a B-bit prime behaves like a generic irrational
for any statistic that cannot resolve structure finer than 1/q.  Weyl sums
probe phases m * c_k * p / q; with B = 256, index budgets N <= 1e6 and
|m| <= 1e3 the reachable phase set is ~2^-200 dense relative to q, so no
test in this package can distinguish the rational orbit from an irrational
one.  Raise bit_width if either scale grows by orders of magnitude.

Power sequences t^k are irrational in t and get a fixed-point carrier
(`FixedPointReal`) whose worst-case error in units of the last place is
propagated, never reset, through every multiply and rescale.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import IntervalWidthError, PrecisionBudgetError

DEFAULT_SEED_BITS = 256
# Working-precision ceiling for fixed-point power evaluation.  Covers the
# default power-stream cap below (20_000 steps of a base < 2) with margin.
DEFAULT_MAX_WORK_BITS = 24_576
POWER_STREAM_GUARD_BITS = 96
DEFAULT_MAX_POWER_STEPS = 20_000

_SMALL_PRIMES = [2, 3]
for _c in range(5, 2000, 2):
    if all(_c % _p for _p in _SMALL_PRIMES):
        _SMALL_PRIMES.append(_c)

# Proven-deterministic Miller-Rabin witness set below 2^64.
_MR_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_ROUNDS_LARGE = 48  # error < 4^-48 = 2^-96


def _miller_rabin_round(n: int, d: int, r: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Primality test: deterministic below 2^64, error < 2^-96 above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < 1 << 64:
        witnesses = [a for a in _MR_WITNESSES_64 if a < n - 1]
    else:
        # Bases drawn from an rng keyed on n itself, so the verdict is a
        # pure function of n and reproducible across runs.
        local = random.Random(n)
        witnesses = [local.randrange(2, n - 1) for _ in range(_MR_ROUNDS_LARGE)]
    return all(_miller_rabin_round(n, d, r, a) for a in witnesses)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected exact rational bound, got {type(x).__name__}")


@dataclass(frozen=True)
class RationalSeed:
    """Exact seed p/q inside an open interval, default (0, 1).

    `prime_denominator` records whether q is required to be prime.  The
    sampler always draws odd primes; direct construction may opt out for
    carriers where the denominator is structurally harmless (the power
    family never reduces mod q).
    """

    numerator: int
    denominator: int
    interval: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    prime_denominator: bool = True

    def __post_init__(self):
        lo, hi = (_as_fraction(self.interval[0]), _as_fraction(self.interval[1]))
        object.__setattr__(self, "interval", (lo, hi))
        if lo >= hi:
            raise IntervalWidthError(f"empty interval ({lo}, {hi})")
        if self.denominator < 2:
            raise ValueError("denominator must be at least 2")
        if self.numerator < 1:
            raise ValueError("numerator must be positive")
        if math.gcd(self.numerator, self.denominator) != 1:
            raise ValueError(
                f"{self.numerator}/{self.denominator} is not in lowest terms"
            )
        if not lo < self.value < hi:
            raise ValueError(
                f"{self.numerator}/{self.denominator} outside open interval ({lo}, {hi})"
            )
        if self.prime_denominator and not is_probable_prime(self.denominator):
            raise ValueError(f"denominator {self.denominator} is not prime")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


class SeedSampler:
    """Reproducible source of random rational seeds.

    Identical (rng seed, bit_width) yields the identical seed sequence.
    `spawn(i)` derives an independent child stream for worker i without
    consuming state from the parent.
    """

    def __init__(self, rng_seed: int, bit_width: int = DEFAULT_SEED_BITS):
        if bit_width < 4:
            raise ValueError("bit_width must be at least 4")
        self.rng_seed = rng_seed
        self.bit_width = bit_width
        self._rng = random.Random(rng_seed)

    def spawn(self, index: int) -> "SeedSampler":
        import hashlib

        digest = hashlib.sha256(f"{self.rng_seed}:{index}".encode()).digest()
        return SeedSampler(int.from_bytes(digest[:8], "big"), self.bit_width)

    def _random_prime(self) -> int:
        b = self.bit_width
        while True:
            cand = self._rng.getrandbits(b) | (1 << (b - 1)) | 1
            if is_probable_prime(cand):
                return cand

    def sample(self, interval=(Fraction(0), Fraction(1))) -> RationalSeed:
        lo, hi = _as_fraction(interval[0]), _as_fraction(interval[1])
        if lo >= hi:
            raise IntervalWidthError(f"empty interval ({lo}, {hi})")
        q = self._random_prime()
        # Strict interior: lo < p/q < hi.
        p_min = lo.numerator * q // lo.denominator + 1
        p_max = -((-hi.numerator * q) // hi.denominator) - 1
        if p_min > p_max or p_max < 1:
            raise IntervalWidthError(
                f"interval ({lo}, {hi}) admits no numerator for q={q}"
            )
        p_min = max(p_min, 1)
        multiples = p_max // q - (p_min - 1) // q
        if multiples == p_max - p_min + 1:
            raise IntervalWidthError(
                f"interval ({lo}, {hi}) admits no numerator coprime to q={q}"
            )
        while True:
            p = self._rng.randrange(p_min, p_max + 1)
            if p % q != 0:
                return RationalSeed(p, q, (lo, hi))


def sample_seed(sampler: SeedSampler, interval=(Fraction(0), Fraction(1))) -> RationalSeed:
    """Draw a random seed p/q with q a fresh bit_width-bit odd prime."""
    return sampler.sample(interval)


def modpow(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus for exponent >= 0, modulus >= 2."""
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    if exponent < 0:
        raise ValueError(f"exponent must be nonnegative, got {exponent}")
    return pow(base, exponent, modulus)


def factorial_mod(k: int, modulus: int, prev: int | None = None) -> int:
    """k! mod modulus; with prev = (k-1)! mod modulus it is one multiply."""
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    if prev is not None:
        return k * prev % modulus
    acc = 1
    for i in range(2, k + 1):
        acc = acc * i % modulus
    return acc


def _round_div(a: int, b: int) -> tuple[int, bool]:
    """Round-to-nearest a/b (ties away from zero for b>0); flags inexactness."""
    q, r = divmod(a, b)
    if r == 0:
        return q, False
    return (q + 1, True) if 2 * r >= b else (q, True)


@dataclass(frozen=True)
class FixedPointReal:
    """Value mantissa * 2^-frac_bits with a propagated worst-case error.

    err_ulps bounds |represented - true| in units of 2^-frac_bits for the
    quantity the instance stands for.  Every operation grows the bound by
    its own contribution; nothing ever resets it.  A zero bound certifies
    the dyadic value is exact.
    """

    mantissa: int
    frac_bits: int
    err_ulps: int = 0

    def __post_init__(self):
        if self.frac_bits < 0:
            raise ValueError("frac_bits must be nonnegative")
        if self.err_ulps < 0:
            raise ValueError("err_ulps must be nonnegative")

    @classmethod
    def from_fraction(cls, value: Fraction, frac_bits: int) -> "FixedPointReal":
        value = _as_fraction(value) if not isinstance(value, Fraction) else value
        m, inexact = _round_div(value.numerator << frac_bits, value.denominator)
        return cls(m, frac_bits, 1 if inexact else 0)

    def to_fraction(self) -> Fraction:
        """The represented dyadic value (not the unknown true value)."""
        return Fraction(self.mantissa, 1 << self.frac_bits)

    def to_float(self) -> float:
        return self.mantissa / (1 << self.frac_bits)

    def error_bound(self) -> Fraction:
        return Fraction(self.err_ulps, 1 << self.frac_bits)

    def mul(self, other: "FixedPointReal") -> "FixedPointReal":
        if other.frac_bits != self.frac_bits:
            raise ValueError("operands must share frac_bits")
        f = self.frac_bits
        raw = self.mantissa * other.mantissa
        m, inexact = _round_div(raw, 1 << f)
        carried = (
            abs(self.mantissa) * other.err_ulps
            + abs(other.mantissa) * self.err_ulps
            + self.err_ulps * other.err_ulps
        )
        err = -(-carried >> f) if carried else 0  # ceil division by 2^f
        if inexact:
            err += 1
        return FixedPointReal(m, f, err)

    def rescale(self, frac_bits: int) -> "FixedPointReal":
        if frac_bits == self.frac_bits:
            return self
        if frac_bits > self.frac_bits:
            shift = frac_bits - self.frac_bits
            return FixedPointReal(
                self.mantissa << shift, frac_bits, self.err_ulps << shift
            )
        shift = self.frac_bits - frac_bits
        m, inexact = _round_div(self.mantissa, 1 << shift)
        err = -(-self.err_ulps >> shift) if self.err_ulps else 0
        if inexact:
            err += 1
        return FixedPointReal(m, frac_bits, err)

    def frac(self) -> "FixedPointReal":
        """Fractional part of the represented value.

        The error bound survives unchanged except in the wrap case: when the
        true value sits within err_ulps of an integer the true and
        represented fractional parts can land on opposite sides of it.
        Callers needing certainty must check err_ulps against the distance
        to the nearest integer boundary.
        """
        return FixedPointReal(
            self.mantissa % (1 << self.frac_bits), self.frac_bits, self.err_ulps
        )


def fixed_point_pow(
    t,
    k: int,
    target_frac_bits: int = 64,
    max_bits: int = DEFAULT_MAX_WORK_BITS,
) -> FixedPointReal:
    """t^k with propagated error, fractional part good to ~target_frac_bits.

    t is an exact Fraction (quantized here at working width, so its own
    rounding cannot dominate the result) or an already-built
    FixedPointReal, whose input error is then amplified honestly by the
    exponentiation.  Works at target + k*ceil(log2 t) + 32 fractional
    bits so the rounding accumulated over the multiply chain stays below
    one target ulp.  Raises PrecisionBudgetError when that width would
    exceed max_bits.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not isinstance(t, FixedPointReal):
        t = _as_fraction(t)
        if t <= 1:
            raise ValueError("base must exceed 1")
        # num < 2^nb and den >= 2^(db-1), so t < 2^(nb-db+1)
        lg = max(1, t.numerator.bit_length() - t.denominator.bit_length() + 1)
    else:
        if t.mantissa <= (1 << t.frac_bits):
            raise ValueError("base must exceed 1")
        lg = max(1, t.mantissa.bit_length() - t.frac_bits)
    work = target_frac_bits + k * lg + 32
    if work > max_bits:
        raise PrecisionBudgetError(
            f"k={k} at ~{lg} integer bits per power needs {work} working bits, "
            f"cap is {max_bits}"
        )
    base = (
        t.rescale(work)
        if isinstance(t, FixedPointReal)
        else FixedPointReal.from_fraction(t, work)
    )
    acc = base
    for bit in bin(k)[3:]:
        acc = acc.mul(acc)
        if bit == "1":
            acc = acc.mul(base)
    return acc.rescale(target_frac_bits)


def fixed_point_power_stream(
    t: Fraction,
    count: int,
    hi: Fraction,
    target_frac_bits: int = 64,
    max_steps: int = DEFAULT_MAX_POWER_STEPS,
    max_bits: int = DEFAULT_MAX_WORK_BITS,
):
    """Yield frac(t^k) for k = 1..count as error-tracked fixed-point values.

    One full-width multiply per step at P = ceil(count*log2 hi) + 96
    fractional bits, hi being the supremum of the seed interval.  The
    accumulated error at step k is ~k*t^k working ulps, so after the
    rescale to target_frac_bits every sample carries an err_ulps of only
    a few target ulps.  count is capped (default 20_000) because the cost
    per step grows linearly with the working width.
    """
    t = _as_fraction(t)
    hi = _as_fraction(hi)
    if not 1 < t < hi:
        raise ValueError(f"seed {t} outside (1, {hi})")
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count > max_steps:
        raise PrecisionBudgetError(
            f"count={count} exceeds the power-stream cap {max_steps}"
        )
    lg_hi = math.log2(hi.numerator) - math.log2(hi.denominator)
    work = math.ceil(count * lg_hi) + 1 + POWER_STREAM_GUARD_BITS
    if work > max_bits:
        raise PrecisionBudgetError(
            f"count={count} in (1, {hi}) needs {work} working bits, cap is {max_bits}"
        )
    base = FixedPointReal.from_fraction(t, work)
    acc = base
    for _ in range(count):
        yield acc.frac().rescale(target_frac_bits)
        acc = acc.mul(base)
