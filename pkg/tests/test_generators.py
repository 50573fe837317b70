"""Generator families, window constructions, and stream plumbing."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist.arithmetic import RationalSeed, SeedSampler
from equidist.errors import StreamLengthError
from equidist.generators import (
    ArithmeticIndices,
    GeneratorSpec,
    UnitSample,
    WindowConfig,
    beta_stream,
    export_stream_csv,
    interleaved_vectors,
    read_index_file,
    residue_stream,
    stream_floats,
    unit_float,
    window_vectors,
    windows_array,
)
from equidist.discrepancy import star_discrepancy_1d


def _values(stream):
    return [s.value for s in stream]


THIRD = RationalSeed(1, 3, prime_denominator=True)
FIFTH = RationalSeed(1, 5, prime_denominator=True)


class TestBetaStreams:
    def test_weyl_one_third(self):
        got = _values(beta_stream(GeneratorSpec.weyl(1), THIRD, 3))
        assert got == [Fraction(1, 3), Fraction(2, 3), Fraction(0)]

    def test_factorial_fifth(self):
        got = _values(beta_stream(GeneratorSpec.factorial(), FIFTH, 5))
        assert got == [
            Fraction(1, 5),
            Fraction(2, 5),
            Fraction(1, 5),
            Fraction(4, 5),
            Fraction(0),
        ]

    def test_multiplicative_third(self):
        got = _values(beta_stream(GeneratorSpec.multiplicative(2), THIRD, 4))
        assert got == [Fraction(2, 3), Fraction(1, 3)] * 2

    def test_koksma_cube(self):
        seed = RationalSeed(3, 2, interval=(Fraction(1), Fraction(2)))
        got = beta_stream(GeneratorSpec.koksma(2), seed, 3)
        assert got[2].as_float() == 0.375
        assert not got[2].exact

    def test_koksma_rational_agreement(self):
        t = Fraction(13, 9)
        seed = RationalSeed(13, 9, interval=(Fraction(1), Fraction(2)), prime_denominator=False)
        stream = beta_stream(GeneratorSpec.koksma(2), seed, 50)
        for k, s in enumerate(stream, start=1):
            exact = (t**k) % 1
            assert abs(s.value - exact) < Fraction(1, 2**60)

    def test_self_power(self):
        got = _values(beta_stream(GeneratorSpec.self_power(), FIFTH, 4))
        # k^k mod 5 for k=1..4: 1, 4, 27 mod 5 = 2, 256 mod 5 = 1
        assert got == [Fraction(1, 5), Fraction(4, 5), Fraction(2, 5), Fraction(1, 5)]

    def test_linear_arithmetic_descriptor(self):
        spec = GeneratorSpec.linear(ArithmeticIndices(start=2, stride=3))
        got = _values(beta_stream(spec, FIFTH, 4))
        # coefficients 2, 5, 8, 11
        assert got == [Fraction(2, 5), Fraction(0), Fraction(3, 5), Fraction(1, 5)]

    def test_modular_direct_agreement(self):
        """(c_k p mod q)/q must equal frac(c_k p / q) by full division."""
        seed = SeedSampler(17, bit_width=64).sample()
        p, q = seed.numerator, seed.denominator
        coeffs = {
            GeneratorSpec.weyl(3): lambda k: k**3,
            GeneratorSpec.multiplicative(5): lambda k: 5**k,
            GeneratorSpec.factorial(): lambda k: math.factorial(k),
            GeneratorSpec.self_power(): lambda k: k**k,
            GeneratorSpec.linear(ArithmeticIndices(3, 2)): lambda k: 3 + 2 * (k - 1),
        }
        for spec, c in coeffs.items():
            stream = beta_stream(spec, seed, 20)
            for k, s in enumerate(stream, start=1):
                assert s.value == Fraction(c(k) * p, q) % 1

    def test_permuted_stream(self):
        spec = GeneratorSpec.factorial().permuted([3, 1, 5])
        got = _values(beta_stream(spec, FIFTH, 3))
        base = _values(beta_stream(GeneratorSpec.factorial(), FIFTH, 5))
        assert got == [base[2], base[0], base[4]]

    def test_permutation_must_be_distinct(self):
        with pytest.raises(ValueError):
            beta_stream(GeneratorSpec.factorial().permuted([1, 2, 1]), FIFTH, 3)

    def test_permutation_must_be_positive(self):
        with pytest.raises(ValueError):
            beta_stream(GeneratorSpec.factorial().permuted([0, 1]), FIFTH, 2)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            GeneratorSpec.weyl(0)
        with pytest.raises(ValueError):
            GeneratorSpec.multiplicative(1)
        with pytest.raises(ValueError):
            GeneratorSpec.koksma(1)

    def test_seed_outside_family_interval(self):
        with pytest.raises(ValueError):
            beta_stream(GeneratorSpec.koksma(2), THIRD, 3)


class TestUnitSample:
    def test_exact_carrier(self):
        s = UnitSample(k=1, residue=2, denominator=5)
        assert s.exact and s.value == Fraction(2, 5)

    def test_residue_range(self):
        with pytest.raises(ValueError):
            UnitSample(k=1, residue=5, denominator=5)

    def test_exactly_one_carrier(self):
        with pytest.raises(ValueError):
            UnitSample(k=1)

    def test_unit_float_correct_rounding(self):
        q = (1 << 61) - 1
        for p in (1, 2, q // 3, q // 2, q - (1 << 20)):
            assert unit_float(p, q) == float(Fraction(p, q))

    def test_unit_float_clamps_below_one(self):
        # (q-1)/q rounds to 1.0 as a double; the clamp keeps it inside [0,1)
        q = (1 << 61) - 1
        assert float(Fraction(q - 1, q)) == 1.0
        assert unit_float(q - 1, q) == math.nextafter(1.0, 0.0)


class TestWindows:
    def test_disjoint_blocks(self):
        s = list(range(1, 7))
        cfg = WindowConfig(d=2, h=2)
        assert window_vectors(s, cfg) == [(1, 2), (3, 4), (5, 6)]

    def test_overlapping(self):
        cfg = WindowConfig(d=2, h=1)
        assert window_vectors([1, 2, 3, 4], cfg) == [(1, 2), (2, 3), (3, 4)]

    def test_offset(self):
        cfg = WindowConfig(d=1, h=1, o=3)
        assert window_vectors([1, 2, 3, 4, 5], cfg) == [(4,), (5,)]

    def test_stream_too_short(self):
        with pytest.raises(StreamLengthError):
            window_vectors([1, 2, 3], WindowConfig(d=2, h=2), count=2)

    def test_stream_length_accounting(self):
        cfg = WindowConfig(d=3, h=2, o=1)
        assert cfg.stream_length(4) == 1 + 3 * 2 + 3

    def test_windows_array_matches_window_vectors(self):
        vals = np.arange(10, dtype=float) / 10
        for cfg in (WindowConfig(d=2, h=2), WindowConfig(d=3, h=1, o=2)):
            arr = windows_array(vals, cfg)
            ref = window_vectors(list(vals), cfg)
            assert arr.shape == (len(ref), cfg.d)
            assert [tuple(row) for row in arr] == ref

    def test_config_validation(self):
        with pytest.raises(ValueError):
            WindowConfig(d=0)
        with pytest.raises(ValueError):
            WindowConfig(h=0)
        with pytest.raises(ValueError):
            WindowConfig(o=-1)
        with pytest.raises(ValueError):
            WindowConfig(construction="nope")


class TestInterleaved:
    def test_two_seed_example(self):
        vecs = interleaved_vectors(GeneratorSpec.weyl(1), [THIRD, FIFTH], 2)
        first = tuple(s.value for s in vecs[0])
        second = tuple(s.value for s in vecs[1])
        assert first == (Fraction(1, 3), Fraction(2, 5))
        assert second == (Fraction(0), Fraction(4, 5))

    def test_d_one_reduces_to_beta_stream(self):
        vecs = interleaved_vectors(GeneratorSpec.factorial(), [FIFTH], 5)
        assert [v[0].value for v in vecs] == _values(
            beta_stream(GeneratorSpec.factorial(), FIFTH, 5)
        )

    def test_seed_arity_error(self):
        with pytest.raises(ValueError):
            interleaved_vectors(GeneratorSpec.weyl(1), [THIRD, FIFTH], 2, d=3)

    def test_rejects_permuted_spec(self):
        spec = GeneratorSpec.weyl(1).permuted([2, 1])
        with pytest.raises(ValueError):
            interleaved_vectors(spec, [THIRD, FIFTH], 2)


class TestWindowingIsNotSimpleEquidistribution:
    def test_scaled_half_orbits_counterexample(self):
        """A simply equidistributed stream whose h=2 windows are not.

        Odd entries walk the golden-rotation orbit squeezed into [0, 1/2),
        even entries the same orbit shifted into [1/2, 1).  The union is
        uniform on [0, 1), but the d=1, h=2 window sees only the odd
        subsequence, which never leaves the lower half.
        """
        n = 2000
        phi = (5**0.5 - 1) / 2
        odd = (np.arange(1, n + 1) * phi % 1.0) / 2
        even = 0.5 + (np.arange(1, n + 1) * (2**0.5 - 1) % 1.0) / 2
        stream = np.empty(2 * n)
        stream[0::2] = odd
        stream[1::2] = even
        assert star_discrepancy_1d(stream).value < 0.05
        windowed = windows_array(stream, WindowConfig(d=1, h=2))
        assert star_discrepancy_1d(windowed[:, 0]).value > 0.45


class TestStreamSerialization:
    def test_exact_csv_round_trip(self, tmp_path):
        stream = beta_stream(GeneratorSpec.factorial(), FIFTH, 5)
        path = tmp_path / "stream.csv"
        export_stream_csv(path, stream)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "k,residue,denominator"
        assert lines[1] == "1,1,5"
        assert len(lines) == 6

    def test_float_csv_for_koksma(self, tmp_path):
        seed = RationalSeed(3, 2, interval=(Fraction(1), Fraction(2)))
        stream = beta_stream(GeneratorSpec.koksma(2), seed, 3)
        path = tmp_path / "stream.csv"
        export_stream_csv(path, stream)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "k,value"
        assert float(lines[3].split(",")[1]) == 0.375

    def test_read_index_file(self, tmp_path):
        path = tmp_path / "perm.txt"
        path.write_text("# comment\n3\n1\n\n5\n")
        assert read_index_file(path) == (3, 1, 5)


class TestResidueStream:
    @given(st.integers(min_value=0, max_value=10**6))
    @settings(max_examples=25, deadline=None)
    def test_fast_recurrences_match_direct(self, rng_seed):
        seed = SeedSampler(rng_seed, bit_width=32).sample()
        p, q = seed.numerator, seed.denominator
        for spec, c in (
            (GeneratorSpec.factorial(), math.factorial),
            (GeneratorSpec.multiplicative(3), lambda k: 3**k),
            (GeneratorSpec.weyl(1), lambda k: k),
        ):
            res, got_q = residue_stream(spec, seed, 12)
            assert got_q == q
            assert res == [c(k) * p % q for k in range(1, 13)]

    def test_floats_match_values(self):
        seed = SeedSampler(23, bit_width=64).sample()
        stream = beta_stream(GeneratorSpec.factorial(), seed, 50)
        floats = stream_floats(stream)
        for s, f in zip(stream, floats):
            assert f == s.as_float() == float(s.value)
