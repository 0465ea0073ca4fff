"""Channel-selection strategy tests.

The dual-clock strategy is checked for trace equivalence against an
independently written line-by-line transcription of its hop procedure
(`dual_clock_reference_trace`), with clock seeds and rates pinned through a
fake random stream. The full exhaustive sweep lives in the acceptance suite;
here a smaller slice keeps the module test quick.
"""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crhop.errors import InvalidParameterError, NoChannelError
from crhop.protocols import (
    MdmcaStrategy,
    MemcaStrategy,
    MmcaStrategy,
    MrcsStrategy,
    make_strategy,
    smallest_prime_at_least,
)
from crhop.spectrum import is_prime


class FakeRng:
    """integers() stub feeding a fixed draw sequence (cycled at the end)."""

    def __init__(self, head, cycle=()):
        self._head = list(head)
        self._cycle = itertools.cycle(cycle) if cycle else None
        self.draws = 0

    def integers(self, upper):
        self.draws += 1
        value = self._head.pop(0) if self._head else next(self._cycle)
        assert 0 <= value < upper
        return value


def dual_clock_reference_trace(cu, j1, j2, r1, r2, slots):
    """Literal transcription of the dual-clock hop procedure.

    Runs the inner loop over t = 0..m-1 inside an outer loop that re-chooses
    the rates; rates are pinned here so every epoch reuses (r1, r2).
    """
    cu = sorted(cu)
    m = len(cu)
    mp = [c for c in cu if is_prime(c)]
    np_ = [c for c in cu if not is_prime(c)]
    out = []
    while len(out) < slots:
        for _t in range(m):
            j1 = (j1 + r1) % m
            c1 = mp[j1 % len(mp)] if len(mp) > 0 else cu[j1]
            j2 = (j2 + r2) % m
            c2 = np_[j2 % len(np_)] if len(np_) > 0 else cu[j2]
            if c2 == c1:  # only possible if mp or np_ is empty
                j2 = (j2 + 1) % m
                c2 = cu[j2]
            out.append((c1, c2))
            if len(out) == slots:
                break
    return out


def pinned_mdmca(cu, j1, j2, r1, r2):
    return MdmcaStrategy(cu, FakeRng([j1, j2], cycle=[r1, r2]))


class TestMdmca:
    def test_first_half_forced_arithmetic(self):
        # j1=3, r1=4 over {1..10}: j1 -> 7, 7 mod |{2,3,5,7}| = 3 -> channel 7
        strat = pinned_mdmca(range(1, 11), j1=3, j2=0, r1=4, r2=0)
        assert strat.select(1) == 7

    def test_second_half_forced_arithmetic(self):
        # j2=9, r2=3 over {1..10}: j2 -> 2, 2 mod |Np| = 2 -> Np[2] = 6
        strat = pinned_mdmca(range(1, 11), j1=0, j2=9, r1=0, r2=3)
        strat.select(1)
        assert strat.select(2) == 6

    def test_singleton_collision_branch(self):
        strat = pinned_mdmca([4], j1=0, j2=0, r1=0, r2=0)
        assert strat.select(1) == 4
        assert strat.select(2) == 4  # collision nudge wraps back onto {4}

    def test_empty_set_rejected(self):
        with pytest.raises(NoChannelError):
            MdmcaStrategy([], np.random.default_rng(0))

    def test_bad_half_rejected(self):
        strat = pinned_mdmca(range(1, 5), 0, 0, 1, 1)
        strat.select(1)
        with pytest.raises(InvalidParameterError):
            strat.select(3)

    def test_trace_equivalence_small_slice(self):
        for m in (1, 2, 3):
            for cu in itertools.combinations(range(1, 8), m):
                for j1, j2, r1, r2 in itertools.product(range(m), repeat=4):
                    strat = pinned_mdmca(cu, j1, j2, r1, r2)
                    got = [(strat.select(1), strat.select(2)) for _ in range(3)]
                    assert got == dual_clock_reference_trace(cu, j1, j2, r1, r2, 3)

    def test_rates_redraw_every_m_slots(self):
        rng = FakeRng([0, 0], cycle=[1, 2])
        strat = MdmcaStrategy(range(1, 5), rng)  # m = 4
        assert rng.draws == 2
        for slot in range(1, 10):
            strat.select(1)
            strat.select(2)
            assert rng.draws == 2 + 2 * (1 + (slot - 1) // 4)

    def test_halves_use_disjoint_ranges(self):
        strat = MdmcaStrategy(range(1, 11), np.random.default_rng(7))
        for _ in range(400):
            c1, c2 = strat.select(1), strat.select(2)
            assert c1 in (2, 3, 5, 7)
            assert c2 in (1, 4, 6, 8, 9, 10)
            assert c1 != c2

    @settings(max_examples=60, deadline=None)
    @given(
        cu=st.sets(st.integers(min_value=1, max_value=30), min_size=1, max_size=8),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_emits_within_cu_and_counters_in_range(self, cu, seed):
        strat = MdmcaStrategy(cu, np.random.default_rng(seed))
        for _ in range(3 * len(cu) + 5):
            assert strat.select(1) in strat.cu
            assert strat.select(2) in strat.cu
            assert 0 <= strat.j1 < strat.m and 0 <= strat.j2 < strat.m
            assert 0 <= strat.r1 < strat.m and 0 <= strat.r2 < strat.m
            assert 0 <= strat.t < strat.m


class TestMrcs:
    def test_singleton(self):
        strat = MrcsStrategy({5}, np.random.default_rng(0))
        assert all(strat.select(h) == 5 for h in (1, 2, 1, 2))

    def test_uniform_frequencies(self):
        strat = MrcsStrategy(range(1, 11), np.random.default_rng(123))
        draws = 100_000
        counts = {c: 0 for c in range(1, 11)}
        for i in range(draws):
            counts[strat.select(1 + i % 2)] += 1
        chi2 = sum((n - draws / 10) ** 2 / (draws / 10) for n in counts.values())
        assert chi2 < 27.88  # chi-square 99.9% quantile, 9 degrees of freedom
        for n in counts.values():
            assert abs(n / draws - 0.1) <= 0.01

    def test_deterministic_sequence(self):
        a = MrcsStrategy(range(1, 11), np.random.default_rng(5))
        b = MrcsStrategy(range(1, 11), np.random.default_rng(5))
        assert [a.select(1) for _ in range(50)] == [b.select(1) for _ in range(50)]

    def test_empty_set_rejected(self):
        with pytest.raises(NoChannelError):
            MrcsStrategy([], np.random.default_rng(0))


class TestMmca:
    def test_prime_modulus(self):
        assert smallest_prime_at_least(10) == 11
        strat = MmcaStrategy(range(1, 11), np.random.default_rng(0))
        assert strat.p == 11

    def test_overflow_maps_onto_cu(self):
        strat = MmcaStrategy(range(1, 11), FakeRng([10], cycle=[0]))
        assert strat.select(1) == strat.cu[10 % 10]  # j stays 10, wraps to cu[0]

    def test_emits_within_cu(self):
        strat = MmcaStrategy(range(3, 17), np.random.default_rng(3))
        assert all(strat.select(1 + i % 2) in strat.cu for i in range(500))

    def test_rate_redraw_every_two_p_half_slots(self):
        rng = FakeRng([0], cycle=[2])
        strat = MmcaStrategy(range(1, 6), rng)  # p = 5
        assert rng.draws == 1
        for step in range(1, 31):
            strat.select(1 + (step - 1) % 2)
            assert rng.draws == 1 + 1 + (step - 1) // 10

    def test_two_node_overlap_probability(self):
        # Analytic oracle, p = 5, rates uniform on [0, p): within one rate
        # epoch (2p half-slots) the pair meets unless both rates match and
        # the clocks started apart: P = 1 - (1/p)(1 - 1/p) = 0.84. Across
        # three epochs the miss chance shrinks by 1/p per epoch: 0.9936.
        trials, meet_2p, meet_6p = 1000, 0, 0
        master = np.random.SeedSequence(777)
        for trial_seq in master.spawn(trials):
            sa, sb = trial_seq.spawn(2)
            a = MmcaStrategy(range(1, 6), np.random.default_rng(sa))
            b = MmcaStrategy(range(1, 6), np.random.default_rng(sb))
            for step in range(1, 31):
                half = 1 + (step - 1) % 2
                if a.select(half) == b.select(half):
                    if step <= 10:
                        meet_2p += 1
                    meet_6p += 1
                    break
        assert abs(meet_2p / trials - 0.84) <= 0.04
        assert meet_6p / trials >= 0.985


class TestMemca:
    def test_selection_core_matches_mmca(self):
        a = MemcaStrategy(range(1, 11), np.random.default_rng(42))
        b = MmcaStrategy(range(1, 11), np.random.default_rng(42))
        assert [a.select(1 + i % 2) for i in range(100)] == [
            b.select(1 + i % 2) for i in range(100)
        ]


def test_make_strategy_dispatch():
    rng = np.random.default_rng(0)
    assert make_strategy("mdmca", [1, 2], rng).kind == "mdmca"
    assert make_strategy("mrcs", [1, 2], rng).kind == "mrcs"
    assert make_strategy("mmca", [1, 2], rng).kind == "mmca"
    assert make_strategy("memca", [1, 2], rng).kind == "memca"
    with pytest.raises(InvalidParameterError):
        make_strategy("jumpstay", [1, 2], rng)
