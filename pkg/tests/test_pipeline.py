"""End-to-end fidelity, rate, and operating-point checks."""

import math
import os

import numpy as np
import pytest

from repeaterlab.bell_algebra import BellDiagonal, purify_ideal, swap_ideal
from repeaterlab.codes import code_catalog
from repeaterlab.core import ChannelParams, HardwareParams
from repeaterlab.pipeline import (
    ProtocolConfig,
    evaluate,
    final_fidelity,
    heralding_probability,
    operating_point,
    pump_success_probability,
    rate_purified,
    rate_unpurified,
    repetition_final_fidelity,
    sweep,
    timing,
    with_fidelity,
)

CODES = {c.label: c for c in code_catalog()}


def make_cfg(label="[3,1,3]", rounds=2, tau_c=0.1, one_minus_t=1e-3, fidelity=0.95, **kw):
    hw = HardwareParams(local_transmission=1.0 - one_minus_t, memory_coherence_s=tau_c)
    return ProtocolConfig(
        kw.pop("total", 1280.0),
        kw.pop("segment", 20.0),
        CODES[label],
        rounds,
        hw,
        fidelity=fidelity,
        **kw,
    )


class TestConfig:
    def test_power_of_two_segments(self):
        assert make_cfg().num_segments() == 64

    @pytest.mark.parametrize("total, segment", [(1280.0, 30.0), (20.0, 20.0), (60.0, 20.0)])
    def test_bad_ratio(self, total, segment):
        with pytest.raises(ValueError):
            make_cfg(total=total, segment=segment)

    def test_exactly_one_fidelity_source(self):
        ch = ChannelParams(20.0, 20.0, 0.01)
        with pytest.raises(ValueError):
            make_cfg(fidelity=None)
        with pytest.raises(ValueError):
            make_cfg(channel=ch)  # both given

    def test_channel_route(self):
        ch = ChannelParams(20.0, 20.0, 0.01)
        hw = HardwareParams(0.999, 0.1)
        cfg = ProtocolConfig(1280.0, 20.0, CODES["[3,1,3]"], 2, hw, channel=ch)
        assert cfg.raw_fidelity() == pytest.approx(ch.fidelity(), rel=1e-15)
        assert cfg.segment_transmittance() == pytest.approx(ch.transmittance(), rel=1e-15)

    def test_channel_segment_mismatch(self):
        ch = ChannelParams(25.0, 20.0, 0.01)
        hw = HardwareParams(0.999, 0.1)
        with pytest.raises(ValueError):
            ProtocolConfig(1280.0, 20.0, CODES["[3,1,3]"], 2, hw, channel=ch)

    def test_with_fidelity_keeps_attenuation(self):
        ch = ChannelParams(20.0, 20.0, 0.01, attenuation_length_km=30.0)
        hw = HardwareParams(0.999, 0.1)
        cfg = ProtocolConfig(1280.0, 20.0, CODES["[3,1,3]"], 2, hw, channel=ch)
        pinned = with_fidelity(cfg, 0.9)
        assert pinned.fidelity == 0.9
        assert pinned.channel is None
        assert pinned.segment_transmittance() == pytest.approx(math.exp(-20.0 / 30.0), rel=1e-12)


class TestTiming:
    def test_windows(self):
        tm = timing(make_cfg(rounds=2))
        assert tm.t0_s == pytest.approx(2e-4, rel=1e-12)
        assert tm.t_purify_s == pytest.approx(4e-4, rel=1e-12)
        assert tm.t_half_s == pytest.approx(3e-4, rel=1e-12)
        assert tm.num_segments == 64

    def test_k0(self):
        tm = timing(make_cfg(rounds=0))
        assert tm.t_purify_s == pytest.approx(tm.t0_s, rel=1e-12)
        assert tm.t_half_s == pytest.approx(tm.t0_s / 2.0, rel=1e-12)


class TestFinalFidelity:
    def test_perfect_hardware_is_lossless(self):
        cfg = make_cfg(tau_c=math.inf, one_minus_t=0.0, fidelity=1.0)
        assert repetition_final_fidelity(cfg) == pytest.approx(1.0, abs=1e-12)

    def test_family_dispatch_guard(self):
        with pytest.raises(ValueError):
            repetition_final_fidelity(make_cfg("[7,1,3]"))

    def test_gate_loss_exponent(self):
        # pure gate loss at n=3, N=64, k=2: exponent 2*3*(63 + 6) = 414
        cfg = make_cfg(tau_c=math.inf, one_minus_t=1e-3, fidelity=1.0, rounds=2)
        q_g = cfg.hardware.gate_error()
        assert repetition_final_fidelity(cfg) == pytest.approx((1.0 - q_g) ** 414, rel=1e-12)

    def test_unencoded_k0_is_pure_swap_degradation(self):
        # with perfect hardware the pipeline is the bare swap recursion
        for f in (0.7, 0.85, 0.95, 0.999):
            cfg = make_cfg("[1,1,1]", rounds=0, tau_c=math.inf, one_minus_t=0.0, fidelity=f)
            state = BellDiagonal(f, 1.0 - f, 0.0, 0.0)
            for _ in range(6):  # log2(64)
                state = swap_ideal(state)
            assert final_fidelity(cfg) == pytest.approx(state.a, rel=1e-12)

    def test_pump_rounds_use_ideal_recursion(self):
        cfg = make_cfg(rounds=2, tau_c=math.inf, one_minus_t=0.0, fidelity=0.9)
        state = BellDiagonal(0.9, 0.0, 0.1, 0.0)  # P_n = 1 at q_eff = 0
        for _ in range(2):
            state = purify_ideal(state).state
        for _ in range(6):
            state = swap_ideal(state)
        assert final_fidelity(cfg) == pytest.approx(state.a, rel=1e-12)

    def test_monotone_in_raw_fidelity(self):
        for label in ("[3,1,3]", "[7,1,3]"):
            cfg = make_cfg(label)
            grid = np.linspace(0.55, 1.0 - 1e-9, 40)
            vals = [final_fidelity(with_fidelity(cfg, float(f))) for f in grid]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_css_point(self):
        # frozen: Steane code end-to-end at the default hardware point
        cfg = make_cfg("[7,1,3]", rounds=2, tau_c=0.1, one_minus_t=1e-3, fidelity=1.0 - 1e-9)
        assert final_fidelity(cfg) == pytest.approx(0.9260109135912726, rel=1e-9)


class TestRates:
    def test_unpurified_paper_point(self):
        cfg = make_cfg(rounds=0)
        assert heralding_probability(cfg) == pytest.approx(0.08467045913848248, rel=1e-12)
        assert rate_unpurified(cfg) == pytest.approx(141.1174318974708, rel=1e-12)
        # quoted: 0.08468 / (3 * 2e-4) = 141.1 Hz
        assert rate_unpurified(cfg) == pytest.approx(141.1, abs=0.1)

    def test_purified_denominator(self):
        # k=2, n=3: denominator n 2^k (k/2+1) T0 = 4.8e-3 s
        cfg = make_cfg(rounds=2)
        expected = heralding_probability(cfg) * pump_success_probability(cfg) / 4.8e-3
        assert rate_purified(cfg) == pytest.approx(expected, rel=1e-12)

    def test_k0_directs_to_unpurified(self):
        with pytest.raises(ValueError, match="rate_unpurified"):
            rate_purified(make_cfg(rounds=0))

    def test_pump_tree_discount(self):
        # R_pur <= R_raw / (2^k (k/2 + 1)) since P_k <= 1
        for label in ("[3,1,3]", "[7,1,3]", "[23,1,7]"):
            for k in (1, 2, 3):
                cfg = make_cfg(label, rounds=k)
                bound = rate_unpurified(cfg) / (2**k * (k / 2.0 + 1.0))
                assert rate_purified(cfg) <= bound + 1e-15

    def test_pump_probability_k0(self):
        assert pump_success_probability(make_cfg(rounds=0)) == 1.0


class TestOperatingPoint:
    def test_repetition_three(self):
        op = operating_point(make_cfg("[3,1,3]", tau_c=0.01, one_minus_t=1e-4), 0.95)
        assert op.feasible
        assert op.operating_fidelity == pytest.approx(0.9147950914555665, abs=2e-4)
        assert op.result.rate_per_memory_hz == pytest.approx(24.99706520396988, rel=1e-3)
        # the found point overshoots the target by < bisection resolution
        assert 0.95 <= op.result.f_final < 0.9502

    def test_golay(self):
        op = operating_point(make_cfg("[23,1,7]", tau_c=0.1, one_minus_t=1e-3), 0.95)
        assert op.feasible
        assert op.result.rate_per_memory_hz == pytest.approx(6.009450172268023, rel=1e-3)

    def test_steane(self):
        op = operating_point(make_cfg("[7,1,3]", tau_c=1.0, one_minus_t=1e-3), 0.95)
        assert op.feasible
        assert op.result.rate_per_memory_hz == pytest.approx(14.276364565979504, rel=1e-3)

    def test_infeasible_reports_max(self):
        op = operating_point(make_cfg("[1,1,1]", rounds=0), 0.9)
        assert not op.feasible
        assert op.operating_fidelity is None
        assert op.max_f_final == pytest.approx(0.8513565623926452, rel=1e-9)

    def test_target_domain(self):
        with pytest.raises(ValueError):
            operating_point(make_cfg(), 1.0)


class TestSweep:
    def test_rows_in_order(self):
        cfgs = [make_cfg("[3,1,3]"), make_cfg("[7,1,3]"), make_cfg("[23,1,7]")]
        rows = sweep(cfgs)
        assert [r.code_label for r in rows] == ["[3,1,3]", "[7,1,3]", "[23,1,7]"]
        assert all(r.error is None for r in rows)
        assert rows[0].f_final == pytest.approx(final_fidelity(cfgs[0]), rel=1e-15)

    def test_threaded_matches_serial(self):
        cfgs = [make_cfg("[3,1,3]", rounds=k) for k in (0, 1, 2)] * 3
        assert sweep(cfgs, max_workers=4) == sweep(cfgs)

    def test_empty(self):
        assert sweep([]) == []

    def test_row_fields(self):
        row = evaluate(make_cfg("[23,1,7]"))
        assert row.family == "css"
        assert row.rounds == 2
        assert row.tau_c_s == 0.1
        assert row.one_minus_t == pytest.approx(1e-3, rel=1e-9)
        # css rows wait the storage window t'_k, repetition rows t_k
        assert row.t_wait_s == pytest.approx(3e-4, rel=1e-12)
        assert evaluate(make_cfg("[3,1,3]")).t_wait_s == pytest.approx(4e-4, rel=1e-12)
