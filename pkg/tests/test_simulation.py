"""Monte-Carlo harness: calibration, determinism, counting, CSV."""

import io

import numpy as np
import pytest
from scipy.stats import norm

from polarfec.channel import (
    PURPOSE_NOISE,
    ChannelModel,
    block_stream,
    transmit,
)
from polarfec.construction import Method
from polarfec.decoding import DecodeResult, Decoder
from polarfec.numerics import LLR_MAX
from polarfec.simulation import (
    BlockPolicy,
    ConfigError,
    PointConfig,
    SimRecord,
    run_point,
    run_sweep,
    write_csv,
)


class TestChannelModel:
    def test_sigma2_from_ebn0(self):
        ch = ChannelModel.from_ebn0_db(2.0, 0.5)
        assert ch.sigma2 == pytest.approx(1.0 / (2 * 0.5 * 10 ** 0.2))
        assert ch.snr == pytest.approx(0.5 * 10 ** 0.2)
        assert ch.base_mean_llr == pytest.approx(4 * ch.snr)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            ChannelModel.from_ebn0_db(2.0, 0.0)
        with pytest.raises(ValueError):
            ChannelModel(sigma2=0.0, ebn0_db=0.0, rate=0.5)


class TestTransmit:
    def test_noiseless_soft_values(self):
        ch = ChannelModel.from_ebn0_db(2.0, 0.5)
        cw = np.array([0, 1, 1, 0], dtype=np.uint8)
        llr, h = transmit(cw, ch, None, noiseless=True)
        assert np.array_equal(llr, np.array([1, -1, -1, 1]) * LLR_MAX)
        assert np.array_equal(h, np.array([1.0, -1.0, -1.0, 1.0]))

    def test_llr_mean_at_bit_zero(self):
        # E[L] = 2 / sigma2 at a transmitted zero
        ch = ChannelModel(sigma2=0.8, ebn0_db=0.0, rate=0.5)
        rng = block_stream(1, 0, PURPOSE_NOISE)
        total, count = 0.0, 0
        for _ in range(200):
            llr, _ = transmit(np.zeros(5000, dtype=np.uint8), ch, rng,
                              llr_max=1e9)
            total += llr.sum()
            count += llr.size
        mean = total / count
        sem = np.sqrt(2 * ch.base_mean_llr / count)  # var(L) = 2 E[L]
        assert abs(mean - ch.base_mean_llr) < 4 * sem

    @pytest.mark.parametrize("sigma2", [0.5, 1.0, 0.25])
    def test_raw_channel_ber_matches_q_function(self, sigma2):
        # closed-form BPSK hard-decision error rate as the oracle
        ch = ChannelModel(sigma2=sigma2, ebn0_db=0.0, rate=1.0)
        rng = block_stream(2, 0, PURPOSE_NOISE)
        n = 400_000
        llr, _ = transmit(np.zeros(n, dtype=np.uint8), ch, rng, llr_max=1e9)
        ber = np.count_nonzero(llr < 0) / n
        p = norm.sf(1.0 / np.sqrt(sigma2))
        assert abs(ber - p) < 3 * np.sqrt(p * (1 - p) / n)

    def test_pdiff_is_tanh_of_half_llr(self):
        ch = ChannelModel.from_ebn0_db(1.0, 0.5)
        llr, h = transmit(np.zeros(64, dtype=np.uint8), ch,
                          block_stream(3, 0, PURPOSE_NOISE))
        assert np.array_equal(h, np.tanh(llr / 2))
        assert np.all(np.abs(llr) <= LLR_MAX)


class TestBlockStream:
    def test_purpose_and_block_separate_streams(self):
        a = block_stream(5, 0, 0).standard_normal(4)
        b = block_stream(5, 0, 1).standard_normal(4)
        c = block_stream(5, 1, 0).standard_normal(4)
        d = block_stream(5, 0, 0).standard_normal(4)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert np.array_equal(a, d)


BASE = PointConfig(n=64, k=32, method=Method.RM, decoder="scd", ebn0_db=2.0)


class TestRunPoint:
    def test_noiseless_no_errors(self):
        for n in (64, 1024):
            for method in (Method.RM, Method.DEGA, Method.BEC, Method.EQSNR):
                for decoder in ("scd", "msd"):
                    for systematic in (False, True):
                        cfg = PointConfig(n=n, k=n // 2, method=method,
                                          decoder=decoder, systematic=systematic,
                                          noiseless=True)
                        rec = run_point(cfg, BlockPolicy(fixed=3), seed=1)
                        assert rec.bit_errors == 0 and rec.block_errors == 0

    def test_noiseless_no_errors_genie_construction(self):
        for decoder in ("scd", "msd"):
            for systematic in (False, True):
                cfg = PointConfig(n=64, k=32, method=Method.GENIE,
                                  genie_blocks=200, decoder=decoder,
                                  systematic=systematic, noiseless=True)
                rec = run_point(cfg, BlockPolicy(fixed=3), seed=1)
                assert rec.bit_errors == 0 and rec.block_errors == 0

    def test_rate_one_low_snr_fails(self):
        cfg = PointConfig(n=64, k=64, method=Method.RM, ebn0_db=-10.0)
        rec = run_point(cfg, BlockPolicy(fixed=50), seed=2)
        assert rec.bler == 1.0

    def test_deterministic_across_workers(self):
        cfg = PointConfig(n=64, k=32, method=Method.DEGA, ebn0_db=1.0)
        recs = [run_point(cfg, BlockPolicy(fixed=300), seed=7, workers=w)
                for w in (1, 2, 5)]
        assert recs[0] == recs[1] == recs[2]

    def test_counting_exactness(self, monkeypatch):
        # force a known error pattern: flip exactly one information bit of
        # every third block
        cfg = PointConfig(n=64, k=32, method=Method.RM, ebn0_db=2.0,
                          noiseless=True)
        calls = {"i": 0}
        real = Decoder.decode_llr

        def flipping(self, llr):
            res = real(self, llr)
            calls["i"] += 1
            if calls["i"] % 3 == 0:
                msg = res.message.copy()
                idx = self.spec.info_set[0]
                msg[idx] ^= 1
                return DecodeResult(message=msg, codeword=res.codeword)
            return res

        monkeypatch.setattr(Decoder, "decode_llr", flipping)
        rec = run_point(cfg, BlockPolicy(fixed=99), seed=3)
        assert rec.block_errors == 33
        assert rec.bit_errors == 33

    def test_stop_at_error_target(self):
        cfg = PointConfig(n=64, k=32, method=Method.DEGA, ebn0_db=0.0)
        policy = BlockPolicy(fixed=None, error_target=20, max_blocks=100_000)
        rec = run_point(cfg, policy, seed=4)
        assert rec.block_errors >= 20
        assert rec.blocks <= 100_000
        # record invariants
        assert rec.bler == rec.block_errors / rec.blocks
        assert rec.ber == rec.bit_errors / (rec.blocks * rec.k)
        assert rec.block_errors >= np.ceil(rec.bit_errors / rec.k)

    def test_config_errors_before_work(self):
        with pytest.raises(ConfigError):
            run_point(PointConfig(n=63, k=32, method=Method.RM),
                      BlockPolicy(fixed=1), seed=0)
        with pytest.raises(ConfigError):
            run_point(PointConfig(n=64, k=65, method=Method.RM),
                      BlockPolicy(fixed=1), seed=0)
        with pytest.raises(ConfigError):
            run_point(PointConfig(n=64, k=32, method="nonsense"),
                      BlockPolicy(fixed=1), seed=0)
        with pytest.raises(ConfigError):
            run_point(BASE, BlockPolicy(fixed=0), seed=0)

    def test_genie_construction_path(self):
        cfg = PointConfig(n=16, k=8, method=Method.GENIE, genie_blocks=500,
                          ebn0_db=3.0)
        rec = run_point(cfg, BlockPolicy(fixed=20), seed=5)
        assert rec.construction == "genie"
        assert rec.blocks == 20


class TestRunSweep:
    def test_empty_list(self):
        assert run_sweep(BASE, [], BlockPolicy(fixed=1), seed=0) == []

    def test_sorted_and_reproducible(self):
        cfg = PointConfig(n=64, k=32, method=Method.BEC, ebn0_db=0.0)
        a = run_sweep(cfg, [2.0, 0.0, 1.0], BlockPolicy(fixed=100), seed=6)
        b = run_sweep(cfg, [0.0, 1.0, 2.0], BlockPolicy(fixed=100), seed=6)
        assert [r.ebn0_db for r in a] == [0.0, 1.0, 2.0]
        assert a == b

    def test_bler_trends_down_with_confidence(self):
        cfg = PointConfig(n=64, k=32, method=Method.DEGA)
        recs = run_sweep(cfg, [0.0, 4.0], BlockPolicy(fixed=2000), seed=8)
        lo, hi = recs[0], recs[1]
        # 95% binomial bounds must not invert
        se = lambda r: np.sqrt(max(r.bler * (1 - r.bler), 1e-9) / r.blocks)  # noqa: E731
        assert hi.bler - 1.96 * se(hi) < lo.bler + 1.96 * se(lo)


class TestCsv:
    def test_format(self):
        rec = SimRecord(n=64, k=32, rate=0.5, construction="dega",
                        decoder="scd", systematic=False, ebn0_db=2.0,
                        blocks=1000, bit_errors=123, block_errors=45,
                        ber=123 / 32000, bler=0.045, seed=9)
        buf = io.StringIO()
        write_csv([rec], buf, cmd="polarfec simulate --n 64")
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# cmd: polarfec simulate --n 64"
        assert lines[1] == ("n,k,rate,construction,decoder,systematic,ebn0_db,"
                            "blocks,bit_errors,block_errors,ber,bler,seed")
        assert lines[2] == "64,32,0.5,dega,scd,0,2,1000,123,45,0.00384375,0.045,9"
