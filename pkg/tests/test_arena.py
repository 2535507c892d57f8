import numpy as np
import pytest

from advstream import (
    ConfigError,
    GameConfig,
    GameTranscript,
    ProtocolError,
    Update,
    attack_metrics,
    read_config,
    run_game,
    run_trials,
    scaling_sweep,
    summary_json,
    transcript_csv,
    verify_transcript,
    write_config,
)
from advstream.arena import METRIC_COLUMNS, SUMMARY_KEYS, metrics_csv, render_json

from oracles import density_from_updates, moment_from_updates


def toggle_config(m=10, **kwargs):
    base = dict(m=m, n=4, epsilon=1.0, algorithm="tracker", adversary="toggle",
                master_seed=5)
    base.update(kwargs)
    return GameConfig(**base)


class TestRunGame:
    def test_toggle_alternates_and_succeeds(self):
        t = run_game(toggle_config())
        assert t.estimates.tolist() == [1.0, 0.0] * 5
        assert t.success

    def test_tracker_never_fails_against_onebit(self):
        for seed in (1, 2, 3):
            cfg = GameConfig(m=500, n=10000, epsilon=0.5, algorithm="tracker",
                             adversary="onebit", c=0.3, master_seed=seed)
            assert run_game(cfg).success

    def test_fixed_seed_reproduces_transcript(self):
        cfg = GameConfig(m=200, n=3000, epsilon=0.5, algorithm="tracker",
                         adversary="memoryless", c=0.4, master_seed=33)
        t1, t2 = run_game(cfg), run_game(cfg)
        assert transcript_csv(t1) == transcript_csv(t2)
        s1, s2 = t1.summary(), t2.summary()
        s1.pop("elapsed_ms"), s2.pop("elapsed_ms")
        assert s1 == s2

    def test_referee_matches_independent_replay(self):
        for cfg in (
            toggle_config(m=50),
            GameConfig(m=120, n=3000, epsilon=0.5, algorithm="tracker",
                       adversary="onebit", c=0.4, master_seed=9),
            GameConfig(m=80, n=64, epsilon=0.9, algorithm="oblivious-amplified",
                       adversary="oblivious", master_seed=10),
        ):
            assert verify_transcript(run_game(cfg))

    def test_truths_and_densities_match_oracle(self):
        cfg = GameConfig(m=150, n=3000, epsilon=0.5, algorithm="tracker",
                         adversary="memoryless", c=0.4, master_seed=21)
        t = run_game(cfg)
        updates = list(zip(t.items.tolist(), t.deltas.tolist()))
        for j in (0, 1, 73, 149):
            prefix = updates[: j + 1]
            assert t.true_values[j] == moment_from_updates(prefix, 2)
            assert t.densities[j] == density_from_updates(prefix)

    def test_round_ordering_and_isolation(self):
        # the adversary must see exactly the previous round's estimate,
        # its own previous state, and nothing else
        seen = []

        class Probe:
            k = 0
            initial_state = 0

            def next(self, estimate, state, rand):
                seen.append((estimate, state))
                return Update(1, 1), state + 1

        cfg = toggle_config(m=6)
        t = run_game(cfg, adversary=Probe())
        estimates = t.estimates.tolist()
        assert seen[0] == (None, 0)
        for j in range(1, 6):
            assert seen[j] == (estimates[j - 1], j)

    def test_illegal_update_aborts(self):
        class Rogue:
            k = 0
            initial_state = None

            def next(self, estimate, state, rand):
                return Update(99, 1), None  # outside n=4

        with pytest.raises(ProtocolError):
            run_game(toggle_config(m=3), adversary=Rogue())

    def test_exhausted_replayer_aborts_with_round(self):
        from advstream import ObliviousReplayer

        short = ObliviousReplayer([Update(1, 1), Update(2, 1)])
        with pytest.raises(ProtocolError, match="round 3"):
            run_game(toggle_config(m=5, adversary="oblivious"), adversary=short)

    def test_validation_errors(self):
        with pytest.raises(ConfigError):
            run_game(toggle_config(m=0))
        with pytest.raises(ConfigError):
            GameConfig(m=10, n=10, epsilon=0.5, adversary="onebit").validate()
        with pytest.raises(ConfigError):
            GameConfig(m=10, n=10, epsilon=2.0).validate()
        with pytest.raises(ConfigError):
            GameConfig(m=10, n=10, epsilon=0.5, algorithm="robust", p=1).validate()


class TestMetrics:
    def _synthetic(self, truths, estimates=None, c=0.5):
        m = len(truths)
        cfg = GameConfig(m=m, n=10, epsilon=0.5, c=c)
        truths = np.asarray(truths, dtype=np.float64)
        if estimates is None:
            estimates = truths
        return GameTranscript(
            cfg,
            items=np.ones(m, dtype=np.int64),
            deltas=np.ones(m, dtype=np.int8),
            true_values=truths,
            estimates=np.asarray(estimates, dtype=np.float64),
            densities=np.arange(1, m + 1, dtype=np.int64),
            correct=np.ones(m, dtype=bool),
            states=[""] * m,
        )

    def test_constant_truth_has_flip_one(self):
        t = self._synthetic([7.0] * 9)
        metrics = attack_metrics(t, c=0.5, epsilon=0.5)
        assert metrics["flip_number"] == 1

    def test_burnin_boundary(self):
        t = self._synthetic([1.0] * 10)  # densities 1..10, burn-in ceil(10^0.5)=4
        metrics = attack_metrics(t, c=0.5, epsilon=0.5)
        assert metrics["min_density_after_burnin"] == 5

    def test_type1_counts_fresh_inserts(self):
        m = 6
        cfg = GameConfig(m=m, n=10, epsilon=0.5)
        t = GameTranscript(
            cfg,
            items=np.array([1, 2, 3, 1, 2, 1], dtype=np.int64),
            deltas=np.array([1, 1, 1, -1, -1, 1], dtype=np.int8),
            true_values=np.ones(m),
            estimates=np.ones(m),
            densities=np.ones(m, dtype=np.int64),
            correct=np.ones(m, dtype=bool),
            states=[""] * m,
        )
        assert t.type1_count == 2
        assert t.distinct_items == 3

    def test_attack_density_example(self):
        cfg = GameConfig(m=10000, n=20000, epsilon=0.5, algorithm="tracker",
                         adversary="onebit", c=0.4, master_seed=3)
        t = run_game(cfg)
        metrics = attack_metrics(t, c=0.4, epsilon=0.5)
        assert metrics["min_density_after_burnin"] >= np.ceil(10000**0.4) / 1.5
        assert metrics["flip_number"] >= 100


class TestTrialsAndSweep:
    def test_trials_are_ordered_and_deterministic(self):
        cfg = GameConfig(m=120, n=3000, epsilon=0.5, algorithm="tracker",
                         adversary="memoryless", c=0.4, master_seed=8)
        rows_serial = run_trials(cfg, 6, workers=1)
        rows_parallel = run_trials(cfg, 6, workers=2)
        assert rows_serial == rows_parallel
        assert [r["trial"] for r in rows_serial] == list(range(6))

    def test_sweep_needs_three_points(self):
        cfg = GameConfig(m=100, n=3000, epsilon=0.5, adversary="memoryless", c=0.4)
        with pytest.raises(ConfigError):
            scaling_sweep(cfg, [100, 200], 2)

    def test_sweep_fits_exponents(self):
        cfg = GameConfig(m=256, n=2000, epsilon=0.5, algorithm="tracker",
                         adversary="onebit", c=0.4, master_seed=44)
        report = scaling_sweep(cfg, [2**10, 2**12, 2**14], trials=3, workers=2)
        assert len(report["median_flip_number"]) == 3
        assert report["flip_exponent"] > 0.5
        assert report["density_exponent"] > 0.2
        assert len(report["per_trial"]) == 9
        # universe scaled to keep n > 10 m^(2c)
        assert all(r["success"] for r in report["per_trial"])


class TestSerialization:
    def test_csv_header_and_shape(self):
        t = run_game(toggle_config(m=4))
        lines = transcript_csv(t).splitlines()
        assert lines[0] == "round,item,delta,true_value,estimate,density,correct,persistent_state"
        assert len(lines) == 5
        assert lines[1] == "1,1,1,1,1,1,true,"

    def test_summary_key_order(self):
        t = run_game(toggle_config(m=4))
        text = summary_json(t)
        positions = [text.index(f'"{k}"') for k in SUMMARY_KEYS]
        assert positions == sorted(positions)

    def test_float_rendering(self):
        assert render_json(0.1) == "0.10000000000000001"
        assert render_json(1.5) == "1.5"
        assert render_json({"a": None, "b": True}) == '{\n  "a": null,\n  "b": true\n}'
        assert render_json([1, 2.5]) == "[1, 2.5]"

    def test_metrics_csv_columns(self):
        rows = [dict(zip(METRIC_COLUMNS, [100, 0, 5, 4, 66, 12, 9, True]))]
        text = metrics_csv(rows)
        lines = text.splitlines()
        assert lines[0] == ",".join(METRIC_COLUMNS)
        assert lines[1] == "100,0,5,4,66,12,9,true"

    def test_onebit_state_tokens_recorded(self):
        cfg = GameConfig(m=300, n=3000, epsilon=0.5, algorithm="tracker",
                         adversary="onebit", c=0.4, master_seed=2)
        t = run_game(cfg)
        assert set(t.states) == {"UP", "DOWN"}


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        cfg = GameConfig(m=1000, n=4096, epsilon=0.5, delta=0.05,
                         algorithm="robust", adversary="memoryless", c=0.3,
                         k=1, p=2, master_seed=99, tau=None, policy="round_robin")
        path = tmp_path / "game.cfg"
        write_config(cfg, str(path))
        assert read_config(str(path)) == cfg

    def test_round_trip_with_alpha_and_tau(self, tmp_path):
        cfg = GameConfig(m=64, n=32, epsilon=0.9, algorithm="robust",
                         adversary="taustream", tau=3, alpha=4096.0,
                         policy="greedy", master_seed=1)
        path = tmp_path / "game.cfg"
        write_config(cfg, str(path))
        assert read_config(str(path)) == cfg

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "game.cfg"
        path.write_text("# game\nm=10\n\nn=5 # universe\neps=0.5\n")
        cfg = read_config(str(path))
        assert (cfg.m, cfg.n, cfg.epsilon) == (10, 5, 0.5)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "game.cfg"
        path.write_text("m=10\nn=5\neps=0.5\nbogus=1\n")
        with pytest.raises(ConfigError):
            read_config(str(path))

    def test_missing_required_rejected(self, tmp_path):
        path = tmp_path / "game.cfg"
        path.write_text("m=10\n")
        with pytest.raises(ConfigError):
            read_config(str(path))
