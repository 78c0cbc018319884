import json

import pytest

from uwqkd.channel import ChannelParams
from uwqkd.cli import main
from uwqkd.config import (
    RunConfig,
    config_from_dict,
    config_to_dict,
    load_config,
    save_config,
)
from uwqkd.optimize import OptimizerConfig


@pytest.fixture
def config_file(tmp_path):
    cfg = RunConfig(
        channel=ChannelParams(e_det=0.0),
        optimizer=OptimizerConfig(coarse_grid=24, refine_iterations=1),
        modulation_rate_hz=1e8,
    )
    path = tmp_path / "config.json"
    save_config(cfg, path)
    return str(path)


class TestConfig:
    def test_round_trip(self, tmp_path):
        cfg = RunConfig(
            channel=ChannelParams(alpha_db_per_m=0.8, e_det=0.01),
            optimizer=OptimizerConfig(nu_min=5e-4),
            modulation_rate_hz=1e9,
        )
        path = tmp_path / "c.json"
        save_config(cfg, path)
        loaded = load_config(path)
        assert config_to_dict(loaded) == config_to_dict(cfg)

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError):
            config_from_dict({"alpha_db_per_km": 0.5})

    def test_defaults_without_file(self):
        cfg = load_config(None)
        assert cfg.channel.alpha_db_per_m == 0.57


class TestKeyrate:
    def test_fixed_mu_nu(self, config_file, capsys):
        rc = main(["keyrate", "--config", config_file, "--length", "10.5", "--mu", "0.5", "--nu", "0.1"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["k_per_pulse"] > 0
        assert payload["bits_per_second_1ghz"] == payload["k_per_pulse"] * 1e9
        assert payload["bits_per_second_100mhz"] == payload["k_per_pulse"] * 1e8

    def test_qber_override_point_below_model(self, config_file, capsys):
        main(["keyrate", "--config", config_file, "--length", "0.5"])
        model = json.loads(capsys.readouterr().out)
        main(["keyrate", "--config", config_file, "--length", "0.5", "--qber", "0.0027"])
        measured = json.loads(capsys.readouterr().out)
        assert 0 < measured["k_per_pulse"] <= model["k_per_pulse"]

    def test_saturated_override_flagged_zero(self, config_file, capsys):
        rc = main(["keyrate", "--config", config_file, "--length", "0.5", "--qber", "0.5"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["k_per_pulse"] == 0.0
        assert "no_positive_key" in payload["flags"]

    def test_bad_ordering_exits_1(self, config_file):
        rc = main(["keyrate", "--config", config_file, "--mu", "0.1", "--nu", "0.5"])
        assert rc == 1

    def test_unknown_flag_exits_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["keyrate", "--frobnicate"])
        assert exc.value.code == 1


class TestSweep:
    def test_csv_output(self, config_file, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        rc = main(
            ["sweep", "--config", config_file, "--l-min", "0", "--l-max", "20", "--step", "5", "--out", str(out)]
        )
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "length_m,k_per_pulse,mu_opt,nu_opt,flags"
        assert len(lines) == 6  # 0,5,10,15,20
        ks = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(b <= a for a, b in zip(ks, ks[1:]))

    def test_empty_range_exits_1(self, config_file):
        assert main(["sweep", "--config", config_file, "--l-min", "5", "--l-max", "5", "--step", "1"]) == 1

    def test_step_larger_than_range(self, config_file, capsys):
        rc = main(["sweep", "--config", config_file, "--l-min", "1", "--l-max", "2", "--step", "10"])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("1,")

    def test_deterministic_bytes(self, config_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", "--config", config_file, "--l-min", "0", "--l-max", "10", "--step", "5"]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSifted:
    @pytest.mark.parametrize(
        "qber,printed",
        [("0.0074", "0.8740"), ("0.034", "0.5719"), ("0", "1.0000")],
    )
    def test_values(self, qber, printed, capsys):
        assert main(["sifted", qber]) == 0
        assert capsys.readouterr().out.strip() == printed

    def test_out_of_range_exits_1(self):
        assert main(["sifted", "0.7"]) == 1


class TestMonteCarlo:
    def test_check_passes_on_flume(self, config_file, tmp_path):
        out = tmp_path / "mc.json"
        rc = main(
            [
                "montecarlo",
                "--config",
                config_file,
                "--length",
                "10.5",
                "--mu",
                "0.5",
                "--n-pulses",
                "200000",
                "--seed",
                "42",
                "--check",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        payload = json.loads(out.read_text())
        assert set(payload) == {
            "pulses_sent",
            "detections",
            "sifted",
            "errors",
            "q_hat",
            "e_hat",
            "q_se",
            "e_se",
            "seed",
        }
        assert payload["seed"] == 42

    def test_byte_identical_reruns(self, config_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        args = [
            "montecarlo", "--config", config_file, "--mu", "0.3",
            "--n-pulses", "50000", "--seed", "7",
        ]
        main(args + ["--out", str(a)])
        main(args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_zero_pulses_exits_1(self, config_file):
        assert main(["montecarlo", "--config", config_file, "--mu", "0.5", "--n-pulses", "0"]) == 1


class TestTomography:
    def test_radial_outputs(self, tmp_path):
        prefix = tmp_path / "radial"
        rc = main(["tomography", "--kind", "radial", "--n", "48", "--out", str(prefix)])
        assert rc == 0
        csv = (tmp_path / "radial_stokes.csv").read_text().splitlines()
        assert csv[0] == "x,y,intensity,s1,s2,s3,valid"
        assert len(csv) == 48 * 48 + 1
        for lab in "HVDALR":
            pgm = (tmp_path / f"radial_I{lab}.pgm").read_text()
            assert pgm.startswith("P2\n48 48\n65535\n")

    def test_seeded_aberration_reproducible(self, tmp_path):
        args = [
            "tomography", "--kind", "radial", "--n", "48", "--random-aberration",
            "--seed", "5", "--length", "10", "--format", "json",
        ]
        main(args + ["--out", str(tmp_path / "a")])
        main(args + ["--out", str(tmp_path / "b")])
        assert (tmp_path / "a_stokes.json").read_bytes() == (tmp_path / "b_stokes.json").read_bytes()

    def test_unknown_kind_exits_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["tomography", "--kind", "spiral"])
        assert exc.value.code == 1


class TestOptimizeCmd:
    def test_reports_optimum(self, config_file, capsys):
        rc = main(["optimize", "--config", config_file, "--length", "10.5"])
        assert rc == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["k_per_pulse"] > 0
        assert payload["nu"] < payload["mu"]
