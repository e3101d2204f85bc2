import json

from zetalab import cli


def run(argv):
    return cli.main(argv)


def test_report_kappa_output(capsys):
    assert run(["report-kappa"]) == 0
    out = capsys.readouterr().out
    lines = dict(line.split(" = ") for line in out.strip().splitlines())
    assert abs(float(lines["kappa_star"]) - 19 / 27) < 1e-12
    assert abs(float(lines["kappa_d"]) - 0.8466512345679012) < 1e-9


def test_unknown_command_usage_exit(capsys):
    assert run(["frobnicate"]) == 2
    assert run([]) == 2


def test_module_rejection_maps_to_exit_1(capsys):
    assert run(["verify-vaughan", "--r", "3", "--X", "10", "--N", "1001"]) == 1
    err = capsys.readouterr().err
    assert "X^r" in err


def test_verify_vaughan_json(tmp_path):
    out = tmp_path / "rep.json"
    assert run(["verify-vaughan", "--r", "3", "--X", "10", "--N", "1000",
                "--output", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["pass"] is True
    assert payload["check"] == "vaughan-identity"
    assert set(payload) >= {"check", "parameters", "worst_case", "deviation", "pass"}


def test_verify_rearrangement_and_split(tmp_path):
    out = tmp_path / "re.json"
    assert run(["verify-rearrangement", "--y", "6", "--T", "60",
                "--output", str(out)]) == 0
    assert json.loads(out.read_text())["pass"] is True
    out2 = tmp_path / "sp.json"
    assert run(["verify-split", "--d", "12", "--m-limit", "300", "--seed", "3",
                "--output", str(out2)]) == 0
    assert json.loads(out2.read_text())["pass"] is True


def test_optimize_poly(tmp_path):
    out = tmp_path / "poly.json"
    assert run(["optimize-poly", "--theta", "0.5", "--degree", "2",
                "--output", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert abs(payload["coefficients"][0] - 1.5) < 1e-6
    assert abs(payload["coefficients"][1] + 0.5) < 1e-6


def test_moments_pipeline_and_determinism(tmp_path):
    cache = tmp_path / "cache"
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    argv = ["moments", "--T", "150", "--theta", "0.3",
            "--cache-dir", str(cache)]
    assert run(argv + ["--output", str(a)]) == 0
    assert run(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    header, row = a.read_text().strip().splitlines()
    assert header.split(",")[:8] == ["T", "theta", "poly", "ReS1", "ImS1", "S2", "N",
                                     "kappa_bound"]
    assert (cache / "zeros-" ).parent.exists()
    assert any(p.name.startswith("zeros-") for p in cache.iterdir())


def test_moments_without_zero_table_computes(tmp_path):
    out = tmp_path / "m.csv"
    assert run(["moments", "--T", "120", "--theta", "0.25", "--no-cache",
                "--output", str(out)]) == 0
    assert out.exists()


def test_zeros_roundtrip_via_cli(tmp_path, capsys):
    table = tmp_path / "z.txt"
    assert run(["zeros", "find", "--T", "100", "--no-cache",
                "--output", str(table)]) == 0
    assert run(["zeros", "ingest", str(table)]) == 0
    err = capsys.readouterr().err
    assert "ingested 29 zeros" in err


def test_monitor_sieve(tmp_path):
    out = tmp_path / "sieve.json"
    assert run(["monitor-sieve", "--trials", "25", "--output", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["deviation"] <= 6.0


def test_config_file_flags_win(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# config\ntheta=0.4\ndegree=2\n")
    assert run(["report-kappa", "--config", str(cfg)]) == 0
    out1 = capsys.readouterr().out
    assert run(["report-kappa", "--config", str(cfg), "--theta", "0.5"]) == 0
    out2 = capsys.readouterr().out
    assert out1 != out2  # flag overrode the config theta
    k2 = float(dict(l.split(" = ") for l in out2.strip().splitlines())["kappa_star"])
    assert abs(k2 - 19 / 27) < 1e-12


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("ZETALAB_CACHE", str(tmp_path / "envcache"))
    assert run(["zeros", "find", "--T", "60"]) == 0
    assert any(p.name.startswith("zeros-") for p in (tmp_path / "envcache").iterdir())
