import json
from fractions import Fraction

import pytest

from zarmod.cli import main
from zarmod.harness import (
    ExperimentConfig,
    format_cell,
    geometric_primes,
    parse_config,
    parse_int_list,
    run_covering_suite,
    verify_all,
    write_rows,
)


def test_parse_int_list():
    assert parse_int_list("2,3,10") == [2, 3, 10]
    assert parse_int_list("10..30") == [11, 13, 17, 19, 23, 29]
    assert parse_int_list("5, 90..100") == [5, 97]
    with pytest.raises(ValueError):
        parse_int_list("")


def test_geometric_primes():
    ps = geometric_primes(1000, 100000, 10)
    assert ps == sorted(set(ps))
    assert ps[0] >= 1000 and ps[-1] <= 105000
    assert 8 <= len(ps) <= 10
    from zarmod.modp import is_prime
    assert all(is_prime(p) for p in ps)


def test_parse_config(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text(
        "# comment\n"
        "primes = 101, 200..211\n"
        "M = 2,3\n"
        "beta = 0.3, 0.5\n"
        "seed = 42\n"
        "format = json\n")
    raw = parse_config(str(f))
    assert raw["primes"] == [101, 211]
    assert raw["M"] == [2, 3]
    assert raw["beta"] == [0.3, 0.5]
    assert raw["seed"] == 42
    assert raw["format"] == "json"


def test_parse_config_errors(tmp_path):
    bad1 = tmp_path / "bad1.cfg"
    bad1.write_text("nonsense_key = 1\n")
    with pytest.raises(ValueError, match="unknown key"):
        parse_config(str(bad1))
    bad2 = tmp_path / "bad2.cfg"
    bad2.write_text("just a line\n")
    with pytest.raises(ValueError, match="key = value"):
        parse_config(str(bad2))


def test_config_validate():
    with pytest.raises(ValueError):
        ExperimentConfig(primes=[10]).validate()
    with pytest.raises(ValueError):
        ExperimentConfig(format="xml").validate()
    with pytest.raises(ValueError):
        ExperimentConfig(M_values=[0]).validate()
    assert ExperimentConfig(primes=[7], M_values=[2]).validate()


def test_format_cell():
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(0.1) == "0.1"
    assert format_cell(1 / 3) == "0.333333333333"
    assert format_cell(Fraction(7, 64)) == "7/64"
    assert format_cell(12) == "12"


def test_write_rows_csv_and_json(tmp_path):
    header = ["a", "ok", "x"]
    rows = [(1, True, Fraction(1, 4)), (2, False, Fraction(3, 2))]
    out = tmp_path / "o.csv"
    cfg = ExperimentConfig(out=str(out), format="csv")
    write_rows(header, rows, cfg)
    assert out.read_text() == "a,ok,x\n1,true,1/4\n2,false,3/2\n"
    outj = tmp_path / "o.json"
    cfg = ExperimentConfig(out=str(outj), format="json")
    write_rows(header, rows, cfg)
    objs = json.loads(outj.read_text())
    assert objs[0] == {"a": 1, "ok": True, "x": "1/4"}


def test_covering_suite_deterministic_bytes(tmp_path):
    cfg = ExperimentConfig(primes=[101], M_values=[2, 3], betas=[0.3, 0.5])
    paths = []
    for name in ("r1.csv", "r2.csv"):
        out = tmp_path / name
        c = ExperimentConfig(primes=cfg.primes, M_values=cfg.M_values,
                             betas=cfg.betas, out=str(out))
        header, rows, ok = run_covering_suite(c)
        assert ok
        write_rows(header, rows, c)
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_cli_cf_commands(capsys):
    assert main(["cf", "expand", "5", "13"]) == 0
    assert capsys.readouterr().out.strip() == "2 1 1 2"
    assert main(["cf", "expand", "0", "1"]) == 0
    assert capsys.readouterr().out.strip() == "(empty)"
    assert main(["cf", "value", "2", "1", "1", "2"]) == 0
    assert capsys.readouterr().out.strip() == "5/13"
    assert main(["cf", "convergents", "5", "13"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "5/13"


def test_cli_zaremba_simple(capsys):
    assert main(["zaremba", "--p", "7", "--M", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "p,M,card_Z,card_A"
    assert out[1].startswith("7,2,1,")


def test_cli_covering_exit_codes(tmp_path):
    out = tmp_path / "cov.csv"
    rc = main(["covering", "--p", "101", "--M", "2",
               "--beta", "0.5", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("p,M,beta,convention,included")
    assert len(lines) == 2


def test_cli_requires_grid():
    with pytest.raises(SystemExit):
        main(["covering", "--p", "101"])  # no M, no beta
    with pytest.raises(SystemExit):
        main(["zaremba", "--M", "3"])  # no primes


def test_cli_fmq_json(capsys):
    assert main(["fmq", "--M", "2", "--Q", "5", "--format", "json"]) == 0
    objs = json.loads(capsys.readouterr().out)
    assert {"M": 2, "Q": 5, "convention": "relaxed",
            "numerator": 1, "denominator": 2} in objs


def test_cli_config_file_and_override(tmp_path, capsys):
    f = tmp_path / "z.cfg"
    f.write_text("primes = 7\nM = 2\n")
    assert main(["zaremba", "--config", str(f)]) == 0
    out1 = capsys.readouterr().out
    assert out1.splitlines()[1].startswith("7,2,")
    # a flag beats the file
    assert main(["zaremba", "--config", str(f), "--M", "3"]) == 0
    out2 = capsys.readouterr().out
    assert out2.splitlines()[1].startswith("7,3,")


def test_cli_girth(capsys):
    rc = main(["girth", "--p", "101", "--N", "5", "--depth-cap", "6"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("p,N,depth")
    assert out[1].endswith("true")


def test_verify_all_passes():
    results = verify_all(seed=0)
    assert len(results) == 13
    assert all(r.passed for r in results), [r.name for r in results if not r.passed]


def test_cli_verify_all(capsys):
    assert main(["verify-all"]) == 0
    out = capsys.readouterr().out
    assert "13/13 checks passed" in out
    assert "[PASS] cf-roundtrip-gap-sweep" in out
