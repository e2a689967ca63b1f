import pytest

from pillai_fib.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify(capsys):
    assert run(capsys, "verify", "4", "4", "5")[0] == 0
    code, out, _ = run(capsys, "verify", "4", "4", "4")
    assert code == 1 and "no" in out


def test_verify_error(capsys):
    code, _, err = run(capsys, "verify", "0", "1", "1")
    assert code == 2 and "error" in err


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--y-min", "4", "--y-max", "56", "--n-max", "101")
    assert code == 0 and out.split("\n")[0] == "4 4 5"


def test_search_x_cap(capsys):
    _, out, _ = run(capsys, "search", "--y-min", "4", "--y-max", "10", "--n-max", "10", "--x-max", "4")
    assert out == ""


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--y", "4", "--m", "2.16e16")
    assert code == 0
    assert "q=142606363712992701" in out and "n <= 87" in out


def test_cf(capsys):
    _, out, _ = run(capsys, "cf", "--const", "alpha", "--terms", "6")
    assert out.splitlines()[-1] == "5 1 13 8"
    _, out, _ = run(capsys, "cf", "--const", "gamma", "--terms", "41")
    assert out.splitlines()[-1].endswith("1116972345258589541")


def test_scan(capsys):
    _, out, _ = run(capsys, "scan", "--case", "1.4", "--x-max", "120", "--n-max", "300")
    assert out == "1 3\n"


def test_prove_and_check(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, out, err = run(capsys, "prove", "--out", str(cert))
    assert code == 0 and "(4,4,5)" in err
    code, out, _ = run(capsys, "check", str(cert))
    assert code == 0 and "OK" in out


def test_prove_config(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    out_file = tmp_path / "from_cfg.json"
    cfg.write_text(f"precision_digits = 60\nout_path = {out_file}\n")
    assert run(capsys, "prove", "--config", str(cfg))[0] == 0
    assert out_file.exists()


def test_bad_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
