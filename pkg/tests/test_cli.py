from pytest import fixture

from crlab.cli import EXIT_CONFIG, EXIT_OK, main

from tests import EXAMPLES_DIR


@fixture(autouse=True)
def no_output_dir(monkeypatch):
    monkeypatch.delenv("CRLAB_OUTPUT_DIR", raising=False)


def test_parse(capsys):
    assert main(["parse", "--expr", "abs2(z1) + abs2(z2) - 1"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "abs2(z1)+abs2(z2)-1.0"


def test_parse_error():
    assert main(["parse", "--expr", "abs2(z1 - 1"]) != EXIT_OK


def test_run(capsys):
    assert main(["run", "--config", str(EXAMPLES_DIR / "e6.json")]) == EXIT_OK
    assert "PASS polynomial_err" in capsys.readouterr().out


def test_config_errors():
    assert main(["run", "--config", str(EXAMPLES_DIR / "unknown_key.json")]) == EXIT_CONFIG
    assert main(["run", "--config", str(EXAMPLES_DIR / "missing.json")]) == EXIT_CONFIG
    assert main(["sweep", "--config", str(EXAMPLES_DIR / "e6.json"),
                 "--knob", "seeley_order", "--values", "3,x"]) == EXIT_CONFIG
    assert main(["bump", "--family", "ball", "--point", "1,0,0"]) == EXIT_CONFIG


def test_sweep(capsys):
    code = main(["sweep", "--config", str(EXAMPLES_DIR / "e6.json"),
                 "--knob", "seeley_order", "--values", "3,4", "--metric", "moment_residual"])
    assert code == EXIT_OK
    assert "moment_residual" in capsys.readouterr().out
