import subprocess
import sys

import pytest

from uncprover.cli import main
from uncprover.cops import parse_cops
from uncprover.strategy import StrategyConfig, prove_unc

COPS_254 = "(VAR x)\n(RULES a -> f(c) a -> f(h(c)) f(x) -> h(f(x)))\n"
COPS_126 = "(VAR x y z)\n(RULES f(f(x,y),z) -> f(f(x,z),f(y,z)))\n"
AB_AC = "(RULES a -> b a -> c)\n"


@pytest.fixture
def run(tmp_path, capsys):
    def go(text, *args):
        p = tmp_path / "prob.trs"
        p.write_text(text)
        code = main(["prove", str(p), *args])
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return go


def test_yes_exit_code_and_first_line(run):
    code, out, _ = run(COPS_126)
    assert code == 0
    assert out.splitlines()[0] == "YES"


def test_no_exit_code(run):
    code, out, _ = run(AB_AC)
    assert code == 0
    assert out.splitlines()[0] == "NO"


def test_maybe_exit_code(run):
    # restricted method list that cannot decide this system
    code, out, _ = run(COPS_254, "--methods", "sno")
    assert code == 1
    assert out.splitlines()[0] == "MAYBE"


def test_input_error_exit_code(run):
    code, out, err = run("(VAR x) (RULES a -> x)")
    assert code == 2
    assert out == ""
    assert "error" in err


def test_undeclared_name_is_a_constant(run):
    # without a VAR declaration, x is a nullary function symbol
    code, out, _ = run("(RULES a -> x)")
    assert code == 0
    assert out.splitlines()[0] == "YES"


def test_missing_file(capsys):
    code = main(["prove", "/nonexistent/file.trs"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_certificate_flag(run):
    code, out, _ = run(AB_AC, "--certificate")
    lines = out.splitlines()
    assert lines[0] == "NO"
    assert any("witness" in ln for ln in lines)
    assert any("certificate-format" in ln for ln in lines)


def test_methods_flag_selects_route(run):
    code, out, _ = run(COPS_254, "--methods", "sc", "--certificate")
    assert code == 0
    assert out.splitlines()[0] == "YES"
    assert "via (sc)" in out
    assert "f(h(c)) -> f(c)" in out


def test_bad_method_rejected(run):
    code, out, err = run(COPS_254, "--methods", "nonsense")
    assert code == 2 and "unknown method" in err


def test_determinism(run):
    first = run(COPS_254, "--certificate")
    second = run(COPS_254, "--certificate")
    assert first == second


def test_prove_unc_api_determinism():
    pf = parse_cops(COPS_254)
    r1 = prove_unc(pf, StrategyConfig())
    r2 = prove_unc(pf, StrategyConfig())
    assert r1 == r2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "uncprover.cli", "prove", "/dev/null"],
        capture_output=True, text=True)
    assert proc.returncode == 2


def test_decomposition_across_components(run):
    text = "(VAR x)\n(RULES g(x) -> g(g(x))  a -> b)\n"
    code, out, _ = run(text, "--certificate")
    assert out.splitlines()[0] == "YES"
    assert "2 components" in out


def test_component_no_decides_whole(run):
    text = "(VAR x)\n(RULES g(x) -> g(g(x))  a -> b  a -> c)\n"
    code, out, _ = run(text, "--certificate")
    assert out.splitlines()[0] == "NO"


def test_rounds_flag_limits_completion(run):
    # one round is not enough to complete this system
    code, out, _ = run(COPS_254, "--methods", "sc", "--rounds", "1")
    assert out.splitlines()[0] == "MAYBE"
    code, out, _ = run(COPS_254, "--methods", "sc", "--rounds", "2")
    assert out.splitlines()[0] == "YES"


def test_completion_no_certificate_has_trace(run):
    code, out, _ = run(AB_AC, "--methods", "sc", "--certificate")
    assert out.splitlines()[0] == "NO"
    assert "conversion trace" in out


def test_timeout_yields_maybe(run):
    code, out, _ = run(COPS_254, "--timeout", "0.000001")
    assert code == 1
    assert out.splitlines()[0] == "MAYBE"


def test_budget_flags_accepted(run):
    code, out, _ = run(COPS_126, "--budget-conv", "3", "--budget-size", "25")
    assert out.splitlines()[0] == "YES"
