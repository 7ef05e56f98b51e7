"""Tests driving the command-line interface in process."""

import json

import tmodext.cli as cli
from tmodext import Check, Report

Q3 = "GF(3)(th)"
F4 = "GF(2^2)"
F9 = "GF(3^2)"
FORMAL = "FTF(3; gens=a,b,th; inv=a)"

GOLDEN_PI = ("[[th, 0, 0],\n"
             " [0, th, (th + 2*th^3)*tau^2],\n"
             " [tau^2, tau^4, th + tau^6]]")


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# The flagship command.


def test_ext_text_output(capsys):
    code, out, err = run(capsys, [
        "ext", "--field", Q3, "--phi", "th + tau^3", "--psi", "th + tau^2"])
    assert code == 0 and err == ""
    assert "regime: drinfeld-forward" in out
    assert "basis: (0,0,0) (0,0,1) (0,0,2)" in out
    assert "ga_rank: 1" in out
    assert GOLDEN_PI in out


def test_ext_json_output(capsys):
    code, out, _ = run(capsys, [
        "ext", "--field", Q3, "--phi", "th + tau^3", "--psi", "th + tau^2",
        "--json"])
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"field", "source", "target", "regime", "basis",
                            "pi_t", "ga_rank"}
    assert payload["field"] == Q3
    assert payload["regime"] == "drinfeld-forward"
    assert payload["basis"] == [[0, 0, 0], [0, 0, 1], [0, 0, 2]]
    assert payload["ga_rank"] == 1
    assert payload["pi_t"]["var"] == "tau"


def test_ext_is_deterministic(capsys):
    argv = ["ext", "--field", F9, "--phi", "g + tau^3",
            "--psi", "g + tau^2"]
    _, first, _ = run(capsys, argv)
    _, second, _ = run(capsys, argv)
    assert first == second


def test_out_flag_writes_file_and_prints_nothing(capsys, tmp_path):
    target = tmp_path / "pi.txt"
    code, out, _ = run(capsys, [
        "ext", "--field", Q3, "--phi", "th + tau^3", "--psi", "th + tau^2",
        "--out", str(target)])
    assert code == 0
    assert out == ""
    content = target.read_text()
    assert GOLDEN_PI in content
    assert content.endswith("\n")


# ---------------------------------------------------------------------------
# The remaining structure commands.


def test_ext0_output(capsys):
    code, out, _ = run(capsys, [
        "ext0", "--field", Q3, "--phi", "th + tau^3", "--psi", "th + tau^2"])
    assert code == 0
    assert "basis: (0,0,1) (0,0,2)" in out
    assert "[[th, (th + 2*th^3)*tau^2],\n [tau^4, th + tau^6]]" in out


def test_ext_seq_output(capsys):
    code, out, _ = run(capsys, [
        "ext-seq", "--field", Q3, "--phi", "th + tau^3",
        "--psi", "th + tau^2"])
    assert code == 0
    assert "s: 1" in out
    assert "pure: (0,0,0)" in out
    assert "[[1, 0, 0]]" in out


def test_ext_prod_output(capsys):
    code, out, _ = run(capsys, [
        "ext-prod", "--field", Q3, "--phi", "th + tau^3; th + tau^4",
        "--psi", "th + tau^2"])
    assert code == 0
    assert "regime: diagonal-pairs" in out


def test_ext_tmod_output(capsys):
    code, out, _ = run(capsys, [
        "ext-tmod", "--field", Q3,
        "--phi", "[[th, 1], [0, th]] + [[1, 0], [0, 1]]*tau^2",
        "--psi", "th + tau"])
    assert code == 0
    assert "regime: matrix-source" in out


def test_ext_carlitz_output(capsys):
    code, out, _ = run(capsys, [
        "ext-carlitz", "--field", Q3, "--phi", "th + tau^3", "--e", "2"])
    assert code == 0
    assert "regime: carlitz-target" in out
    assert "ga_rank: 1" in out


def test_ext_dual_output(capsys):
    code, out, _ = run(capsys, [
        "ext-dual", "--field", FORMAL, "--phi", "th[0] + b[0]*tau^2",
        "--psi", "th[0] + a[0]*tau^3"])
    assert code == 0
    assert "Pi_t (adjoint side):" in out
    assert "th[0] + (b[-6]*b[-4]*b[-2]/(a[-8]*a[-5]))*sig^6" in out


# ---------------------------------------------------------------------------
# Calculator commands.


def test_adjoint_module(capsys):
    code, out, _ = run(capsys, [
        "adjoint", "--field", F9, "--phi", "g + tau^3"])
    assert code == 0
    assert out.strip() == "[[g + sig^3]]"


def test_adjoint_matrix_json_golden(capsys):
    code, out, _ = run(capsys, [
        "adjoint", "--field", F9, "--phi", "g + tau^3", "--json"])
    assert code == 0
    assert out == (
        '{\n  "var": "sigma",\n  "entries": [\n    [\n      [\n        [\n'
        '          0,\n          "g"\n        ],\n        [\n          3,\n'
        '          "1"\n        ]\n      ]\n    ]\n  ]\n}\n')


def test_reduce_output(capsys):
    code, out, _ = run(capsys, [
        "reduce", "--field", Q3, "--phi", "th + tau^3",
        "--psi", "th + tau^2", "--delta", "[[th*tau^4]]"])
    assert code == 0
    assert "regime: drinfeld-forward" in out
    assert "[[(th^2 + 2*th^4)*tau + th^81*tau^2]]" in out
    assert "[[th^9 + th*tau]]" in out


def test_assemble_output(capsys):
    code, out, _ = run(capsys, [
        "assemble", "--field", Q3, "--phi", "th + tau^2",
        "--psi", "th + tau^3", "--delta", "[[1 + tau]]"])
    assert code == 0
    assert "[[th + tau^2, 0],\n [1 + tau, th + tau^3]]" in out


def test_baer_output(capsys):
    code, out, _ = run(capsys, [
        "baer", "--field", F9, "--phi", "g + tau^3", "--psi", "g + tau^2",
        "--delta", "[[tau]]", "--delta2", "[[tau]]"])
    assert code == 0
    assert "[[2*tau]]" in out


def test_act_output(capsys):
    code, out, _ = run(capsys, [
        "act", "--field", F9, "--phi", "g + tau^3", "--psi", "g + tau^2",
        "--delta", "[[1]]", "--a", "t"])
    assert code == 0
    # t acts on the constant class through the target's theta
    assert "[[g" in out


def test_pullback_and_pushout(capsys):
    base = ["--field", F9, "--phi", "g + tau^3", "--psi", "g + tau^2",
            "--delta", "[[tau]]"]
    code, pulled, _ = run(capsys, [
        "pullback", *base, "--g", "[[g + tau^3]]", "--gmod", "g + tau^3"])
    assert code == 0
    code, pushed, _ = run(capsys, [
        "pushout", *base, "--f", "[[g + tau^2]]", "--fmod", "g + tau^2"])
    assert code == 0
    canon_pull = pulled.split("canonical:")[-1]
    canon_push = pushed.split("canonical:")[-1]
    assert canon_pull == canon_push


def test_split_recovers_witness(capsys):
    code, out, _ = run(capsys, [
        "split", "--field", F9, "--phi", "g + tau^3", "--psi", "g + tau^2",
        "--delta", "[[(g + tau)*(g + tau^3) + (2*g + 2*tau^2)*(g + tau)]]"])
    assert code == 0
    assert out.startswith("split")
    assert "[[g + tau]]" in out


def test_split_not_split_json(capsys):
    code, out, _ = run(capsys, [
        "split", "--field", F9, "--phi", "g + tau^3", "--psi", "g + tau^2",
        "--delta", "[[tau]]", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == "not-split"
    assert payload["reason"] == "nonzero canonical form"


def test_split_inconclusive_bound(capsys):
    code, out, _ = run(capsys, [
        "split", "--field", F9, "--phi", "g + tau^2", "--psi", "g + tau^2",
        "--delta", "[[1]]", "--bound", "1", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["result"] == "inconclusive"
    assert payload["bound"] == 1


def test_hom_output(capsys):
    code, out, _ = run(capsys, [
        "hom", "--field", F4, "--phi", "g + tau", "--psi", "g + tau",
        "--bound", "2"])
    assert code == 0
    assert "fp_dimension: 3" in out
    assert "[[g + tau]]" in out


def test_sixterm_golden(capsys):
    code, out, _ = run(capsys, [
        "sixterm", "--field", Q3, "--phi", "th + tau^2",
        "--psi", "th + tau^3", "--delta", "[[1 + tau]]", "--g", "th + tau"])
    assert code == 0
    assert ("Omega_t:\n"
            "[[th, 0, 0, 0, 0],\n"
            " [tau, th, tau^2, 0, 0],\n"
            " [0, tau, th, 0, 0],\n"
            " [0, 0, 2*tau, th, 0],\n"
            " [0, 0, 2*tau, tau, th + tau^2]]") in out
    assert "Delta_t:\n[[0, 0, 2*tau],\n [0, 0, 2*tau]]" in out


# ---------------------------------------------------------------------------
# Verification plumbing and exit codes.


def test_verify_structure_pass(capsys):
    code, out, _ = run(capsys, [
        "verify", "--field", F9, "--what", "structure",
        "--phi", "g + tau^3", "--psi", "g + tau^2",
        "--samples", "25", "--seed", "3"])
    assert code == 0
    assert out.rstrip().endswith("ok")
    assert "pass action-samples:" in out


def test_verify_duality_pass(capsys):
    code, out, _ = run(capsys, [
        "verify", "--field", "GF(2^3)", "--what", "duality",
        "--phi", "g + tau^3", "--psi", "g + tau^2",
        "--samples", "20", "--seed", "1"])
    assert code == 0
    assert "pass class-transport:" in out


def test_verify_duality_rejects_enumeration(capsys):
    code, out, err = run(capsys, [
        "verify", "--field", "GF(2^3)", "--what", "duality",
        "--phi", "g + tau^3", "--psi", "g + tau^2",
        "--mode", "enumerate"])
    assert code == 2
    assert "enumerate" in err


def test_verify_failure_exits_three(capsys, monkeypatch):
    failing = Report.from_checks([Check("action-samples", False, "mismatch")])
    monkeypatch.setattr(cli, "verify_structure",
                        lambda *args, **kwargs: failing)
    code, out, _ = run(capsys, [
        "verify", "--field", F9, "--what", "structure",
        "--phi", "g + tau^3", "--psi", "g + tau^2"])
    assert code == 3
    assert "FAIL action-samples: mismatch" in out
    assert out.rstrip().endswith("FAILED")


def test_domain_error_exits_one(capsys):
    code, _, err = run(capsys, [
        "ext", "--field", Q3, "--phi", "th + tau^2", "--psi", "th + tau^2"])
    assert code == 1
    assert "equal-rank" in err


def test_usage_errors_exit_two(capsys):
    code, _, err = run(capsys, [
        "ext", "--field", Q3, "--phi", "th + tau^2"])
    assert code == 2 and "--psi" in err
    code, _, err = run(capsys, ["frobnicate", "--field", Q3])
    assert code == 2
    code, _, err = run(capsys, [
        "ext", "--field", "GF(6)", "--phi", "th + tau^2",
        "--psi", "th + tau"])
    assert code == 2


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, ["--help"])
    assert code == 0
    assert "COMMAND" in out
