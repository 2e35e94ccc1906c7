import math
import subprocess
import sys

import pytest

from lucaskit.cli import main, setup_main_parser


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_process(*argv):
    return subprocess.run(
        [sys.executable, "-m", "lucaskit", *argv],
        capture_output=True,
        text=True,
    )


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["compute", "10", "3", "7"], "1\n"),
        (["compute", "6", "3", "5"], "0\n"),
        (["compute", "5", "9", "3"], "0\n"),
        (["compute", "1" + "0" * 1000, "1", "7"], f"{pow(10, 1000, 7)}\n"),
        (["digits", "10", "7"], "3 1\n"),
        (["digits", "0", "5"], "\n"),
        (["digits", "7", "2"], "1 1 1\n"),
        (["table", "2", "3", "--format", "csv"], "1\n1,1\n1,0,1\n"),
        (["table", "5", "1"], "1\n"),
        (["table", "11", "3"], "1\n1  1\n1  2  1\n"),
    ],
)
def test_output(capsys, argv, expected):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0
    assert out == expected
    assert err == ""


def test_table_csv_last_row(capsys):
    code, out, _ = run_cli(capsys, "table", "3", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines()[-1] == "1,0,0,1"


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "10", "3"],
        ["compute", "-10", "3", "7"],
        ["compute", "10", "3", "7.0"],
        ["compute", "1e3", "3", "7"],
        ["compute", "10", "3", "18446744073709551629"],
        ["digits", "ten", "7"],
        ["verify", "bogus"],
        ["verify", "q_mod_1", "--primes", "2,,3"],
        ["verify", "q_mod_1", "--max-n", "400", "--factorial-cap", "300"],
        ["verify", "q_mod_1", "--jobs", "0"],
        ["verify", "q_chain", "--max-n", "1"],
        ["verify", "q_mod_1", "--max-n", "0"],
        ["table", "5", "10001"],
        ["table", "5", "3", "--format", "json"],
        ["bench", "--digits", "0", "--reps", "1"],
        ["bench", "--digits", "100001"],
        ["bench", "--reps", "0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


@pytest.mark.parametrize(
    "argv, witness",
    [
        (["compute", "10", "3", "9"], "trial division by 3"),
        (["compute", "10", "3", "1"], "lower bound check"),
        (["digits", "10", "3215031751"], "Miller-Rabin round with base 11"),
        (["verify", "q_mod_1", "--primes", "2,4"], "trial division by 2"),
        (["table", "4", "3"], "trial division by 2"),
    ],
)
def test_non_prime_modulus(capsys, argv, witness):
    code, out, err = run_cli(capsys, *argv)
    assert code == 3
    assert out == ""
    assert err.startswith("error: ")
    assert witness in err


def test_verify_q_mod_1(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "q_mod_1", "--primes", "2,3", "--max-n", "100"
    )
    assert code == 0
    assert out == "LEMMA q_mod_1 primes=2,3 max_n=100 cases=200 status=PASS\n"


def test_verify_all(capsys):
    code, out, _ = run_cli(capsys, "verify", "all", "--max-n", "40")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 10
    assert all(line.startswith("LEMMA ") for line in lines)
    assert all(line.endswith("status=PASS") for line in lines)
    assert all("primes=2,3,5 max_n=40" in line for line in lines)


def test_verify_respects_factorial_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("LUCASKIT_FACTORIAL_CAP", "50")
    code, _, err = run_cli(capsys, "verify", "q_mod_1", "--max-n", "60")
    assert code == 2
    assert "factorial_cap=50" in err


def test_bench_with_oracle(capsys):
    code, out, _ = run_cli(capsys, "bench", "--digits", "3", "--reps", "5")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 2
    assert lines[0].startswith("lucas digits=3 reps=5 p=1000003 median=")
    assert lines[1].startswith("oracle digits=3 reps=5 p=1000003 median=")
    assert lines[1].endswith("agree=true")


def test_bench_without_oracle(capsys):
    code, out, _ = run_cli(capsys, "bench", "--digits", "1000", "--reps", "3")
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 1
    assert lines[0].startswith("lucas digits=1000 reps=3 ")


def test_verbose_logging_goes_to_stderr(capsys, tmp_path):
    log_file = tmp_path / "run.log"
    code, out, err = run_cli(
        capsys, "-vv", "--log-file", str(log_file), "compute", "10", "3", "7"
    )
    assert code == 0
    assert out == "1\n"
    assert "Running compute" in err
    assert "Running compute" in log_file.read_text()


def test_parser_accepts_verify_flags():
    args = setup_main_parser().parse_args(
        [
            "verify",
            "q_chain",
            "ratio_identity",
            "--primes",
            "7,2",
            "--max-n",
            "25",
            "--degree-cap",
            "128",
            "--jobs",
            "4",
            "--factorial-cap",
            "1000",
        ],
    )
    assert args.command == "verify"
    assert args.lemma_ids == ["q_chain", "ratio_identity"]
    assert args.primes == [7, 2]
    assert args.max_n == 25
    assert args.degree_cap == 128
    assert args.jobs == 4
    assert args.factorial_cap == 1000


def test_parser_defaults():
    args = setup_main_parser().parse_args(["bench"])
    assert (args.digits, args.reps, args.prime, args.seed) == (1000, 10, 1000003, 0)
    args = setup_main_parser().parse_args(["verify", "all"])
    assert (args.primes, args.max_n, args.jobs) == ([2, 3, 5], 300, 1)


@pytest.mark.parametrize(
    "argv, code, stdout",
    [
        (["compute", "10", "3", "7"], 0, "1\n"),
        (["digits", "0", "5"], 0, "\n"),
        (["verify", "bogus"], 2, ""),
        (["compute", "10", "3", "abc"], 2, ""),
        (["compute", "10", "3", "15"], 3, ""),
    ],
)
def test_exit_codes_across_the_process_boundary(argv, code, stdout):
    result = run_process(*argv)
    assert result.returncode == code
    assert result.stdout == stdout


@pytest.mark.slow
def test_compute_agrees_with_exact_binomials_end_to_end():
    cases = [
        (m, n, p)
        for p in (2, 3, 5, 7)
        for m in range(0, 301, 23)
        for n in sorted({0, 1, m // 3, m})
    ]
    for m, n, p in cases:
        result = run_process("compute", str(m), str(n), str(p))
        assert result.returncode == 0
        assert result.stdout == f"{math.comb(m, n) % p}\n"


@pytest.mark.slow
def test_verify_default_profile_end_to_end():
    result = run_process("verify", "all")
    lines = result.stdout.splitlines()
    assert result.returncode == 0
    assert len(lines) == 10
    assert all(line.endswith("status=PASS") for line in lines)
