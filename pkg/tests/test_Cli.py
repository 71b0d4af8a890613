"""
Tests of the command line interface, via :func:`dispersia.__main__.cli_main`.
"""

from __future__ import annotations

import sys
import contextlib
import io
import json
import os
import tempfile
import unittest

import tests.setup_test_env  # noqa
import better_exchook

from dispersia.__main__ import (
    ExitConfigError,
    ExitDataError,
    ExitFitFailure,
    ExitOk,
    ExitUsage,
    SeedEnvVar,
    cli_main,
)
from dispersia.distributions import Exponential, Gamma, RngStream
from dispersia.log import log


def run_cli(*args):
    """
    :return: (exit code, stdout incl. the log)
    """
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = cli_main(list(args))
    log.initialize(verbosity=[5])
    print("cli %r -> %i" % (args, code))
    print(out.getvalue())
    return code, out.getvalue()


@contextlib.contextmanager
def tmp_dir():
    with tempfile.TemporaryDirectory(prefix="test_dispersia_cli") as d:
        yield d


def _write_series(dirname, values, name="data.csv"):
    filename = os.path.join(dirname, name)
    with open(filename, "w") as f:
        f.write("year,rainfall\n")
        for i, v in enumerate(values):
            f.write("%i,%r\n" % (1901 + i, float(v)))
    return filename


def _write_json(dirname, d, name="config.json"):
    filename = os.path.join(dirname, name)
    with open(filename, "w") as f:
        json.dump(d, f)
    return filename


def _gamma_values(n=109):
    return Gamma(shape=9.0, scale=90.0).sample(n, RngStream(master_seed=1, stream_index=0))


def test_cli_usage_errors():
    assert run_cli()[0] == ExitUsage
    assert run_cli("bogus")[0] == ExitUsage
    assert run_cli("fit", "--family", "cauchy", "--input", "x.csv", "--column", "c")[0] == ExitUsage
    assert run_cli("fit", "--family", "gamma")[0] == ExitUsage
    assert run_cli("validity", "--family", "poisson", "--verbosity", "9")[0] == ExitUsage
    assert run_cli("validity", "--family", "binomial")[0] == ExitUsage
    assert run_cli("validity", "--family", "gamma-known-shape")[0] == ExitUsage
    assert run_cli("simulate", "rejection", "--scenario", "custom")[0] == ExitUsage
    assert run_cli("--help")[0] == ExitOk


def test_cli_fit():
    with tmp_dir() as d:
        filename = _write_series(d, _gamma_values())
        code, out = run_cli("fit", "--family", "gamma", "--input", filename, "--column", "rainfall")
    assert code == ExitOk
    assert "master seed: 42" in out
    assert "shape" in out and "plug_in_variance" in out


def test_cli_fit_failures():
    with tmp_dir() as d:
        constant = _write_series(d, [5.0] * 10, "constant.csv")
        zeros = _write_series(d, [0.0, 1.0, 2.0], "zeros.csv")
        assert run_cli("fit", "--family", "gamma", "--input", constant, "--column", "rainfall")[0] == ExitFitFailure
        assert run_cli("fit", "--family", "gamma", "--input", zeros, "--column", "rainfall")[0] == ExitDataError
        assert run_cli("fit", "--family", "gamma", "--input", zeros, "--column", "rain")[0] == ExitDataError
        missing = os.path.join(d, "missing.csv")
        assert run_cli("fit", "--family", "gamma", "--input", missing, "--column", "rainfall")[0] == ExitDataError


def test_cli_vartest_invalid_verdict():
    values = Exponential(mean=3.0).sample(100, RngStream(master_seed=2, stream_index=0))
    with tmp_dir() as d:
        filename = _write_series(d, values)
        code, out = run_cli(
            "vartest", "--family", "exponential", "--input", filename, "--column", "rainfall", "--df-convention", "n-1"
        )
    assert code == ExitOk
    assert "INVALID: alpha = 4.0000" in out
    assert "n-1" in out


def test_cli_vartest_csv_out():
    with tmp_dir() as d:
        filename = _write_series(d, _gamma_values())
        out_file = os.path.join(d, "out.csv")
        code, _ = run_cli(
            "vartest", "--family", "gamma", "--input", filename, "--column", "rainfall", "--format", "csv", "--out",
            out_file,
        )
        assert code == ExitOk
        with open(out_file) as f:
            lines = f.read().splitlines()
    assert lines[0] == "name,value"
    names = [line.split(",")[0] for line in lines[1:]]
    assert "D" in names and "p_value" in names and "verdict" in names


def test_cli_seed_precedence():
    assert "master seed: 42" in run_cli("validity", "--family", "poisson")[1]
    os.environ[SeedEnvVar] = "7"
    try:
        assert "master seed: 7" in run_cli("validity", "--family", "poisson")[1]
        assert "master seed: 9" in run_cli("validity", "--family", "poisson", "--seed", "9")[1]
        os.environ[SeedEnvVar] = "seven"
        assert run_cli("validity", "--family", "poisson")[0] == ExitConfigError
    finally:
        del os.environ[SeedEnvVar]


def test_cli_validity():
    code, out = run_cli("validity", "--family", "poisson")
    assert code == ExitOk and "VALID: alpha = 2.0000" in out
    code, out = run_cli("validity", "--family", "binomial", "--size", "10")
    assert code == ExitOk and "INVALID: alpha = 1.8000" in out
    code, out = run_cli("validity", "--family", "gamma-known-shape", "--shape", "1")
    assert "alpha = 4.0000" in out
    code, out = run_cli("validity", "--family", "exponential", "--mean", "2", "--printed-cross-term")
    assert "alpha = 8.0000" in out


def test_cli_simulate_table1_reproducible():
    config = {
        "family": "gamma",
        "fixed_params": {"scale": 2},
        "parameter_grid": [1, 5],
        "sample_sizes": [20],
        "replicates": 30,
        "master_seed": 11,
    }
    with tmp_dir() as d:
        config_file = _write_json(d, config)
        outputs = []
        for threads in ["1", "2", "1"]:
            out_file = os.path.join(d, "table1-%s.csv" % threads)
            code, out = run_cli(
                "simulate", "table1", "--config", config_file, "--format", "csv", "--out", out_file,
                "--threads", threads,
            )
            assert code == ExitOk
            assert "master seed: 11" in out
            with open(out_file) as f:
                outputs.append(f.read())
        code, out = run_cli("simulate", "table1", "--config", config_file, "--seed", "12", "--replicates", "5")
        assert "master seed: 12" in out
    assert outputs[0] == outputs[1] == outputs[2]
    assert outputs[0].splitlines()[0] == "family,params,n,mean_D,var_D,n_failed"
    assert len(outputs[0].splitlines()) == 3


def test_cli_config_errors():
    with tmp_dir() as d:
        bad_key = _write_json(d, {"family": "gamma", "colour": "red"}, "bad_key.json")
        assert run_cli("simulate", "table1", "--config", bad_key)[0] == ExitConfigError
        missing = os.path.join(d, "missing.json")
        assert run_cli("simulate", "table1", "--config", missing)[0] == ExitConfigError
        assert run_cli("simulate", "rejection", "--scenario", "custom", "--config", bad_key)[0] == ExitConfigError


def test_cli_log_from_config():
    config = {
        "family": "gamma",
        "fixed_params": {"scale": 2},
        "parameter_grid": [5],
        "sample_sizes": [20],
        "replicates": 10,
        "log_verbosity": [4],
    }
    with tmp_dir() as d:
        config_file = _write_json(d, config)
        log_file = os.path.join(d, "run.log")
        code, out = run_cli("simulate", "table1", "--config", config_file, "--log", log_file)
        assert code == ExitOk
        assert "starting up" in out
        with open(log_file) as f:
            content = f.read()
        assert "starting up" in content and "Quitting" in content
        code, out = run_cli("simulate", "table1", "--config", config_file, "--verbosity", "2")
        assert code == ExitOk
        assert "starting up" not in out


def test_cli_simulate_rejection_histogram():
    with tmp_dir() as d:
        hist_file = os.path.join(d, "hist.csv")
        code, out = run_cli(
            "simulate", "rejection", "--scenario", "mooley-false-reject", "--replicates", "40", "--hist-out",
            hist_file, "--hist-bins", "10",
        )
        assert code == ExitOk
        assert "rate_se" in out
        with open(hist_file) as f:
            lines = f.read().splitlines()
    assert lines[0] == "kind,lower,upper,count"
    assert len(lines) == 1 + 10 + 2


def test_cli_simulate_rejection_custom():
    config = {
        "family": "gamma",
        "true_distribution": {"class": "Weibull", "shape": 2, "scale": 1},
        "sample_sizes": [25],
        "replicates": 20,
    }
    with tmp_dir() as d:
        config_file = _write_json(d, config)
        code, out = run_cli("simulate", "rejection", "--scenario", "custom", "--config", config_file)
    assert code == ExitOk
    assert "weibull" in out


def test_cli_gof():
    with tmp_dir() as d:
        filename = _write_series(d, _gamma_values(200))
        code, out = run_cli("gof", "chi2", "--family", "gamma", "--input", filename, "--column", "rainfall")
        assert code == ExitOk
        assert "p_value" in out and "observed" in out
        code, out = run_cli(
            "gof", "ks", "--family", "gamma", "--input", filename, "--column", "rainfall", "--params",
            "shape=9,scale=90",
        )
        assert code == ExitOk
        assert "params_estimated" in out
        code, out = run_cli("gof", "ks", "--family", "gamma", "--input", filename, "--column", "rainfall")
        assert "WARNING" in out
        assert run_cli(
            "gof", "ks", "--family", "gamma", "--input", filename, "--column", "rainfall", "--params", "shape=x"
        )[0] == ExitUsage
        assert run_cli(
            "gof", "ks", "--family", "gamma", "--input", filename, "--column", "rainfall", "--params", "shape=2"
        )[0] == ExitUsage
        small = _write_series(d, [1.0, 2.0, 3.0], "small.csv")
        assert run_cli("gof", "chi2", "--family", "gamma", "--input", small, "--column", "rainfall")[0] == ExitDataError


if __name__ == "__main__":
    better_exchook.install()
    if len(sys.argv) <= 1:
        for k, v in sorted(globals().items()):
            if k.startswith("test_"):
                print("-" * 40)
                print("Executing: %s" % k)
                try:
                    v()
                except unittest.SkipTest as exc:
                    print("SkipTest:", exc)
                print("-" * 40)
        print("Finished all tests.")
    else:
        assert len(sys.argv) >= 2
        for arg in sys.argv[1:]:
            print("Executing: %s" % arg)
            if arg in globals():
                globals()[arg]()  # assume function and execute
            else:
                eval(arg)  # assume Python code and execute
