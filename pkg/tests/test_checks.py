"""Property suite tests."""

import pytest

from peterlin.experiments import SUITES, RunConfig, cmd_check
from peterlin.manufactured import get_exact_solution
from peterlin.scheme.tensors import adjugate


def flipped_adjugate(matrix):
    return -adjugate(matrix)


def run_check(config, **options):
    printed = []
    status = cmd_check(config, stream=printed.append, **options)
    return status, printed


@pytest.mark.parametrize("preset", ("diffusive", "non-diffusive"))
def test_all_suites(preset):
    status, printed = run_check(RunConfig.resolve(overrides={"preset": preset}))
    assert status == 0, printed
    assert len(printed) == len(SUITES)
    assert [line.split()[1] for line in printed] == list(SUITES)
    verdicts = {line.split()[1]: line.split()[0] for line in printed}
    expected_skips = {"diffusion"} if preset == "non-diffusive" else set()
    assert {name for name, verdict in verdicts.items() if verdict == "SKIP"} == (
        expected_skips
    )
    assert all(verdict in ("PASS", "SKIP") for verdict in verdicts.values())


def test_faulty_adjugate_is_detected():
    status, printed = run_check(
        RunConfig(), adjugate=flipped_adjugate, suites=["cancellation", "adjugate"]
    )
    assert status == 1
    assert [line.split()[0] for line in printed] == ["FAIL", "FAIL"]


def test_selected_suite():
    status, printed = run_check(RunConfig(), suites=["transport"])
    assert status == 0
    assert printed[0].startswith("PASS transport")


def test_diffusion_skipped_without_diffusion():
    status, printed = run_check(RunConfig(nu=1.0, eps=0.0), suites=["diffusion"])
    assert status == 0
    assert printed == ["SKIP diffusion  eps = 0"]


def test_suite_error_counts_as_failure(monkeypatch):
    def broken(config, rng):
        raise ZeroDivisionError("division by zero")

    monkeypatch.setitem(SUITES, "transport", broken)
    status, printed = run_check(RunConfig(), suites=["transport"])
    assert status == 1
    assert printed == ["FAIL transport  ZeroDivisionError: division by zero"]


@pytest.mark.parametrize("config", (RunConfig(), RunConfig(nu=1.0, eps=0.0)))
def test_forcing_suite_strong_residual_vanishes(config):
    status, printed = run_check(config, suites=["forcing"])
    assert status == 0, printed
    assert printed[0].startswith("PASS forcing")
    assert float(printed[0].rsplit(" ", 1)[1]) <= 1e-9


def test_forcing_suite_detects_wrong_forcing(monkeypatch):
    exact = get_exact_solution()
    forcing = exact.forcing

    def shifted(points, t, nu, eps):
        f, big_f = forcing(points, t, nu, eps)
        return f + 1.0, big_f

    monkeypatch.setattr(exact, "forcing", shifted)
    status, printed = run_check(RunConfig(), suites=["forcing"])
    assert status == 1
    assert printed[0].startswith("FAIL forcing")
