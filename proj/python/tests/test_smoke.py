import json
import math

import numpy as np
import pytest

import qlocality as ql


def test_werner_spectrum_and_ppt():
    rho = ql.werner_state(0.5)
    assert rho.shape == (4, 4)
    assert np.allclose(sorted(np.linalg.eigvalsh(rho)), [0.125, 0.125, 0.125, 0.625])
    report = ql.ppt_test(rho)
    assert report["verdict"] == "entangled"
    assert report["min_eigenvalue"] == pytest.approx(-0.125, abs=1e-12)


def test_eigenvalues_match_numpy():
    rho = ql.random_density(4, seed=3)
    assert np.allclose(ql.eigenvalues(rho), np.linalg.eigvalsh(rho), atol=1e-12)


def test_partial_transpose_of_phi_plus():
    pt = ql.partial_transpose(ql.bell_state("phi+"), 2, 2)
    assert min(np.linalg.eigvalsh(pt)) == pytest.approx(-0.5, abs=1e-12)


def test_chsh_singlet():
    rho = ql.bell_state("psi-")
    assert ql.chsh_max(rho) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    b = ql.qubit_behavior(rho, [[0, 0, 1], [1, 0, 0]], [[1, 0, 1], [-1, 0, 1]])
    assert b.shape == (2, 2, 2, 2)
    assert abs(ql.chsh_value(b)) == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    assert ql.no_signaling_residual(b) <= 1e-12
    assert ql.lhv_membership(b)["verdict"] == "infeasible"


def test_uniform_behavior_is_local():
    assert ql.lhv_membership(np.full((2, 2, 2, 2), 0.25))["verdict"] == "feasible"


def test_thresholds_and_scan():
    assert ql.werner_ppt_threshold(1e-8) == pytest.approx(1 / 3, abs=1e-6)
    assert ql.werner_chsh_threshold(1e-8) == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    scan = ql.scan_werner([k / 10 for k in range(11)])
    assert [r["classification"] for r in scan["rows"]][::5] == [
        "separable",
        "entangled-local-CHSH",
        "entangled-CHSH-violating",
    ]


def test_simulate_is_deterministic():
    model = {
        "scenario": {"settings": [2, 2], "outcomes": [2, 2]},
        "weights": [0.5, 0.5],
        "responseA": [[[1, 0], [1, 0]], [[0, 1], [0, 1]]],
        "responseB": [[[1, 0], [1, 0]], [[0, 1], [0, 1]]],
    }
    a = ql.simulate(json.dumps(model), 10000, seed=1)
    b = ql.simulate(json.dumps(model), 10000, seed=1, workers=2)
    assert a == b


def test_errors_raise():
    with pytest.raises(ql.Error):
        ql.werner_state(1.5)
    with pytest.raises(ql.Error):
        ql.ppt_test(np.eye(4))
