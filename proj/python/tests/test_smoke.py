import json
import math
import statistics

import pytest

import kefun

INTERVAL = {
    "schema_version": 1,
    "id": "interval",
    "xi": {"drift": 1},
    "eta": {"drift": 2},
    "q": 1,
    "expected": {
        "support": {"shape": "closed_interval", "set": [[0, 2]]},
        "verdict": {"atom_at_zero": "no", "continuous": "yes", "absolutely_continuous": "yes"},
    },
}

def test_classify_matches_expectation():
    (row,) = kefun.classify(INTERVAL)
    assert row["id"] == "interval"
    assert row["expected_match"] is True
    assert row["classification"]["support"]["shape"] == "closed_interval"

def test_simulate_stays_in_support_and_is_reproducible():
    values = kefun.simulate(INTERVAL, 2000, seed=3)
    assert len(values) == 2000
    assert all(0.0 <= v <= 2.0 + 1e-9 for v in values)
    assert values == kefun.simulate(INTERVAL, 2000, seed=3, workers=4)
    # V = 2(1 - e^-tau) with tau ~ Exp(1) is uniform on [0, 2]
    assert abs(statistics.fmean(values) - 1.0) < 0.05

def test_transform_of_unit_integrand_scales_the_triplet():
    integrand = {"pieces": [{"start": 0, "end": 2, "form": "constant", "value": 1}]}
    out = kefun.transform_triplet(integrand, 2.0, {"sigma2": 0.5, "gamma": 0.25})
    assert out["sigma2"] == pytest.approx(1.0)
    assert out["gamma"] == pytest.approx(0.5)

def test_char_exponent_of_brownian_motion():
    assert kefun.char_exponent({"sigma2": 1}, 2.0) == pytest.approx(complex(-2.0, 0.0))
    poisson = {"measure": [{"type": "atoms", "atoms": [{"location": 1, "mass": 1}]}], "gamma": 1}
    z = 0.7
    assert kefun.char_exponent(poisson, z) == pytest.approx(complex(math.cos(z) - 1, math.sin(z)))

def test_schema_errors_raise_spec_error():
    bad = dict(INTERVAL, q=-1)
    with pytest.raises(kefun.SpecError):
        kefun.classify(bad)
    with pytest.raises(ValueError):
        kefun.classify("{ not json")

def test_cli_entry_point(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(INTERVAL))
    code, out, _ = kefun.run_cli(["classify", "--scenario", str(path)])
    assert code == 0
    assert "MATCH" in out
    code, _, err = kefun.run_cli(["classify", "--scenario", str(tmp_path / "missing.json")])
    assert code == 2
