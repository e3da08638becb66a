from __future__ import annotations

import json
import math

import pytest

from citerank import (
    P100,
    DivergenceResult,
    PercentileRule,
    ReferenceScope,
    SetSpec,
    fixture_path,
    generate_set,
    load_experiment_config,
    override_seeds,
    run_divergence_experiment,
)
from citerank.synth_bench import emit_divergence

QUANTILE = PercentileRule.QUANTILE
LB09 = PercentileRule.LB09
RAW = PercentileRule.ROUSSEAU_RAW


# --- generate_set -------------------------------------------------------------

def test_all_uncited():
    records = generate_set(SetSpec("Z", n=10, uncited_share=1.0, seed=1))
    assert len(records) == 10
    assert all(record.citations == 0 for record in records)


def test_seeded_determinism():
    spec = SetSpec("S", n=200, uncited_share=0.4, mu=1.3, sigma=1.1, seed=99)
    assert generate_set(spec) == generate_set(spec)


def test_different_seeds_differ():
    a = generate_set(SetSpec("S", n=200, uncited_share=0.0, seed=1))
    b = generate_set(SetSpec("S", n=200, uncited_share=0.0, seed=2))
    assert [r.citations for r in a] != [r.citations for r in b]


def test_zero_block_and_cited_floor():
    records = generate_set(SetSpec("S", n=1000, uncited_share=0.3, mu=1.0, sigma=1.0, seed=42))
    zeros = [record for record in records if record.citations == 0]
    cited = [record for record in records if record.citations > 0]
    assert len(zeros) == 300
    assert len(cited) == 700
    assert all(record.citations >= 1 for record in cited)


def test_sigma_zero_is_constant():
    records = generate_set(SetSpec("S", n=50, uncited_share=0.0, mu=2.0, sigma=0.0, seed=5))
    expected = math.floor(math.exp(2.0))
    assert {record.citations for record in records} == {expected}


def test_unique_paper_ids():
    records = generate_set(SetSpec("S", n=500, uncited_share=0.5, seed=3))
    assert len({record.paper_id for record in records}) == 500


@pytest.mark.parametrize(
    "kwargs,match",
    [
        (dict(n=0, uncited_share=0.5), "n must be positive"),
        (dict(n=5, uncited_share=1.5), "uncited_share"),
        (dict(n=5, uncited_share=0.5, sigma=-1.0), "sigma"),
    ],
)
def test_spec_validation(kwargs, match):
    with pytest.raises(ValueError, match=match):
        SetSpec("S", **kwargs)


# --- divergence experiment ------------------------------------------------------

SPECS = [
    SetSpec("A", n=120, uncited_share=0.2, mu=1.5, sigma=1.0, seed=11),
    SetSpec("B", n=90, uncited_share=0.3, mu=1.0, sigma=1.2, seed=12),
    SetSpec("C", n=150, uncited_share=0.1, mu=1.8, sigma=0.9, seed=13),
    SetSpec("D", n=60, uncited_share=0.4, mu=0.8, sigma=1.1, seed=14),
]


def test_duplicate_rule_correlates_exactly():
    result = run_divergence_experiment(SPECS, [QUANTILE, QUANTILE])
    assert result.pearson[0][1] == 1.0
    assert result.spearman[0][1] == 1.0


def test_experiment_determinism():
    first = run_divergence_experiment(SPECS, [QUANTILE, LB09, RAW])
    second = run_divergence_experiment(SPECS, [QUANTILE, LB09, RAW])
    assert first == second


def test_matrix_symmetric_unit_diagonal():
    result = run_divergence_experiment(SPECS, list(PercentileRule))
    k = len(result.rules)
    for i in range(k):
        assert result.pearson[i][i] == 1.0
        assert result.spearman[i][i] == 1.0
        for j in range(k):
            assert result.pearson[i][j] == result.pearson[j][i]
            assert result.spearman[i][j] == result.spearman[j][i]
            assert abs(result.pearson[i][j]) <= 1.0 + 1e-12


def test_quantile_lb09_nearly_identical():
    result = run_divergence_experiment(SPECS, [QUANTILE, LB09])
    assert result.pearson[0][1] >= 0.999


def test_experiment_preconditions():
    with pytest.raises(ValueError, match="at least 2 sets"):
        run_divergence_experiment(SPECS[:1], [QUANTILE, LB09])
    with pytest.raises(ValueError, match="at least 2 rules"):
        run_divergence_experiment(SPECS, [QUANTILE])


def test_per_set_scope_supported():
    result = run_divergence_experiment(SPECS, [QUANTILE, LB09], P100, ReferenceScope.PER_SET)
    # within one group the +0.9 shift adds exactly 90 to each set's I3,
    # an increasing affine map of the raw sums
    assert result.pearson[0][1] == pytest.approx(1.0, abs=1e-9)


# --- config files ----------------------------------------------------------------

def test_load_65set_fixture():
    config = load_experiment_config(fixture_path("divergence_65sets.json"))
    assert len(config.sets) == 65
    assert config.rules == tuple(PercentileRule)
    assert config.scheme == P100
    assert config.scope is ReferenceScope.GLOBAL_POOL
    assert all(spec.uncited_share <= 0.45 for spec in config.sets)


def test_load_high_uncited_fixture():
    config = load_experiment_config(fixture_path("divergence_high_uncited.json"))
    shares = sorted(spec.uncited_share for spec in config.sets)
    assert shares[-1] > 0.8
    assert all(share < 0.5 for share in shares[:-1])


def test_config_validation_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"sets": []}))
    with pytest.raises(ValueError, match="non-empty"):
        load_experiment_config(bad)
    bad.write_text(json.dumps({"sets": [{"set_id": "A", "n": 5}]}))
    with pytest.raises(ValueError, match="missing"):
        load_experiment_config(bad)
    bad.write_text(json.dumps({"sets": [{"set_id": "A", "n": 5, "uncited_share": 0.5, "x": 1}]}))
    with pytest.raises(ValueError, match="unknown keys"):
        load_experiment_config(bad)
    bad.write_text(json.dumps({"sets": [{"set_id": "A", "n": 5, "uncited_share": 0.5}],
                               "scope": "galactic"}))
    with pytest.raises(ValueError, match="unknown scope"):
        load_experiment_config(bad)


def test_override_seeds():
    config = load_experiment_config(fixture_path("divergence_high_uncited.json"))
    reseeded = override_seeds(config, 5000)
    assert [spec.seed for spec in reseeded.sets] == list(range(5000, 5000 + len(config.sets)))
    assert [spec.set_id for spec in reseeded.sets] == [spec.set_id for spec in config.sets]


# --- emission --------------------------------------------------------------------

def test_emit_divergence_formats():
    result = run_divergence_experiment(SPECS, [QUANTILE, RAW])
    delimited = emit_divergence(result)
    assert delimited.splitlines()[0] == "# citerank-i3 0.1.0"
    assert "pearson,quantile,rousseau-raw," in delimited
    assert "# top_ranked" in delimited

    payload = json.loads(emit_divergence(result, "json"))
    assert payload["rules"] == ["quantile", "rousseau-raw"]
    assert payload["pearson"][0][0] == 1.0
    assert set(payload["top_set"]) == {"quantile", "rousseau-raw"}

    aligned = emit_divergence(result, "aligned")
    assert "Pearson correlation" in aligned
    assert emit_divergence(result, "aligned") == aligned

    with pytest.raises(ValueError, match="unknown format"):
        emit_divergence(result, "xml")


def test_result_to_dict_round_trips_through_json():
    result = run_divergence_experiment(SPECS, [QUANTILE, LB09])
    payload = json.loads(json.dumps(result.to_dict()))
    assert payload["set_order"] == list(result.set_order)
    assert payload["percent_i3"]["quantile"] == list(result.percent_i3["quantile"])
    assert isinstance(result, DivergenceResult)
