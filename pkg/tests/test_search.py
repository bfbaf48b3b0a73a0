"""Tests for the rejection sampler and the multi-restart extremal search."""
import json

import pytest
import numpy as np
from pydantic import ValidationError

from src.utils.reproducibility import spawn_rngs
from src.zalcman.classu import is_admissible
from src.zalcman.config import SamplerConfig, SearchConfig
from src.zalcman.errors import PersistenceError, SamplingStarvedError
from src.zalcman.functionals import bound, evaluate, proven_specs
from src.zalcman.schwarz import SchurParams
from src.zalcman.search import (
    BestRecord,
    append_records,
    decode,
    encode,
    final_record,
    load_records,
    koebe_seed,
    maximize,
    polish,
    run_and_persist,
    run_restarts,
    sample,
    sample_function,
    sample_functions,
    search_records,
    select_best,
)


def small_search(**overrides) -> SearchConfig:
    settings = dict(spec='Z:2', degree=1, restarts=3, iterations=40, order=16, rng_seed=7)
    settings.update(overrides)
    return SearchConfig(**settings)


def make_record(value: float, seed: int = 0) -> BestRecord:
    return BestRecord(
        spec='Z:2',
        value=value,
        bound=1.0,
        excess=value - 1.0,
        a2=0.25 - 0.5j,
        gammas=[0.5j, -0.125 + 0j],
        membership_margin=0.3,
        pole_free=True,
        seed=seed,
        evaluations=10,
        wall_ms=3,
    )


# sample

def test_sample_is_admissible(rng) -> None:
    """Test accepted draws satisfy the margin and decay settings."""
    config = SamplerConfig(degree=3)
    for _ in range(10):
        a2, params = sample(rng, 3, config)
        assert params.degree == 3
        assert abs(a2) <= config.a2_radius
        for k, gamma in enumerate(params.gamma):
            assert abs(gamma) <= config.gamma_radius * config.gamma_decay ** k
        assert is_admissible(a2, params, config.margin, config.grid_size)


def test_degree_zero_samples_have_small_a2(rng) -> None:
    """Test omega = 0 is pole-free only for |a2| <= 1."""
    for _ in range(50):
        a2, params = sample(rng, 0)
        assert params.degree == 0
        assert abs(a2) <= 1.0


def test_sample_starves_under_impossible_margin(rng) -> None:
    """Test the try budget is enforced."""
    config = SamplerConfig(degree=1, margin=0.999, max_tries=5)

    with pytest.raises(SamplingStarvedError):
        sample(rng, 1, config)


def test_sample_functions_is_reproducible() -> None:
    """Test the same seed yields the same functions."""
    config = SamplerConfig(degree=2, seed=99, order=16)
    first = [f.coeffs.coeffs for f in sample_functions(config, 5)]
    second = [f.coeffs.coeffs for f in sample_functions(config, 5)]

    for a, b in zip(first, second):
        np.testing.assert_array_equal(a, b)


# encode / decode

def test_decode_inverts_encode() -> None:
    """Test the unconstrained coordinates recover (a2, gammas)."""
    params = SchurParams((0.5j, -0.3 + 0.1j))
    a2, decoded = decode(encode(1.2 - 0.4j, params, 1e-6), 1e-6)

    assert a2 == 1.2 - 0.4j
    np.testing.assert_allclose(decoded.gamma, params.gamma, atol=1e-14)


def test_decode_respects_margin(rng) -> None:
    """Test decoded gammas stay strictly inside 1 - margin."""
    for _ in range(100):
        x = rng.normal(scale=50.0, size=8)
        _, params = decode(x, 1e-3)
        assert max(abs(g) for g in params.gamma) < 1.0 - 1e-3


# BestRecord

def test_record_json_round_trip() -> None:
    """Test the JSONL form and its persisted keys."""
    record = make_record(0.75)
    data = record.to_json_record()

    assert data['a2'] == [0.25, -0.5]
    assert data['gammas'] == [[0.0, 0.5], [-0.125, 0.0]]
    assert data['margin'] == 0.3
    assert data['evals'] == 10
    assert BestRecord.from_json_record(json.loads(json.dumps(data))) == record


def test_select_best_prefers_earliest_tie() -> None:
    """Test ties are broken by restart order."""
    records = [make_record(0.5, seed=1), make_record(0.9, seed=2), make_record(0.9, seed=3)]

    assert select_best(records).seed == 2


def test_final_record_sums_work() -> None:
    """Test evaluations and wall time are summed across restarts."""
    final = final_record([make_record(0.5), make_record(0.6)])

    assert final.value == 0.6
    assert final.evaluations == 20
    assert final.wall_ms == 6


# Persistence

def test_append_and_load(tmp_path) -> None:
    """Test appending creates parent directories and preserves order."""
    path = tmp_path / 'runs' / 'best.jsonl'
    append_records(path, [make_record(0.1)])
    append_records(path, [make_record(0.2), make_record(0.3)])

    assert [r.value for r in load_records(path)] == [0.1, 0.2, 0.3]


def test_load_missing_file(tmp_path) -> None:
    """Test a missing file raises PersistenceError."""
    with pytest.raises(PersistenceError):
        load_records(tmp_path / 'absent.jsonl')


def test_load_malformed_line(tmp_path) -> None:
    """Test malformed lines are reported with their line number."""
    path = tmp_path / 'bad.jsonl'
    path.write_text(json.dumps(make_record(0.1).to_json_record()) + '\n{"spec": "Z:2"}\n')

    with pytest.raises(PersistenceError, match=':2:'):
        load_records(path)


# SearchConfig

def test_search_config_parses_spec() -> None:
    """Test the functional string is parsed on construction."""
    assert small_search().spec.label == 'Z:2'


def test_search_config_rejects_short_order() -> None:
    """Test the series order must reach the functional's largest index."""
    with pytest.raises(ValidationError):
        SearchConfig(spec='K:6,1', order=5)


# Search

def test_restarts_are_reproducible() -> None:
    """Test identical configs give identical records apart from wall time."""
    first = run_restarts(small_search())
    second = run_restarts(small_search())

    for a, b in zip(first, second):
        assert a.model_dump(exclude={'wall_ms'}) == b.model_dump(exclude={'wall_ms'})


def test_restarts_do_not_depend_on_workers() -> None:
    """Test threaded restarts match sequential ones."""
    sequential = run_restarts(small_search())
    threaded = run_restarts(small_search(workers=3))

    assert [r.value for r in threaded] == [r.value for r in sequential]


def test_records_are_members_within_bound() -> None:
    """Test every record rebuilds to a pole-free member below the proven bound."""
    for record in run_restarts(small_search()):
        assert record.pole_free
        assert record.membership_margin >= 1e-6 - 1e-12
        assert record.value <= 1.0 + 1e-9
        assert record.excess == pytest.approx(record.value - 1.0)
        assert record.reevaluate() == pytest.approx(record.value, abs=1e-10)


def test_zero_iterations_returns_initial_sample() -> None:
    """Test a degenerate budget records the first admissible draw."""
    config = small_search(restarts=1, iterations=0)
    record = maximize(config)
    a2, params = sample(spawn_rngs(7, 1)[0], 1, config.sampler())

    assert record.a2 == pytest.approx(a2)
    assert record.gammas[0] == pytest.approx(params.gamma[0])
    assert record.evaluations == 1


def test_search_approaches_sharp_second_zalcman_bound() -> None:
    """Test |a3 - a2^2| is pushed to within 1e-3 of its sharp value 1."""
    best = maximize(small_search(restarts=10, iterations=300))

    assert 1.0 - 1e-3 <= best.value <= 1.0 + 1e-9
    assert best.pole_free
    assert best.membership_margin >= 1e-6


def test_run_and_persist_appends_restarts_and_final(tmp_path) -> None:
    """Test one line per restart plus the final best."""
    path = tmp_path / 'search.jsonl'
    records = run_and_persist(small_search(), path)
    loaded = load_records(path)

    assert len(loaded) == 4
    assert loaded[-1].value >= max(r.value for r in loaded[:-1])
    assert loaded[-1].evaluations > sum(r.evaluations for r in records[:-1])
    for record in loaded:
        assert record.reevaluate(order=16) == pytest.approx(record.value, abs=1e-10)


def test_sample_function_matches_sample() -> None:
    """Test the built sample carries the drawn parameters and the sampler order."""
    config = SamplerConfig(degree=2, order=20, grid_size=1024)

    f = sample_function(spawn_rngs(99, 1)[0], 2, config)
    a2, params = sample(spawn_rngs(99, 1)[0], 2, config)

    assert f.a2 == a2
    assert f.params == params
    assert f.order == 20
    assert f.pole_free
    assert f.membership_margin >= config.margin


# Boundary polishing

@pytest.mark.parametrize('label', [spec.label for spec in proven_specs()])
def test_koebe_seed_is_admissible_and_nearly_sharp(label) -> None:
    """Test the polishing start is a strict member within 1e-3 of the sharp bound."""
    config = SearchConfig(spec=label)

    f = koebe_seed(0.4, config)

    assert f is not None
    assert f.pole_free
    assert f.membership_margin >= config.margin
    assert is_admissible(f.a2, f.params, config.margin, config.grid_size)
    value = evaluate(config.spec, f)
    assert bound(config.spec) - 1e-3 <= value <= bound(config.spec) + 1e-9


def test_koebe_seed_needs_a_schur_parameter() -> None:
    """Test degree 0 has no polishing start."""
    assert koebe_seed(0.0, small_search(degree=0)) is None


def test_polish_is_skipped_without_iterations() -> None:
    """Test a zero iteration budget leaves the restarts untouched."""
    config = small_search(iterations=0)

    assert polish(config, make_record(0.5)) is None


def test_search_records_final_covers_polishing() -> None:
    """Test the final record is at least the best restart and counts the extra descent."""
    records = search_records(small_search())
    restarts, final = records[:-1], records[-1]

    assert len(restarts) == 3
    assert final.value >= select_best(restarts).value
    assert final.value >= 1.0 - 1e-3
    assert final.evaluations > sum(r.evaluations for r in restarts)


@pytest.mark.slow
@pytest.mark.parametrize('label', [spec.label for spec in proven_specs()])
def test_default_budget_recovers_sharp_bound(label) -> None:
    """Test 50 restarts x 500 iterations reach bound - 1e-3 without exceeding it."""
    best = maximize(SearchConfig(spec=label))

    assert best.value >= best.bound - 1e-3
    assert best.excess <= 1e-9
    assert best.pole_free
    assert best.membership_margin >= 1e-6
    assert best.reevaluate() == pytest.approx(best.value, abs=1e-10)
