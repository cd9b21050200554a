import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from octadet import freeconv, prng
from octadet.errors import DomainError, GuardError, OctadetError
from octadet.matrices import Matrix
from octadet.rings import ring_from_spec
from octadet.verify import IDENTITIES, Report, SuiteConfig, random_matrix, replay, run_suite, suite_costs

QUICK = dict(max_n=2, trials=2)


# ---- generator contract


def test_splitmix_reference_values():
    # first outputs for seed 0 from the published SplitMix64 reference
    g = prng.SplitMix64(0)
    assert [g.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


@given(st.integers(1, 10**6), st.integers(0, 2**64 - 1))
def test_below_in_range(bound, seed):
    assert 0 <= prng.SplitMix64(seed).below(bound) < bound


def test_sample_is_distinct_and_ordered():
    pop = list(range(20))
    got = prng.SplitMix64(5).sample(pop, 7)
    assert len(set(got)) == 7 and got == sorted(got)


def test_derive_is_label_sensitive():
    assert prng.derive(42, "a").next() == prng.derive(42, "a").next()
    assert prng.derive(42, "a").next() != prng.derive(42, "b").next()


@pytest.mark.parametrize("spec", ["int", "mod:6", "poly:int", "poly:mod:2"])
def test_random_matrix_deterministic(spec):
    R = ring_from_spec(spec)
    a = random_matrix(R, 3, 4, prng.SplitMix64(9))
    b = random_matrix(R, 3, 4, prng.SplitMix64(9))
    assert a == b and a.shape == (3, 4)


def test_random_matrix_seeds_differ():
    R = ring_from_spec("int")
    same = sum(
        random_matrix(R, 3, 3, prng.SplitMix64(s)) == random_matrix(R, 3, 3, prng.SplitMix64(s + 1000))
        for s in range(100)
    )
    assert same == 0


def test_random_entry_ranges():
    rng = prng.SplitMix64(1)
    ints = random_matrix(ring_from_spec("int"), 20, 20, rng)
    assert {v for row in ints.data for v in row} == set(range(-9, 10))
    mods = random_matrix(ring_from_spec("mod:6"), 20, 20, rng)
    assert {v for row in mods.data for v in row} == set(range(6))
    polys = random_matrix(ring_from_spec("poly:int"), 10, 10, rng)
    assert max(len(v) for row in polys.data for v in row) == 2


def test_random_matrix_advances_stream():
    R = ring_from_spec("int")
    rng = prng.SplitMix64(3)
    assert random_matrix(R, 2, 2, rng) != random_matrix(R, 2, 2, rng)


# ---- config


@pytest.mark.parametrize(
    "kwargs",
    [dict(trials=0), dict(max_n=0), dict(identities=()), dict(identities=("nope",)), dict(rings=("mod:1",)), dict(seed=-1)],
)
def test_config_validation(kwargs):
    with pytest.raises(OctadetError):
        SuiteConfig(**kwargs)


def test_config_defaults_and_round_trip():
    cfg = SuiteConfig()
    assert cfg.rings == ("int", "mod:6", "mod:2")
    assert (cfg.max_n, cfg.max_m, cfg.trials, cfg.seed) == (3, 3, 25, 42)
    assert cfg.identities == IDENTITIES
    assert SuiteConfig.from_json(cfg.to_json()) == cfg


# ---- running


def test_counting_contract():
    cfg = SuiteConfig(identities=("lemma_cp",), trials=1, max_n=3)
    res = run_suite(cfg).results["lemma_cp"]
    assert res.checked == len(cfg.rings) * 3
    assert res.checked == res.passed + res.failed


def test_quick_suite_passes_with_full_coverage():
    report = run_suite(SuiteConfig(**QUICK))
    assert report.ok
    for name in IDENTITIES:
        r = report.results[name]
        assert r.checked > 0 and r.checked == r.passed and r.counterexample is None
    assert report.missing_coverage == []


def test_report_schema_and_determinism():
    cfg = SuiteConfig(identities=("cauchy_binet", "conv_add"), **QUICK)
    first, second = run_suite(cfg).dumps(), run_suite(cfg).dumps()
    assert first == second
    obj = json.loads(first)
    assert list(obj) == ["seed", "version", "config", "results", "coverage", "wall_ms"]
    assert obj["seed"] == 42 and obj["wall_ms"] is None
    assert set(obj["results"]["conv_add"]) == {"checked", "passed", "failed", "counterexample"}


def test_timing_is_opt_in():
    cfg = SuiteConfig(identities=("lemma_cp",), trials=1)
    assert isinstance(run_suite(cfg, timing=True).wall_ms, int)


def test_seed_changes_inputs_not_verdicts():
    a = run_suite(SuiteConfig(identities=("det_add",), seed=1, **QUICK))
    b = run_suite(SuiteConfig(identities=("det_add",), seed=2, **QUICK))
    assert a.ok and b.ok
    assert a.results["det_add"].checked == b.results["det_add"].checked


def test_jobs_do_not_change_report():
    cfg = SuiteConfig(identities=("symm", "cancel_p", "homomorphisms"), **QUICK)
    assert run_suite(cfg, jobs=1).dumps() == run_suite(cfg, jobs=3).dumps()


def test_bad_jobs():
    with pytest.raises(DomainError):
        run_suite(SuiteConfig(identities=("lemma_cp",)), jobs=0)


def test_boolean_zero_items_present():
    report = run_suite(SuiteConfig(rings=("mod:2",), identities=("conv_add",), max_n=2, trials=1))
    assert report.ok and report.results["conv_add"].checked == 2 * 2


# ---- mutation and replay


def _mutate(monkeypatch, name):
    original = getattr(freeconv, name)
    monkeypatch.setattr(freeconv, name, lambda *a: original(*a) + 1)


def test_mutated_constant_is_caught_and_replayable(monkeypatch):
    _mutate(monkeypatch, "symmp_constant")
    report = run_suite(SuiteConfig(identities=("conv_add",), **QUICK))
    res = report.results["conv_add"]
    assert res.failed >= 1 and res.checked == res.passed + res.failed
    cex = res.counterexample
    assert set(cex) == {"identity", "ring", "params", "inputs", "item", "lhs", "rhs"}
    # the dump survives a JSON round trip and still reproduces the failure
    cex = json.loads(json.dumps(cex))
    assert replay(cex) == (cex["lhs"], cex["rhs"])
    monkeypatch.undo()
    lhs, rhs = replay(cex)
    assert lhs == rhs == cex["lhs"]


def test_fail_fast_stops_at_first_failure(monkeypatch):
    _mutate(monkeypatch, "mult_constant")
    cfg = SuiteConfig(identities=("conv_mult",), rings=("int",), fail_fast=True, **QUICK)
    assert run_suite(cfg).results["conv_mult"].failed == 1


def test_replay_errors():
    with pytest.raises(DomainError):
        replay({"identity": "nope"})
    cfg = SuiteConfig(identities=("lemma_cp",), rings=("int",), trials=1, max_n=1)
    A = Matrix.from_rows(ring_from_spec("int"), [[3]])
    bogus = {"identity": "lemma_cp", "ring": "int", "params": {"n": 1}, "inputs": {"A": A.to_json()}, "item": {"x": 1}}
    with pytest.raises(DomainError):
        replay(bogus)
    assert run_suite(cfg).ok


# ---- guards


def test_guard_refuses_large_dimensions():
    with pytest.raises(GuardError) as err:
        run_suite(SuiteConfig(max_n=9))
    assert "identity" in str(err.value) and "terms exceeds the limit" in str(err.value)


def test_guard_names_offending_identity():
    with pytest.raises(GuardError, match="identity det_add"):
        run_suite(SuiteConfig(identities=("det_add",), max_n=7))
    costs = suite_costs(SuiteConfig(identities=("conv_rect",), max_n=3))
    assert costs["conv_rect"][0] == 48 * 48


def test_report_json_type():
    report = run_suite(SuiteConfig(identities=("lemma_cp",), trials=1, max_n=1))
    assert isinstance(report, Report)
    assert json.loads(report.dumps())["config"]["identities"] == ["lemma_cp"]
