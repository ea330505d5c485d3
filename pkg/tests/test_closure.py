import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cjkit import fixtures
from cjkit.closure import (ClosureOptions, Step, close, ctctd_model, random_closed_model,
                           replay, seed_conditional)
from cjkit.conditions import check_all, check_ob
from cjkit.errors import DisjointSeed, InvalidArgument, IterationLimit
from cjkit.kernel import ObMap, full_mask, upset
from cjkit.scenario import parse_ob_listing, parse_scenario

ABCD = ("a", "b", "c", "d")


def test_seed_examples():
    ob = seed_conditional(ObMap(2), 0b10, 0b11)
    assert ob.to_dict() == {0b10: frozenset({0b10}), 0b11: frozenset({0b10})}
    ob = seed_conditional(ObMap(3), 0b001, 0b111)
    assert [c for c, _ in ob.items()] == [0b001, 0b011, 0b101, 0b111]


def test_disjoint_seed():
    with pytest.raises(DisjointSeed):
        seed_conditional(ObMap(2), 0b01, 0b10)


def test_options():
    assert ClosureOptions.baseline().rules == (2, 3)
    assert ClosureOptions.cj().rules == (2, 3, 4)
    assert ClosureOptions.cj(close5=True).rules == (2, 3, 4, 5)
    with pytest.raises(InvalidArgument):
        ClosureOptions(max_iterations=0)


def test_dog4_baseline_listing():
    sc = parse_scenario(fixtures.DOG4)
    res = ctctd_model(sc)
    expected = parse_ob_listing(fixtures.DOG4_LISTING, ABCD)
    assert len(expected) == 16
    assert res.consistent
    assert {c: res.model.ob[c] for c in range(16)} == expected


def test_dog4_full_top_context():
    res = ctctd_model(parse_scenario(fixtures.DOG4_FULL))
    m = res.model
    assert res.warnings == []
    assert m.ob[m.universe] == upset(m.mask("c"), m.universe)


def test_dog4_with_cond5_is_inconsistent():
    # regression: adding (5) to the dog4 seeds also collapses
    sc = parse_scenario(fixtures.DOG4).with_options(ClosureOptions.cj(close5=True))
    res = ctctd_model(sc)
    assert not res.consistent
    assert res.report.rules_used == [5, 2, 3]
    assert res.report.failed_context == sc_mask("a b")
    assert replay(res.report.base, res.report.derivation).contains(sc_mask("a b"), 0)


def sc_mask(names):
    return sum(1 << ABCD.index(w) for w in names.split())


def test_lemma3():
    sc = parse_scenario(fixtures.LEMMA3)
    m = ctctd_model(sc).model
    a = m.mask("a")
    for x in range(8):
        assert m.ob[x] == (upset(a, 7) if x & a else frozenset())


def test_thm_cond5_derivation():
    sc = parse_scenario(fixtures.THM_COND5)
    rep = ctctd_model(sc).report
    bc = 0b110
    assert not rep.consistent
    assert rep.failed_context == bc
    assert rep.rules_used == [5, 5, 2, 2, 3]
    assert all(s.context == bc for s in rep.derivation)
    assert rep.derivation[-1] == Step(3, bc, 0, ((bc, 0b010), (bc, 0b100)))
    out = replay(rep.base, rep.derivation)
    assert out.contains(bc, 0)
    assert not check_ob(rep.base, 1)


def test_thm_cond5_render_names_every_rule():
    sc = parse_scenario(fixtures.THM_COND5)
    text = ctctd_model(sc).report.render()
    assert text.count("rule (5)") == 2 and "condition (1) fails" in text


def test_replay_rejects_bad_steps():
    base = ObMap(2, {0b11: [0b01, 0b11]})
    with pytest.raises(InvalidArgument):
        replay(base, [Step(2, 0b11, 0b10, ((0b11, 0b01),))])
    with pytest.raises(InvalidArgument):
        replay(base, [Step(3, 0b11, 0b00, ((0b11, 0b01), (0b11, 0b10)))])


def test_cond5_upset_on_counter_model():
    sc = parse_scenario(fixtures.COUNTERMODEL)
    w = 1 << sc.worlds.index("w")
    res = close(sc.ob, ClosureOptions(close5=True))
    assert res.consistent
    assert res.ob[w] == upset(w, 3)


def test_closure_is_idempotent():
    res = ctctd_model(parse_scenario(fixtures.DOG4_FULL)).report
    again = close(res.ob, ClosureOptions.cj())
    assert again.ob == res.ob
    assert again.iterations == 1


def test_iteration_limit():
    ob = seed_conditional(ObMap(4), 0b0100, 0b1111)
    with pytest.raises(IterationLimit):
        close(ob, ClosureOptions(close4=True, max_iterations=1))


def test_empty_map_stays_empty():
    res = close(ObMap(3), ClosureOptions.cj(close5=True))
    assert res.consistent and res.ob.size() == 0


# properties ---------------------------------------------------------------


@st.composite
def seeded(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    full = full_mask(n)
    pairs = draw(st.lists(st.tuples(st.integers(1, full), st.integers(1, full)), max_size=3))
    pairs = [(y, z) for y, z in pairs if y & z]
    rules = draw(st.sets(st.sampled_from([2, 3, 4, 5])))
    return n, pairs, rules


def _options(rules):
    return ClosureOptions(close2=2 in rules, close3=3 in rules, close4=4 in rules, close5=5 in rules)


def _seed(n, pairs):
    ob = ObMap(n)
    for y, z in pairs:
        ob = seed_conditional(ob, y, z)
    return ob


@given(seeded())
@settings(max_examples=200, deadline=None)
def test_closure_matches_naive_fixpoint(case):
    n, pairs, rules = case
    worlds = [f"v{i}" for i in range(n)]
    to_set = lambda m: frozenset(w for i, w in enumerate(worlds) if m >> i & 1)  # noqa: E731
    expected = oracles.naive_close(worlds, [(to_set(y), to_set(z)) for y, z in pairs], rules)
    res = close(_seed(n, pairs), _options(rules))
    assert res.consistent == (expected is not None)
    if expected is not None:
        got = {to_set(c): {to_set(s) for s in res.ob[c]} for c in range(1 << n)}
        assert got == expected


@given(seeded())
@settings(max_examples=200, deadline=None)
def test_closure_properties(case):
    n, pairs, rules = case
    opts = _options(rules)
    ob = _seed(n, pairs)
    res = close(ob, opts)
    if not res.consistent:
        assert replay(res.base, res.derivation).contains(res.failed_context, 0)
        return
    # extensive, idempotent, seeds still true, enabled conditions hold
    for c, fam in ob.items():
        assert fam <= res.ob[c]
    assert close(res.ob, opts).ob == res.ob
    for y, z in pairs:
        assert all(res.ob.contains(x, y) for x in range(1 << n) if x & ~z == 0 and x & y)
    for k in (1,) + opts.rules:
        assert check_ob(res.ob, k) == []


@given(seeded(), st.tuples(st.integers(1, 7), st.integers(1, 7)))
@settings(max_examples=100, deadline=None)
def test_closure_is_monotone(case, extra):
    n, pairs, rules = case
    full = full_mask(n)
    y, z = extra[0] & full, extra[1] & full
    if not y & z:
        return
    opts = _options(rules)
    small = close(_seed(n, pairs), opts)
    big = close(_seed(n, pairs + [(y, z)]), opts)
    if small.consistent and big.consistent:
        for c, fam in small.ob.items():
            assert fam <= big.ob[c]
    if not small.consistent:
        assert not big.consistent


def test_random_closed_models_are_cj():
    rng = random.Random(2024)
    made = 0
    for _ in range(200):
        m = random_closed_model(rng, rng.choice([3, 4]), ["A", "B"])
        if m is None:
            continue
        made += 1
        assert check_all(m).ok
    assert made > 150


def test_random_closed_model_is_seed_deterministic():
    a = random_closed_model(random.Random(5), 4, ["A"])
    b = random_closed_model(random.Random(5), 4, ["A"])
    assert a == b
