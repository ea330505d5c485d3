"""End-to-end acceptance criteria, each exact and time-bounded.

Every test prints one ``criterion N: PASS|FAIL`` line.  The file can also be
run directly (``python3 tests/test_acceptance.py``) for just the summary.
"""
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cjkit import fixtures  # noqa: E402
from cjkit.closure import (ClosureOptions, close, ctctd_model, random_closed_model,  # noqa: E402
                           replay)
from cjkit.conditions import check_all, check_condition, check_union_property, common_members  # noqa: E402
from cjkit.errors import FormulaSyntaxError  # noqa: E402
from cjkit.evaluator import (conditional_selection, enumerate_models, extension,  # noqa: E402
                             holds_at)
from cjkit.formula import (And, Atom, BoxActual, BoxStrong, Bottom, DiaActual,  # noqa: E402
                           DiaStrong, Iff, Implies, Not, OblActual, OblCond, OblIdeal, Or,
                           Top, Viol, parse_formula, render_formula)
from cjkit.kernel import upset  # noqa: E402
from cjkit.scenario import (build_model, parse_ob_listing, parse_scenario,  # noqa: E402
                            run_scenario, serialize_scenario)

P = parse_formula


def _criterion(number, limit, title, body, report=print):
    start = time.perf_counter()
    error = None
    try:
        body()
    except AssertionError as e:
        error = e
    elapsed = time.perf_counter() - start
    if error is None and elapsed >= limit:
        error = AssertionError(f"took {elapsed:.2f}s, limit {limit}s")
    status = "PASS" if error is None else "FAIL"
    line = f"criterion {number}: {status} ({elapsed:.2f}s < {limit}s) {title}"
    if error is not None:
        line += f" -- {error}"
    report(line)
    if error is not None:
        raise error


def _model(text):
    model, _ = build_model(parse_scenario(text))
    return model


# 1 ------------------------------------------------------------------------------


def c1_counter_model():
    m = _model(fixtures.COUNTERMODEL)
    assert check_all(m).ok, "conditions (1)-(4)"
    assert holds_at(m, "w", P("O(B|A) & <>A & []~B"))
    assert not holds_at(m, "w", P("O(B|A) & <>A -> <>B")), "schema not refuted"


# 2 ------------------------------------------------------------------------------

EXTENDED_CHISHOLM = ["O(A|true)", "O(B|A)", "O(~B|~A)", "[a]~A", "~B", "<a>B", "<>(A & B)"]


def c2_c3():
    m = _model(fixtures.C3)
    assert check_all(m).ok, "conditions (1)-(4)"
    for text in EXTENDED_CHISHOLM:
        assert holds_at(m, "x", P(text)), text
    y = m.mask("y")
    assert all(not m.ob.contains(x, y) for x in range(1 << m.n)), "pragmatic oddity"
    iff = extension(m, P("A <-> B"))
    assert iff == m.mask("x z")
    common = common_members(m.ob)
    assert common and common[0] == iff
    assert all(c & iff == iff for c in common), "{x, z} is not the least common member"
    assert holds_at(m, "x", P("O(true|A)"))


# 3 ------------------------------------------------------------------------------


def c3_reference_listing():
    sc = parse_scenario(fixtures.DOG4)
    res = ctctd_model(sc)
    assert res.consistent
    expected = parse_ob_listing(fixtures.DOG4_LISTING, sc.worlds)
    assert len(expected) == 1 << len(sc.worlds)
    got = {c: res.model.ob[c] for c in range(1 << len(sc.worlds))}
    assert got == expected, "listing mismatch"
    m = res.model
    witness = (m.mask("d"), m.mask("a b d"), m.universe)
    assert any(v.condition == 4 and v.witness == witness for v in res.warnings)
    assert any(v.witness == witness for v in check_condition(m, 4))


# 4 ------------------------------------------------------------------------------


def c4_dog4_full():
    sr = run_scenario(parse_scenario(fixtures.DOG4_FULL))
    m = sr.model
    assert sr.consistent and m is not None
    assert check_all(m).ok, "conditions (1)-(4)"
    for text in ["viol(~Dog)", "viol(Dog -> Sign)", "viol(Dog & ~Sign -> Fence)", "Oa Fence"]:
        assert holds_at(m, "a", P(text)), text
    assert sr.ok
    a = m.index("a")
    for label, (av_a, premises, conclusion) in fixtures.CASES.items():
        av = list(m.av)
        av[a] = m.mask(av_a)
        variant = m.replace(av=tuple(av))
        assert holds_at(variant, "a", P(premises)), f"{label} premises"
        assert holds_at(variant, "a", P(conclusion)), f"{label} conclusion"


# 5 ------------------------------------------------------------------------------


def c5_cond5_inconsistency():
    m = _model(fixtures.LEMMA3)
    assert m.worlds == ("a", "b", "c") and extension(m, P("A")) == m.mask("a")
    a = m.mask("a")
    for x in range(1 << m.n):
        if x & a:
            assert m.ob[x] == upset(a, m.universe), f"π({m.show(x)})"
    rep = ctctd_model(parse_scenario(fixtures.THM_COND5)).report
    bc = m.mask("b c")
    assert not rep.consistent
    assert rep.failed_context == bc
    assert set(rep.rules_used) == {5, 2, 3}
    replayed = replay(rep.base, rep.derivation)
    assert replayed.contains(bc, 0) and not rep.base.contains(bc, 0)
    assert check_all(m.replace(ob=rep.base)).ok, "derivation must start from a CJ model"


# 6 ------------------------------------------------------------------------------


def c6_cond5_remark():
    sc = parse_scenario(fixtures.COUNTERMODEL)
    res = close(sc.ob, ClosureOptions(close5=True))
    assert res.consistent
    w = 1 << sc.worlds.index("w")
    assert res.ob[w] == upset(w, (1 << len(sc.worlds)) - 1)


# 7 ------------------------------------------------------------------------------

SCHEMAS = {
    "actual implies potential": "<a>A -> <>A",
    "T": "([]A -> A) & ([a]A -> A)",
    "D'": "~Oa false & ~Oi false",
    "C (actual)": "Oa A & Oa B -> Oa(A & B)",
    "C (ideal)": "Oi A & Oi B -> Oi(A & B)",
    "restricted factual detachment (actual)": "O(B|A) & [a]A & <a>B & <a>~B -> Oa B",
    "restricted factual detachment (ideal)": "O(B|A) & []A & <>B & <>~B -> Oi B",
    "conditional to material (actual)": "O(B|A) & <a>(A & B) & <a>(A & ~B) -> Oa(A -> B)",
    "conditional to material (ideal)": "O(B|A) & <>(A & B) & <>(A & ~B) -> Oi(A -> B)",
    "restricted deontic detachment (actual)": "Oa A & O(B|A) & <a>(A & B) -> Oa(A & B)",
    "restricted deontic detachment (ideal)": "Oi A & O(B|A) & <>(A & B) -> Oi(A & B)",
    "strong violability (actual)": "[a]A -> ~Oa A & ~Oa ~A",
    "strong violability (ideal)": "[]A -> ~Oi A & ~Oi ~A",
    "strong classicality (actual)": "[a](A <-> B) -> (Oa A <-> Oa B)",
    "strong classicality (ideal)": "[](A <-> B) -> (Oi A <-> Oi B)",
    "necessity and conjunction (actual)": "[a]A -> (Oa B -> Oa(A & B))",
    "necessity and conjunction (potential)": "[]A -> (Oa B -> Oa(A & B))",
    "necessity and conjunction (ideal)": "[]A -> (Oi B -> Oi(A & B))",
    "SA": "O(B|A) & <>(A & C & B) -> O(B|A & C)",
}
SCHEMA_FORMULAS = {k: P(v) for k, v in SCHEMAS.items()}

# controls: unrestricted forms that must be refuted by the same models
NON_THEOREMS = {
    "unrestricted deontic detachment": "Oa A & O(B|A) -> Oa B",
    "unrestricted factual detachment": "O(B|A) & A -> Oa B",
    "unrestricted SA": "O(B|A) -> O(B|A & C)",
    "ought implies can": "O(B|A) & <>A -> <>B",
}

# propositional formulas over A, B, C whose extensions are compared for classicality
CLASSICAL_POOL = [P(t) for t in ["A", "B", "~A", "A & B", "A | B", "A -> B", "A <-> B",
                                 "true", "false", "A & C", "~~A", "B & A"]]


def _validity_failures(m):
    """Names of the checks failing somewhere in ``m``."""
    bad = []
    top = m.universe
    for name, f in SCHEMA_FORMULAS.items():
        if extension(m, f) != top:
            bad.append(name)
    ext = {f: extension(m, f) for f in CLASSICAL_POOL}
    for f in CLASSICAL_POOL:
        for g in CLASSICAL_POOL:
            if f == g or ext[f] != ext[g]:
                continue
            for op in (OblActual, OblIdeal):
                if extension(m, op(f)) != extension(m, op(g)):
                    bad.append("classicality")
            c = Atom("C")
            if extension(m, OblCond(c, f)) != extension(m, OblCond(c, g)):
                bad.append("classicality")
            if extension(m, OblCond(f, c)) != extension(m, OblCond(g, c)):
                bad.append("classicality")
    # restricted SA, read on extensions rather than through <>
    a, b, c = extension(m, Atom("A")), extension(m, Atom("B")), extension(m, Atom("C"))
    if a & b & c and extension(m, P("O(B|A)")) == top and extension(m, P("O(B|A & C)")) != top:
        bad.append("SA (extension form)")
    if check_union_property(m):
        bad.append("union property")
    for x, y in ((a, b), (a | c, b), (c, a & b)):
        truth = extension(m, OblCond(_mask_formula(m, y), _mask_formula(m, x)))
        if (truth == top) != (y in conditional_selection(m, x)) or truth not in (0, top):
            bad.append("selection equivalence")
    return bad


def _mask_formula(m, mask):
    # a formula whose extension is exactly ``mask``, built from the atoms
    atoms = [Atom(n) for n in m.valuation]
    pieces = []
    for w in range(m.n):
        if not mask >> w & 1:
            continue
        lits = [a if m.valuation[a.name] >> w & 1 else Not(a) for a in atoms]
        conj = lits[0]
        for lit in lits[1:]:
            conj = And(conj, lit)
        pieces.append(conj)
    if not pieces:
        return Bottom()
    out = pieces[0]
    for p in pieces[1:]:
        out = Or(out, p)
    return out


RANDOM_MODELS = 1000


def c7_validity_suite():
    checked = 0
    controls = {k: P(v) for k, v in NON_THEOREMS.items()}
    for m in enumerate_models(2, ["A", "B", "C"]):
        bad = _validity_failures(m)
        assert not bad, f"2-world model fails {sorted(set(bad))}: {m}"
        checked += 1
        for k in [k for k, f in controls.items() if extension(m, f) != m.universe]:
            del controls[k]
    assert not controls, f"non-theorems never refuted: {sorted(controls)}"
    assert checked == 9 * 15 * 64
    rng = random.Random(20240229)
    made = 0
    while made < RANDOM_MODELS:
        m = random_closed_model(rng, rng.choice([3, 4]), ["A", "B", "C"])
        if m is None:
            continue
        made += 1
        bad = _validity_failures(m)
        assert not bad, f"random model fails {sorted(set(bad))}: {m}"
    # schema M has a 2-world refutation
    m_schema = P("Oa(A & B) -> Oa A & Oa B")
    refuted = next(((m, w) for m in enumerate_models(2, ["A", "B"]) for w in range(2)
                    if not holds_at(m, w, m_schema)), None)
    assert refuted is not None, "schema M not refuted"
    m, w = refuted
    assert holds_at(m, w, P("Oa(A & B)"))


# 8 ------------------------------------------------------------------------------

_ATOMS = ["A", "B", "C", "Dog", "x1", "_p"]
_UNARY = [Not, BoxStrong, DiaStrong, BoxActual, DiaActual, OblActual, OblIdeal, Viol]
_BINARY = [And, Or, Implies, Iff, OblCond]


def random_formula(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.08:
            return Top()
        if r < 0.16:
            return Bottom()
        return Atom(rng.choice(_ATOMS))
    if rng.random() < 0.4:
        return rng.choice(_UNARY)(random_formula(rng, depth - 1))
    return rng.choice(_BINARY)(random_formula(rng, depth - 1), random_formula(rng, depth - 1))


_FUZZ_PIECES = list("AB~&|()<>-[]aOiv ${}=\t") + ["Oa", "Oi", "O(", "viol(", "true", "false",
                                                  "->", "<->", "[a]", "<a>", "[]", "<>", "|"]


def c8_round_trip_and_fuzz():
    rng = random.Random(8)
    for _ in range(10_000):
        f = random_formula(rng, 6)
        text = render_formula(f)
        assert parse_formula(text) == f, text
    for _ in range(10_000):
        text = "".join(rng.choice(_FUZZ_PIECES) for _ in range(rng.randint(0, 25)))
        try:
            parse_formula(text)
        except FormulaSyntaxError as e:
            assert 0 <= e.position <= len(text)
    for name in ("COUNTERMODEL", "C3", "DOG4", "DOG4_FULL", "LEMMA3", "THM_COND5"):
        sc = parse_scenario(getattr(fixtures, name))
        assert parse_scenario(serialize_scenario(sc)) == sc, name


CRITERIA = [
    (1, 1, "counter-model refutes O(B|A) & <>A -> <>B", c1_counter_model),
    (2, 1, "C3 model, extended Chisholm set, pragmatic oddity, least common member", c2_c3),
    (3, 5, "baseline dog4 closure matches the reference listing; condition (4) witness", c3_reference_listing),
    (4, 5, "dog4-full closure with (4); case 1-3 witnesses", c4_dog4_full),
    (5, 2, "seed O(A|true): U({a}) under (4); (5) derives the empty set in π({b, c})", c5_cond5_inconsistency),
    (6, 1, "closing the counter-model under (5) gives π({w}) = U({w})", c6_cond5_remark),
    (7, 60, "validity suite on all 2-world models and 1000 random closed models", c7_validity_suite),
    (8, 10, "10,000 formula round-trips and parser fuzz", c8_round_trip_and_fuzz),
]


@pytest.mark.parametrize("number, limit, title, body", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(capsys, number, limit, title, body):
    def report(line):
        with capsys.disabled():
            print("\n" + line, flush=True)

    _criterion(number, limit, title, body, report)


if __name__ == "__main__":
    failed = 0
    for spec in CRITERIA:
        try:
            _criterion(*spec)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
