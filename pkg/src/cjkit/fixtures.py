"""Built-in scenarios reproducing the worked models, and their expected results.

Every fixture is self-contained: it parses its own scenario text, builds or
closes the model and compares against values stored here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from . import evaluator
from .closure import ClosureOptions, close, replay
from .conditions import check_all, check_condition, common_members
from .errors import UnknownFixture
from .formula import parse_formula
from .kernel import full_mask, make_model, upset
from .scenario import format_set, parse_ob_listing, parse_scenario, run_scenario

COUNTERMODEL = """\
# O(B|A) & <>A -> <>B is not valid
worlds: w y
atom A: w y
atom B: y
av w: w
pv w: w
av y: y
pv y: y
ob {y}: {y} {w y}
ob {w y}: {y} {w y}
check w true: O(B|A) & <>A & []~B
check w false: <>B
check w false: O(B|A) & <>A -> <>B
"""

C3 = """\
# A: he goes to help, B: he says he is coming
worlds: x y z
atom A: z
atom B: y z
av x: x y
pv x: x y z
av y: y
pv y: y
av z: z
pv z: z
ob {z}: {z} {x z} {y z} {x y z}
ob {x z}: {z} {x z} {y z} {x y z}
ob {y z}: {z} {x z} {y z} {x y z}
ob {x y z}: {z} {x z} {y z} {x y z}
ob {x}: {x} {x y} {x z} {x y z}
ob {x y}: {x} {x y} {x z} {x y z}
check x true: O(A|true)
check x true: O(B|A)
check x true: O(~B|~A)
check x true: [a]~A
check x true: ~B
check x true: <a>B
check x true: <>(A & B)
check x true: O(true|A)
check x false: Oa true
"""

_DOG4_BODY = """\
worlds: a b c d
atom Dog: a b d
atom Sign: d
atom Fence: b
av a: a b
pv a: a b c d
seed: ~Dog given true
seed: ~Sign given ~Dog
seed: Sign given Dog
seed: Fence given Dog & ~Sign
"""

_DOG4_CHECKS = """\
check a true: [a](Dog & ~Sign)
check a true: <> ~Dog
check a true: <>(Dog & Sign)
check a true: ~Fence
check a true: <a>Fence
"""

DOG4 = _DOG4_BODY + "options: close2 close3\n" + _DOG4_CHECKS

# third dog case: premises and conclusions at a
DOG4_FULL = _DOG4_BODY + "options: close2 close3 close4\n" + _DOG4_CHECKS + """\
check a true: [a]Dog & <>~Dog & [a]~Sign & <>(Dog & Sign) & ~Fence & <a>Fence
check a true: viol(~Dog)
check a true: viol(Dog -> Sign)
check a true: viol(Dog & ~Sign -> Fence)
check a true: Oa Fence
"""

LEMMA3 = """\
worlds: a b c
atom A: a
seed: A given true
options: close2 close3 close4
check a true: O(A|true)
"""

THM_COND5 = LEMMA3.replace("close4", "close4 close5")

# Maple output for CTCTDModel(false, {a,b,c,d}, {a,b,d}, {d}, {b})
DOG4_LISTING = """\
{}, {}
{a}, {}
{b}, {{b}, {a, b}, {b, c}, {b, d}, {a, b, c}, {a, b, d},
{b, c, d}, {a, b, c, d}}
{c}, {{c}, {a, c}, {b, c}, {c, d}, {a, b, c}, {a, c, d},
{b, c, d}, {a, b, c, d}}
{d}, {{d}, {a, d}, {b, d}, {c, d}, {a, b, d}, {a, c, d},
{b, c, d}, {a, b, c, d}}
{a, b}, {{b}, {b, c}, {b, d}, {b, c, d}}
{a, c}, {{c}, {b, c}, {c, d}, {b, c, d}}
{a, d}, {{d}, {b, d}, {c, d}, {b, c, d}}
{b, c}, {{c}, {a, c}, {c, d}, {a, c, d}}
{b, d}, {{d}, {a, d}, {c, d}, {a, c, d}}
{c, d}, {{c}, {a, c}, {b, c}, {a, b, c}}
{a, b, c}, {{c}, {c, d}}
{a, b, d}, {{d}, {c, d}}
{a, c, d}, {{c}, {b, c}}
{b, c, d}, {{c}, {a, c}}
{a, b, c, d}, {{c}}
"""

# witness frames for the first two dog cases: av(a) altered on the dog4-full model
CASES = {
    "case 1": ("a c", "Dog & <a>~Dog", "viol(~Dog) & Oa ~Dog"),
    "case 2": ("a d", "[a]Dog & <>~Dog", "viol(~Dog) & <a>Sign & (<a>~Sign -> Oa Sign)"),
    "case 3": ("a b", "[a]Dog & <>~Dog & [a]~Sign & <>(Dog & Sign) & ~Fence & <a>Fence",
               "viol(~Dog) & viol(Dog -> Sign) & viol(Dog & ~Sign -> Fence) & Oa Fence"),
}


@dataclass
class ReproItem:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class ReproReport:
    name: str
    items: list[ReproItem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.items) and all(i.ok for i in self.items)

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.items.append(ReproItem(label, bool(ok), detail))

    def render(self) -> str:
        lines = [f"[{self.name}]"]
        for i in self.items:
            tail = f": {i.detail}" if i.detail else ""
            lines.append(f"  {'PASS' if i.ok else 'FAIL'} {i.label}{tail}")
        lines.append(f"  {'OK' if self.ok else 'FAILED'}")
        return "\n".join(lines)


def _checks_item(rep: ReproReport, sr) -> None:
    failed = [r for r in sr.checks if not r.passed]
    rep.add(f"{len(sr.checks)} scenario checks", not failed,
            "; ".join(str(r.check.formula) for r in failed) or "all pass")


def repro_countermodel() -> ReproReport:
    rep = ReproReport("countermodel")
    sr = run_scenario(parse_scenario(COUNTERMODEL))
    m = sr.model
    rep.add("conditions (1)-(4)", sr.conditions.ok, sr.conditions.render(m, 3) if not sr.conditions.ok else "")
    rep.add("|B| = {y}", evaluator.extension(m, parse_formula("B")) == m.mask("y"))
    _checks_item(rep, sr)
    schema = parse_formula("O(B|A) & <>A -> <>B")
    rep.add("O(B|A) & <>A -> <>B refuted at w", not evaluator.holds_at(m, "w", schema))
    return rep


def repro_c3() -> ReproReport:
    rep = ReproReport("c3")
    sr = run_scenario(parse_scenario(C3))
    m = sr.model
    rep.add("conditions (1)-(4)", sr.conditions.ok)
    _checks_item(rep, sr)
    y = m.mask("y")
    rep.add("pragmatic oddity avoided: {y} in no π(X)",
            all(not m.ob.contains(x, y) for x in m.ob.contexts()))
    rep.add("π(|~A & B|) = π({y}) is empty", not m.ob[y])
    iff = evaluator.extension(m, parse_formula("A <-> B"))
    common = common_members(m.ob)
    rep.add("|A <-> B| is the least common member of the non-empty π(X)",
            bool(common) and common[0] == iff and all(c & iff == iff for c in common),
            f"least = {format_set(m.worlds, common[0]) if common else 'none'}")
    return rep


def repro_dog4() -> ReproReport:
    rep = ReproReport("dog4")
    sc = parse_scenario(DOG4)
    sr = run_scenario(sc)
    m = sr.model
    expected = parse_ob_listing(DOG4_LISTING, sc.worlds)
    got = {ctx: m.ob[ctx] for ctx in m.ob.contexts()}
    mismatched = [format_set(sc.worlds, c) for c in expected if expected[c] != got.get(c)]
    rep.add(f"{len(expected)} π entries match the reference listing",
            len(expected) == 1 << m.n and not mismatched,
            "mismatch at " + ", ".join(mismatched) if mismatched else "")
    want = (m.mask("d"), m.mask("a b d"), m.universe)
    found = any(v.condition == 4 and v.witness == want for v in sr.warnings)
    rep.add("condition (4) warning issued", found,
            "witness X={d}, Y={a, b, d}, Z=W: {c, d} is missing from π(W)")
    rep.add("no enforced condition fails", not sr.failures)
    _checks_item(rep, sr)
    return rep


def _dog4_full_model():
    sr = run_scenario(parse_scenario(DOG4_FULL))
    return sr, sr.model


def repro_dog4_full() -> ReproReport:
    rep = ReproReport("dog4-full")
    sr, m = _dog4_full_model()
    rep.add("closure with condition (4) is consistent", sr.consistent)
    if m is None:
        return rep
    rep.add("conditions (1)-(4)", check_all(m).ok)
    top = m.universe
    extra = [m.mask("c d"), m.mask("b c d")]
    rep.add("π(W) gains {c, d} and {b, c, d}",
            m.ob.contains(top, m.mask("c")) and all(m.ob.contains(top, e) for e in extra))
    _checks_item(rep, sr)
    return rep


def repro_lemma3() -> ReproReport:
    rep = ReproReport("lemma3")
    sr = run_scenario(parse_scenario(LEMMA3))
    m = sr.model
    a = m.mask("a")
    up = upset(a, m.universe)
    rep.add("π(X) = U({a}) for every X containing a",
            all(m.ob[x] == up for x in m.ob.contexts() if x & a))
    rep.add("π(X) is empty for every X without a",
            all(not m.ob[x] for x in m.ob.contexts() if not x & a))
    rep.add("conditions (1)-(4)", check_all(m).ok)
    _checks_item(rep, sr)
    return rep


def repro_thm_cond5() -> ReproReport:
    rep = ReproReport("thm-cond5")
    sc = parse_scenario(THM_COND5)
    sr = run_scenario(sc)
    res = sr.closure.report
    show = lambda x: format_set(sc.worlds, x)  # noqa: E731
    mask = lambda s: sum(1 << sc.worlds.index(w) for w in s.split())  # noqa: E731
    rep.add("closure with (5) is inconsistent", not res.consistent)
    if res.consistent:
        return rep
    bc = mask("b c")
    rep.add("∅ generated in π({b, c})", res.failed_context == bc,
            f"at {show(res.failed_context)}")
    rep.add("derivation uses rule 5 twice, rule 2 twice, rule 3 once",
            sorted(res.rules_used) == [2, 2, 3, 5, 5], f"rules {res.rules_used}")
    via5 = {s.added for s in res.derivation if s.rule == 5 and s.context == bc}
    via2 = {s.added for s in res.derivation if s.rule == 2 and s.context == bc}
    rep.add("{a, b}, {a, c} ∈ π({b, c}) by (5), then {b}, {c} by (2)",
            via5 == {mask("a b"), mask("a c")} and via2 == {mask("b"), mask("c")})
    a, top = mask("a"), mask("a b c")
    base_ok = all(res.base[x] == upset(a, top) for x in range(top + 1) if x & a)
    rep.add("derivation starts from the condition (1)-(4) closure", base_ok)
    replayed = replay(res.base, res.derivation)
    rep.add("replay regenerates ∅ ∈ π({b, c}), failing condition (1)",
            replayed.contains(bc, 0) and not res.base.contains(bc, 0))
    return rep


def repro_cond5_upset() -> ReproReport:
    rep = ReproReport("cond5-upset")
    sc = parse_scenario(COUNTERMODEL)
    base = sc.ob
    res = close(base, ClosureOptions(close5=True))
    rep.add("closure under (5) is consistent", res.consistent)
    if not res.consistent:
        return rep
    w = 1 << sc.worlds.index("w")
    rep.add("π({w}) = U({w})", res.ob[w] == upset(w, full_mask(len(sc.worlds))),
            "{" + ", ".join(format_set(sc.worlds, s) for s in res.ob.family(w)) + "}")
    closed = make_model(sc.worlds, sc.atoms, sc.av, sc.pv, res.ob)
    rep.add("condition (5) holds afterwards", not check_condition(closed, 5))
    rep.add("conditions (1)-(4) still hold", check_all(closed).ok)
    return rep


def repro_cases() -> ReproReport:
    rep = ReproReport("cases")
    sr, m = _dog4_full_model()
    if m is None:
        rep.add("dog4-full closure is consistent", False)
        return rep
    a = m.index("a")
    for label, (av_a, premises, conclusion) in CASES.items():
        av = list(m.av)
        av[a] = m.mask(av_a)
        variant = m.replace(av=tuple(av))
        p = evaluator.holds_at(variant, "a", parse_formula(premises))
        c = evaluator.holds_at(variant, "a", parse_formula(conclusion))
        rep.add(f"{label}, av(a) = {{{', '.join(av_a.split())}}}", p and c,
                f"premises {p}, conclusion {c}")
    return rep


FIXTURES: dict[str, Callable[[], ReproReport]] = {
    "countermodel": repro_countermodel,
    "c3": repro_c3,
    "dog4": repro_dog4,
    "dog4-full": repro_dog4_full,
    "lemma3": repro_lemma3,
    "thm-cond5": repro_thm_cond5,
    "cond5-upset": repro_cond5_upset,
    "cases": repro_cases,
}


def repro(name: str) -> ReproReport:
    try:
        fn = FIXTURES[name]
    except KeyError:
        raise UnknownFixture(name, list(FIXTURES)) from None
    return fn()
