"""Line-oriented scenario files and the runner behind the CLI.

A scenario declares worlds, atoms, the two accessibility maps, explicit π
entries, conditional-obligation seeds, closure options and truth checks::

    worlds: a b c d
    atom Dog: a b d
    av a: a b               # default av(w) = {w}
    pv a: a b c d           # default pv(w) = W
    ob {a b}: {b} {b c}     # explicit members of π({a, b})
    seed: Fence given Dog & ~Sign
    options: close2 close3 close4
    check a true: [a](Dog & ~Sign)

``#`` starts a comment.  When the file has seeds or an ``options`` line the
model is built by closure; otherwise the explicit π is used as is.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import evaluator
from .closure import ClosureOptions, CTCTDResult, ctctd_model
from .conditions import ConditionReport, Violation, check_all
from .errors import (FormulaSyntaxError, ScenarioSyntaxError, UndeclaredAtom,
                     UndeclaredWorld)
from .formula import Formula, atoms_of, is_identifier, parse_formula, render_formula
from .kernel import CLOSURE_LIMIT, Model, ObMap, WorldSet, check_size, full_mask, make_model

RESERVED = frozenset({"given"})

_NAME = re.compile(r"[A-Za-z0-9_]+")
_BRACED = re.compile(r"\{([^{}]*)\}")


@dataclass(frozen=True)
class Check:
    world: str
    expected: bool
    formula: Formula
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Scenario:
    worlds: tuple[str, ...]
    atoms: dict[str, WorldSet]
    av: tuple[WorldSet, ...]
    pv: tuple[WorldSet, ...]
    ob: ObMap
    seeds: tuple[tuple[Formula, Formula], ...] = ()
    options: ClosureOptions | None = None
    checks: tuple[Check, ...] = ()

    @property
    def uses_closure(self) -> bool:
        return self.options is not None

    def with_options(self, options: ClosureOptions | None) -> "Scenario":
        return Scenario(self.worlds, self.atoms, self.av, self.pv, self.ob,
                        self.seeds, options, self.checks)


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


class _Reader:
    def __init__(self):
        self.worlds: list[str] | None = None
        self.atoms: dict[str, int] = {}
        self.av: dict[str, int] = {}
        self.pv: dict[str, int] = {}
        self.ob: dict[int, set[int]] = {}
        self.seeds: list[tuple[Formula, Formula]] = []
        self.options: ClosureOptions | None = None
        self.checks: list[Check] = []

    def world_set(self, text: str, lineno: int) -> int:
        mask = 0
        for name in re.split(r"[\s,]+", text.strip()):
            if not name:
                continue
            if name not in self.worlds:
                raise UndeclaredWorld(name, lineno)
            mask |= 1 << self.worlds.index(name)
        return mask

    def world(self, name: str, lineno: int) -> str:
        if name not in self.worlds:
            raise UndeclaredWorld(name, lineno)
        return name

    def formula(self, text: str, lineno: int) -> Formula:
        try:
            f = parse_formula(text)
        except FormulaSyntaxError as e:
            raise ScenarioSyntaxError(lineno, f"bad formula {text.strip()!r}: {e}") from None
        for name in sorted(atoms_of(f)):
            if name not in self.atoms:
                raise UndeclaredAtom(name, lineno)
        return f

    def feed(self, lineno: int, raw: str) -> None:
        line = _strip_comment(raw).strip()
        if not line:
            return
        head, sep, body = line.partition(":")
        if not sep:
            raise ScenarioSyntaxError(lineno, "expected 'keyword: value'")
        words = head.split()
        if not words:
            raise ScenarioSyntaxError(lineno, "missing keyword")
        key, args = words[0], words[1:]
        if key == "worlds":
            self.read_worlds(lineno, args, body)
            return
        if self.worlds is None:
            raise ScenarioSyntaxError(lineno, "the 'worlds' line must come first")
        if key == "atom":
            if len(args) != 1 or not is_identifier(args[0]) or args[0] in RESERVED:
                raise ScenarioSyntaxError(lineno, "expected 'atom NAME: worlds'")
            if args[0] in self.atoms:
                raise ScenarioSyntaxError(lineno, f"atom {args[0]!r} declared twice")
            self.atoms[args[0]] = self.world_set(body, lineno)
        elif key in ("av", "pv"):
            if len(args) != 1:
                raise ScenarioSyntaxError(lineno, f"expected '{key} WORLD: worlds'")
            table = self.av if key == "av" else self.pv
            table[self.world(args[0], lineno)] = self.world_set(body, lineno)
        elif key == "ob":
            self.read_ob(lineno, head[2:].strip(), body)
        elif key == "seed":
            if args:
                raise ScenarioSyntaxError(lineno, "expected 'seed: Y given Z'")
            parts = re.split(r"\bgiven\b", body)
            if len(parts) != 2:
                raise ScenarioSyntaxError(lineno, "expected exactly one 'given' in a seed")
            self.seeds.append((self.formula(parts[0], lineno), self.formula(parts[1], lineno)))
        elif key == "options":
            self.read_options(lineno, args, body)
        elif key == "check":
            if len(args) != 2 or args[1] not in ("true", "false"):
                raise ScenarioSyntaxError(lineno, "expected 'check WORLD true|false: formula'")
            world = self.world(args[0], lineno)
            self.checks.append(Check(world, args[1] == "true", self.formula(body, lineno), lineno))
        else:
            raise ScenarioSyntaxError(lineno, f"unknown keyword {key!r}")

    def read_worlds(self, lineno, args, body):
        if self.worlds is not None:
            raise ScenarioSyntaxError(lineno, "worlds declared twice")
        if args:
            raise ScenarioSyntaxError(lineno, "expected 'worlds: NAME ...'")
        names = re.split(r"[\s,]+", body.strip())
        names = [n for n in names if n]
        if not names:
            raise ScenarioSyntaxError(lineno, "no worlds declared")
        for n in names:
            if not _NAME.fullmatch(n):
                raise ScenarioSyntaxError(lineno, f"bad world name {n!r}")
        if len(set(names)) != len(names):
            raise ScenarioSyntaxError(lineno, "duplicate world name")
        check_size(len(names), CLOSURE_LIMIT)
        self.worlds = names

    def read_ob(self, lineno, ctx_text, body):
        m = _BRACED.fullmatch(ctx_text)
        if m is None:
            raise ScenarioSyntaxError(lineno, "expected 'ob {worlds}: {worlds} ...'")
        ctx = self.world_set(m.group(1), lineno)
        members = set()
        rest = _BRACED.sub(" ", body)
        if rest.strip():
            raise ScenarioSyntaxError(lineno, "members of an ob line must be {braced} sets")
        for group in _BRACED.findall(body):
            members.add(self.world_set(group, lineno))
        self.ob.setdefault(ctx, set()).update(members)

    def read_options(self, lineno, args, body):
        if args:
            raise ScenarioSyntaxError(lineno, "expected 'options: flag ...'")
        if self.options is not None:
            raise ScenarioSyntaxError(lineno, "options given twice")
        flags = dict(close2=False, close3=False, close4=False, close5=False)
        limit = None
        for word in body.split():
            if word in flags:
                flags[word] = True
            elif word.startswith("max_iterations="):
                try:
                    limit = int(word.split("=", 1)[1])
                except ValueError:
                    raise ScenarioSyntaxError(lineno, f"bad iteration limit {word!r}") from None
                if limit < 1:
                    raise ScenarioSyntaxError(lineno, "max_iterations must be positive")
            else:
                raise ScenarioSyntaxError(lineno, f"unknown option {word!r}")
        self.options = ClosureOptions(max_iterations=limit, **flags)

    def finish(self) -> Scenario:
        if self.worlds is None:
            raise ScenarioSyntaxError(0, "no 'worlds' line")
        n = len(self.worlds)
        universe = full_mask(n)
        av = tuple(self.av.get(w, 1 << i) for i, w in enumerate(self.worlds))
        pv = tuple(self.pv.get(w, universe) for w in self.worlds)
        options = self.options
        if options is None and self.seeds:
            options = ClosureOptions()
        return Scenario(tuple(self.worlds), dict(self.atoms), av, pv, ObMap(n, self.ob),
                        tuple(self.seeds), options, tuple(self.checks))


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text, applying the av/pv defaults."""
    reader = _Reader()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        reader.feed(lineno, raw)
    return reader.finish()


def _names(worlds, mask) -> str:
    return " ".join(w for i, w in enumerate(worlds) if mask >> i & 1)


def serialize_scenario(sc: Scenario) -> str:
    """Inverse of :func:`parse_scenario` up to comments and layout."""
    w = sc.worlds
    lines = [f"worlds: {' '.join(w)}"]
    lines += [f"atom {name}: {_names(w, mask)}".rstrip() for name, mask in sc.atoms.items()]
    for i, name in enumerate(w):
        lines.append(f"av {name}: {_names(w, sc.av[i])}".rstrip())
        lines.append(f"pv {name}: {_names(w, sc.pv[i])}".rstrip())
    for ctx, _ in sc.ob.items():
        members = " ".join("{" + _names(w, m) + "}" for m in sc.ob.family(ctx))
        lines.append(f"ob {{{_names(w, ctx)}}}: {members}")
    for y, z in sc.seeds:
        lines.append(f"seed: {render_formula(y)} given {render_formula(z)}")
    if sc.options is not None:
        o = sc.options
        words = [k for k in ("close2", "close3", "close4", "close5") if getattr(o, k)]
        if o.max_iterations is not None:
            words.append(f"max_iterations={o.max_iterations}")
        lines.append(("options: " + " ".join(words)).rstrip())
    for c in sc.checks:
        lines.append(f"check {c.world} {'true' if c.expected else 'false'}: {render_formula(c.formula)}")
    return "\n".join(lines) + "\n"


def format_set(worlds, mask) -> str:
    return "{" + ", ".join(n for i, n in enumerate(worlds) if mask >> i & 1) + "}"


def format_ob_listing(model: Model) -> str:
    """One ``{context}, {{members}}`` line per subset of W, canonical order."""
    check_size(model.n, CLOSURE_LIMIT)
    out = []
    for ctx in model.ob.contexts():
        fam = ", ".join(format_set(model.worlds, m) for m in model.ob.family(ctx))
        out.append(f"{format_set(model.worlds, ctx)}, {{{fam}}}")
    return "\n".join(out) + "\n"


def parse_ob_listing(text: str, worlds) -> dict[WorldSet, frozenset]:
    """Read a listing in the ``format_ob_listing`` layout (line breaks inside
    a family are allowed) back into ``{context: family}``."""
    worlds = list(worlds)
    flat = " ".join(text.split())

    def to_mask(group: str) -> int:
        mask = 0
        for name in filter(None, (s.strip() for s in group.split(","))):
            mask |= 1 << worlds.index(name)
        return mask

    entry = re.compile(r"\{([^{}]*)\}\s*,\s*\{((?:\s*\{[^{}]*\}\s*,?)*)\s*\}")
    table = {}
    for m in entry.finditer(flat):
        ctx = to_mask(m.group(1))
        table[ctx] = frozenset(to_mask(g) for g in _BRACED.findall(m.group(2)))
    return table


@dataclass(frozen=True)
class CheckResult:
    check: Check
    actual: bool | None

    @property
    def passed(self) -> bool:
        return self.actual == self.check.expected


@dataclass
class ScenarioReport:
    scenario: Scenario
    model: Model | None
    closure: CTCTDResult | None
    conditions: ConditionReport | None
    failures: list[Violation]
    warnings: list[Violation]
    checks: list[CheckResult]

    @property
    def consistent(self) -> bool:
        return self.closure is None or self.closure.consistent

    @property
    def ok(self) -> bool:
        return self.consistent and not self.failures and all(c.passed for c in self.checks)

    def render(self, limit: int = 10) -> str:
        worlds = self.scenario.worlds
        show = lambda m: format_set(worlds, m)  # noqa: E731
        lines = []
        if self.closure is not None:
            lines.append(self.closure.report.render(show))
        if self.model is not None:
            what = "model satisfies the enforced conditions" if not self.failures else \
                f"{len(self.failures)} condition violation(s)"
            lines.append(what)
            for v in self.failures[:limit]:
                lines.append("  FAIL " + v.describe(self.model))
            if self.warnings:
                lines.append(f"{len(self.warnings)} warning(s) for conditions not enforced by closure")
                for v in self.warnings[:limit]:
                    lines.append("  warn " + v.describe(self.model))
                if len(self.warnings) > limit:
                    lines.append(f"  ... {len(self.warnings) - limit} more")
        for r in self.checks:
            c = r.check
            status = "PASS" if r.passed else "FAIL"
            got = "n/a" if r.actual is None else str(r.actual).lower()
            lines.append(f"{status} {c.world} {str(c.expected).lower()}: "
                         f"{render_formula(c.formula)}  (got {got})")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


def build_model(sc: Scenario) -> tuple[Model | None, CTCTDResult | None]:
    if not sc.uses_closure:
        return make_model(sc.worlds, sc.atoms, sc.av, sc.pv, sc.ob), None
    result = ctctd_model(sc)
    return result.model, result


def run_scenario(sc: Scenario) -> ScenarioReport:
    """Build (and close, if asked) the model, judge conditions, evaluate checks.

    Conditions (1)-(4) are always judged, (5) when closure enables it.  For a
    closed model, violations of conditions the closure did not enforce are
    warnings; everything else is a failure.
    """
    model, closure = build_model(sc)
    if model is None:
        checks = [CheckResult(c, None) for c in sc.checks]
        return ScenarioReport(sc, None, closure, None, [], [], checks)
    include5 = sc.options is not None and sc.options.close5
    conditions = check_all(model, include5=include5)
    if closure is None:
        enforced = None
    else:
        enforced = {"frame", 1, *sc.options.rules}
    failures, warnings = [], []
    for v in conditions:
        if enforced is None or v.condition in enforced:
            failures.append(v)
        else:
            warnings.append(v)
    checks = [CheckResult(c, evaluator.holds_at(model, c.world, c.formula)) for c in sc.checks]
    return ScenarioReport(sc, model, closure, conditions, failures, warnings, checks)
