"""Seeded fixpoint construction of the obligation map.

Conditional obligations ``O(Y|Z)`` are seeded into π exactly as their truth
condition demands, then π is closed under generation rules read off the
semantic conditions:

* (2)  ``Z ∈ π(Y)`` and ``X ∩ Y = Z ∩ Y``  →  add ``X`` to ``π(Y)``
* (3)  ``X1, X2 ∈ π(Y)``  →  add ``X1 ∩ X2`` to ``π(Y)``
* (4)  ``X ∈ π(Y)``, ``X ⊆ Y ⊆ Z``  →  add ``(Z ∖ Y) ∪ X`` to ``π(Z)``
* (5)  ``Z ∈ π(X)``, ``Y ⊆ X``, ``Y ∩ Z ≠ ∅``  →  add ``Z`` to ``π(Y)``

All rules only ever add memberships, so the fixpoint exists and does not
depend on evaluation order.  Condition (1) cannot be repaired by adding
sets, so closure stops as soon as ``∅`` is generated and reports the chain
of rule applications that produced it.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import evaluator
from .conditions import Violation, check_all, check_ob
from .errors import DisjointSeed, InvalidArgument, IterationLimit
from .kernel import (CLOSURE_LIMIT, Model, ObMap, WorldSet, check_size, full_mask,
                     is_subset, make_model, sorted_family, submasks, supermasks)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosureOptions:
    """Which generation rules to run.

    The defaults (rules 2 and 3 only) reproduce the original Maple search.
    ``max_iterations`` of ``None`` means the capacity bound ``4**|W| + 1``.
    """

    close2: bool = True
    close3: bool = True
    close4: bool = False
    close5: bool = False
    max_iterations: int | None = None

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise InvalidArgument("max_iterations must be positive")

    @property
    def rules(self) -> tuple[int, ...]:
        flags = (self.close2, self.close3, self.close4, self.close5)
        return tuple(k for k, on in zip((2, 3, 4, 5), flags) if on)

    @classmethod
    def baseline(cls) -> "ClosureOptions":
        return cls()

    @classmethod
    def cj(cls, close5: bool = False) -> "ClosureOptions":
        """Rules (2)-(4), optionally (5)."""
        return cls(close4=True, close5=close5)


@dataclass(frozen=True)
class Step:
    """One generated membership: ``added ∈ π(context)`` by ``rule``.

    ``premises`` lists the ``(context, member)`` memberships the rule used.
    """

    rule: int
    context: WorldSet
    added: WorldSet
    premises: tuple[tuple[WorldSet, WorldSet], ...]

    def describe(self, show=lambda m: f"{m:#x}") -> str:
        used = ", ".join(f"{show(m)} ∈ π({show(c)})" for c, m in self.premises)
        return f"rule ({self.rule}): {show(self.added)} ∈ π({show(self.context)})  from {used}"


@dataclass
class ClosureReport:
    """Result of :func:`close`.

    When ``consistent`` is true, ``ob`` is the fixpoint.  Otherwise ``ob`` is
    the map at the moment ``∅`` was generated in ``π(failed_context)``, and
    ``derivation`` replays on top of ``base`` to regenerate that membership.
    """

    consistent: bool
    ob: ObMap
    base: ObMap
    derivation: list[Step]
    iterations: int
    generated_counts: dict[int, int]
    failed_context: WorldSet | None = None

    @property
    def rules_used(self) -> list[int]:
        return [s.rule for s in self.derivation]

    def render(self, show=lambda m: f"{m:#x}") -> str:
        counts = ", ".join(f"({k}): {v}" for k, v in self.generated_counts.items())
        if self.consistent:
            return f"closed after {self.iterations} sweep(s); added {counts}"
        lines = [f"inconsistent after {self.iterations} sweep(s); added {counts}",
                 "derivation:"]
        lines += [f"  {s.describe(show)}" for s in self.derivation]
        lines.append(f"  condition (1) fails: {{}} ∈ π({show(self.failed_context)})")
        return "\n".join(lines)


def seed_conditional(ob: ObMap, consequent: WorldSet, antecedent: WorldSet) -> ObMap:
    """Make ``O(consequent|antecedent)`` true.

    Adds ``consequent`` to ``π(X)`` for every ``X ⊆ antecedent`` that meets it.
    """
    if consequent & antecedent == 0:
        raise DisjointSeed(consequent, antecedent)
    return ob.with_members((x, consequent) for x in submasks(antecedent) if x & consequent)


class _Inconsistent(Exception):
    def __init__(self, context):
        self.context = context


class _Engine:
    def __init__(self, ob: ObMap):
        self.n = ob.n_worlds
        self.universe = full_mask(self.n)
        self.fams = [set(ob[c]) for c in ob.contexts()]
        self.origin: dict[tuple[int, int], tuple[int, Step]] = {}
        self.counts = {2: 0, 3: 0, 4: 0, 5: 0}
        self.changed = False

    def add(self, step: Step) -> None:
        fam = self.fams[step.context]
        if step.added in fam:
            return
        fam.add(step.added)
        self.origin[(step.context, step.added)] = (len(self.origin), step)
        self.counts[step.rule] += 1
        self.changed = True
        if step.added == 0:
            raise _Inconsistent(step.context)

    def snapshot(self) -> ObMap:
        return ObMap._from_families(self.n, [frozenset(f) for f in self.fams])

    def rule2(self, y):
        outside = self.universe & ~y
        for z in sorted_family(self.fams[y]):
            core = z & y
            for extra in submasks(outside):
                self.add(Step(2, y, core | extra, ((y, z),)))

    def rule3(self, y):
        members = sorted_family(self.fams[y])
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                self.add(Step(3, y, a & b, ((y, a), (y, b))))

    def rule4(self, y):
        for x in sorted_family(self.fams[y]):
            if not is_subset(x, y):
                continue
            for z in supermasks(y, self.universe):
                self.add(Step(4, z, (z & ~y) | x, ((y, x),)))

    def rule5(self, x):
        for z in sorted_family(self.fams[x]):
            for y in submasks(x):
                if y & z:
                    self.add(Step(5, y, z, ((x, z),)))

    def sweep(self, rules) -> None:
        for k in rules:
            apply = getattr(self, f"rule{k}")
            for ctx in range(1 << self.n):
                apply(ctx)

    def trace(self, target: tuple[int, int], base: ObMap) -> list[Step]:
        needed: dict[int, Step] = {}
        stack = [target]
        while stack:
            ctx, member = stack.pop()
            if base.contains(ctx, member):
                continue
            seq, step = self.origin[(ctx, member)]
            if seq in needed:
                continue
            needed[seq] = step
            stack.extend(step.premises)
        return [needed[k] for k in sorted(needed)]


def close(ob: ObMap, options: ClosureOptions | None = None) -> ClosureReport:
    """Close ``ob`` under the rules enabled in ``options``.

    Each sweep runs rules (2), (3), (4) in that order over contexts in
    ascending order.  Rule (5) runs only in a sweep where the other rules
    added nothing, so a derivation of ``∅`` is traced back to the closure
    under (2)-(4), which is recorded as ``base``.
    """
    options = options or ClosureOptions()
    n = ob.n_worlds
    check_size(n, CLOSURE_LIMIT)
    limit = options.max_iterations or 4 ** n + 1
    core = [k for k in options.rules if k != 5]
    engine = _Engine(ob)
    base = ob
    base_fixed = False
    iterations = 0
    try:
        while True:
            iterations += 1
            if iterations > limit:
                raise IterationLimit(limit)
            engine.changed = False
            engine.sweep(core)
            if not engine.changed and options.close5:
                if not base_fixed:
                    base = engine.snapshot()
                    base_fixed = True
                engine.sweep([5])
            if not engine.changed:
                break
    except _Inconsistent as bad:
        derivation = engine.trace((bad.context, 0), base)
        log.debug("inconsistent at context %#x after %d sweeps", bad.context, iterations)
        return ClosureReport(False, engine.snapshot(), base, derivation, iterations,
                             dict(engine.counts), bad.context)

    result = engine.snapshot()
    for k in (1,) + options.rules:
        residue = check_ob(result, k)
        if residue:
            raise AssertionError(f"closure left condition ({k}) violated: {residue[0]}")
    return ClosureReport(True, result, base, [], iterations, dict(engine.counts))


def replay(base: ObMap, steps: Sequence[Step]) -> ObMap:
    """Apply ``steps`` to ``base``, checking that each is a valid rule instance."""
    fams = [set(base[c]) for c in base.contexts()]
    universe = full_mask(base.n_worlds)

    def has(ctx, m):
        return m in fams[ctx]

    for i, s in enumerate(steps):
        if not all(has(c, m) for c, m in s.premises):
            raise InvalidArgument(f"step {i}: a premise is not yet established")
        if s.rule == 2:
            (y, z), = s.premises
            ok = s.context == y and s.added & y == z & y and is_subset(s.added, universe)
        elif s.rule == 3:
            (y1, a), (y2, b) = s.premises
            ok = s.context == y1 == y2 and s.added == a & b
        elif s.rule == 4:
            (y, x), = s.premises
            z = s.context
            ok = is_subset(x, y) and is_subset(y, z) and s.added == (z & ~y) | x
        elif s.rule == 5:
            (x, z), = s.premises
            ok = s.added == z and is_subset(s.context, x) and s.context & z != 0
        else:
            ok = False
        if not ok:
            raise InvalidArgument(f"step {i} is not an instance of rule ({s.rule})")
        fams[s.context].add(s.added)
    return ObMap._from_families(base.n_worlds, [frozenset(f) for f in fams])


@dataclass
class CTCTDResult:
    """Outcome of building a model from a scenario's seeds."""

    report: ClosureReport
    model: Model | None
    seeds: list[tuple[WorldSet, WorldSet]]
    warnings: list[Violation] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.report.consistent


def ctctd_model(scenario) -> CTCTDResult:
    """Build the frame of ``scenario``, apply its seeds, close, and assemble a model.

    ``scenario`` needs ``worlds``, ``atoms``, ``av``, ``pv``, ``ob``,
    ``seeds`` (pairs of formulas) and ``options``.  The finished model is
    checked against conditions (1)-(4) whatever the options, and against (5)
    when rule (5) was enabled; anything still failing is returned as a
    warning rather than an error.
    """
    frame = make_model(scenario.worlds, scenario.atoms, scenario.av, scenario.pv, scenario.ob)
    ob = frame.ob
    seeds = []
    for consequent, antecedent in scenario.seeds:
        y = evaluator.extension(frame, consequent)
        z = evaluator.extension(frame, antecedent)
        seeds.append((y, z))
        ob = seed_conditional(ob, y, z)
    report = close(ob, scenario.options)
    if not report.consistent:
        return CTCTDResult(report, None, seeds)
    model = frame.replace(ob=report.ob)
    warnings = list(check_all(model, include5=scenario.options.close5))
    return CTCTDResult(report, model, seeds, warnings)


def random_closed_model(rng: random.Random, n_worlds: int, atoms: Iterable[str],
                        max_seeds: int = 3, options: ClosureOptions | None = None) -> Model | None:
    """A random frame and valuation with a π built from random seeds.

    Seeds mix arbitrary sets with atom extensions, so that conditional
    obligations between the atoms are often true.  Returns ``None`` when the
    seeds are jointly inconsistent.
    """
    options = options or ClosureOptions.cj()
    n = n_worlds
    universe = full_mask(n)
    av, pv = [], []
    for i in range(n):
        a = (1 << i) | (rng.getrandbits(n) & rng.getrandbits(n))
        av.append(a)
        pv.append(a | rng.getrandbits(n))
    names = list(atoms)
    valuation = {a: rng.getrandbits(n) for a in names}
    pool = list(valuation.values())
    pool += [universe & ~v for v in pool] + [universe]
    ob = ObMap(n)
    for _ in range(rng.randint(0, max_seeds)):
        pick = (lambda: rng.choice(pool)) if rng.random() < 0.6 else (lambda: rng.getrandbits(n))
        y, z = pick(), pick()
        if y & z:
            ob = seed_conditional(ob, y, z)
    report = close(ob, options)
    if not report.consistent:
        return None
    worlds = tuple(f"w{i}" for i in range(n))
    return make_model(worlds, valuation, av, pv, report.ob)
