"""Decision procedures for the semantic conditions on π.

Each checker returns every violating tuple (not just the first) in
canonical order, so that reports are stable.  Conditions, for all
``X, Y, Z <= W``:

1. ``∅ ∉ π(X)``
2. ``Y ∩ X = Z ∩ X  ⇒  (Y ∈ π(X) ⇔ Z ∈ π(X))``
3. ``Y, Z ∈ π(X)  ⇒  Y ∩ Z ∈ π(X)``
4. ``X ⊆ Y ⊆ Z  ∧  X ∈ π(Y)  ⇒  (Z ∖ Y) ∪ X ∈ π(Z)``
5. ``Z ∈ π(X)  ∧  Y ⊆ X  ∧  Y ∩ Z ≠ ∅  ⇒  Z ∈ π(Y)``

and the derived union law ``X ∈ π(Y) ∧ X ∈ π(Z) ⇒ X ∈ π(Y ∪ Z)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

from .errors import InvalidArgument
from .kernel import (CLOSURE_LIMIT, Model, ObMap, check_size, is_subset,
                     sorted_family, submasks, supermasks)

ConditionId = Union[int, str]

# which witness slot plays which role, for messages
_ROLES = {
    1: ("X",),
    2: ("X", "Y", "Z"),
    3: ("X", "Y", "Z"),
    4: ("X", "Y", "Z"),
    5: ("X", "Y", "Z"),
    "union": ("X", "Y", "Z"),
    "frame": ("w",),
}


@dataclass(frozen=True)
class Violation:
    """One failed instance of a condition.

    ``witness`` holds the world sets (bitmasks) instantiating the condition;
    for ``"frame"`` it holds the offending world index.
    """

    condition: ConditionId
    witness: tuple[int, ...]
    message: str = field(default="", compare=False)

    def describe(self, model: Model | None = None) -> str:
        if model is None:
            parts = [f"{r}={v:#x}" for r, v in zip(_ROLES[self.condition], self.witness)]
        elif self.condition == "frame":
            parts = [f"w={model.worlds[self.witness[0]]}"]
        else:
            parts = [f"{r}={model.show(v)}" for r, v in zip(_ROLES[self.condition], self.witness)]
        head = f"condition ({self.condition})" if isinstance(self.condition, int) else self.condition
        text = f"{head} fails at {', '.join(parts)}"
        return f"{text}: {self.message}" if self.message else text


def _cond1(ob: ObMap, n: int) -> Iterator[Violation]:
    for x in ob.contexts():
        if ob.contains(x, 0):
            yield Violation(1, (x,), "the empty set is obligatory")


def _cond2(ob: ObMap, n: int) -> Iterator[Violation]:
    universe = (1 << n) - 1
    for x in ob.contexts():
        fam = ob[x]
        if not fam:
            continue
        outside = universe & ~x
        for y in sorted(fam):
            core = y & x
            for z in (core | extra for extra in submasks(outside)):
                if z not in fam:
                    yield Violation(2, (x, y, z), "Y is obligatory, Z agrees with Y on X but is not")


def _cond3(ob: ObMap, n: int) -> Iterator[Violation]:
    for x in ob.contexts():
        members = sorted(ob[x])
        for i, y in enumerate(members):
            for z in members[i + 1:]:
                if y & z not in ob[x]:
                    yield Violation(3, (x, y, z), "intersection is not obligatory")


def _cond4(ob: ObMap, n: int) -> Iterator[Violation]:
    universe = (1 << n) - 1
    found = []
    for y in ob.contexts():
        for x in ob[y]:
            if not is_subset(x, y):
                continue
            for z in supermasks(y, universe):
                if ((z & ~y) | x) not in ob[z]:
                    found.append((x, y, z))
    for w in sorted(found):
        yield Violation(4, w, "(Z \\ Y) | X is not obligatory in Z")


def _cond5(ob: ObMap, n: int) -> Iterator[Violation]:
    for x in ob.contexts():
        for z in sorted(ob[x]):
            for y in submasks(x):
                if y & z and not ob.contains(y, z):
                    yield Violation(5, (x, y, z), "Z is not obligatory in the restricted context Y")


_CHECKERS: dict[int, Callable[[ObMap, int], Iterator[Violation]]] = {
    1: _cond1, 2: _cond2, 3: _cond3, 4: _cond4, 5: _cond5,
}


def check_ob(ob: ObMap, k: int) -> list[Violation]:
    """Violations of condition ``k`` by a bare obligation map."""
    if k not in _CHECKERS:
        raise InvalidArgument(f"no condition ({k}); choose 1-5")
    check_size(ob.n_worlds, CLOSURE_LIMIT)
    return list(_CHECKERS[k](ob, ob.n_worlds))


def check_condition(model: Model, k: int) -> list[Violation]:
    """Every instance of condition ``k`` that fails in ``model``."""
    return check_ob(model.ob, k)


def check_frame(model: Model) -> list[Violation]:
    out = []
    for i, w in enumerate(model.worlds):
        if not model.av[i] >> i & 1:
            out.append(Violation("frame", (i,), f"{w} is not in av({w})"))
        elif not is_subset(model.av[i], model.pv[i]):
            out.append(Violation("frame", (i,), f"av({w}) is not a subset of pv({w})"))
    return out


def check_union_ob(ob: ObMap) -> list[Violation]:
    check_size(ob.n_worlds, CLOSURE_LIMIT)
    out = []
    contexts = list(ob.contexts())
    holders: dict[int, list[int]] = {}
    for y in contexts:
        for x in ob[y]:
            holders.setdefault(x, []).append(y)
    for x in sorted(holders):
        ys = holders[x]
        for i, y in enumerate(ys):
            for z in ys[i + 1:]:
                if not ob.contains(y | z, x):
                    out.append(Violation("union", (x, y, z), "X is not obligatory in Y | Z"))
    return out


def check_union_property(model: Model) -> list[Violation]:
    """Instances of ``X ∈ π(Y) ∧ X ∈ π(Z) ⇒ X ∈ π(Y ∪ Z)`` that fail."""
    return check_union_ob(model.ob)


@dataclass
class ConditionReport:
    """Violations grouped by condition, in the order checked."""

    violations: dict[ConditionId, list[Violation]]

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def failed(self) -> list[ConditionId]:
        return [k for k, v in self.violations.items() if v]

    def __iter__(self):
        for vs in self.violations.values():
            yield from vs

    def __len__(self):
        return sum(len(v) for v in self.violations.values())

    def render(self, model: Model | None = None, limit: int | None = None) -> str:
        lines = []
        for k, vs in self.violations.items():
            label = f"condition ({k})" if isinstance(k, int) else k
            lines.append(f"{label}: {'ok' if not vs else f'{len(vs)} violation(s)'}")
            for v in vs[:limit]:
                lines.append("  " + v.describe(model))
            if limit is not None and len(vs) > limit:
                lines.append(f"  ... {len(vs) - limit} more")
        return "\n".join(lines)


def check_all(model: Model, include5: bool = False) -> ConditionReport:
    """Frame invariant plus conditions (1)-(4), and (5) when asked."""
    check_size(model.n, CLOSURE_LIMIT)
    groups: dict[ConditionId, list[Violation]] = {"frame": check_frame(model)}
    for k in (1, 2, 3, 4, 5) if include5 else (1, 2, 3, 4):
        groups[k] = check_condition(model, k)
    return ConditionReport(groups)


def refails(ob: ObMap, v: Violation) -> bool:
    """Re-instantiate the condition on ``v.witness`` and report whether it still fails."""
    c, w = v.condition, v.witness
    if c == 1:
        return ob.contains(w[0], 0)
    if c == 2:
        x, y, z = w
        return y & x == z & x and ob.contains(x, y) != ob.contains(x, z)
    if c == 3:
        x, y, z = w
        return ob.contains(x, y) and ob.contains(x, z) and not ob.contains(x, y & z)
    if c == 4:
        x, y, z = w
        return (is_subset(x, y) and is_subset(y, z) and ob.contains(y, x)
                and not ob.contains(z, (z & ~y) | x))
    if c == 5:
        x, y, z = w
        return ob.contains(x, z) and is_subset(y, x) and y & z != 0 and not ob.contains(y, z)
    if c == "union":
        x, y, z = w
        return ob.contains(y, x) and ob.contains(z, x) and not ob.contains(y | z, x)
    raise InvalidArgument(f"cannot re-check {c!r} on an obligation map")


def common_members(ob: ObMap) -> list[int]:
    """Sets belonging to every non-empty ``π(X)``, canonical order."""
    fams = [fam for _, fam in ob.items()]
    if not fams:
        return []
    return sorted_family(frozenset.intersection(*fams))
