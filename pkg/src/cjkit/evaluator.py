"""Truth conditions of CJ over finite models.

Extensions are computed bottom-up as bitmasks.  The deontic operators are
defined directly from the obligation map::

    Oa A     iff  |A| in π(av(w))  and  av(w) meets |~A|
    Oi A     iff  |A| in π(pv(w))  and  pv(w) meets |~A|
    O(B|A)   iff  |B| meets |A|  and  |B| in π(X) for all X <= |A| meeting |B|
    viol(A)  iff  Oi A and not A
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator

from . import formula as fm
from .errors import InvalidArgument, TooLarge, UnknownAtom
from .kernel import (CLOSURE_LIMIT, Family, Model, ObMap, WorldSet, all_subsets,
                     check_size, full_mask, is_subset, make_model, submasks)


def extension(model: Model, f: fm.Formula) -> WorldSet:
    """The set of worlds of ``model`` at which ``f`` is true."""
    return _ext(model, f, model.universe)


def _ext(m: Model, f: fm.Formula, top: int) -> int:
    t = type(f)
    if t is fm.Atom:
        try:
            return m.valuation[f.name]
        except KeyError:
            raise UnknownAtom(f.name) from None
    if t is fm.Top:
        return top
    if t is fm.Bottom:
        return 0
    if t is fm.Not:
        return top & ~_ext(m, f.arg, top)
    if t is fm.And:
        return _ext(m, f.left, top) & _ext(m, f.right, top)
    if t is fm.Or:
        return _ext(m, f.left, top) | _ext(m, f.right, top)
    if t is fm.Implies:
        return (top & ~_ext(m, f.left, top)) | _ext(m, f.right, top)
    if t is fm.Iff:
        return top & ~(_ext(m, f.left, top) ^ _ext(m, f.right, top))
    if t is fm.Viol:
        # abbreviation, never a primitive
        return _ext(m, fm.And(fm.OblIdeal(f.arg), fm.Not(f.arg)), top)
    if t is fm.OblCond:
        b = _ext(m, f.consequent, top)
        a = _ext(m, f.antecedent, top)
        return top if _conditional(m.ob, b, a) else 0

    a = _ext(m, f.arg, top)
    out = 0
    for i in range(m.n):
        if _modal_at(m, t, i, a, top):
            out |= 1 << i
    return out


def _modal_at(m: Model, t, i: int, a: int, top: int) -> bool:
    if t is fm.BoxActual:
        return is_subset(m.av[i], a)
    if t is fm.BoxStrong:
        return is_subset(m.pv[i], a)
    if t is fm.DiaActual:
        return m.av[i] & a != 0
    if t is fm.DiaStrong:
        return m.pv[i] & a != 0
    if t is fm.OblActual:
        ctx = m.av[i]
        return m.ob.contains(ctx, a) and ctx & ~a & top != 0
    if t is fm.OblIdeal:
        ctx = m.pv[i]
        return m.ob.contains(ctx, a) and ctx & ~a & top != 0
    raise TypeError(f"not a formula node: {t!r}")


def _conditional(ob: ObMap, b: int, a: int) -> bool:
    if b & a == 0:
        return False
    return all(ob.contains(x, b) for x in submasks(a) if x & b)


def holds_at(model: Model, world: int | str, f: fm.Formula) -> bool:
    """Whether ``f`` is true at ``world`` (a name or an index)."""
    i = model.index(world)
    return bool(extension(model, f) >> i & 1)


def is_valid_in(model: Model, f: fm.Formula) -> bool:
    """True at every world of ``model``."""
    return extension(model, f) == model.universe


def conditional_selection(model: Model, context: WorldSet, *, overlap: bool = True) -> Family:
    """The family ``f(X)`` with ``O(B|A)`` true iff ``|B| in f(|A|)``.

    ``f(X) = {Y : X meets Y and Y in π(Z) for every Z <= X meeting Y}``.
    The value does not depend on any world.  With ``overlap=False`` the
    first conjunct reads "X and Y are disjoint" instead; that variant is kept
    only to show that it does not agree with the truth condition.
    """
    check_size(model.n, CLOSURE_LIMIT)
    if not is_subset(context, model.universe):
        raise InvalidArgument("context is not a subset of W")
    ob = model.ob
    out = []
    for y in all_subsets(model.n):
        meets = y & context != 0
        if meets != overlap:
            continue
        if all(ob.contains(z, y) for z in submasks(context) if z & y):
            out.append(y)
    return frozenset(out)


# ---------------------------------------------------------------------------
# bounded enumeration, used as the validity oracle


def _family_ok(ctx: int, fam: frozenset, universe: int) -> bool:
    """Conditions (1)-(3) restricted to one context."""
    if 0 in fam:
        return False
    for y in fam:
        for z in fam:
            if y & z not in fam:
                return False
    # relevance: membership depends on Y & ctx only
    outside = universe & ~ctx
    for y in fam:
        core = y & ctx
        if any(core | extra not in fam for extra in submasks(outside)):
            return False
    return True


@lru_cache(maxsize=None)
def obmaps_satisfying_cj(n: int) -> tuple[ObMap, ...]:
    """Every obligation map on ``n`` worlds satisfying conditions (1)-(4).

    Per-context families are filtered on (1)-(3) first; the cross-context
    condition (4) is applied to the product.
    """
    if n not in (1, 2):
        raise TooLarge(n, 2, "enumeration")
    universe = full_mask(n)
    subsets = list(all_subsets(n))
    candidates = []
    for ctx in subsets:
        fams = []
        for bits in range(1 << len(subsets)):
            fam = frozenset(s for k, s in enumerate(subsets) if bits >> k & 1)
            if _family_ok(ctx, fam, universe):
                fams.append(fam)
        candidates.append(fams)
    out = []
    for combo in itertools.product(*candidates):
        if _cond4_ok(combo, universe):
            out.append(ObMap._from_families(n, combo))
    return tuple(out)


def _cond4_ok(families, universe) -> bool:
    for y, fam in enumerate(families):
        for x in fam:
            if not is_subset(x, y):
                continue
            for z in range(len(families)):
                if is_subset(y, z) and ((z & ~y) | x) not in families[z]:
                    return False
    return True


def _frames(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    universe = full_mask(n)
    per_world = []
    for i in range(n):
        me = 1 << i
        options = []
        for av in submasks(universe):
            if not av & me:
                continue
            for pv in submasks(universe):
                if is_subset(av, pv):
                    options.append((av, pv))
        per_world.append(options)
    for choice in itertools.product(*per_world):
        yield tuple(c[0] for c in choice), tuple(c[1] for c in choice)


def enumerate_models(n_worlds: int, atom_names: Iterable[str]) -> Iterator[Model]:
    """Yield every CJ model on ``n_worlds`` worlds (1 or 2) over the given atoms.

    Order: frames, then obligation maps, then valuations.  At most three atoms.
    """
    atoms = list(atom_names)
    if n_worlds not in (1, 2):
        raise TooLarge(n_worlds, 2, "enumeration")
    if len(atoms) > 3:
        raise TooLarge(len(atoms), 3, "atom list")
    worlds = tuple(f"w{i}" for i in range(n_worlds))
    obs = obmaps_satisfying_cj(n_worlds)
    subsets = list(all_subsets(n_worlds))
    for av, pv in _frames(n_worlds):
        for ob in obs:
            for vals in itertools.product(subsets, repeat=len(atoms)):
                yield make_model(worlds, dict(zip(atoms, vals)), av, pv, ob)
