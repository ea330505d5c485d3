"""Finite worlds, world sets, the obligation map and model construction.

A world set is an ``int`` bitmask over the worlds of one model: world ``i``
is bit ``1 << i``.  Families of world sets are ``frozenset`` objects of such
masks.  Everything here is immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import EmptyWorldSet, FrameViolation, InvalidArgument, TooLarge

WorldSet = int
Family = frozenset

# materialising P(W) per context is only feasible for small W
CLOSURE_LIMIT = 8
EVAL_LIMIT = 16


def full_mask(n: int) -> WorldSet:
    return (1 << n) - 1


def all_subsets(n: int) -> range:
    """Every subset of an ``n``-world set, in ascending bitmask order."""
    return range(1 << n)


def submasks(mask: WorldSet) -> Iterator[WorldSet]:
    """Yield every subset of ``mask`` in ascending order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def supermasks(mask: WorldSet, universe: WorldSet) -> Iterator[WorldSet]:
    """Yield every ``Y`` with ``mask <= Y <= universe`` in ascending order."""
    free = universe & ~mask
    for extra in submasks(free):
        yield mask | extra


def is_subset(a: WorldSet, b: WorldSet) -> bool:
    return a & ~b == 0


def family_key(mask: WorldSet) -> tuple[int, int]:
    """Sort key for members of a family: cardinality, then bitmask."""
    return (mask.bit_count(), mask)


def sorted_family(family: Iterable[WorldSet]) -> list[WorldSet]:
    return sorted(family, key=family_key)


def upset(base: WorldSet, universe: WorldSet) -> Family:
    """Return ``U(base)`` restricted to ``universe``: all ``Y`` with ``base <= Y <= universe``."""
    if not is_subset(base, universe):
        raise InvalidArgument("upset base must be a subset of the universe")
    return frozenset(supermasks(base, universe))


def check_size(n: int, limit: int = CLOSURE_LIMIT) -> None:
    if n > limit:
        raise TooLarge(n, limit)


class ObMap:
    """The obligation function: a total map from contexts to families.

    Contexts without an entry have the empty family.  Instances are
    immutable; equality is extensional.
    """

    __slots__ = ("_n", "_families")

    def __init__(self, n_worlds: int, entries: Mapping[WorldSet, Iterable[WorldSet]] | None = None):
        if n_worlds < 0:
            raise InvalidArgument("negative world count")
        check_size(n_worlds, EVAL_LIMIT)
        size = 1 << n_worlds
        families = [frozenset()] * size
        for ctx, members in (entries or {}).items():
            if not 0 <= ctx < size:
                raise InvalidArgument(f"context {ctx:#x} is outside the world set")
            fam = frozenset(members)
            for m in fam:
                if not 0 <= m < size:
                    raise InvalidArgument(f"member {m:#x} is outside the world set")
            families[ctx] = families[ctx] | fam
        self._n = n_worlds
        self._families = tuple(families)

    @classmethod
    def _from_families(cls, n_worlds: int, families: Sequence[frozenset]) -> "ObMap":
        ob = cls.__new__(cls)
        ob._n = n_worlds
        ob._families = tuple(families)
        return ob

    @property
    def n_worlds(self) -> int:
        return self._n

    def __getitem__(self, ctx: WorldSet) -> Family:
        return self._families[ctx]

    def contains(self, ctx: WorldSet, member: WorldSet) -> bool:
        return member in self._families[ctx]

    def family(self, ctx: WorldSet) -> list[WorldSet]:
        """Members of ``π(ctx)`` in canonical order."""
        return sorted_family(self._families[ctx])

    def contexts(self) -> range:
        return range(len(self._families))

    def items(self) -> Iterator[tuple[WorldSet, Family]]:
        """Non-empty entries in ascending context order."""
        for ctx, fam in enumerate(self._families):
            if fam:
                yield ctx, fam

    def to_dict(self) -> dict[WorldSet, Family]:
        return dict(self.items())

    def with_members(self, additions: Iterable[tuple[WorldSet, WorldSet]]) -> "ObMap":
        families = list(self._families)
        for ctx, member in additions:
            families[ctx] = families[ctx] | {member}
        return ObMap._from_families(self._n, families)

    def size(self) -> int:
        """Total number of memberships ``X in π(Y)``."""
        return sum(len(f) for f in self._families)

    def __eq__(self, other):
        if not isinstance(other, ObMap):
            return NotImplemented
        return self._n == other._n and self._families == other._families

    def __hash__(self):
        return hash((self._n, self._families))

    def __repr__(self):
        body = ", ".join(
            f"{ctx:#x}: {{{', '.join(f'{m:#x}' for m in sorted_family(fam))}}}"
            for ctx, fam in self.items()
        )
        return f"ObMap({self._n}, {{{body}}})"


SetLike = Union[WorldSet, Iterable[str]]


@dataclass(frozen=True)
class Model:
    """A finite CJ model ``<W, av, pv, π, V>``.

    ``av`` and ``pv`` are tuples indexed by world position.  Build instances
    with :func:`make_model`, which validates the frame.
    """

    worlds: tuple[str, ...]
    av: tuple[WorldSet, ...]
    pv: tuple[WorldSet, ...]
    ob: ObMap
    valuation: Mapping[str, WorldSet] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.worlds)

    @property
    def universe(self) -> WorldSet:
        return full_mask(len(self.worlds))

    def index(self, world: int | str) -> int:
        if isinstance(world, int):
            if not 0 <= world < len(self.worlds):
                raise InvalidArgument(f"world index {world} out of range")
            return world
        try:
            return self.worlds.index(world)
        except ValueError:
            raise InvalidArgument(f"no world named {world!r}") from None

    def mask(self, names: SetLike) -> WorldSet:
        return to_mask(self.worlds, names)

    def names(self, mask: WorldSet) -> list[str]:
        return [w for i, w in enumerate(self.worlds) if mask >> i & 1]

    def show(self, mask: WorldSet) -> str:
        return "{" + ", ".join(self.names(mask)) + "}"

    def replace(self, **changes) -> "Model":
        """Rebuild with some components swapped; the frame is re-validated."""
        parts = dict(worlds=self.worlds, valuation=self.valuation, av=self.av,
                     pv=self.pv, ob=self.ob)
        parts.update(changes)
        return make_model(**parts)


def to_mask(worlds: Sequence[str], names: SetLike) -> WorldSet:
    if isinstance(names, int):
        if names < 0 or names >> len(worlds):
            raise InvalidArgument(f"world set {names:#x} is outside the world set")
        return names
    if isinstance(names, str):
        names = names.split()
    mask = 0
    for name in names:
        try:
            mask |= 1 << worlds.index(name)
        except ValueError:
            raise InvalidArgument(f"no world named {name!r}") from None
    return mask


def _per_world(worlds, spec, label) -> tuple[WorldSet, ...]:
    if isinstance(spec, Mapping):
        out = []
        keyed = {(worlds[k] if isinstance(k, int) else k): v for k, v in spec.items()}
        for w in worlds:
            if w not in keyed:
                raise InvalidArgument(f"{label} is not defined at world {w!r}")
            out.append(to_mask(worlds, keyed[w]))
        return tuple(out)
    seq = tuple(to_mask(worlds, s) for s in spec)
    if len(seq) != len(worlds):
        raise InvalidArgument(f"{label} must be given for each of the {len(worlds)} worlds")
    return seq


def make_model(worlds: Sequence[str], valuation: Mapping[str, SetLike], av, pv,
               ob: ObMap | Mapping[SetLike, Iterable[SetLike]] | None = None) -> Model:
    """Validate and assemble a :class:`Model`.

    ``av`` and ``pv`` may be mappings from world name (or index) to a set, or
    sequences in world order.  Sets may be bitmasks or iterables of names.
    """
    worlds = tuple(worlds)
    if not worlds:
        raise EmptyWorldSet()
    check_size(len(worlds), EVAL_LIMIT)
    if len(set(worlds)) != len(worlds):
        raise InvalidArgument("world names must be unique")
    av_t = _per_world(worlds, av, "av")
    pv_t = _per_world(worlds, pv, "pv")
    for i, w in enumerate(worlds):
        if not av_t[i] >> i & 1:
            raise FrameViolation(w, f"{w} is not in av({w})")
        if not is_subset(av_t[i], pv_t[i]):
            raise FrameViolation(w, f"av({w}) is not a subset of pv({w})")
    if ob is None:
        ob = ObMap(len(worlds))
    elif not isinstance(ob, ObMap):
        ob = ObMap(len(worlds), {
            to_mask(worlds, ctx): [to_mask(worlds, m) for m in fam] for ctx, fam in ob.items()
        })
    if ob.n_worlds != len(worlds):
        raise InvalidArgument("obligation map is over a different number of worlds")
    val = {name: to_mask(worlds, s) for name, s in valuation.items()}
    return Model(worlds, av_t, pv_t, ob, val)
