"""Exact group arithmetic and Cayley balls under word metrics.

Supported families: Z^d, free groups, the discrete Heisenberg group, and
finite groups given by a multiplication table.  Elements are plain tuples
(or ints for finite groups) interpreted by a family object, so all
arithmetic is exact and hashable.
"""

from __future__ import annotations

import random
import threading
from functools import cached_property
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

from .errors import (
    InvalidParameterError,
    InvalidPointError,
    PreconditionError,
    ResourceLimitError,
)
from .metric import MetricSpace, ball_limit

Element = Any

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class GroupFamily(ABC):
    """Element arithmetic for one group, with a canonical element order."""

    name: str

    @abstractmethod
    def identity(self) -> Element:
        ...

    def multiply(self, g: Element, h: Element) -> Element:
        self.check_element(g)
        self.check_element(h)
        return self._mul(g, h)

    def inverse(self, g: Element) -> Element:
        self.check_element(g)
        return self._inv(g)

    @abstractmethod
    def _mul(self, g: Element, h: Element) -> Element:
        """Product without membership validation (internal hot path)."""

    @abstractmethod
    def _inv(self, g: Element) -> Element:
        ...

    @abstractmethod
    def check_element(self, g: Element) -> None:
        """Raise TypeError if ``g`` does not belong to this family."""

    @abstractmethod
    def element_key(self, g: Element):
        """Tie-break key within a sphere; shortlex order is (length, key)."""

    @abstractmethod
    def element_label(self, g: Element) -> str:
        ...

    @abstractmethod
    def standard_generators(self) -> tuple[Element, ...]:
        ...

    def closed_form_length(self, g: Element) -> Optional[int]:
        """Exact word length w.r.t. the standard generators, if closed-form."""
        return None

    def power(self, g: Element, n: int) -> Element:
        if n == 0:
            return self.identity()
        if n < 0:
            return self.power(self.inverse(g), -n)
        half = self.power(g, n // 2)
        sq = self.multiply(half, half)
        return self.multiply(sq, g) if n % 2 else sq


class Zd(GroupFamily):
    """Free abelian group of rank d; elements are integer d-tuples."""

    def __init__(self, dim: int):
        if dim < 1:
            raise InvalidParameterError("dimension must be >= 1")
        self.dim = dim
        self.name = f"Z^{dim}" if dim > 1 else "Z"

    def identity(self):
        return (0,) * self.dim

    def _mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def _inv(self, g):
        return tuple(-a for a in g)

    def check_element(self, g):
        if not (isinstance(g, tuple) and len(g) == self.dim and all(isinstance(a, int) for a in g)):
            raise TypeError(f"{g!r} is not an element of {self.name}")

    def element_key(self, g):
        return g

    def element_label(self, g):
        return "(" + ",".join(str(a) for a in g) + ")"

    def standard_generators(self):
        gens = []
        for i in range(self.dim):
            e = [0] * self.dim
            e[i] = 1
            gens.append(tuple(e))
            e2 = [0] * self.dim
            e2[i] = -1
            gens.append(tuple(e2))
        return tuple(gens)

    def closed_form_length(self, g):
        return sum(abs(a) for a in g)


class FreeGroup(GroupFamily):
    """Free group of given rank; elements are reduced tuples of nonzero ints.

    Letter +i is the i-th generator, -i its inverse (1-based).
    """

    def __init__(self, rank: int):
        if rank < 1:
            raise InvalidParameterError("rank must be >= 1")
        self.rank = rank
        self.name = f"F_{rank}"

    def identity(self):
        return ()

    def _mul(self, g, h):
        out = list(g)
        for x in h:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def _inv(self, g):
        return tuple(-x for x in reversed(g))

    def check_element(self, g):
        if not isinstance(g, tuple):
            raise TypeError(f"{g!r} is not a free group element")
        for i, x in enumerate(g):
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                raise TypeError(f"letter {x!r} outside rank {self.rank}")
            if i and g[i - 1] == -x:
                raise TypeError(f"word {g!r} is not reduced")

    @staticmethod
    def _letter_key(x: int) -> int:
        # order: a < a^-1 < b < b^-1 < ...
        return 2 * (abs(x) - 1) + (0 if x > 0 else 1)

    def element_key(self, g):
        return tuple(self._letter_key(x) for x in g)

    def element_label(self, g):
        if not g:
            return "e"
        return "".join(_LETTERS[abs(x) - 1] if x > 0 else _LETTERS[abs(x) - 1].upper() for x in g)

    def standard_generators(self):
        gens = []
        for i in range(1, self.rank + 1):
            gens.append((i,))
            gens.append((-i,))
        return tuple(gens)

    def closed_form_length(self, g):
        return len(g)

    def word(self, text: str) -> Element:
        """Parse a label like "abA" back into an element."""
        out: list[int] = []
        for ch in text:
            if ch == "e":
                continue
            idx = _LETTERS.index(ch.lower()) + 1
            x = idx if ch.islower() else -idx
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)


class Heisenberg(GroupFamily):
    """Discrete Heisenberg group as integer triples (a, b, c).

    (a, b, c) stands for the upper-triangular matrix [[1, a, c], [0, 1, b],
    [0, 0, 1]]; multiplication follows from the matrix product.
    """

    name = "H3"

    def identity(self):
        return (0, 0, 0)

    def _mul(self, g, h):
        a, b, c = g
        x, y, z = h
        return (a + x, b + y, c + z + a * y)

    def _inv(self, g):
        a, b, c = g
        return (-a, -b, a * b - c)

    def check_element(self, g):
        if not (isinstance(g, tuple) and len(g) == 3 and all(isinstance(v, int) for v in g)):
            raise TypeError(f"{g!r} is not a Heisenberg element")

    def element_key(self, g):
        return g

    def element_label(self, g):
        return "(" + ",".join(str(v) for v in g) + ")"

    def standard_generators(self):
        # x = (1,0,0), y = (0,1,0) and inverses; the commutator [x, y] is
        # the central element z = (0,0,1).
        return ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))

    def central(self, n: int = 1) -> Element:
        return (0, 0, n)


class FiniteGroup(GroupFamily):
    """Finite group from a multiplication table; elements are indices."""

    def __init__(self, table: Sequence[Sequence[int]], generators: Sequence[int] | None = None):
        n = len(table)
        self.table = tuple(tuple(row) for row in table)
        self.n = n
        self.name = f"finite({n})"
        for i, row in enumerate(self.table):
            if len(row) != n or sorted(row) != list(range(n)):
                raise InvalidParameterError(f"row {i} is not a permutation of 0..{n - 1}")
        ident = None
        for e in range(n):
            if all(self.table[e][j] == j and self.table[j][e] == j for j in range(n)):
                ident = e
                break
        if ident is None:
            raise InvalidParameterError("table has no identity element")
        self._identity = ident
        self._inverses = [0] * n
        for g in range(n):
            inv = next((h for h in range(n) if self.table[g][h] == ident), None)
            if inv is None:
                raise InvalidParameterError(f"element {g} has no inverse")
            self._inverses[g] = inv
        self._default_gens = tuple(generators) if generators else None
        self._length_cache: dict[tuple[int, ...], dict[int, int]] = {}
        self._lock = threading.Lock()

    def identity(self):
        return self._identity

    def _mul(self, g, h):
        return self.table[g][h]

    def _inv(self, g):
        return self._inverses[g]

    def check_element(self, g):
        if not isinstance(g, int) or not 0 <= g < self.n:
            raise TypeError(f"{g!r} is not an index into a {self.n}-element group")

    def element_key(self, g):
        return g

    def element_label(self, g):
        return str(g)

    def standard_generators(self):
        if self._default_gens is None:
            raise InvalidParameterError("finite group was built without generators")
        closed = set(self._default_gens) | {self._inverses[g] for g in self._default_gens}
        return tuple(sorted(closed))

    def lengths_for(self, gens: "GeneratingSet") -> dict[int, int]:
        """Word lengths of all elements reachable from the identity."""
        key = tuple(gens.elements)
        with self._lock:
            cached = self._length_cache.get(key)
        if cached is not None:
            return cached
        dist = {self._identity: 0}
        frontier = [self._identity]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for g in frontier:
                for s in gens.elements:
                    h = self.table[g][s]
                    if h not in dist:
                        dist[h] = d
                        nxt.append(h)
            frontier = nxt
        with self._lock:
            self._length_cache[key] = dist
        return dist


def cyclic_group(n: int, step: int = 1) -> FiniteGroup:
    """Cyclic group Z/n with generator ``step``."""
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, generators=[step % n])


@dataclass(frozen=True)
class GeneratingSet:
    """Inverse-closed, identity-free generator list in canonical order."""

    family: GroupFamily
    elements: tuple[Element, ...]

    @classmethod
    def create(cls, family: GroupFamily, elements: Iterable[Element]) -> "GeneratingSet":
        ident = family.identity()
        seen = []
        for g in elements:
            family.check_element(g)
            if g == ident:
                raise InvalidParameterError("generating set must not contain the identity")
            for h in (g, family.inverse(g)):
                if h not in seen:
                    seen.append(h)
        seen.sort(key=family.element_key)
        return cls(family, tuple(seen))

    @classmethod
    def standard(cls, family: GroupFamily) -> "GeneratingSet":
        return cls.create(family, family.standard_generators())

    @cached_property
    def is_standard(self) -> bool:
        try:
            std = GeneratingSet.standard(self.family)
        except InvalidParameterError:
            return False
        return self.elements == std.elements


@dataclass
class CayleyBall:
    """The radius-R ball of a Cayley graph, in canonical (shortlex) order.

    ``sphere_offsets[r]`` is the index where sphere S(r) starts.  The
    generator-labeled edge list (i, j, gen_index) is computed on first use.
    """

    family: GroupFamily
    gens: GeneratingSet
    radius: int
    elements: tuple[Element, ...]
    lengths: tuple[int, ...]
    sphere_offsets: tuple[int, ...]
    index: dict = field(repr=False, default=None)
    _edges: Optional[tuple[tuple[int, int, int], ...]] = field(repr=False, default=None)

    @property
    def edges(self) -> tuple[tuple[int, int, int], ...]:
        if self._edges is None:
            out = []
            for i, g in enumerate(self.elements):
                for k, s in enumerate(self.gens.elements):
                    j = self.index.get(self.family._mul(g, s))
                    if j is not None:
                        out.append((i, j, k))
            self._edges = tuple(out)
        return self._edges

    def sphere(self, r: int) -> tuple[Element, ...]:
        if not 0 <= r <= self.radius:
            raise PreconditionError(f"sphere radius {r} outside ball of radius {self.radius}")
        return self.elements[self.sphere_offsets[r] : self.sphere_offsets[r + 1]]

    def ball(self, r: int) -> tuple[Element, ...]:
        if not 0 <= r <= self.radius:
            raise PreconditionError(f"ball radius {r} outside ball of radius {self.radius}")
        return self.elements[: self.sphere_offsets[r + 1]]

    def length_of(self, g: Element) -> Optional[int]:
        i = self.index.get(g)
        return None if i is None else self.lengths[i]

    def sphere_sizes(self) -> list[int]:
        return [
            self.sphere_offsets[r + 1] - self.sphere_offsets[r] for r in range(self.radius + 1)
        ]


def cayley_ball(
    family: GroupFamily,
    gens: GeneratingSet,
    radius: int,
    *,
    limit: int | None = None,
) -> CayleyBall:
    """Breadth-first ball around the identity with exact word lengths."""
    if radius < 0:
        raise PreconditionError("radius must be >= 0")
    cap = ball_limit(limit)
    ident = family.identity()
    layers: list[list[Element]]
    if isinstance(family, FreeGroup) and gens.is_standard:
        # The Cayley graph is a tree: spheres extend words by any
        # non-cancelling letter, with no visited set needed.
        size = 1
        layers = [[ident]]
        for r in range(1, radius + 1):
            nxt = []
            for w in layers[r - 1]:
                last = w[-1] if w else 0
                for i in range(1, family.rank + 1):
                    for x in (i, -i):
                        if x != -last:
                            nxt.append(w + (x,))
            size += len(nxt)
            if size > cap:
                raise ResourceLimitError(f"ball size exceeded limit {cap}", radius_reached=r - 1)
            nxt.sort(key=family.element_key)
            layers.append(nxt)
    else:
        dist: dict[Element, int] = {ident: 0}
        layers = [[ident]]
        for r in range(1, radius + 1):
            nxt = []
            for g in layers[r - 1]:
                for s in gens.elements:
                    h = family._mul(g, s)
                    if h not in dist:
                        dist[h] = r
                        nxt.append(h)
                        if len(dist) > cap:
                            raise ResourceLimitError(
                                f"ball size exceeded limit {cap}", radius_reached=r - 1
                            )
            nxt.sort(key=family.element_key)
            layers.append(nxt)
    elements: list[Element] = []
    offsets = [0]
    lengths: list[int] = []
    for r, layer in enumerate(layers):
        elements.extend(layer)
        lengths.extend([r] * len(layer))
        offsets.append(len(elements))
    index = {g: i for i, g in enumerate(elements)}
    return CayleyBall(
        family,
        gens,
        radius,
        tuple(elements),
        tuple(lengths),
        tuple(offsets),
        index,
    )


class WordLengthOracle:
    """Bidirectional BFS word lengths with a persistent identity-side ball.

    The forward ball from the identity is grown once and shared across
    queries, so repeated lookups (orbit displacement tables, sphere
    restriction values) amortize to a single backward search each.
    Thread-safe: queries lock around forward-side growth.
    """

    def __init__(self, family: GroupFamily, gens: GeneratingSet, *, limit: int | None = None):
        self.family = family
        self.gens = gens
        self.cap = ball_limit(limit)
        self._fwd: dict[Element, int] = {family.identity(): 0}
        self._frontier: list[Element] = [family.identity()]
        self._fwd_radius = 0
        self._lock = threading.Lock()

    def _grow_forward(self) -> bool:
        nxt = []
        for g in self._frontier:
            for s in self.gens.elements:
                h = self.family._mul(g, s)
                if h not in self._fwd:
                    self._fwd[h] = self._fwd_radius + 1
                    nxt.append(h)
                    if len(self._fwd) > self.cap:
                        raise ResourceLimitError(
                            f"word-length search exceeded limit {self.cap}",
                            radius_reached=self._fwd_radius,
                        )
        self._frontier = nxt
        self._fwd_radius += 1
        return bool(nxt)

    def length(self, g: Element, bound: int) -> Optional[int]:
        """Exact word length of ``g`` if <= bound, else None."""
        if bound < 0:
            raise PreconditionError("bound must be >= 0")
        self.family.check_element(g)
        with self._lock:
            cached = self._fwd.get(g)
            if cached is not None and cached <= self._fwd_radius:
                return cached if cached <= bound else None
            fam = self.family
            bwd: dict[Element, int] = {g: 0}
            bfrontier = [g]
            bradius = 0
            best: Optional[int] = None
            while True:
                if best is not None and best <= self._fwd_radius + bradius + 1:
                    return best if best <= bound else None
                # Any undiscovered path has length >= fwd_radius + bradius + 1.
                if best is None and self._fwd_radius + bradius + 1 > bound:
                    return None
                # Bias growth toward the persistent forward side.
                grow_fwd = self._frontier and (
                    not bfrontier or len(self._frontier) <= 4 * len(bfrontier)
                )
                if grow_fwd:
                    if not self._grow_forward():
                        if not bfrontier:
                            return best if (best is not None and best <= bound) else None
                    for h in self._frontier:
                        db = bwd.get(h)
                        if db is not None:
                            cand = self._fwd[h] + db
                            if best is None or cand < best:
                                best = cand
                else:
                    if not bfrontier:
                        return best if (best is not None and best <= bound) else None
                    nxt = []
                    for p in bfrontier:
                        for s in self.gens.elements:
                            q = fam._mul(p, s)
                            if q not in bwd:
                                bwd[q] = bradius + 1
                                nxt.append(q)
                                df = self._fwd.get(q)
                                if df is not None:
                                    cand = df + bradius + 1
                                    if best is None or cand < best:
                                        best = cand
                                if len(bwd) > self.cap:
                                    raise ResourceLimitError(
                                        f"word-length search exceeded limit {self.cap}",
                                        radius_reached=bradius,
                                    )
                    bfrontier = nxt
                    bradius += 1


def word_length(
    family: GroupFamily,
    gens: GeneratingSet,
    g: Element,
    bound: int,
    *,
    oracle: WordLengthOracle | None = None,
) -> Optional[int]:
    """Word length of ``g`` w.r.t. ``gens`` if <= bound, else None.

    Uses the closed form for Z^d and free groups under their standard
    generators, the precomputed table for finite groups, and bidirectional
    BFS otherwise.
    """
    family.check_element(g)
    if gens.is_standard:
        n = family.closed_form_length(g)
        if n is not None:
            return n if n <= bound else None
    if isinstance(family, FiniteGroup):
        n = family.lengths_for(gens).get(g)
        return n if (n is not None and n <= bound) else None
    if oracle is None:
        oracle = WordLengthOracle(family, gens)
    return oracle.length(g, bound)


class CayleyGraphSpace(MetricSpace):
    """A group with a word metric, as a discrete exact metric space."""

    exact = True
    discrete = True

    def __init__(
        self,
        family: GroupFamily,
        gens: GeneratingSet | None = None,
        *,
        distance_bound: int = 4096,
        limit: int | None = None,
    ):
        self.family = family
        self.gens = gens if gens is not None else GeneratingSet.standard(family)
        if self.gens.family is not family:
            raise InvalidParameterError("generating set belongs to a different family")
        self.distance_bound = distance_bound
        self._oracle = WordLengthOracle(family, self.gens, limit=limit)

    def distance(self, p: Element, q: Element) -> int:
        g = self.family.multiply(self.family.inverse(p), q)
        n = word_length(self.family, self.gens, g, self.distance_bound, oracle=self._oracle)
        if n is None:
            raise ResourceLimitError(
                f"word length exceeds distance bound {self.distance_bound}"
            )
        return n

    @property
    def base_point(self) -> Element:
        return self.family.identity()

    def check_point(self, p) -> None:
        try:
            self.family.check_element(p)
        except TypeError as exc:
            raise InvalidPointError(str(exc)) from exc

    def point_label(self, p) -> str:
        return self.family.element_label(p)

    def point_key(self, p):
        n = self.family.closed_form_length(p) if self.gens.is_standard else None
        if n is None:
            n = word_length(self.family, self.gens, p, self.distance_bound, oracle=self._oracle)
        return (n, self.family.element_key(p))

    def neighbors(self, p) -> list:
        out = [self.family.multiply(p, s) for s in self.gens.elements]
        out.sort(key=self.family.element_key)
        return out

    def sample_points(self, rng: random.Random, count: int) -> list:
        out = []
        gens = self.gens.elements
        for _ in range(count):
            g = self.family.identity()
            for _ in range(rng.randrange(0, 9)):
                g = self.family.multiply(g, gens[rng.randrange(len(gens))])
            out.append(g)
        return out

    def word_length_of(self, g: Element, bound: int | None = None) -> Optional[int]:
        return word_length(
            self.family,
            self.gens,
            g,
            self.distance_bound if bound is None else bound,
            oracle=self._oracle,
        )
