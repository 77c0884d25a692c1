"""Paley graphs on bitsets and exact clique search.

Row ``i`` of the adjacency is a Python int whose bit ``j`` is set iff
elem(i) - elem(j) is a nonzero square.  The maximum-clique search is a
branch and bound with a greedy-colouring bound (Tomita style) over bitset
candidate sets.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .errors import BadCongruence, LabelOutOfRange
from .ffield import Field

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class Clique:
    q: int
    vertices: tuple[int, ...]
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))

    @property
    def size(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {"q": self.q, "vertices": list(self.vertices), "exact": self.exact}

    @classmethod
    def from_dict(cls, d: dict) -> "Clique":
        return cls(d["q"], tuple(d["vertices"]), bool(d.get("exact", False)))


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class PaleyGraph:
    def __init__(self, field: Field):
        if field.q % 4 != 1:
            raise BadCongruence(f"q = {field.q} is not 1 mod 4")
        self.field = field
        self.q = field.q
        self.adj = self._build_rows(field)

    @staticmethod
    def _build_rows(F: Field) -> list[int]:
        q, p, r = F.q, F.p, F.r
        labels = np.arange(q, dtype=np.int64)
        digits = np.stack([(labels // p**i) % p for i in range(r)], axis=1)
        weights = np.array([p**i for i in range(r)], dtype=np.int64)
        qr = np.fromiter(sorted(F.qr_labels), dtype=np.int64)
        qr_digits = digits[qr]
        rows = []
        mask = np.zeros(q, dtype=bool)
        for i in range(q):
            nbrs = ((qr_digits + digits[i]) % p) @ weights
            mask[:] = False
            mask[nbrs] = True
            rows.append(int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little"))
        return rows

    def __repr__(self) -> str:
        return f"PaleyGraph(q={self.q})"

    def neighbours(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def dimacs(self) -> str:
        edges = [(u, v) for u in range(self.q) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]
        lines = [f"p edge {self.q} {len(edges)}"]
        lines += [f"e {u + 1} {v + 1}" for u, v in edges]
        return "\n".join(lines) + "\n"


def build_paley(field: Field) -> PaleyGraph:
    return PaleyGraph(field)


def verify_clique(graph: PaleyGraph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    for v in vs:
        if not 0 <= v < graph.q:
            raise LabelOutOfRange(f"label {v} not in [0, {graph.q})")
    if len(set(vs)) != len(vs):
        return False
    return all(graph.adjacent(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


def verify_clique_euler(field: Field, vertices: Sequence[int]) -> bool:
    """Clique test straight from field arithmetic: every difference is a QR."""
    return all(field.is_qr(field.sub(u, v))
               for i, u in enumerate(vertices) for v in vertices[i + 1:])


# --- branch and bound --------------------------------------------------------

class _OutOfBudget(Exception):
    pass


@dataclass
class _Search:
    adj: Sequence[int]
    budget: int
    deadline: float | None
    best: list[int] = dc_field(default_factory=list)
    floor: int = 0  # size that must be beaten
    nodes: int = 0

    def record(self, clique: list[int]) -> None:
        self.best = list(clique)
        self.floor = len(clique)

    def colour_order(self, P: int) -> list[tuple[int, int]]:
        """Greedy colouring of P in label order; returns (vertex, colour) by colour."""
        adj = self.adj
        order = []
        colour = 0
        uncoloured = P
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~adj[v] & ~low
                uncoloured &= ~low
                order.append((v, colour))
        return order

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfBudget
        if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget

    def expand(self, current: list[int], P: int) -> None:
        self.tick()
        order = self.colour_order(P)
        adj = self.adj
        for v, colour in reversed(order):
            if len(current) + colour <= self.floor:
                return
            current.append(v)
            newP = P & adj[v]
            if newP:
                self.expand(current, newP)
            elif len(current) > self.floor:
                self.record(current)
            current.pop()
            P &= ~(1 << v)

    def first_of_size(self, current: list[int], P: int, k: int) -> list[int] | None:
        """Lexicographically first clique of ``k`` more vertices inside P."""
        self.tick()
        if k == 0:
            return list(current)
        if P.bit_count() < k:
            return None
        if max((c for _, c in self.colour_order(P)), default=0) < k:
            return None
        for v in _bits(P):
            P &= ~(1 << v)
            current.append(v)
            found = self.first_of_size(current, P & self.adj[v], k - 1)
            current.pop()
            if found is not None:
                return found
            if P.bit_count() < k:
                return None
        return None


def _worker_branch(args):
    adj, base, P, lower, budget = args
    s = _Search(adj, budget, None, floor=lower)
    if not P and len(base) > lower:
        return list(base), True, 0
    try:
        s.expand(list(base), P)
    except _OutOfBudget:
        return s.best, False, s.nodes
    return s.best, True, s.nodes


def max_clique(graph: PaleyGraph, budget: int = DEFAULT_BUDGET, time_limit: float | None = None,
               symmetry: bool = True, canonical: bool = True, workers: int = 1) -> Clique:
    """Exact maximum clique, or the best found if the budget runs out.

    With ``symmetry`` the search fixes the edge {0, 1}: the maps x -> (x - a)/(b - a)
    are automorphisms sending any edge {a, b} there.  ``canonical`` then
    returns the lexicographically smallest maximum clique containing {0, 1}.
    ``workers > 1`` splits the top-level branches over processes; the size
    found is the same, the witness may differ.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    q = graph.q
    adj = graph.adj
    deadline = None if time_limit is None else time.monotonic() + time_limit
    if symmetry:
        base = [0, 1]
        P = adj[0] & adj[1]
    else:
        base = []
        P = (1 << q) - 1
    seed = greedy_clique(graph, 0)
    search = _Search(adj, budget, deadline)
    search.record(list(seed.vertices))
    exact = True
    if workers > 1:
        exact = _parallel(search, base, P, workers)
    else:
        try:
            search.expand(list(base), P)
        except _OutOfBudget:
            exact = False
    best = search.best
    if exact and canonical and symmetry:
        search.nodes = 0
        search.budget = budget
        try:
            found = search.first_of_size(list(base), P, len(best) - len(base))
            if found is not None:
                best = found
        except _OutOfBudget:
            pass
    return Clique(q, tuple(best), exact)


def _parallel(search: _Search, base: list[int], P: int, workers: int) -> bool:
    order = search.colour_order(P)
    tasks = []
    remaining = P
    for v, _ in reversed(order):
        tasks.append((search.adj, base + [v], remaining & search.adj[v], search.floor,
                      search.budget))
        remaining &= ~(1 << v)
    exact = True
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for clique, done, _ in pool.map(_worker_branch, tasks):
            exact &= done
            if len(clique) > search.floor:
                search.record(clique)
    return exact


def greedy_clique(graph: PaleyGraph, seed: int = 0, known_omega: int | None = None) -> Clique:
    """Maximal clique grown from vertex 0, preferring candidates that keep
    the most common neighbours; ties broken by a seeded RNG."""
    rng = random.Random(seed)
    adj = graph.adj
    clique = [0]
    P = adj[0]
    while P:
        cands = list(_bits(P))
        rng.shuffle(cands)
        v = max(cands, key=lambda u: (P & adj[u]).bit_count())
        clique.append(v)
        P &= adj[v]
    exact = known_omega is not None and len(clique) == known_omega
    return Clique(graph.q, tuple(clique), exact)


def translate(field: Field, vertices: Iterable[int], shift: int) -> list[int]:
    """Labels of {v - shift}."""
    return [field.sub(v, shift) for v in vertices]


def dilate(field: Field, vertices: Iterable[int], factor: int) -> list[int]:
    return [field.mul(factor, v) for v in vertices]
