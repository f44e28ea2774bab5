"""Cayley graphs, walk words, Hamiltonian verification and the search oracle."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .groups import IDENTITY, Elem, GroupSpec, closure, inverse, multiply, power

Step = tuple[int, int]


# ---------------------------------------------------------------- generating sets


@dataclass(frozen=True)
class GenSet:
    labels: tuple[Elem, ...]

    def __post_init__(self):
        labels = tuple((int(i), int(j)) for i, j in self.labels)
        object.__setattr__(self, "labels", labels)
        if any(s == IDENTITY for s in labels):
            raise ValueError("a generator equals the identity")
        if len(set(labels)) != len(labels):
            raise ValueError("generators are not pairwise distinct")

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, k: int) -> Elem:
        return self.labels[k]

    def __iter__(self):
        return iter(self.labels)

    def connection_set(self, spec: GroupSpec) -> list[Elem]:
        out = []
        for s in self.labels:
            for t in (s, inverse(spec, s)):
                if t not in out:
                    out.append(t)
        return out

    def to_json(self) -> list:
        return [list(s) for s in self.labels]

    @classmethod
    def from_json(cls, data) -> GenSet:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(tuple(s) for s in data))


def labels_of(genset) -> tuple[Elem, ...]:
    return genset.labels if isinstance(genset, GenSet) else tuple(genset)


# ---------------------------------------------------------------- words


@dataclass(frozen=True)
class WalkWord:
    """Run-length sequence of (label index, nonzero exponent).

    Adjacent runs of the same label and the same sign are merged; runs of
    opposite sign are kept apart since they walk back over visited vertices.
    """

    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        merged: list[list[int]] = []
        for k, e in self.steps:
            k, e = int(k), int(e)
            if e == 0:
                continue
            if merged and merged[-1][0] == k and (merged[-1][1] > 0) == (e > 0):
                merged[-1][1] += e
            else:
                merged.append([k, e])
        object.__setattr__(self, "steps", tuple((k, e) for k, e in merged))

    @classmethod
    def of(cls, *steps: Step) -> WalkWord:
        return cls(tuple(steps))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.steps)

    def __add__(self, other: WalkWord) -> WalkWord:
        return WalkWord(self.steps + other.steps)

    def __mul__(self, k: int) -> WalkWord:
        return WalkWord(self.steps * k)

    def expand(self) -> Iterator[Step]:
        for k, e in self.steps:
            sign = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield (k, sign)

    def inverse(self) -> WalkWord:
        return WalkWord(tuple((k, -e) for k, e in reversed(self.steps)))

    def relabel(self, mapping: dict[int, Step]) -> WalkWord:
        """Replace label k by mapping[k] = (new label, sign)."""
        return WalkWord(tuple((mapping[k][0], mapping[k][1] * e) for k, e in self.steps))

    def max_label(self) -> int:
        return max((k for k, _ in self.steps), default=-1)

    def to_json(self) -> list:
        return [{"gen": k, "exp": e} for k, e in self.steps]

    @classmethod
    def from_json(cls, data) -> WalkWord:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple((int(d["gen"]), int(d["exp"])) for d in data))

    @classmethod
    def from_expanded(cls, steps: Iterable[Step]) -> WalkWord:
        return cls(tuple(steps))

    def __str__(self) -> str:
        parts = []
        for k, e in self.steps:
            parts.append(f"s{k}" if e == 1 else f"s{k}^{e}")
        return "(" + ", ".join(parts) + ")"


def word_product(spec: GroupSpec, genset, word: WalkWord) -> Elem:
    labels = labels_of(genset)
    out = IDENTITY
    for k, e in word.steps:
        out = multiply(spec, out, power(spec, labels[k], e))
    return out


# ---------------------------------------------------------------- graphs


@dataclass
class CayleyGraph:
    spec: GroupSpec
    labels: tuple[Elem, ...]
    vertices: list[Elem]
    index: dict[Elem, int]
    adjacency: list[list[tuple[int, int, int]]]
    """adjacency[v] lists (w, label, sign) with w = v * label^sign."""
    connected: bool
    components: int = 1
    neighbor_sets: list[list[int]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def degree(self, v: int) -> int:
        return len(self.neighbor_sets[v])


def _build(spec: GroupSpec, labels: tuple[Elem, ...], vertices: list[Elem]) -> CayleyGraph:
    index = {g: v for v, g in enumerate(vertices)}
    moves = []
    for k, s in enumerate(labels):
        moves.append((k, 1, s))
        moves.append((k, -1, inverse(spec, s)))
    adjacency = []
    neighbor_sets = []
    for g in vertices:
        row = []
        seen = []
        for k, sign, s in moves:
            h = multiply(spec, g, s)
            if h == g or h not in index:
                continue
            w = index[h]
            row.append((w, k, sign))
            if w not in seen:
                seen.append(w)
        adjacency.append(row)
        neighbor_sets.append(seen)
    # connected components
    comp = [-1] * len(vertices)
    count = 0
    for v0 in range(len(vertices)):
        if comp[v0] >= 0:
            continue
        comp[v0] = count
        stack = [v0]
        while stack:
            v = stack.pop()
            for w in neighbor_sets[v]:
                if comp[w] < 0:
                    comp[w] = count
                    stack.append(w)
        count += 1
    return CayleyGraph(spec, labels, vertices, index, adjacency, count == 1, count, neighbor_sets)


def build_graph(spec: GroupSpec, genset) -> CayleyGraph:
    """Cayley graph on all of G; vertex v stands for element (v // m, v % m)."""
    return _build(spec, labels_of(genset), spec.elements())


def build_subgroup_graph(spec: GroupSpec, genset) -> CayleyGraph:
    """Cayley graph of the subgroup generated by the labels, identity at vertex 0."""
    labels = labels_of(genset)
    elems = sorted(closure(spec, labels), key=spec.index)
    return _build(spec, labels, elems)


# ---------------------------------------------------------------- tracing and verification


def trace_word(spec: GroupSpec, genset, word: WalkWord, start: Elem = IDENTITY) -> tuple[list[Elem], Elem]:
    labels = labels_of(genset)
    invs = [inverse(spec, s) for s in labels]
    g = start
    seq = [g]
    for k, sign in word.expand():
        g = multiply(spec, g, labels[k] if sign > 0 else invs[k])
        seq.append(g)
    return seq, g


@dataclass
class Verification:
    ok: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_hamiltonian_cycle(spec: GroupSpec, genset, word: WalkWord, order: int | None = None) -> Verification:
    """Check that the walk from e visits each of `order` elements once and closes at e.

    `order` defaults to |G|; pass the subgroup order when checking a cycle of
    the Cayley graph of a subgroup.
    """
    labels = labels_of(genset)
    total = spec.order if order is None else order
    length = len(word)
    if word.max_label() >= len(labels):
        return Verification(False, f"word uses label {word.max_label()} but only {len(labels)} labels exist")
    if length == 0:
        if total == 1:
            return Verification(True, "trivial group")
        return Verification(False, f"empty word but {total} vertices")
    n, m = spec.n, spec.m
    tneg = spec.tau_neg_powers
    moves = []
    for s in labels:
        moves.append((s, inverse(spec, s)))
    seen = bytearray(spec.order)
    seen[0] = 1
    i, j = 0, 0
    count = 0
    for k, e in word.steps:
        a, c = moves[k][0] if e > 0 else moves[k][1]
        ta = tneg[a]
        for _ in range(abs(e)):
            i = (i + a) % n
            j = (j * ta + c) % m
            count += 1
            v = i * m + j
            if count == length:
                if v != 0:
                    return Verification(False, f"walk of length {length} ends at {(i, j)} instead of e")
                if total == 2 and length == 2:
                    return Verification(True, "two-vertex cycle (s, s)")
                if length != total:
                    return Verification(False, f"endpoint e after {length} steps but {total - length} vertices unvisited")
                return Verification(True, "ok")
            if seen[v]:
                if v == 0:
                    return Verification(False, f"returns to e after {count} steps but {total - count} vertices unvisited")
                return Verification(False, f"vertex {(i, j)} repeated at step {count}")
            seen[v] = 1
    return Verification(False, "unreachable")


def verify_hamiltonian_path(spec: GroupSpec, genset, word: WalkWord, start: Elem = IDENTITY, order: int | None = None) -> Verification:
    total = spec.order if order is None else order
    seq, _ = trace_word(spec, genset, word, start)
    if len(seq) != total:
        return Verification(False, f"path visits {len(seq)} vertices, expected {total}")
    if len(set(seq)) != len(seq):
        return Verification(False, "path repeats a vertex")
    return Verification(True, "ok")


def is_closed_hamiltonian_in(spec: GroupSpec, labels: Sequence[Elem], word: WalkWord) -> bool:
    """Hamiltonian cycle check allowing duplicate or trivial labels (quotient graphs)."""
    return verify_hamiltonian_cycle(spec, labels, word).ok


# ---------------------------------------------------------------- search oracle


@dataclass
class SearchResult:
    status: str  # "found", "none" or "exhausted"
    word: WalkWord | None = None
    expansions: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def _edge_step(graph: CayleyGraph, v: int, w: int) -> Step:
    for x, k, sign in graph.adjacency[v]:
        if x == w:
            return (k, sign)
    raise KeyError((v, w))


def path_to_word(graph: CayleyGraph, path: Sequence[int]) -> WalkWord:
    return WalkWord.from_expanded(_edge_step(graph, path[t], path[t + 1]) for t in range(len(path) - 1))


def _separation_prunes(graph: CayleyGraph, visited: bytearray, head: int, target: int) -> bool:
    """True when the unvisited part plus head and target cannot carry a head-to-target Hamiltonian path.

    Iterative Tarjan low-link DFS rooted at head over the remaining vertices.
    """
    nbrs = graph.neighbor_sets
    disc = {head: 0}
    low = {head: 0}
    has_target: dict[int, bool] = {head: head == target}
    counter = 1
    root_children = 0
    stack = [(head, -1, iter(nbrs[head]))]
    separated: dict[int, list[bool]] = {}

    def alive(w: int) -> bool:
        return not visited[w] or w == target

    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if not alive(w) and w != head:
                continue
            if w not in disc:
                disc[w] = low[w] = counter
                has_target[w] = w == target
                counter += 1
                stack.append((w, v, iter(nbrs[w])))
                if v == head:
                    root_children += 1
                advanced = True
                break
            if w != parent:
                low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if parent >= 0:
            low[parent] = min(low[parent], low[v])
            has_target[parent] = has_target[parent] or has_target[v]
            if parent != head and low[v] >= disc[parent]:
                separated.setdefault(parent, []).append(has_target[v])
    remaining = sum(1 for v in range(graph.size) if not visited[v]) + (1 if visited[target] and target != head else 0)
    if len(disc) - 1 < remaining:
        return True
    if root_children >= 2:
        return True
    for x, subs in separated.items():
        if x == target:
            return True
        if len(subs) >= 2 or not subs[0]:
            return True
    return False


def iter_hamiltonian(graph: CayleyGraph, mode: str = "cycle", start: int = 0, end: int | None = None,
                     budget: int = 10**8, seed: int | None = None, stats: dict | None = None) -> Iterator[list[int]]:
    """Yield Hamiltonian cycles (as closed vertex lists) or start-to-end paths.

    Depth-first search with Warnsdorff ordering, forced moves into vertices
    that would otherwise be stranded, and a cut-vertex test on the remaining
    graph. On budget exhaustion sets stats["exhausted"] and stops.
    """
    size = graph.size
    nbrs = graph.neighbor_sets
    rng = random.Random(seed) if seed is not None else None
    if stats is None:
        stats = {}
    stats.setdefault("expansions", 0)
    stats["exhausted"] = False
    cycle = mode == "cycle"
    if cycle:
        target = start
        if size == 1:
            yield [start]
            return
        if size == 2:
            if nbrs[start]:
                yield [start, nbrs[start][0], start]
            return
    else:
        if end is None:
            raise ValueError("path mode needs an end vertex")
        target = end
        if start == end:
            if size == 1:
                yield [start]
            return
    visited = bytearray(size)
    visited[start] = 1
    # deg[x]: neighbours of x that are unvisited, the target, or the head
    deg = [len(nbrs[v]) for v in range(size)]
    path = [start]
    full = size if cycle else size - 1
    check_every = 1 if size <= 300 else 16

    def candidates(h: int) -> list[int] | None:
        if len(path) == full:
            return [target] if target in nbrs[h] else None
        opts = []
        forced = []
        for w in nbrs[h]:
            if w == target:
                if not cycle and deg[w] <= 1:
                    return None
                continue
            if visited[w]:
                continue
            if h != target or not cycle:
                if deg[w] < 2:
                    return None
                if deg[w] == 2:
                    forced.append(w)
            opts.append(w)
        if len(forced) >= 2:
            return None
        if forced:
            return forced
        if rng is not None:
            rng.shuffle(opts)
        opts.sort(key=lambda w: deg[w])
        return opts

    def leave(h: int, sign: int) -> None:
        if h == target:
            return
        for x in nbrs[h]:
            deg[x] += sign

    first = candidates(start)
    if not first:
        return
    leave(start, -1)
    stack: list[tuple[int, list[int]]] = [(start, first)]
    while stack:
        h, opts = stack[-1]
        if not opts:
            stack.pop()
            leave(h, +1)
            if h != start:
                path.pop()
                visited[h] = 0
            continue
        w = opts.pop(0)
        stats["expansions"] += 1
        if stats["expansions"] > budget:
            stats["exhausted"] = True
            return
        if w == target:
            yield path + [target]
            continue
        visited[w] = 1
        path.append(w)
        nxt = candidates(w)
        if nxt and len(path) < full and stats["expansions"] % check_every == 0:
            if _separation_prunes(graph, visited, w, target):
                nxt = None
        if not nxt:
            path.pop()
            visited[w] = 0
            continue
        leave(w, -1)
        stack.append((w, nxt))


def _luby(i: int) -> int:
    """i-th term (from 1) of the Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


def search_hamiltonian(graph: CayleyGraph, mode: str = "cycle", start: int = 0, end: int | None = None,
                       budget: int = 10**8, seed: int | None = None, restart_unit: int = 250) -> SearchResult:
    """One depth-first run when `seed` is None, else seeded restarts on a Luby schedule.

    Restarts escape the long dead subtrees a single run can sink into. A run
    that ends without hitting its budget has enumerated everything, so its
    "none" is final.
    """
    if not graph.connected:
        return SearchResult("none")
    spent = 0
    run = 0
    while True:
        chunk = budget - spent if seed is None else min(restart_unit * _luby(run + 1), budget - spent)
        stats: dict = {}
        for path in iter_hamiltonian(graph, mode, start, end, chunk, None if seed is None else seed + run, stats):
            return SearchResult("found", path_to_word(graph, path), spent + stats["expansions"])
        spent += stats.get("expansions", 0)
        if not stats.get("exhausted"):
            return SearchResult("none", None, spent)
        if spent >= budget:
            return SearchResult("exhausted", None, spent)
        run += 1


def find_hamiltonian_cycle(spec: GroupSpec, genset, budget: int = 10**8, seed: int | None = None,
                           subgroup: bool = False) -> SearchResult:
    graph = build_subgroup_graph(spec, genset) if subgroup else build_graph(spec, genset)
    start = graph.index[IDENTITY]
    return search_hamiltonian(graph, "cycle", start, None, budget, seed)


# ---------------------------------------------------------------- cartesian products


class NonCommutingFactors(ValueError):
    pass


def cartesian_product_hc(spec: GroupSpec, genset, cycle_a: WalkWord, path_b: WalkWord,
                         b_is_cycle: bool = False) -> WalkWord:
    """Snake a cycle of factor A through a path of factor B inside the ambient group.

    Row 0 runs the whole A-cycle; rows 1.. run back and forth over columns
    1..k-1; the walk then climbs column 0 back to e. When `b_is_cycle` the
    last step of the B word is dropped to get a path.
    """
    labels = labels_of(genset)
    a_labels = {k for k, _ in cycle_a.steps}
    b_labels = {k for k, _ in path_b.steps}
    for x in a_labels:
        for y in b_labels:
            if multiply(spec, labels[x], labels[y]) != multiply(spec, labels[y], labels[x]):
                raise NonCommutingFactors(f"labels {x} and {y} do not commute")
    return snake_word(cycle_a, path_b, b_is_cycle)


def snake_word(cycle_a: WalkWord, path_b: WalkWord, b_is_cycle: bool = False) -> WalkWord:
    """Boustrophedon word of a cycle times a path; the factors' labels must commute."""
    xs = list(cycle_a.expand())
    ys = list(path_b.expand())
    if b_is_cycle and ys:
        ys = ys[:-1]
    k = len(xs)
    rows = len(ys) + 1
    if rows == 1:
        return cycle_a

    def inv(step: Step) -> Step:
        return (step[0], -step[1])

    out: list[Step] = list(xs[:-1])  # row 0, columns 0..k-1
    col = k - 1
    for r in range(1, rows):
        out.append(ys[r - 1])
        if col == k - 1:
            out.extend(inv(xs[c - 1]) for c in range(k - 1, 1, -1))
            col = 1
        else:
            out.extend(xs[c] for c in range(1, k - 1))
            col = k - 1
    out.append(inv(xs[0]) if col == 1 else xs[-1])
    out.extend(inv(ys[r - 1]) for r in range(rows - 1, 0, -1))
    return WalkWord.from_expanded(out)


def sample_hamiltonian_cycles(graph: CayleyGraph, limit: int, budget: int = 200_000, seed: int = 0,
                              chunk: int = 1000, per_run: int = 4) -> list[list[int]]:
    """Distinct Hamiltonian cycles through vertex 0 from short seeded restarts.

    Randomized restarts with a small budget escape the long dead subtrees a
    single depth-first run can get stuck in.
    """
    if not graph.connected:
        return []
    found: list[list[int]] = []
    seen: set[tuple[int, ...]] = set()
    spent = 0
    run = 0
    stale = 0
    while spent < budget and len(found) < limit and stale < 8:
        stats: dict = {}
        got = 0
        before = len(found)
        for path in iter_hamiltonian(graph, "cycle", 0, None, min(chunk, budget - spent), seed + run, stats):
            key = tuple(path)
            if key not in seen and tuple(reversed(path)) not in seen:
                seen.add(key)
                found.append(path)
            got += 1
            if got >= per_run or len(found) >= limit:
                break
        else:
            if not stats.get("exhausted"):
                break  # the run enumerated every cycle
        spent += max(stats.get("expansions", 0), 1)
        run += 1
        stale = stale + 1 if len(found) == before else 0
    return found
