"""Instance enumeration, batch sweeps, reports and DOT export."""

from __future__ import annotations

import csv
import io
import json
import logging
import random
from dataclasses import asdict, dataclass, field
from math import gcd
from pathlib import Path

import numpy as np

from .construct import ConstructOptions, ConstructionError, ConstructionReport, construct
from .groups import (
    Elem, GroupSpec, SpecError, class_representative, commutator_subgroup_order, element_order,
    find_isomorphism, generates, hall_normalize, is_minimal_generating, is_prime, order_multiset,
    prime_factors,
)
from .walks import GenSet, WalkWord, build_graph, labels_of, trace_word, verify_hamiltonian_cycle

log = logging.getLogger(__name__)


# ---------------------------------------------------------------- groups


def gprime_shape(spec: GroupSpec) -> str:
    """'pq', '3p' or 'other' by the primes dividing |G'|."""
    d = commutator_subgroup_order(spec)
    primes = prime_factors(d)
    if len(primes) != 2 or 2 in primes:
        return "other"
    return "3p" if 3 in primes else "pq"


def enumerate_group_specs(p: int, q: int) -> list[GroupSpec]:
    """One Hall-form spec per isomorphism class of metacyclic groups of order 6pq."""
    if p == q:
        raise SpecError("p and q must be distinct")
    if not (is_prime(p) and is_prime(q)) or {p, q} & {2, 3}:
        raise SpecError(f"p={p} and q={q} must be primes other than 2 and 3")
    order = 6 * p * q
    reps: set[GroupSpec] = set()
    for n in range(1, order + 1):
        if order % n:
            continue
        m = order // n
        for tau in range(m if m > 1 else 1):
            try:
                spec = GroupSpec(n, m, tau if m > 1 else 0)
            except SpecError:
                continue
            reps.add(class_representative(hall_normalize(spec)))
    ordered = sorted(reps, key=lambda s: (s.m, s.n, s.tau))
    # the power-orbit filter is the primary test; collide on order statistics and confirm by search
    kept: list[GroupSpec] = []
    by_stats: dict[tuple, list[GroupSpec]] = {}
    for spec in ordered:
        stats = (spec.m, order_multiset(spec))
        bucket = by_stats.setdefault(stats, [])
        if any(find_isomorphism(spec, other) is not None for other in bucket):
            continue
        bucket.append(spec)
        kept.append(spec)
    return kept


# ---------------------------------------------------------------- generating sets


def _conjugation_table(spec: GroupSpec) -> tuple[np.ndarray, np.ndarray]:
    """conj[g, s] = index of g s g^-1 and inv[s] = index of s^-1, over element indices i*m + j."""
    n, m = spec.n, spec.m
    tau_pow = np.array(spec.tau_powers, dtype=np.int64)
    tau_neg = np.array(spec.tau_neg_powers, dtype=np.int64)
    idx = np.arange(n * m)
    i, j = idx // m, idx % m
    t, x = i[:, None], j[:, None]
    # b^t γ^x (b^i γ^j) γ^-x b^-t = b^i γ^((j + x(τ^-i - 1)) τ^t)
    jj = ((j[None, :] + x * (tau_neg[i][None, :] - 1)) % m) * tau_pow[t] % m
    conj = i[None, :] * m + jj
    inv = ((-i) % n) * m + (-j * tau_pow[i]) % m
    return conj, inv


def _mark_orbit(seen: np.ndarray, conj: np.ndarray, inv: np.ndarray, a: int, b: int, size: int) -> None:
    ca, cb = conj[:, a], conj[:, b]
    for u in (ca, inv[ca]):
        for v in (cb, inv[cb]):
            lo, hi = np.minimum(u, v), np.maximum(u, v)
            seen[lo * size + hi] = True


def enumerate_generating_sets(spec: GroupSpec, size: int, policy: str = "exhaustive", cap: int | None = None,
                              seed: int = 0, dedup_automorphisms: bool = False) -> list[GenSet]:
    """Minimal generating sets of the given size.

    exhaustive: one representative per orbit under conjugation and inverting
    generators, in a fixed scan order. random: up to `cap` distinct sets from a
    seeded sampler, drawn from prime-order elements when `size` equals the
    number of prime factors of |G|. Automorphism dedup also merges orbits under rescaling γ.
    """
    elements = spec.elements()
    if policy == "random":
        if cap is None or cap < 1:
            raise ValueError("random policy needs a positive cap")
        rng = random.Random(seed)
        nonzero = elements[1:]
        if size >= len(prime_factors(spec.order)):
            # a minimal set this large has a chain of subgroups gaining one prime per generator,
            # so each generator alone has prime order
            nonzero = [g for g in nonzero if is_prime(element_order(spec, g))]
        if len(nonzero) < size:
            return []
        out: list[GenSet] = []
        seen: set[tuple] = set()
        attempts = 0
        while len(out) < cap and attempts < cap * 400:
            attempts += 1
            pick = tuple(sorted(rng.sample(nonzero, size)))
            if pick in seen:
                continue
            seen.add(pick)
            if generates(spec, list(pick)) and is_minimal_generating(spec, list(pick)):
                out.append(GenSet(pick))
        return out
    if policy != "exhaustive":
        raise ValueError(f"unknown policy {policy!r}")
    if size != 2:
        raise ValueError("exhaustive enumeration is implemented for size 2 only")
    total = spec.order
    conj, inv = _conjugation_table(spec)
    scalings = [w for w in range(1, max(spec.m, 2)) if gcd(w, spec.m) == 1] if dedup_automorphisms else [1]
    seen_pairs = np.zeros(total * total, dtype=bool)
    orders = [element_order(spec, g) for g in elements]
    out = []
    for a in range(1, total):
        row = seen_pairs[a * total:(a + 1) * total]
        for b in np.flatnonzero(~row[a + 1:]) + a + 1:
            b = int(b)
            if row[b]:
                continue
            for w in scalings:
                ga, gb = elements[a], elements[b]
                ia = spec.index((ga[0], ga[1] * w % spec.m))
                ib = spec.index((gb[0], gb[1] * w % spec.m))
                _mark_orbit(seen_pairs, conj, inv, ia, ib, total)
            if orders[a] == total or orders[b] == total:
                continue
            if generates(spec, [elements[a], elements[b]]):
                out.append(GenSet((elements[a], elements[b])))
                if cap is not None and len(out) >= cap:
                    return out
    return out


# ---------------------------------------------------------------- sweeps


@dataclass
class SweepConfig:
    p: int
    q: int
    sizes: dict[int, str] = field(default_factory=lambda: {2: "exhaustive", 3: "random"})
    random_cap: int = 500
    exhaustive_cap: int | None = None
    seed: int = 0
    allow_fallback: bool = False
    shapes: tuple[str, ...] = ("pq", "3p")
    dedup_automorphisms: bool = False
    timing: bool = False
    json_path: str | None = None
    csv_path: str | None = None
    budget: int = 200_000

    @classmethod
    def from_json(cls, data: dict | str) -> SweepConfig:
        if isinstance(data, str):
            data = json.loads(data)
        data = dict(data)
        if "sizes" in data:
            data["sizes"] = {int(k): v for k, v in data["sizes"].items()}
        if "shapes" in data:
            data["shapes"] = tuple(data["shapes"])
        cfg = cls(**data)
        if cfg.p == cfg.q:
            raise SpecError("p and q must be distinct")
        if cfg.random_cap < 1 or (cfg.exhaustive_cap is not None and cfg.exhaustive_cap < 1):
            raise ValueError("caps must be positive")
        return cfg

    def to_json(self) -> dict:
        out = asdict(self)
        out["sizes"] = {str(k): v for k, v in self.sizes.items()}
        out["shapes"] = list(self.shapes)
        return out


@dataclass
class SweepResult:
    config: SweepConfig
    reports: list[ConstructionReport]
    errors: list[dict]

    @property
    def buckets(self) -> dict[str, int]:
        out = {"verified": 0, "delegated": 0, "failed": 0}
        for r in self.reports:
            out[r.outcome] += 1
        out["failed"] += len(self.errors)
        return out

    @property
    def ok(self) -> bool:
        return self.buckets["failed"] == 0

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "seed": self.config.seed,
            "buckets": self.buckets,
            "reports": [r.to_json(self.config.timing) for r in self.reports],
            "errors": self.errors,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["spec", "|S|", "case tag", "cycle length", "voltage order", "verify ms"])
        for r in self.reports:
            writer.writerow([r.spec.key(), len(r.labels), r.tag.label, r.cycle_length,
                             "" if r.voltage_order is None else r.voltage_order,
                             f"{r.verify_ms:.3f}" if self.config.timing else ""])
        return buf.getvalue()


def _report_key(r: ConstructionReport) -> tuple:
    return (r.spec.m, r.spec.n, r.spec.tau, len(r.labels), r.labels)


def run_suite(config: SweepConfig) -> SweepResult:
    options = ConstructOptions(allow_fallback=config.allow_fallback, budget=config.budget, seed=config.seed)
    reports: list[ConstructionReport] = []
    errors: list[dict] = []
    for spec in enumerate_group_specs(config.p, config.q):
        if gprime_shape(spec) not in config.shapes or spec.is_abelian:
            continue
        for size, policy in sorted(config.sizes.items()):
            cap = config.random_cap if policy == "random" else config.exhaustive_cap
            gensets = enumerate_generating_sets(spec, size, policy, cap, config.seed, config.dedup_automorphisms)
            log.info("%s: %d generating sets of size %d", spec.key(), len(gensets), size)
            for gs in gensets:
                try:
                    reports.append(construct(spec, gs, options))
                except ConstructionError as exc:
                    errors.append({"spec": spec.to_json(), "labels": gs.to_json(), "error": f"{type(exc).__name__}: {exc}"})
    reports.sort(key=_report_key)
    errors.sort(key=lambda e: json.dumps(e, sort_keys=True))
    result = SweepResult(config, reports, errors)
    if config.json_path:
        Path(config.json_path).write_text(result.dumps())
    if config.csv_path:
        Path(config.csv_path).write_text(result.csv_text())
    return result


# ---------------------------------------------------------------- DOT export


class ExportError(ValueError):
    pass


def export_dot(spec: GroupSpec, genset, word: WalkWord, style: str = "plain") -> str:
    """Undirected DOT text of Cay(G; S) with the cycle highlighted.

    Label 0 edges are solid, the others dashed. style='grid' pins node
    b^i γ^j at column j, row i.
    """
    labels = labels_of(genset)
    check = verify_hamiltonian_cycle(spec, labels, word)
    if not check:
        raise ExportError(f"word is not a Hamiltonian cycle: {check.message}")
    if style not in ("plain", "grid"):
        raise ExportError(f"unknown style {style!r}")
    graph = build_graph(spec, labels)
    visited, _ = trace_word(spec, labels, word)
    cycle_edges = set()
    for a, b in zip(visited, visited[1:]):
        cycle_edges.add(frozenset((graph.index[a], graph.index[b])))

    def node(v: int) -> str:
        i, j = graph.vertices[v]
        return f"v{i}_{j}"

    lines = ["graph cayley {", "  node [shape=circle, fontsize=8];"]
    for v, g in enumerate(graph.vertices):
        attrs = [f'label="{g[0]},{g[1]}"']
        if style == "grid":
            attrs.append(f'pos="{g[1]},{-g[0]}!"')
        lines.append(f"  {node(v)} [{', '.join(attrs)}];")
    emitted = set()
    for v in range(graph.size):
        for w, label, _sign in graph.adjacency[v]:
            key = (min(v, w), max(v, w), label)
            if key in emitted:
                continue
            emitted.add(key)
            attrs = ["style=solid" if label == 0 else "style=dashed"]
            if frozenset((v, w)) in cycle_edges:
                attrs += ["color=red", "penwidth=2"]
            lines.append(f"  {node(key[0])} -- {node(key[1])} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
