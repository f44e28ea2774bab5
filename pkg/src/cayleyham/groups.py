"""Exact arithmetic for metacyclic groups C_n ⋉ C_m of square-free order.

An element is a pair (i, j) standing for b^i γ^j, where b generates the
cyclic complement of order n, γ generates the cyclic normal part of order m
and b γ b^-1 = γ^tau.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Callable, Iterable, Sequence

Elem = tuple[int, int]
IDENTITY: Elem = (0, 0)


def prime_factors(x: int) -> list[int]:
    out = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        out.append(x)
    return out


def is_prime(x: int) -> bool:
    return x >= 2 and prime_factors(x) == [x]


def is_square_free(x: int) -> bool:
    if x < 1:
        return False
    d = 2
    while d * d <= x:
        if x % (d * d) == 0:
            return False
        d += 1
    return True


def divisors(x: int) -> list[int]:
    return [d for d in range(1, x + 1) if x % d == 0]


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    n: int
    m: int
    tau: int

    def __post_init__(self):
        n, m = self.n, self.m
        if n < 1 or m < 1:
            raise SpecError(f"n and m must be positive, got n={n}, m={m}")
        object.__setattr__(self, "tau", self.tau % m)
        if gcd(n, m) != 1:
            raise SpecError(f"gcd(n, m) must be 1, got n={n}, m={m}")
        if not is_square_free(n * m):
            raise SpecError(f"order {n * m} is not square-free")
        if m > 1 and gcd(self.tau, m) != 1:
            raise SpecError(f"tau={self.tau} is not a unit modulo {m}")
        if pow(self.tau, n, m) != 1 % m:
            raise SpecError(f"tau^n is not 1 modulo m for tau={self.tau}, n={n}, m={m}")

    @property
    def order(self) -> int:
        return self.n * self.m

    @cached_property
    def prime_factors_n(self) -> list[int]:
        return prime_factors(self.n)

    @cached_property
    def prime_factors_m(self) -> list[int]:
        return prime_factors(self.m)

    @cached_property
    def tau_inverse(self) -> int:
        return pow(self.tau, self.n - 1, self.m) if self.m > 1 else 0

    @cached_property
    def tau_neg_powers(self) -> tuple[int, ...]:
        """tau^-k mod m for k in 0..n-1."""
        out = [1 % self.m]
        for _ in range(self.n - 1):
            out.append(out[-1] * self.tau_inverse % self.m)
        return tuple(out)

    @cached_property
    def tau_powers(self) -> tuple[int, ...]:
        out = [1 % self.m]
        for _ in range(self.n - 1):
            out.append(out[-1] * self.tau % self.m)
        return tuple(out)

    @property
    def is_hall_normalized(self) -> bool:
        return gcd(self.tau - 1, self.m) == 1

    @property
    def is_abelian(self) -> bool:
        return self.tau == 1 % self.m

    def elements(self) -> list[Elem]:
        return [(i, j) for i in range(self.n) for j in range(self.m)]

    def index(self, g: Elem) -> int:
        return g[0] * self.m + g[1]

    def element(self, v: int) -> Elem:
        return divmod(v, self.m)

    def contains(self, g: Elem) -> bool:
        return 0 <= g[0] < self.n and 0 <= g[1] < self.m

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "tau": self.tau}

    @classmethod
    def from_json(cls, data: dict | str) -> GroupSpec:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), int(data["m"]), int(data["tau"]))

    def key(self) -> str:
        return f"n{self.n}_m{self.m}_t{self.tau}"


@dataclass(frozen=True)
class SubgroupOfGammaPart:
    """The subgroup of order d inside the cyclic normal part, generated by γ^(m/d)."""

    d: int

    def generator(self, spec: GroupSpec) -> Elem:
        check_divides(self.d, spec.m)
        return (0, (spec.m // self.d) % spec.m)

    def contains(self, spec: GroupSpec, g: Elem) -> bool:
        return g[0] == 0 and g[1] % (spec.m // self.d) == 0


def check_divides(d: int, m: int) -> None:
    if d < 1 or m % d != 0:
        raise SpecError(f"subgroup order {d} does not divide {m}")


@dataclass(frozen=True)
class CentralizerConfig:
    """For each prime e dividing n, the primes r dividing m centralized by the order-e subgroup."""

    centralized: dict[int, tuple[int, ...]]
    full: tuple[int, ...]
    primes_m: tuple[int, ...] = field(default=())

    def centralizes(self, e: int, r: int) -> bool:
        return r in self.centralized[e]

    def fixed_part(self, e: int) -> int:
        """Order of the subgroup of G' fixed by the order-e subgroup, over the given primes."""
        out = 1
        for r in self.centralized[e]:
            out *= r
        return out


# ---------------------------------------------------------------- arithmetic


def multiply(spec: GroupSpec, g: Elem, h: Elem) -> Elem:
    return ((g[0] + h[0]) % spec.n, (g[1] * spec.tau_neg_powers[h[0]] + h[1]) % spec.m)


def inverse(spec: GroupSpec, g: Elem) -> Elem:
    i, j = g
    return ((-i) % spec.n, (-j * spec.tau_powers[i]) % spec.m)


def power(spec: GroupSpec, g: Elem, k: int) -> Elem:
    if k < 0:
        g, k = inverse(spec, g), -k
    result = IDENTITY
    base = g
    while k:
        if k & 1:
            result = multiply(spec, result, base)
        base = multiply(spec, base, base)
        k >>= 1
    return result


def product(spec: GroupSpec, elems: Iterable[Elem]) -> Elem:
    out = IDENTITY
    for g in elems:
        out = multiply(spec, out, g)
    return out


def element_order(spec: GroupSpec, g: Elem) -> int:
    head = spec.n // gcd(g[0], spec.n)
    rest = power(spec, g, head)
    return head * (spec.m // gcd(rest[1], spec.m))


def commutator(spec: GroupSpec, g: Elem, h: Elem) -> Elem:
    return product(spec, (g, h, inverse(spec, g), inverse(spec, h)))


def conjugate(spec: GroupSpec, x: Elem, g: Elem) -> Elem:
    """x g x^-1."""
    return product(spec, (x, g, inverse(spec, x)))


def commutator_subgroup_order(spec: GroupSpec) -> int:
    return spec.m // gcd(spec.tau - 1, spec.m)


def centralizer_config(spec: GroupSpec) -> CentralizerConfig:
    primes_m = tuple(spec.prime_factors_m)
    centralized = {}
    for e in spec.prime_factors_n:
        t = pow(spec.tau, spec.n // e, spec.m) if spec.m > 1 else 0
        centralized[e] = tuple(r for r in primes_m if t % r == 1)
    full = tuple(r for r in primes_m if spec.tau % r == 1)
    return CentralizerConfig(centralized, full, primes_m)


def quotient_spec(spec: GroupSpec, sub: SubgroupOfGammaPart | int) -> tuple[GroupSpec, Callable[[Elem], Elem]]:
    d = sub.d if isinstance(sub, SubgroupOfGammaPart) else sub
    check_divides(d, spec.m)
    m2 = spec.m // d
    quotient = GroupSpec(spec.n, m2, spec.tau % m2)

    def project(g: Elem) -> Elem:
        return (g[0], g[1] % m2)

    return quotient, project


# ---------------------------------------------------------------- generation


def closure(spec: GroupSpec, gens: Iterable[Elem]) -> set[Elem]:
    gens = list(gens)
    seen = {IDENTITY}
    queue = deque([IDENTITY])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = multiply(spec, g, s)
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


def closure_order(spec: GroupSpec, gens: Iterable[Elem]) -> int:
    return len(closure(spec, gens))


def generates(spec: GroupSpec, gens: Sequence[Elem]) -> bool:
    """Fast test for <gens> = G.

    The image in C_n must be everything, and for each prime r | m the image in
    C_n ⋉ C_r must be everything: some generator has nonzero r-part when the
    action on C_r is trivial, otherwise some pair of generators fails to
    commute modulo r.
    """
    g = spec.n
    for s in gens:
        g = gcd(g, s[0])
    if g != 1:
        return False
    for r in spec.prime_factors_m:
        if spec.tau % r == 1:
            if not any(s[1] % r for s in gens):
                return False
        elif not any(commutator(spec, x, y)[1] % r for x, y in combinations(gens, 2)):
            return False
    return True


def is_minimal_generating(spec: GroupSpec, gens: Sequence[Elem]) -> bool:
    gens = list(gens)
    if not generates(spec, gens):
        return False
    return not any(generates(spec, gens[:k] + gens[k + 1:]) for k in range(len(gens)))


def canonical_generators(spec: GroupSpec) -> dict[int, Elem]:
    """Prime r -> generator of the unique order-r subgroup inside the complement or the normal part."""
    primes = spec.prime_factors_n + spec.prime_factors_m
    if len(primes) != 4 or not is_square_free(spec.order):
        raise SpecError(f"order {spec.order} is not a product of four distinct primes")
    out = {r: (spec.n // r, 0) for r in spec.prime_factors_n}
    out.update({r: (0, spec.m // r) for r in spec.prime_factors_m})
    return out


def in_commutator_subgroup(spec: GroupSpec, g: Elem) -> bool:
    return g[0] == 0 and g[1] % (spec.m // commutator_subgroup_order(spec)) == 0


# ---------------------------------------------------------------- isomorphism


def hall_normalize(spec: GroupSpec) -> GroupSpec:
    """Isomorphic spec whose normal part is exactly the commutator subgroup.

    With d = |G'| and c = m/d, x = b γ^d has order n·c and y = γ^c generates
    G', and x y x^-1 = y^tau.
    """
    d = commutator_subgroup_order(spec)
    if d == spec.m:
        return spec
    x = (1 % spec.n, d % spec.m)
    assert element_order(spec, x) == spec.order // d
    return GroupSpec(spec.order // d, d, spec.tau % d)


def power_orbit(tau: int, n: int, m: int) -> set[int]:
    return {pow(tau, k, m) for k in range(1, n + 1) if gcd(k, n) == 1} if m > 1 else {0}


def class_representative(spec: GroupSpec) -> GroupSpec:
    return GroupSpec(spec.n, spec.m, min(power_orbit(spec.tau, spec.n, spec.m)))


def order_multiset(spec: GroupSpec) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for g in spec.elements():
        o = element_order(spec, g)
        counts[o] = counts.get(o, 0) + 1
    return tuple(sorted(counts.items()))


def find_isomorphism(source: GroupSpec, target: GroupSpec) -> tuple[Elem, Elem] | None:
    """Images (x, y) of b and γ defining an isomorphism source -> target, or None."""
    if source.order != target.order:
        return None
    elems = target.elements()
    ys = [g for g in elems if element_order(target, g) == source.m]
    xs = [g for g in elems if element_order(target, g) == source.n]
    for y in ys:
        want = power(target, y, source.tau)
        for x in xs:
            if conjugate(target, x, y) != want:
                continue
            if power(target, x, source.n) == IDENTITY and generates_order(target, [x, y]) == target.order:
                return x, y
    return None


def generates_order(spec: GroupSpec, gens: Sequence[Elem]) -> int:
    return spec.order if generates(spec, gens) else closure_order(spec, gens)


def hall_isomorphism(spec: GroupSpec) -> tuple[GroupSpec, Callable[[Elem], Elem]]:
    """The Hall-normalized spec together with an explicit isomorphism into it.

    b^i γ^j is split as (b γ^d)^k · (γ^c)^u with k ≡ i (mod n), k ≡ j/d (mod c)
    and u ≡ j/c (mod d), where d = |G'| and c = m/d.
    """
    hall = hall_normalize(spec)
    if hall is spec:
        return spec, lambda g: g
    d = hall.m
    c = spec.m // d
    inv_c = pow(c, -1, d) if d > 1 else 0
    inv_d = pow(d, -1, c) if c > 1 else 0
    n = spec.n
    inv_n_mod_c = pow(n, -1, c) if c > 1 else 0

    def phi(g: Elem) -> Elem:
        i, j = g
        u = j * inv_c % d if d > 1 else 0
        v = j * inv_d % c if c > 1 else 0
        # k ≡ i (mod n), k ≡ v (mod c)
        k = i + n * ((v - i) * inv_n_mod_c % c) if c > 1 else i
        return (k % hall.n, u)

    return hall, phi
