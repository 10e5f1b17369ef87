"""Subgroup lattices and the structural data derived from them."""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .groups import (
    Group,
    GroupError,
    OrderCapExceeded,
    Subgroup,
    centralizer_of_section,
    closure_mask,
    conjugacy_class_labels,
    conjugates,
    generate,
    is_normal,
    join,
    mask_to_bits,
    normal_closure,
    normalizer,
    order_cap,
    pi_part,
    prime_factors,
)


@dataclass
class SubgroupLattice:
    group: Group
    subgroups: list[Subgroup]
    classes: list[list[int]]  # conjugacy classes as index lists into ``subgroups``
    _index: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {S.bits: i for i, S in enumerate(self.subgroups)}

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def __contains__(self, H: Subgroup) -> bool:
        return H.bits in self._index

    def get(self, bits: int) -> Subgroup:
        return self.subgroups[self._index[bits]]

    def canonical(self, H: Subgroup) -> Subgroup:
        """The lattice's own copy of ``H`` (carries generators and caches)."""
        return self.subgroups[self._index[H.bits]]

    @cached_property
    def normal(self) -> list[Subgroup]:
        return [S for S in self.subgroups if is_normal(S)]

    def contained_in(self, M: Subgroup) -> list[Subgroup]:
        return [S for S in self.subgroups if S.bits & ~M.bits == 0]

    def containing(self, H: Subgroup) -> list[Subgroup]:
        return [S for S in self.subgroups if H.bits & ~S.bits == 0]

    def maximal_in(self, M: Subgroup) -> list[Subgroup]:
        cache = self.group.cache.setdefault("maximal_in", {})
        if M.bits in cache:
            return cache[M.bits]
        below = [S for S in self.subgroups if S.bits != M.bits and S.bits & ~M.bits == 0]
        below.sort(key=lambda S: -S.order)
        out: list[Subgroup] = []
        for S in below:
            if not any(S.bits & ~T.bits == 0 for T in out):
                out.append(S)
        out.sort(key=lambda S: S.key)
        cache[M.bits] = out
        return out

    def to_document(self) -> dict:
        width = (self.group.order + 3) // 4
        return {
            "group": table_hash(self.group),
            "order": self.group.order,
            "subgroups": [format(S.bits, f"0{width}x") for S in self.subgroups],
            "classes": self.classes,
        }


def table_hash(G: Group) -> str:
    return hashlib.sha256(G.table.astype("<i4").tobytes()).hexdigest()


def _check_cap(G: Group) -> None:
    cap = order_cap()
    if G.order > cap:
        raise OrderCapExceeded(f"group order {G.order} exceeds lattice cap {cap}")


def cyclic_subgroups(G: Group) -> list[Subgroup]:
    seen: dict[int, Subgroup] = {}
    for g in range(G.order):
        H = generate(G, [g])
        seen.setdefault(H.bits, H)
    return sorted(seen.values(), key=lambda S: S.key)


def all_subgroups(G: Group, cache_dir: str | Path | None = None) -> SubgroupLattice:
    """Every subgroup of ``G``: cyclic atoms closed under joins.

    Joins are only formed from one representative per conjugacy class; the
    result is then closed under conjugation, which is enough because
    ``<H^g, Z> = <H, Z^(g^-1)>^g``.
    """
    if "lattice" in G.cache:
        return G.cache["lattice"]
    _check_cap(G)
    if cache_dir is not None:
        loaded = load_lattice(G, cache_dir)
        if loaded is not None:
            G.cache["lattice"] = loaded
            return loaded
    atoms = cyclic_subgroups(G)
    atom_gen = {Z.bits: (Z.gens[0] if Z.gens else 0) for Z in atoms}
    known: dict[int, Subgroup] = {}
    todo: deque[Subgroup] = deque()
    memo: dict[tuple[int, int], int] = {}

    def add_class(H: Subgroup) -> None:
        for X in conjugates(H):
            known.setdefault(X.bits, X)
        todo.append(H)

    for Z in atoms:
        if Z.bits not in known:
            add_class(Z)
    while todo:
        H = todo.popleft()
        for Z in atoms:
            if Z.bits & ~H.bits == 0:
                continue
            key = (H.bits, Z.bits)
            if key in memo:
                continue
            gens = H.gens + (atom_gen[Z.bits],)
            J = Subgroup(G, mask_to_bits(closure_mask(G, gens, H.mask)), gens)
            memo[key] = J.bits
            if J.bits not in known:
                add_class(J)
    subs = sorted(known.values(), key=lambda S: S.key)
    index = {S.bits: i for i, S in enumerate(subs)}
    classes: list[list[int]] = []
    assigned: set[int] = set()
    for S in subs:
        if S.bits in assigned:
            continue
        cls = sorted(index[X.bits] for X in conjugates(S))
        assigned.update(subs[i].bits for i in cls)
        classes.append(cls)
    lat = SubgroupLattice(G, subs, classes)
    G.cache["lattice"] = lat
    if cache_dir is not None:
        save_lattice(lat, cache_dir)
    return lat


def save_lattice(lat: SubgroupLattice, cache_dir: str | Path) -> Path:
    path = Path(cache_dir) / f"{table_hash(lat.group)}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(lat.to_document()), encoding="utf-8")
    return path


def load_lattice(G: Group, cache_dir: str | Path) -> SubgroupLattice | None:
    path = Path(cache_dir) / f"{table_hash(G)}.json"
    if not path.exists():
        return None
    doc = json.loads(path.read_text(encoding="utf-8"))
    if doc.get("order") != G.order:
        return None
    subs = [Subgroup(G, int(h, 16)) for h in doc["subgroups"]]
    return SubgroupLattice(G, subs, doc["classes"])


def normal_subgroups(G: Group) -> list[Subgroup]:
    return all_subgroups(G).normal


def maximal_subgroups(G: Group, M: Subgroup | None = None) -> list[Subgroup]:
    lat = all_subgroups(G)
    return lat.maximal_in(G.whole if M is None else M)


def _minimal(subs: list[Subgroup]) -> list[Subgroup]:
    subs = sorted(subs, key=lambda S: S.key)
    out: list[Subgroup] = []
    for S in subs:
        if not any(T.bits & ~S.bits == 0 for T in out):
            out.append(S)
    return out


def minimal_normal_over(G: Group, N: Subgroup) -> list[Subgroup]:
    """Normal subgroups ``M > N`` of ``G`` with ``M/N`` minimal normal in ``G/N``.

    Every such ``M`` is the normal closure of ``N`` and any element of
    ``M \\ N``, so it suffices to take one element per conjugacy class.
    """
    labels = G.cache.get("class_labels")
    if labels is None:
        labels = G.cache["class_labels"] = conjugacy_class_labels(G)
    reps = np.unique(labels[~N.mask])
    cands: dict[int, Subgroup] = {}
    for r in reps:
        M = normal_closure(G, list(N.gens) + [int(r)])
        cands.setdefault(M.bits, M)
    return _minimal(list(cands.values()))


def minimal_normal_subgroups(G: Group, use_lattice: bool = False) -> list[Subgroup]:
    if use_lattice:
        return _minimal([S for S in normal_subgroups(G) if not S.is_trivial()])
    return minimal_normal_over(G, G.trivial)


@dataclass(frozen=True)
class ChiefFactor:
    upper: Subgroup
    lower: Subgroup
    centralizer: Subgroup

    @property
    def order(self) -> int:
        return self.upper.order // self.lower.order

    @property
    def primes(self) -> frozenset[int]:
        return prime_factors(self.order)

    @property
    def abelian(self) -> bool:
        # H/K is abelian iff H centralises it
        return self.upper <= self.centralizer


@dataclass(frozen=True)
class ChiefSeries:
    group: Group
    terms: tuple[Subgroup, ...]
    factors: tuple[ChiefFactor, ...]


def chief_terms(G: Group, tie_break: str = "least", below: Subgroup | None = None) -> list[Subgroup]:
    """Terms ``1 = N_0 < ... < N_k`` of a G-chief series ending at ``below`` (default ``G``)."""
    top = G.whole if below is None else below
    terms = [G.trivial]
    while terms[-1].bits != top.bits:
        cands = [M for M in minimal_normal_over(G, terms[-1]) if M.bits & ~top.bits == 0]
        if not cands:
            raise GroupError("upper term is not normal")
        terms.append(cands[0] if tie_break == "least" else cands[-1])
    return terms


def chief_series(G: Group, tie_break: str = "least") -> ChiefSeries:
    """Chief series choosing the canonically least (or greatest) minimal normal step."""
    key = ("chief", tie_break)
    if key in G.cache:
        return G.cache[key]
    terms = chief_terms(G, tie_break)
    factors = tuple(
        ChiefFactor(H, K, centralizer_of_section(G, H, K, check=False)) for K, H in zip(terms, terms[1:])
    )
    series = ChiefSeries(G, tuple(terms), factors)
    G.cache[key] = series
    return series


def chief_factor_orders(G: Group) -> list[int]:
    """Factor orders along a chief series (no centralizers)."""
    if ("chief", "least") in G.cache:
        return [f.order for f in G.cache[("chief", "least")].factors]
    terms = chief_terms(G)
    return [H.order // K.order for K, H in zip(terms, terms[1:])]


def sylow_subgroups(G: Group, p: int) -> list[Subgroup]:
    """All Sylow ``p``-subgroups (the trivial subgroup when ``p`` does not divide ``|G|``)."""
    key = ("sylow", p)
    if key in G.cache:
        return G.cache[key]
    target = pi_part(G.order, [p])
    P = G.trivial
    # grow a p-subgroup inside its normaliser until it reaches the p-part
    while P.order < target:
        N = normalizer(G, P)
        m = N.members
        cand = m[~P.mask[m]]
        xp = G.power(cand, p)
        x = cand[P.mask[xp]]
        if x.size == 0:
            raise GroupError("no p-element in N(P)/P; group table inconsistent")
        P = join(P, generate(G, [int(x[0])]))
        if P.order % p or prime_factors(P.order) - {p}:
            raise GroupError("Sylow growth left the p-subgroups")
    out = conjugates(P)
    G.cache[key] = out
    return out


def hall_subgroups(G: Group, primes) -> list[Subgroup]:
    primes = frozenset(primes)
    target = pi_part(G.order, primes)
    return [S for S in all_subgroups(G) if S.order == target]


def is_pi_subgroup(H: Subgroup, primes) -> bool:
    return H.primes <= frozenset(primes)


def pi_maximal_subgroups(G: Group, primes) -> list[Subgroup]:
    primes = frozenset(primes)
    pis = [S for S in all_subgroups(G) if S.primes <= primes]
    pis.sort(key=lambda S: -S.order)
    out: list[Subgroup] = []
    for S in pis:
        if not any(S.bits & ~T.bits == 0 for T in out):
            out.append(S)
    return sorted(out, key=lambda S: S.key)


def cyclic_primary_subgroups(G: Group) -> list[Subgroup]:
    """Nontrivial cyclic subgroups of prime-power order."""
    if "cyclic_primary" in G.cache:
        return G.cache["cyclic_primary"]
    seen: dict[int, Subgroup] = {}
    for g in range(1, G.order):
        if len(prime_factors(int(G.element_order[g]))) == 1:
            H = generate(G, [g])
            seen.setdefault(H.bits, H)
    out = sorted(seen.values(), key=lambda S: S.key)
    G.cache["cyclic_primary"] = out
    return out


def frattini_subgroup(G: Group) -> Subgroup:
    bits = G.whole.bits
    for M in maximal_subgroups(G):
        bits &= M.bits
    return Subgroup(G, bits)
