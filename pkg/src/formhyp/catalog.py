"""The built-in catalog of small groups, grouped into order tiers."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache

from .groups import (
    Group,
    GroupError,
    OrderCapExceeded,
    construct_group,
    load_group_file,
    order_cap,
)

TIERS = {"small": 60, "medium": 120, "large": 384}


class UnknownGroup(KeyError):
    pass


def _sl23_permutations() -> list[list[int]]:
    """SL(2,3) acting on the eight nonzero vectors of GF(3)^2."""
    vecs = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]

    def perm(M):
        return [vecs.index(tuple((M[i][0] * v[0] + M[i][1] * v[1]) % 3 for i in range(2))) for v in vecs]

    return [perm([[1, 1], [0, 1]]), perm([[0, 1], [2, 0]])]


def _affine_permutations(p: int, mult: int) -> list[list[int]]:
    """``x -> x + 1`` and ``x -> mult * x`` on GF(p)."""
    return [[(x + 1) % p for x in range(p)], [(mult * x) % p for x in range(p)]]


# the 3-cycle acts with eigenvalues 2, 4 (primitive cube roots of 1 mod 7),
# the transposition with eigenvalues 1, -1
T294 = (
    "semidirect",
    ("elementary_abelian", 7, 2),
    ("symmetric", 3),
    ("matrices", 7, [[[0, 1], [1, 0]], [[0, 6], [1, 6]]]),
)


def _entries() -> list[tuple[str, tuple]]:
    out: list[tuple[str, tuple]] = [(f"C{n}", ("cyclic", n)) for n in range(1, 25)]
    for p, k in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2), (2, 6)]:
        out.append((f"C{p}^{k}", ("elementary_abelian", p, k)))
    out += [(f"D{2 * n}", ("dihedral", 2 * n)) for n in range(3, 17)]
    out += [
        ("Q8", ("quaternion", 8)),
        ("Q16", ("quaternion", 16)),
        ("S3", ("symmetric", 3)),
        ("S4", ("symmetric", 4)),
        ("A4", ("alternating", 4)),
        ("A5", ("alternating", 5)),
        ("SL(2,3)", ("from_permutations", _sl23_permutations())),
        ("F20", ("from_permutations", _affine_permutations(5, 2))),
        ("F21", ("from_permutations", _affine_permutations(7, 2))),
        ("C3:C4", ("semidirect", ("cyclic", 3), ("cyclic", 4), [[0, 1, 2], [0, 2, 1], [0, 1, 2], [0, 2, 1]])),
        ("S3xC2", ("direct", ("symmetric", 3), ("cyclic", 2))),
        ("A4xC2", ("direct", ("alternating", 4), ("cyclic", 2))),
        ("S3xC3", ("direct", ("symmetric", 3), ("cyclic", 3))),
        ("S3xS3", ("direct", ("symmetric", 3), ("symmetric", 3))),
        ("D8xC3", ("direct", ("dihedral", 8), ("cyclic", 3))),
        ("Q8xC3", ("direct", ("quaternion", 8), ("cyclic", 3))),
        ("A4xC3", ("direct", ("alternating", 4), ("cyclic", 3))),
        ("S4xC2", ("direct", ("symmetric", 4), ("cyclic", 2))),
        ("S4xC3", ("direct", ("symmetric", 4), ("cyclic", 3))),
        ("A4xS3", ("direct", ("alternating", 4), ("symmetric", 3))),
        ("SL(2,3)xC3", ("direct", ("from_permutations", _sl23_permutations()), ("cyclic", 3))),
        ("A5xC2", ("direct", ("alternating", 5), ("cyclic", 2))),
        ("T294", T294),
    ]
    return out


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    descriptor: tuple

    def build(self) -> Group:
        return get_group(self.label)


@dataclass(frozen=True)
class Catalog:
    entries: tuple[CatalogEntry, ...]

    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    def tier(self, tier: str | int) -> list[Group]:
        limit = tier_limit(tier)
        out = []
        for e in self.entries:
            try:
                G = e.build()
            except OrderCapExceeded:
                continue  # beyond the configured cap, so outside every usable tier
            if G.order <= limit:
                out.append(G)
        return out


def tier_limit(tier: str | int) -> int:
    if isinstance(tier, int):
        return tier
    if tier in TIERS:
        return TIERS[tier]
    try:
        return int(tier)
    except ValueError:
        raise ValueError(f"unknown tier {tier!r}; expected one of {sorted(TIERS)} or an order bound") from None


@lru_cache(maxsize=1)
def builtin_catalog() -> Catalog:
    labels = [label for label, _ in _entries()]
    if len(labels) != len(set(labels)):
        raise GroupError("duplicate catalog labels")
    return Catalog(tuple(CatalogEntry(label, desc) for label, desc in _entries()))


_built: dict[str, Group] = {}


def get_group(name: str) -> Group:
    """Look up a catalog label, or load a group file if ``name`` is a path."""
    if name in _built:
        G = _built[name]
        if G.order > order_cap():
            raise OrderCapExceeded(f"group order {G.order} exceeds cap {order_cap()}")
        return G
    for label, desc in _entries():
        if label == name:
            G = construct_group(desc, label=label)
            _built[name] = G
            return G
    if os.path.exists(name):
        return load_group_file(name)
    raise UnknownGroup(name)
