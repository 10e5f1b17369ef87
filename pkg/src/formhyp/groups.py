"""Concrete finite groups stored as full Cayley tables.

Elements are integers ``0..n-1`` with ``0`` the identity.  Subgroups are
Python ``int`` bitsets over those indices, which makes containment,
intersection and deduplication single machine-word operations at the
orders we care about (a few hundred elements).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from collections import deque
from collections.abc import Callable, Hashable, Iterable, Sequence
from functools import cached_property
from pathlib import Path

import numpy as np

DEFAULT_ORDER_CAP = 384
DEFAULT_SECTION_CAP = 4096


class GroupError(ValueError):
    """Invalid group data or a violated precondition."""


class OrderCapExceeded(GroupError):
    pass


class NotNormalError(GroupError):
    pass


def order_cap() -> int:
    return int(os.environ.get("FORMHYP_ORDER_CAP", DEFAULT_ORDER_CAP))


def section_cap() -> int:
    return int(os.environ.get("FORMHYP_SECTION_CAP", DEFAULT_SECTION_CAP))


def prime_factors(n: int) -> frozenset[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


def is_prime(n: int) -> bool:
    return n > 1 and prime_factors(n) == {n}


def pi_part(n: int, primes: Iterable[int]) -> int:
    primes = set(primes)
    out = 1
    for p in prime_factors(n):
        if p in primes:
            while n % p == 0:
                n //= p
                out *= p
    return out


# -- bitset helpers ---------------------------------------------------------


def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little", count=n).astype(bool)


def indices_to_bits(indices: Iterable[int]) -> int:
    bits = 0
    for i in indices:
        bits |= 1 << int(i)
    return bits


def bits_to_indices(bits: int, n: int) -> np.ndarray:
    return np.flatnonzero(bits_to_mask(bits, n))


class Group:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of ``a*b``.  ``elements`` optionally keeps
    the constructor's element objects (permutation tuples, vectors, ...)
    so that actions can be expressed in terms of them.
    """

    def __init__(
        self,
        table,
        label: str = "",
        generators: Sequence[int] | None = None,
        elements: Sequence[Hashable] | None = None,
        validate: bool = False,
    ):
        table = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        n = table.shape[0]
        if validate:
            _validate_table(table)
        elif not (np.array_equal(table[0], np.arange(n)) and np.array_equal(table[:, 0], np.arange(n))):
            raise GroupError("element 0 must be the identity")
        table.setflags(write=False)
        self.table = table
        self.order = n
        self.label = label or f"G{n}"
        self.elements = tuple(elements) if elements is not None else None
        self._generators = tuple(int(g) for g in generators) if generators is not None else None
        self.cache: dict = {}

    def __repr__(self) -> str:
        return f"Group({self.label!r}, order={self.order})"

    @cached_property
    def uid(self) -> str:
        return hashlib.sha256(self.table.tobytes()).hexdigest()[:24]

    def __eq__(self, other) -> bool:
        return isinstance(other, Group) and self.uid == other.uid

    def __hash__(self) -> int:
        return hash(self.uid)

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmax(self.table == 0, axis=1).astype(np.int32)
        inv.setflags(write=False)
        return inv

    @cached_property
    def element_order(self) -> np.ndarray:
        n = self.order
        ar = np.arange(n)
        orders = np.ones(n, dtype=np.int64)
        cur = ar.copy()
        k = 1
        pending = cur != 0
        while pending.any():
            k += 1
            cur = self.table[cur, ar]
            newly = pending & (cur == 0)
            orders[newly] = k
            pending &= ~newly
        orders.setflags(write=False)
        return orders

    @cached_property
    def generators(self) -> tuple[int, ...]:
        if self._generators is not None:
            return tuple(g for g in dict.fromkeys(self._generators) if g != 0)
        return greedy_generators(self, range(self.order))

    @cached_property
    def primes(self) -> frozenset[int]:
        return prime_factors(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power(self, x, k: int):
        """Vectorised ``x**k`` for an index or an array of indices."""
        x = np.asarray(x)
        result = np.zeros_like(x)
        base = x.copy()
        k %= int(np.lcm.reduce(self.element_order[np.atleast_1d(x)])) or 1
        while k:
            if k & 1:
                result = self.table[result, base]
            base = self.table[base, base]
            k >>= 1
        return result

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, (1 << self.order) - 1, self.generators)

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, 1, ())

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def to_document(self) -> dict:
        return {"label": self.label, "cayley": self.table.tolist()}


def _validate_table(table: np.ndarray) -> None:
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise GroupError("table entries out of range")
    ar = np.arange(n)
    if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
        raise GroupError("element 0 must be the identity")
    srt = np.sort(table, axis=1)
    if not (srt == ar).all() or not (np.sort(table, axis=0) == ar[:, None]).all():
        raise GroupError("table is not a Latin square")
    for a in range(n):
        left = table[table[a]]  # (a*b)*c over all b, c
        right = table[a][table]  # a*(b*c)
        if not np.array_equal(left, right):
            raise GroupError("table is not associative")


class Subgroup:
    """Subgroup of a parent group, stored as a bitset of element indices."""

    __slots__ = ("group", "bits", "_gens", "__dict__")

    def __init__(self, group: Group, bits: int, gens: Sequence[int] | None = None):
        self.group = group
        self.bits = bits
        self._gens = tuple(gens) if gens is not None else None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.bits == other.bits
            and (self.group is other.group or self.group == other.group)
        )

    def __hash__(self) -> int:
        return hash(self.bits)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, of={self.group.label!r})"

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> int(x) & 1)

    def __le__(self, other: Subgroup) -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: Subgroup) -> bool:
        return self.bits != other.bits and self <= other

    def __and__(self, other: Subgroup) -> Subgroup:
        bits = self.bits & other.bits
        return Subgroup(self.group, bits)

    @cached_property
    def order(self) -> int:
        return self.bits.bit_count()

    @cached_property
    def mask(self) -> np.ndarray:
        return bits_to_mask(self.bits, self.group.order)

    @cached_property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def gens(self) -> tuple[int, ...]:
        if self._gens is None:
            self._gens = greedy_generators(self.group, self.members)
        return self._gens

    @cached_property
    def key(self) -> tuple:
        return (self.order, tuple(self.members.tolist()))

    @cached_property
    def primes(self) -> frozenset[int]:
        return prime_factors(self.order)

    def is_trivial(self) -> bool:
        return self.bits == 1

    def is_whole(self) -> bool:
        return self.order == self.group.order


# -- closure and generation -------------------------------------------------


def closure_mask(group: Group, gens: Sequence[int], start: np.ndarray | None = None) -> np.ndarray:
    """Elements of the subgroup generated by ``gens`` (and ``start`` if given)."""
    n = group.order
    gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    if start is not None:
        mask |= start
    frontier = np.flatnonzero(mask)
    if gens.size == 0:
        return mask
    cols = group.table[:, gens]
    while frontier.size:
        nxt = cols[frontier].ravel()
        nxt = np.unique(nxt[~mask[nxt]])
        mask[nxt] = True
        frontier = nxt
    return mask


def generate(group: Group, gens: Iterable[int]) -> Subgroup:
    gens = tuple(dict.fromkeys(int(g) for g in gens if int(g) != 0))
    return Subgroup(group, mask_to_bits(closure_mask(group, gens)), gens)


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    if K <= H:
        return H
    if H <= K:
        return K
    G = H.group
    gens = H.gens + tuple(g for g in K.gens if g not in H)
    return Subgroup(G, mask_to_bits(closure_mask(G, gens, H.mask)), gens)


def greedy_generators(group: Group, candidates: Iterable[int]) -> tuple[int, ...]:
    gens: list[int] = []
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    cand = [int(c) for c in candidates]
    target = len(cand)
    # elements of large order first keeps generating sets short
    cand.sort(key=lambda c: (-int(group.element_order[c]), c))
    for c in cand:
        if int(mask.sum()) == target:
            break
        if not mask[c]:
            gens.append(c)
            mask = closure_mask(group, gens, mask)
    return tuple(gens)


def subgroup_from_indices(group: Group, indices: Iterable[int], check: bool = True) -> Subgroup:
    idx = sorted(set(int(i) for i in indices) | {0})
    H = Subgroup(group, indices_to_bits(idx))
    if check:
        m = H.members
        if not H.mask[group.table[np.ix_(m, m)]].all():
            raise GroupError("element set is not closed under multiplication")
    return H


# -- conjugation ------------------------------------------------------------


def conjugate(H: Subgroup, g: int) -> Subgroup:
    """``H^g = g^-1 H g``."""
    G = H.group
    m = H.members
    img = G.table[G.table[G.inverse[g], m], g]
    mask = np.zeros(G.order, dtype=bool)
    mask[img] = True
    gens = None
    if H._gens is not None:
        gens = tuple(int(x) for x in G.table[G.table[G.inverse[g], list(H._gens)], g]) if H._gens else ()
    return Subgroup(G, mask_to_bits(mask), gens)


def conjugates(H: Subgroup, by: Subgroup | None = None) -> list[Subgroup]:
    """Orbit of ``H`` under conjugation by ``by`` (default: the whole group)."""
    G = H.group
    gens = by.gens if by is not None else G.generators
    seen = {H.bits: H}
    queue = deque([H])
    while queue:
        X = queue.popleft()
        for s in gens:
            Y = conjugate(X, s)
            if Y.bits not in seen:
                seen[Y.bits] = Y
                queue.append(Y)
    return sorted(seen.values(), key=lambda S: S.key)


def normalizes(G: Group, g_mask: np.ndarray, H: Subgroup) -> np.ndarray:
    """Boolean mask over ``g_mask`` elements: which ones normalise ``H``."""
    g = np.flatnonzero(g_mask)
    hg = np.asarray(H.gens, dtype=np.int64)
    if hg.size == 0:
        return np.ones(g.size, dtype=bool)
    img = G.table[G.table[G.inverse[g][:, None], hg[None, :]], g[:, None]]
    return H.mask[img].all(axis=1)


def normalizer(G: Group, H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    ambient = within.mask if within is not None else np.ones(G.order, dtype=bool)
    ok = normalizes(G, ambient, H)
    mask = np.zeros(G.order, dtype=bool)
    mask[np.flatnonzero(ambient)[ok]] = True
    return Subgroup(G, mask_to_bits(mask))


def is_normal(H: Subgroup, within: Subgroup | None = None) -> bool:
    G = H.group
    gens = within.gens if within is not None else G.generators
    if not gens:
        return True
    mask = np.zeros(G.order, dtype=bool)
    mask[list(gens)] = True
    return bool(normalizes(G, mask, H).all())


def core(G: Group, H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """Largest subgroup of ``H`` normal in ``within`` (default ``G``)."""
    bits = H.bits
    for X in conjugates(H, within):
        bits &= X.bits
    return Subgroup(G, bits)


def normal_closure(G: Group, elems: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    """Smallest subgroup normalised by ``within`` containing ``elems``."""
    conj_by = within.gens if within is not None else G.generators
    gens = [int(e) for e in dict.fromkeys(elems) if int(e) != 0]
    mask = closure_mask(G, gens)
    queue = deque(gens)
    while queue:
        x = queue.popleft()
        for s in conj_by:
            y = int(G.table[G.table[G.inverse[s], x], s])
            if not mask[y]:
                gens.append(y)
                queue.append(y)
                mask = closure_mask(G, gens, mask)
    return Subgroup(G, mask_to_bits(mask), tuple(gens))


def conjugacy_class_labels(G: Group, within: Subgroup | None = None) -> np.ndarray:
    """Label each element by the least index in its conjugacy class."""
    conj_by = within.gens if within is not None else G.generators
    ar = np.arange(G.order)
    perms = [G.table[G.table[G.inverse[s], ar], s] for s in conj_by]
    perms += [np.argsort(p) for p in perms]
    label = ar.copy()
    while True:
        new = label
        for p in perms:
            new = np.minimum(new, new[p])
        if np.array_equal(new, label):
            return label
        label = new


def center(G: Group) -> Subgroup:
    return centralizer_of_section(G, G.whole, G.trivial, check=False)


def commutes_with_all(G: Group, x: np.ndarray, ys: Sequence[int], modulo: np.ndarray) -> np.ndarray:
    """For each ``x``: do all commutators ``[x, y]`` lie in ``modulo``?"""
    x = np.asarray(x)
    ys = np.asarray(ys, dtype=np.int64)
    if ys.size == 0:
        return np.ones(x.size, dtype=bool)
    inv = G.inverse
    comm = G.table[G.table[inv[x][:, None], inv[ys][None, :]], G.table[x[:, None], ys[None, :]]]
    return modulo[comm].all(axis=1)


def centralizer_of_section(G: Group, H: Subgroup, K: Subgroup, check: bool = True) -> Subgroup:
    """``C_G(H/K) = {g : [g, h] in K for all h in H}``."""
    if check:
        if not K <= H:
            raise GroupError("K must be contained in H")
        if not (is_normal(H) and is_normal(K)):
            raise NotNormalError("H and K must be normal in G")
    ok = commutes_with_all(G, np.arange(G.order), H.gens, K.mask)
    return Subgroup(G, mask_to_bits(ok))


def upper_central_series(G: Group) -> list[Subgroup]:
    terms = [G.trivial]
    while True:
        nxt = centralizer_of_section(G, G.whole, terms[-1], check=False)
        if nxt.bits == terms[-1].bits:
            return terms
        terms.append(nxt)


# -- constructors -----------------------------------------------------------


def from_generators(
    gens: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable,
    label: str = "",
    cap: int | None = None,
) -> Group:
    """Close ``gens`` under ``mul``; elements ordered identity first, then BFS."""
    cap = order_cap() if cap is None else cap
    elems = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = mul(x, s)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                if len(elems) > cap:
                    raise OrderCapExceeded(f"group order exceeds cap {cap}")
                queue.append(y)
    n = len(elems)
    table = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elems):
        table[i] = [index[mul(a, b)] for b in elems]
    return Group(table, label=label, generators=[index[g] for g in gens], elements=elems)


def _perm_mul(a: tuple, b: tuple) -> tuple:
    # apply a first, then b
    return tuple(b[i] for i in a)


def from_permutations(perms: Sequence[Sequence[int]], label: str = "", cap: int | None = None) -> Group:
    perms = [tuple(int(x) for x in p) for p in perms]
    if not perms:
        return cyclic(1, label=label or "C1")
    degree = len(perms[0])
    for p in perms:
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise GroupError(f"not a permutation of 0..{degree - 1}: {p}")
    if degree > 16:
        raise GroupError("permutation input limited to 16 points")
    return from_generators(perms, _perm_mul, tuple(range(degree)), label=label, cap=cap)


def from_cayley(table: Sequence[Sequence[int]], label: str = "") -> Group:
    """Validate and ingest an arbitrary Cayley table, moving the identity to 0."""
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError("Cayley table must be a non-empty square array")
    n = t.shape[0]
    if n > order_cap():
        raise OrderCapExceeded(f"group order {n} exceeds cap {order_cap()}")
    if t.min() < 0 or t.max() >= n:
        raise GroupError("table entries out of range")
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)]
    if not ids:
        raise GroupError("table has no identity element")
    e = ids[0]
    order = [e] + [x for x in range(n) if x != e]
    pos = np.empty(n, dtype=np.int64)
    pos[order] = ar
    new = pos[t[np.ix_(order, order)]]
    return Group(new, label=label, validate=True)


def cyclic(n: int, label: str = "") -> Group:
    if n < 1:
        raise GroupError("cyclic order must be positive")
    return from_generators([1 % n], lambda a, b: (a + b) % n, 0, label=label or f"C{n}")


def dihedral(order: int, label: str = "") -> Group:
    """Dihedral group of the given order ``2n`` as pairs ``(rotation, flip)``."""
    if order < 2 or order % 2:
        raise GroupError("dihedral order must be even")
    n = order // 2

    def mul(a, b):
        return ((a[0] + (-1) ** a[1] * b[0]) % n, (a[1] + b[1]) % 2)

    return from_generators([(1 % n, 0), (0, 1)], mul, (0, 0), label=label or f"D{order}")


def quaternion(order: int, label: str = "") -> Group:
    """Generalised quaternion group ``<a, x | a^2m = 1, x^2 = a^m, a^x = a^-1>``."""
    if order not in (8, 16):
        raise GroupError("quaternion order must be 8 or 16")
    m = order // 4

    def mul(a, b):
        k1, s1 = a
        k2, s2 = b
        if s1 == 0:
            return ((k1 + k2) % (2 * m), s2)
        if s2 == 0:
            return ((k1 - k2) % (2 * m), 1)
        return ((k1 - k2 + m) % (2 * m), 0)

    return from_generators([(1, 0), (0, 1)], mul, (0, 0), label=label or f"Q{order}")


def symmetric(n: int, label: str = "") -> Group:
    if not 1 <= n <= 6:
        raise GroupError("symmetric degree must be in 1..6")
    gens = []
    if n >= 2:
        gens = [(1, 0) + tuple(range(2, n)), tuple(range(1, n)) + (0,)]
    return from_permutations(gens or [tuple(range(n))], label=label or f"S{n}")


def alternating(n: int, label: str = "") -> Group:
    if not 1 <= n <= 6:
        raise GroupError("alternating degree must be in 1..6")
    gens = []
    for i in range(n - 2):
        p = list(range(n))
        p[i], p[i + 1], p[i + 2] = i + 1, i + 2, i
        gens.append(tuple(p))
    return from_permutations(gens or [tuple(range(n))], label=label or f"A{n}")


def elementary_abelian(p: int, k: int, label: str = "") -> Group:
    if not is_prime(p) or k < 1:
        raise GroupError("elementary abelian group needs a prime p and k >= 1")
    gens = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    return from_generators(
        gens,
        lambda a, b: tuple((x + y) % p for x, y in zip(a, b)),
        (0,) * k,
        label=label or (f"C{p}^{k}" if k > 1 else f"C{p}"),
    )


def direct(G1: Group, G2: Group, label: str = "") -> Group:
    if G1.order * G2.order > order_cap():
        raise OrderCapExceeded(f"group order {G1.order * G2.order} exceeds cap {order_cap()}")
    t1, t2 = G1.table, G2.table
    gens = [(g, 0) for g in G1.generators] + [(0, h) for h in G2.generators]
    return from_generators(
        gens or [(0, 0)],
        lambda a, b: (int(t1[a[0], b[0]]), int(t2[a[1], b[1]])),
        (0, 0),
        label=label or f"{G1.label}x{G2.label}",
    )


def extend_homomorphism(
    H: Group,
    gen_images: dict[int, Hashable],
    compose: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable,
) -> list:
    """Images of every element of ``H`` under the map fixed on generators.

    Raises ``GroupError`` when the assignment does not extend to a
    homomorphism.
    """
    images: list = [None] * H.order
    images[0] = identity
    queue = deque([0])
    gens = list(gen_images)
    while queue:
        x = queue.popleft()
        for s in gens:
            y = int(H.table[x, s])
            img = compose(images[x], gen_images[s])
            if images[y] is None:
                images[y] = img
                queue.append(y)
    if any(im is None for im in images):
        raise GroupError("generator images do not cover the group")
    for x in range(H.order):
        for s in gens:
            if images[int(H.table[x, s])] != compose(images[x], gen_images[s]):
                raise GroupError("generator images do not define a homomorphism")
    return images


def matrix_action(N: Group, H: Group, gen_matrices: dict[int, Sequence[Sequence[int]]], p: int) -> list[list[int]]:
    """Action table of ``H`` on an elementary abelian ``N`` given by matrices mod ``p``.

    ``N`` must carry coordinate vectors as element labels (as built by
    :func:`elementary_abelian`).  Matrices act on column vectors.
    """
    if N.elements is None or not isinstance(N.elements[0], tuple):
        raise GroupError("N must carry vector element labels")
    k = len(N.elements[0])
    index = {v: i for i, v in enumerate(N.elements)}

    def matmul(A, B):
        return tuple(
            tuple(sum(A[i][t] * B[t][j] for t in range(k)) % p for j in range(k)) for i in range(k)
        )

    ident = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    mats = {g: tuple(tuple(int(x) % p for x in row) for row in M) for g, M in gen_matrices.items()}
    images = extend_homomorphism(H, mats, matmul, ident)
    return [
        [index[tuple(sum(M[i][j] * v[j] for j in range(k)) % p for i in range(k))] for v in N.elements]
        for M in images
    ]


def semidirect(N: Group, H: Group, action: Sequence[Sequence[int]], label: str = "") -> Group:
    """External semidirect product with ``(n1,h1)(n2,h2) = (n1 * h1(n2), h1 h2)``.

    ``action[h]`` is the permutation of ``N``'s indices induced by ``h``.
    """
    act = np.asarray(action, dtype=np.int64)
    if act.shape != (H.order, N.order):
        raise GroupError("action table must have shape |H| x |N|")
    tn, th = N.table, H.table
    for h in range(H.order):
        a = act[h]
        if sorted(a.tolist()) != list(range(N.order)) or a[0] != 0:
            raise GroupError("action is not by bijections fixing the identity")
        if not np.array_equal(a[tn], tn[np.ix_(a, a)]):
            raise GroupError("action is not by automorphisms")
    for h1 in range(H.order):
        if not np.array_equal(act[th[h1]], act[h1][act]):
            raise GroupError("action is not a homomorphism")
    if N.order * H.order > order_cap():
        raise OrderCapExceeded(f"group order {N.order * H.order} exceeds cap {order_cap()}")
    gens = [(g, 0) for g in N.generators] + [(0, h) for h in H.generators]
    return from_generators(
        gens or [(0, 0)],
        lambda a, b: (int(tn[a[0], act[a[1], b[0]]]), int(th[a[1], b[1]])),
        (0, 0),
        label=label or f"{N.label}:{H.label}",
    )


def subgroup_as_group(H: Subgroup) -> tuple[Group, np.ndarray]:
    """``H`` as a standalone group plus the embedding (local index -> parent index).

    Local order follows parent index order, so the identity stays first.
    """
    G = H.group
    cache = G.cache.setdefault("as_group", {})
    if H.bits in cache:
        return cache[H.bits]
    m = H.members
    local = np.full(G.order, -1, dtype=np.int64)
    local[m] = np.arange(m.size)
    table = local[G.table[np.ix_(m, m)]]
    gens = [int(local[g]) for g in H.gens]
    S = Group(table, label=f"{G.label}[{H.order}]", generators=gens)
    cache[H.bits] = (S, m)
    return S, m


def image_in(G: Group, S: Group, embedding: np.ndarray, K: Subgroup) -> Subgroup:
    """Push a subgroup of ``S`` (a subgroup-as-group of ``G``) into ``G``."""
    return Subgroup(G, indices_to_bits(embedding[K.members]))


def preimage_in(S: Group, embedding: np.ndarray, K: Subgroup) -> Subgroup:
    """Pull a subgroup of the parent back into the subgroup-as-group ``S``."""
    local = np.flatnonzero(K.mask[embedding])
    return Subgroup(S, indices_to_bits(local))


# -- quotients --------------------------------------------------------------


class Quotient:
    """``M/N`` for subgroups ``N ⊴ M`` of a parent group, with projection."""

    def __init__(self, group: Group, projection: np.ndarray, parent: Group, top: Subgroup, kernel: Subgroup):
        self.group = group
        self.projection = projection  # parent index -> coset index, -1 outside top
        self.parent = parent
        self.top = top
        self.kernel = kernel

    def image(self, H: Subgroup) -> Subgroup:
        idx = self.projection[H.members]
        return Subgroup(self.group, indices_to_bits(idx[idx >= 0]))

    def preimage(self, X: Subgroup) -> Subgroup:
        mask = (self.projection >= 0) & X.mask[np.maximum(self.projection, 0)]
        return Subgroup(self.parent, mask_to_bits(mask))


def quotient(G: Group, N: Subgroup, top: Subgroup | None = None, check: bool = True) -> Quotient:
    """Quotient ``top/N`` (``top`` defaults to ``G``).  Cosets ordered by least member."""
    top = G.whole if top is None else top
    cache = G.cache.setdefault("quotients", {})
    key = (top.bits, N.bits)
    if key in cache:
        return cache[key]
    if check:
        if not N <= top:
            raise GroupError("kernel not contained in the ambient subgroup")
        if not is_normal(N, top):
            raise NotNormalError("subgroup is not normal")
    proj = np.full(G.order, -1, dtype=np.int64)
    reps = []
    nm = N.members
    for x in top.members:
        if proj[x] < 0:
            proj[G.table[x, nm]] = len(reps)
            reps.append(int(x))
    reps = np.asarray(reps, dtype=np.int64)
    table = proj[G.table[np.ix_(reps, reps)]]
    gens = sorted({int(proj[g]) for g in top.gens} - {0})
    Q = Group(table, label=f"{G.label}/{N.order}" if top.is_whole() else f"{G.label}[{top.order}/{N.order}]",
              generators=gens)
    result = Quotient(Q, proj, G, top, N)
    cache[key] = result
    return result


def is_chief_factor(G: Group, H: Subgroup, K: Subgroup) -> bool:
    if not (K < H and is_normal(H) and is_normal(K)):
        return False
    labels = conjugacy_class_labels(G)
    outside = H.mask & ~K.mask
    for rep in np.unique(labels[outside]):
        if normal_closure(G, list(K.gens) + [int(rep)]).bits != H.bits:
            return False
    return True


def section_semidirect(G: Group, H: Subgroup, K: Subgroup, check: bool = True, cap: int | None = None) -> Group:
    """``(H/K) ⋊ (G/C_G(H/K))`` with the conjugation action.

    Elements are pairs ``(factor coset, actor coset)`` encoded as
    ``v * |actor| + a``; both coset orderings put the identity first.
    """
    cap = section_cap() if cap is None else cap
    if check and not is_chief_factor(G, H, K):
        raise GroupError("H/K is not a chief factor of G")
    C = centralizer_of_section(G, H, K, check=False)
    fac = quotient(G, K, top=H, check=False)
    act_q = quotient(G, C, check=False)
    nv, na = fac.group.order, act_q.group.order
    if nv * na > cap:
        raise OrderCapExceeded(f"section order {nv * na} exceeds section cap {cap}")
    vreps = np.array([int(np.flatnonzero(fac.projection == i)[0]) for i in range(nv)])
    areps = np.array([int(np.flatnonzero(act_q.projection == i)[0]) for i in range(na)])
    # action[a, v] = coset of r_a * r_v * r_a^-1
    conj = G.table[G.table[areps[:, None], vreps[None, :]], G.inverse[areps][:, None]]
    action = fac.projection[conj]
    ft, at = fac.group.table, act_q.group.table
    v_part = ft[np.arange(nv)[:, None, None], action[None, :, :]]  # (v1, a1, v2)
    table = v_part[:, :, :, None] * na + at[None, :, None, :]  # (v1, a1, v2, a2)
    table = table.reshape(nv * na, nv * na)
    gens = [v * na for v in fac.group.generators] + list(act_q.group.generators)
    return Group(table, label=f"sec({G.label};{H.order}/{K.order})", generators=gens)


# -- isomorphism (desk scale) ----------------------------------------------


def are_isomorphic(G: Group, H: Group) -> bool:
    """Backtracking search over images of a generating set of ``G``."""
    if G.order != H.order:
        return False
    if sorted(G.element_order.tolist()) != sorted(H.element_order.tolist()):
        return False
    if G.is_abelian() != H.is_abelian():
        return False
    gens = list(G.generators)
    if not gens:
        return True
    # express every element of G as (predecessor, generator)
    parent = [(-1, -1)] * G.order
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    queue = deque([0])
    order_bfs = [0]
    while queue:
        x = queue.popleft()
        for i, s in enumerate(gens):
            y = int(G.table[x, s])
            if not seen[y]:
                seen[y] = True
                parent[y] = (x, i)
                order_bfs.append(y)
                queue.append(y)
    candidates = [np.flatnonzero(H.element_order == G.element_order[s]).tolist() for s in gens]

    def try_images(imgs):
        phi = np.zeros(G.order, dtype=np.int64)
        for y in order_bfs[1:]:
            x, i = parent[y]
            phi[y] = H.table[phi[x], imgs[i]]
        if np.unique(phi).size != G.order:
            return False
        return bool(np.array_equal(phi[G.table], H.table[np.ix_(phi, phi)]))

    def search(i, imgs):
        if i == len(gens):
            return try_images(imgs)
        for c in candidates[i]:
            if c in imgs:
                continue
            if search(i + 1, imgs + [c]):
                return True
        return False

    return search(0, [])


# -- ingestion --------------------------------------------------------------


def load_group_document(doc: dict, label: str = "") -> Group:
    label = doc.get("label", label)
    if "cayley" in doc:
        return from_cayley(doc["cayley"], label=label)
    if "permutations" in doc:
        return from_permutations(doc["permutations"], label=label)
    raise GroupError("group document needs a 'cayley' or 'permutations' field")


def load_group_file(path: str | os.PathLike) -> Group:
    path = Path(path)
    doc = json.loads(path.read_text(encoding="utf-8"))
    return load_group_document(doc, label=path.stem)


def lcm_of(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * int(v) // math.gcd(out, int(v))
    return out


# -- descriptors ------------------------------------------------------------


def construct_group(desc, label: str = "") -> Group:
    """Build a group from a constructor descriptor.

    Descriptors are tuples whose head names the constructor::

        ("cyclic", n) ("dihedral", 2n) ("symmetric", n) ("alternating", n)
        ("quaternion", 8|16) ("elementary_abelian", p, k)
        ("direct", d1, d2) ("semidirect", dN, dH, action)
        ("from_cayley", table) ("from_permutations", perms)

    A semidirect ``action`` is either an explicit table (one permutation
    of N's indices per element of H) or ``("matrices", p, [M_1, ...])``
    giving one matrix per generator of H, acting on N's coordinate vectors.
    """
    if isinstance(desc, Group):
        return desc
    head, *args = desc
    simple = {
        "cyclic": cyclic,
        "dihedral": dihedral,
        "symmetric": symmetric,
        "alternating": alternating,
        "quaternion": quaternion,
    }
    if head in simple:
        (n,) = args
        G = simple[head](n, label=label)
    elif head == "elementary_abelian":
        p, k = args
        G = elementary_abelian(p, k, label=label)
    elif head == "direct":
        G = direct(construct_group(args[0]), construct_group(args[1]), label=label)
    elif head == "semidirect":
        N, H = construct_group(args[0]), construct_group(args[1])
        action = args[2]
        if isinstance(action, tuple) and action and action[0] == "matrices":
            _, p, mats = action
            action = matrix_action(N, H, dict(zip(H.generators, mats)), p)
        G = semidirect(N, H, action, label=label)
    elif head == "from_cayley":
        G = from_cayley(args[0], label=label)
    elif head == "from_permutations":
        G = from_permutations(args[0], label=label)
    else:
        raise GroupError(f"unknown constructor {head!r}")
    if G.order > order_cap():
        raise OrderCapExceeded(f"group order {G.order} exceeds cap {order_cap()}")
    return G
