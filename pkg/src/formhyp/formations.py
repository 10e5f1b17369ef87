"""Formation membership, F-central chief factors, F-hypercenters and Int_F."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .groups import (
    Group,
    GroupError,
    Subgroup,
    centralizer_of_section,
    closure_mask,
    commutes_with_all,
    is_chief_factor,
    is_prime,
    join,
    pi_part,
    prime_factors,
    section_semidirect,
    subgroup_as_group,
)
from .lattice import all_subgroups, chief_terms, minimal_normal_over


class SpecError(ValueError):
    """Unparsable partition or formation string."""


# -- partitions -------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """A partition of all primes: explicit finite blocks plus a tail policy.

    ``default_policy`` is ``"singletons"`` (each unlisted prime alone) or
    ``"one_block"`` (all unlisted primes together).
    """

    blocks: tuple[frozenset[int], ...] = ()
    default_policy: str = "singletons"

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise SpecError("empty partition block")
            for p in b:
                if not is_prime(p):
                    raise SpecError(f"{p} is not prime")
                if p in seen:
                    raise SpecError(f"prime {p} listed in two blocks")
                seen.add(p)
        if self.default_policy not in ("singletons", "one_block"):
            raise SpecError(f"unknown tail policy {self.default_policy!r}")

    @classmethod
    def parse(cls, text: str) -> Partition:
        text = text.strip()
        policy = "singletons"
        if text in ("", "singletons"):
            return cls()
        head, _, tail = text.partition(";")
        if head.startswith("rest="):
            head, tail = "", head
        if tail:
            m = re.fullmatch(r"\s*rest\s*=\s*(singletons|oneblock|one_block)\s*", tail)
            if not m:
                raise SpecError(f"bad partition tail {tail!r}")
            policy = "singletons" if m.group(1) == "singletons" else "one_block"
        blocks = []
        if head.strip():
            for chunk in head.split("|"):
                try:
                    primes = [int(x) for x in chunk.split(",")]
                except ValueError as exc:
                    raise SpecError(f"bad partition block {chunk!r}") from exc
                if len(set(primes)) != len(primes):
                    raise SpecError(f"repeated prime in block {chunk!r}")
                blocks.append(frozenset(primes))
        blocks.sort(key=min)
        return cls(tuple(blocks), policy)

    def block_id(self, p: int):
        for i, b in enumerate(self.blocks):
            if p in b:
                return i
        return ("p", p) if self.default_policy == "singletons" else "rest"

    def same_block(self, primes) -> bool:
        return len({self.block_id(p) for p in primes}) <= 1

    def blocks_meeting(self, primes) -> list[frozenset[int]]:
        """The blocks meeting ``primes``, each cut down to the primes given."""
        groups: dict = {}
        for p in sorted(primes):
            groups.setdefault(self.block_id(p), set()).add(p)
        return [frozenset(v) for v in groups.values()]

    def __str__(self) -> str:
        head = "|".join(",".join(map(str, sorted(b))) for b in self.blocks)
        if self.default_policy == "one_block":
            return f"{head};rest=oneblock" if head else "rest=oneblock"
        return head or "singletons"


# -- formation specs --------------------------------------------------------


@dataclass(frozen=True)
class Nilpotent:
    def __str__(self):
        return "nilpotent"


@dataclass(frozen=True)
class SigmaNilpotent:
    partition: Partition

    def __str__(self):
        return f"nsigma:{self.partition}"


@dataclass(frozen=True)
class Supersoluble:
    def __str__(self):
        return "supersoluble"


@dataclass(frozen=True)
class PiGroups:
    primes: frozenset[int]

    def __str__(self):
        return "pigroups:" + ",".join(map(str, sorted(self.primes)))


@dataclass(frozen=True)
class WBar:
    inner: "Formation"

    def __str__(self):
        return f"wbar({self.inner})"


@dataclass(frozen=True)
class VStar:
    inner: "Formation"

    def __str__(self):
        return f"vstar({self.inner})"


@dataclass(frozen=True)
class ZClosure:
    inner: "Formation"

    def __str__(self):
        return f"z({self.inner})"


Formation = Union[Nilpotent, SigmaNilpotent, Supersoluble, PiGroups, WBar, VStar, ZClosure]


def is_hereditary(F: Formation) -> bool:
    if isinstance(F, (WBar, VStar, ZClosure)):
        return is_hereditary(F.inner)
    return True


def parse_formation(text: str) -> Formation:
    text = text.strip()
    for name, cls in (("wbar", WBar), ("vstar", VStar), ("z", ZClosure)):
        if text.startswith(name + "(") and text.endswith(")"):
            return cls(parse_formation(text[len(name) + 1 : -1]))
    if text == "nilpotent":
        return Nilpotent()
    if text == "supersoluble":
        return Supersoluble()
    if text.startswith("pigroups:"):
        try:
            primes = frozenset(int(x) for x in text[len("pigroups:") :].split(","))
        except ValueError as exc:
            raise SpecError(f"bad prime list in {text!r}") from exc
        if not all(is_prime(p) for p in primes):
            raise SpecError(f"non-prime in {text!r}")
        return PiGroups(primes)
    if text.startswith("nsigma:"):
        return SigmaNilpotent(Partition.parse(text[len("nsigma:") :]))
    raise SpecError(f"unknown formation {text!r}")


# -- membership -------------------------------------------------------------


def _is_nilpotent(G: Group) -> bool:
    # every Sylow is normal <=> the p-elements number exactly |G|_p
    return all(int(pi_elements_mask(G, [p]).sum()) == pi_part(G.order, [p]) for p in G.primes)


def pi_elements_mask(G: Group, primes) -> np.ndarray:
    primes = frozenset(primes)
    allowed = [o for o in set(G.element_order.tolist()) if prime_factors(o) <= primes]
    return np.isin(G.element_order, allowed)


def _is_sigma_nilpotent(G: Group, sigma: Partition) -> bool:
    for block in sigma.blocks_meeting(G.primes):
        elems = np.flatnonzero(pi_elements_mask(G, block))
        generated = closure_mask(G, elems.tolist())
        if not prime_factors(int(generated.sum())) <= block:
            return False
    return True


def _is_supersoluble(G: Group) -> bool:
    terms = [G.trivial]
    while not terms[-1].is_whole():
        M = minimal_normal_over(G, terms[-1])[0]
        if not is_prime(M.order // terms[-1].order):
            return False
        terms.append(M)
    return True


def formation_membership(F: Formation, G: Group) -> bool:
    key = ("member", str(F))
    if key in G.cache:
        return G.cache[key]
    if isinstance(F, Nilpotent):
        result = _is_nilpotent(G)
    elif isinstance(F, SigmaNilpotent):
        result = _is_sigma_nilpotent(G, F.partition)
    elif isinstance(F, Supersoluble):
        result = _is_supersoluble(G)
    elif isinstance(F, PiGroups):
        result = G.primes <= F.primes
    elif isinstance(F, WBar):
        from .lattice import sylow_subgroups
        from .subnormality import is_k_f_subnormal

        result = all(
            is_k_f_subnormal(F.inner, P, G) for p in sorted(G.primes) for P in sylow_subgroups(G, p)
        )
    elif isinstance(F, VStar):
        from .lattice import cyclic_primary_subgroups
        from .subnormality import is_k_f_subnormal

        result = all(is_k_f_subnormal(F.inner, C, G) for C in cyclic_primary_subgroups(G))
    elif isinstance(F, ZClosure):
        result = hypercenter(F.inner, G).is_whole()
    else:
        raise SpecError(f"unsupported formation {F!r}")
    G.cache[key] = result
    return result


def subgroup_in(F: Formation, H: Subgroup) -> bool:
    """Is the subgroup ``H`` (as an abstract group) a member of ``F``?"""
    if H.is_trivial():
        return True
    if H.is_whole():
        return formation_membership(F, H.group)
    S, _ = subgroup_as_group(H)
    return formation_membership(F, S)


# -- centrality -------------------------------------------------------------


def _exponent_divides(G: Group, k: int, modulo: np.ndarray) -> bool:
    return bool(modulo[G.power(np.arange(G.order), k)].all())


def is_f_central(F: Formation, G: Group, H: Subgroup, K: Subgroup, route: str = "auto", check: bool = True) -> bool:
    """Is the chief factor ``H/K`` F-central in ``G``?

    ``route="generic"`` builds ``(H/K) ⋊ G/C_G(H/K)`` and tests membership;
    ``route="fast"`` uses the closed-form criterion where one exists.
    """
    if check and not is_chief_factor(G, H, K):
        raise GroupError("H/K is not a chief factor of G")
    if route not in ("auto", "fast", "generic"):
        raise ValueError(f"unknown route {route!r}")
    fast = route != "generic" and isinstance(F, (Nilpotent, SigmaNilpotent, Supersoluble, PiGroups))
    if route == "fast" and not fast:
        raise ValueError(f"no fast centrality route for {F}")
    if not fast:
        cache = G.cache.setdefault("section", {})
        key = (H.bits, K.bits)
        if key not in cache:
            cache[key] = section_semidirect(G, H, K, check=False)
        return formation_membership(F, cache[key])
    C = centralizer_of_section(G, H, K, check=False)
    factor_primes = prime_factors(H.order // K.order)
    actor_primes = prime_factors(G.order // C.order)
    if isinstance(F, Nilpotent):
        return len(factor_primes | actor_primes) == 1
    if isinstance(F, SigmaNilpotent):
        return F.partition.same_block(factor_primes | actor_primes)
    if isinstance(F, PiGroups):
        return factor_primes | actor_primes <= F.primes
    p = H.order // K.order
    if not is_prime(p):
        return False
    gens = G.generators
    if not commutes_with_all(G, np.asarray(gens, dtype=np.int64), gens, C.mask).all():
        return False
    return _exponent_divides(G, p - 1, C.mask)


# -- hypercenter ------------------------------------------------------------


def hypercenter(F: Formation, G: Group, route: str = "auto") -> Subgroup:
    """``Z_F(G)`` by ascent: absorb every F-central minimal normal subgroup of ``G/Z``."""
    key = ("hypercenter", str(F), route)
    if key in G.cache:
        return G.cache[key]
    Z = G.trivial
    while True:
        central = [
            N for N in minimal_normal_over(G, Z) if is_f_central(F, G, N, Z, route=route, check=False)
        ]
        if not central:
            break
        for N in central:
            Z = join(Z, N)
    G.cache[key] = Z
    return Z


def hypercenter_oracle(F: Formation, G: Group) -> Subgroup:
    """Largest normal subgroup with every chief factor below it F-central.

    Independent of the ascent: scans the normal-subgroup lattice, uses the
    generic centrality route, and checks that the hypercentral subgroups
    have a unique maximum.
    """
    hyper = []
    for N in normal_subgroups_of(G):
        terms = chief_terms(G, below=N)
        if all(
            is_f_central(F, G, B, A, route="generic", check=False) for A, B in zip(terms, terms[1:])
        ):
            hyper.append(N)
    top = max(hyper, key=lambda S: S.order)
    if any(S.bits & ~top.bits for S in hyper):
        raise GroupError("hypercentral normal subgroups have no unique maximum")
    return top


def normal_subgroups_of(G: Group) -> list[Subgroup]:
    return all_subgroups(G).normal


# -- intersection of F-maximal subgroups -----------------------------------


def f_maximal_subgroups(F: Formation, G: Group, hereditary: bool = True) -> list[Subgroup]:
    """F-maximal subgroups of ``G``.

    With ``hereditary`` set, subgroups of a known F-subgroup are not
    re-tested, and the scan runs top-down so the first hits are maximal.
    """
    if formation_membership(F, G):
        return [G.whole]
    found: list[Subgroup] = []
    for S in sorted(all_subgroups(G), key=lambda S: (-S.order, S.key)):
        covered = any(S.bits & ~T.bits == 0 for T in found)
        if covered and hereditary:
            continue
        if subgroup_in(F, S) and not covered:
            found.append(S)
    return sorted(found, key=lambda S: S.key)


def int_f(F: Formation, G: Group, hereditary: bool = True) -> Subgroup:
    bits = G.whole.bits
    for M in f_maximal_subgroups(F, G, hereditary):
        bits &= M.bits
    return Subgroup(G, bits)
