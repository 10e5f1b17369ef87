"""Verification suites over the catalog and their newline-delimited reports."""

from __future__ import annotations

import json
import random
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .catalog import builtin_catalog
from .critical import (
    Verdict,
    hall_decomposition_check,
    n_critical_graph,
    n_critical_graph_of_class,
)
from .formations import (
    Formation,
    Nilpotent,
    Partition,
    SigmaNilpotent,
    Supersoluble,
    VStar,
    WBar,
    ZClosure,
    formation_membership,
    hypercenter,
    hypercenter_oracle,
    int_f,
    is_f_central,
    subgroup_in,
)
from .groups import (
    Group,
    Subgroup,
    conjugate,
    conjugates,
    image_in,
    join,
    normalizer,
    quotient,
    subgroup_as_group,
    upper_central_series,
)
from .lattice import (
    all_subgroups,
    chief_series,
    hall_subgroups,
    pi_maximal_subgroups,
    sylow_subgroups,
)
from .subnormality import c_f, is_k_f_subnormal, s_f, sylow_family

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
DEFAULT_FORMATIONS = ("nilpotent", "supersoluble", "nsigma:2,3")


@dataclass(frozen=True)
class Record:
    suite: str
    group: str
    check: str
    status: str
    formation: str = ""
    sigma: str = ""
    detail: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "suite": self.suite,
            "group": self.group,
            "check": self.check,
            "formation": self.formation,
            "sigma": self.sigma,
            "status": self.status,
            "detail": self.detail,
        }


@dataclass
class Report:
    suite: str
    records: list[Record] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(r.status == FAIL for r in self.records)

    def failures(self) -> list[Record]:
        return [r for r in self.records if r.status == FAIL]

    def add(self, group: str, check: str, ok: bool | None, formation="", sigma="", **detail) -> Record:
        status = SKIPPED if ok is None else PASS if ok else FAIL
        rec = Record(self.suite, group, check, status, str(formation), str(sigma), detail)
        self.records.append(rec)
        return rec

    def extend(self, other: Report) -> Report:
        self.records.extend(other.records)
        return self

    def sorted_records(self) -> list[Record]:
        return sorted(self.records, key=lambda r: (r.suite, r.group, r.check, r.formation, r.sigma))

    def to_ndjson(self) -> str:
        return "".join(
            json.dumps(r.to_document(), sort_keys=True, separators=(",", ":")) + "\n" for r in self.sorted_records()
        )

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for r in self.records:
            out[r.status] += 1
        return out


def _orders(*subs: Subgroup) -> list[int]:
    return [S.order for S in subs]


def _groups(tier) -> list[Group]:
    return builtin_catalog().tier(tier)


def _formation(text: str | Formation) -> Formation:
    from .formations import parse_formation

    return parse_formation(text) if isinstance(text, str) else text


# -- normaliser and hypercenter suites --------------------------------------


def verify_theorem1(sigma: Partition, tier="medium", oracle: bool = False, groups: Iterable[Group] | None = None) -> Report:
    """S_F(G) = C_F(G) = Z_F(G) = Int_F(G) for F the σ-nilpotent groups."""
    F = SigmaNilpotent(sigma)
    rep = Report("theorem1")
    for G in groups if groups is not None else _groups(tier):
        S, C, Z, I = s_f(F, G), c_f(F, G), hypercenter(F, G), int_f(F, G)
        ok = S.bits == C.bits == Z.bits == I.bits
        detail = {"orders": {"S": S.order, "C": C.order, "Z": Z.order, "Int": I.order}}
        if not ok:
            detail["witness"] = {k: X.members.tolist() for k, X in zip("SCZI", (S, C, Z, I))}
        rep.add(G.label, "S=C=Z=Int", ok, F, sigma, **detail)
        if oracle:
            rep.add(G.label, "route_b", s_f(F, G, "B").bits == S.bits and c_f(F, G, "B").bits == C.bits, F, sigma)
            if G.order <= 60:
                rep.add(G.label, "hypercenter_oracle", hypercenter_oracle(F, G).bits == Z.bits, F, sigma)
    return rep


def sylow_normalizer_intersection(G: Group) -> Subgroup:
    bits = G.whole.bits
    for P in sylow_family(G):
        bits &= normalizer(G, P).bits
    return Subgroup(G, bits)


def verify_hall(tier="small", groups: Iterable[Group] | None = None) -> Report:
    """Hall: the Sylow-normaliser intersection is the hypercenter."""
    rep = Report("hall")
    N = Nilpotent()
    for G in groups if groups is not None else _groups(tier):
        D = sylow_normalizer_intersection(G)
        Z = hypercenter(N, G)
        U = upper_central_series(G)[-1]
        C = c_f(N, G)
        rep.add(G.label, "normalizers=hypercenter=upper_central", D.bits == Z.bits == U.bits, N,
                orders=_orders(D, Z, U))
        rep.add(G.label, "cyclic_primary_weak_subnormalizers", C.bits == Z.bits, N, orders=_orders(C, Z))
    return rep


def _normalizer_family_intersection(G: Group, family: list[Subgroup]) -> Subgroup:
    bits = G.whole.bits
    for H in family:
        bits &= normalizer(G, H).bits
    return Subgroup(G, bits)


def verify_corollary_gs(sigma: Partition, G: Group, family: str) -> Report:
    """Normaliser intersections over a conjugation-closed family covering all Sylows."""
    rep = Report("corollaries")
    F = SigmaNilpotent(sigma)
    blocks = sigma.blocks_meeting(G.primes)
    if family == "PiMaximalAll":
        fam = [H for block in blocks for H in pi_maximal_subgroups(G, block)]
    elif family == "HallSystem":
        fam = []
        for block in blocks:
            halls = hall_subgroups(G, block)
            if not halls:
                rep.add(G.label, family, None, F, sigma, reason=f"no Hall subgroup for block {sorted(block)}")
                return rep
            fam += sorted(conjugates(halls[0]), key=lambda S: S.key)
    else:
        raise ValueError(f"unknown family {family!r}")
    bits = {H.bits for H in fam}
    closed = all(conjugate(H, g).bits in bits for H in fam for g in G.generators)
    covers = all(any(P <= H for H in fam) for P in sylow_family(G))
    D = _normalizer_family_intersection(G, fam)
    Z = hypercenter(F, G)
    rep.add(G.label, f"{family}:conjugation_closed", closed, F, sigma)
    rep.add(G.label, f"{family}:covers_sylows", covers, F, sigma)
    rep.add(G.label, f"{family}:normalizers=hypercenter", D.bits == Z.bits, F, sigma, orders=_orders(D, Z),
            family_size=len(fam))
    return rep


def verify_corollaries(sigma: Partition, tier="small", groups: Iterable[Group] | None = None) -> Report:
    rep = Report("corollaries")
    for G in groups if groups is not None else _groups(tier):
        rep.extend(verify_corollary_gs(sigma, G, "PiMaximalAll"))
        rep.extend(verify_corollary_gs(sigma, G, "HallSystem"))
    return rep


def find_counterexample(F: Formation, tier="large", groups: Iterable[Group] | None = None) -> dict | None:
    """First group with S_F(G) != Z_F(G), scanning the tier in catalog order."""
    for G in groups if groups is not None else _groups(tier):
        S, Z = s_f(F, G), hypercenter(F, G)
        if S.bits != Z.bits:
            return {
                "group": G.label,
                "order": G.order,
                "formation": str(F),
                "s_f": S.members.tolist(),
                "hypercenter": Z.members.tolist(),
                "s_f_order": S.order,
                "hypercenter_order": Z.order,
            }
    return None


# -- property suites --------------------------------------------------------


def check_route_equivalence(F: Formation, G: Group, rep: Report) -> None:
    sa, sb = s_f(F, G, "A"), s_f(F, G, "B")
    ca, cb = c_f(F, G, "A"), c_f(F, G, "B")
    rep.add(G.label, "routes:s_f", sa.bits == sb.bits, F, orders=_orders(sa, sb))
    rep.add(G.label, "routes:c_f", ca.bits == cb.bits, F, orders=_orders(ca, cb))


def check_int_identity(F: Formation, G: Group, rep: Report) -> None:
    iw, iv = int_f(WBar(F), G), int_f(VStar(F), G)
    S, C = s_f(F, G), c_f(F, G)
    ok = iw.bits == S.bits and S <= C and C.bits == iv.bits
    rep.add(G.label, "int:wbar=S<=C=vstar", ok, F, orders=_orders(iw, S, C, iv))


def check_hypercenter_restriction(F: Formation, G: Group, rep: Report) -> None:
    Z = hypercenter(F, G)
    bad = []
    for H in all_subgroups(G):
        S, emb = subgroup_as_group(H)
        ZH = image_in(G, S, emb, hypercenter(F, S))
        if (Z & H).bits & ~ZH.bits:
            bad.append(H.members.tolist())
    rep.add(G.label, "hypercenter:restriction", not bad, F, witnesses=bad[:3])
    SZ, emb = subgroup_as_group(Z)
    rep.add(G.label, "hypercenter:idempotent", hypercenter(F, SZ).order == Z.order, F)
    if F_is_z_saturated(F):
        I = int_f(F, G)
        bad = [H.members.tolist() for H in all_subgroups(G) if subgroup_in(F, H) and not subgroup_in(F, join(H, Z))]
        rep.add(G.label, "hypercenter:join_f_subgroup", not bad, F, witnesses=bad[:3])
        rep.add(G.label, "hypercenter:inside_int", Z <= I, F, orders=_orders(Z, I))


def F_is_z_saturated(F: Formation) -> bool:
    return isinstance(F, (Nilpotent, Supersoluble, SigmaNilpotent))


def check_z_closure_hypercenter(F: Formation, G: Group, rep: Report) -> None:
    a, b = hypercenter(ZClosure(F), G), hypercenter(F, G)
    rep.add(G.label, "hypercenter:z_closure", a.bits == b.bits, F, orders=_orders(a, b))


def check_baer(G: Group, rep: Report) -> None:
    N = Nilpotent()
    a, b = int_f(N, G), hypercenter(N, G)
    rep.add(G.label, "baer:Int_N=Z_N", a.bits == b.bits, N, orders=_orders(a, b))


def check_hypercenter_oracle(F: Formation, G: Group, rep: Report) -> None:
    a, b = hypercenter(F, G), hypercenter_oracle(F, G)
    rep.add(G.label, "hypercenter:fixed_point=oracle", a.bits == b.bits, F, orders=_orders(a, b))


def chief_factor_pairs(G: Group) -> list[tuple[Subgroup, Subgroup]]:
    """Chief factors from two chief series with opposite tie-breaks."""
    seen: dict[tuple[int, int], tuple[Subgroup, Subgroup]] = {}
    for tb in ("least", "greatest"):
        for f in chief_series(G, tb).factors:
            seen.setdefault((f.upper.bits, f.lower.bits), (f.upper, f.lower))
    return list(seen.values())


def check_centrality_routes(F: Formation, G: Group, rep: Report) -> None:
    bad = []
    for H, K in chief_factor_pairs(G):
        if is_f_central(F, G, H, K, route="fast", check=False) != is_f_central(F, G, H, K, route="generic", check=False):
            bad.append([H.order, K.order])
    rep.add(G.label, "centrality:fast=generic", not bad, F, witnesses=bad)


def check_jordan_holder(G: Group, rep: Report) -> None:
    def signature(tb):
        return sorted((f.order, f.centralizer.bits) for f in chief_series(G, tb).factors)

    rep.add(G.label, "chief:jordan_holder", signature("least") == signature("greatest"))


def check_chain_methods(F: Formation, G: Group, rep: Report) -> None:
    bad = []
    for H in all_subgroups(G):
        verdicts = {m: is_k_f_subnormal(F, H, G, m) for m in ("fast", "maximal", "exhaustive")}
        if len(set(verdicts.values())) != 1:
            bad.append(H.members.tolist())
    rep.add(G.label, "ksn:maximal=exhaustive", not bad, F, witnesses=bad[:3])


def check_sylow(G: Group, rep: Report) -> None:
    from .groups import pi_part

    ok = True
    for p in sorted(G.primes):
        syl = sylow_subgroups(G, p)
        target = pi_part(G.order, [p])
        from_lattice = {S.bits for S in all_subgroups(G) if S.order == target}
        ok &= len(syl) % p == 1 and {S.bits for S in syl} == from_lattice
    rep.add(G.label, "sylow:count_and_lattice", ok)


def check_formation_closure(F: Formation, G: Group, rep: Report) -> None:
    """w̄F and v*F closed under subgroups and quotients; N ∪ F ⊆ w̄F ⊆ v*F."""
    W, V = WBar(F), VStar(F)
    bad = []
    lat = all_subgroups(G)
    for H in lat:
        S, _ = subgroup_as_group(H)
        n, f = formation_membership(Nilpotent(), S), formation_membership(F, S)
        w, v = formation_membership(W, S), formation_membership(V, S)
        if (n or f) and not w or w and not v:
            bad.append(("containment", H.order))
    if formation_membership(W, G):
        bad += [("wbar_sub", H.order) for H in lat if not subgroup_in(W, H)]
        bad += [("wbar_quot", N.order) for N in lat.normal if not formation_membership(W, quotient(G, N).group)]
    if formation_membership(V, G):
        bad += [("vstar_sub", H.order) for H in lat if not subgroup_in(V, H)]
        bad += [("vstar_quot", N.order) for N in lat.normal if not formation_membership(V, quotient(G, N).group)]
    rep.add(G.label, "closure:wbar_vstar", not bad, F, witnesses=bad[:3])


# -- sampled lemmas ----------------------------------------------------------


class _Sampler:
    """Random (H, R, N) configurations biased so each lemma's premise holds."""

    def __init__(self, groups: list[Group], formations: list[Formation], seed: int):
        self.rng = random.Random(seed)
        self.groups = sorted(groups, key=lambda G: G.label)
        self.formations = formations

    def pick(self):
        G = self.rng.choice(self.groups)
        F = self.rng.choice(self.formations)
        return G, F, all_subgroups(G)

    def ksn_in(self, F: Formation, M: Subgroup) -> list[Subgroup]:
        G = M.group
        cache = G.cache.setdefault(("ksn_in", str(F)), {})
        if M.bits not in cache:
            cache[M.bits] = [H for H in all_subgroups(G).contained_in(M) if is_k_f_subnormal(F, H, M)]
        return cache[M.bits]

    def choice(self, items):
        return self.rng.choice(list(items))


def _quotient_image(G: Group, N: Subgroup, H: Subgroup):
    Q = quotient(G, N)
    return Q, all_subgroups(Q.group).canonical(Q.image(join(H, N)))


LEMMAS = ("ksn:quotient_image", "ksn:preimage", "ksn:transitive", "ksn:meet_subgroup", "ksn:meet_pair", "ksn:join_normal", "ksn:z_closure")


def _sample_lemma(name: str, s: _Sampler):
    """One configuration: returns (group, formation, premise, conclusion, detail)."""
    G, F, lat = s.pick()
    if name == "ksn:quotient_image":
        N = s.choice(lat.normal)
        H = s.choice(s.ksn_in(F, G.whole))
        Q, img = _quotient_image(G, N, H)
        return G, F, True, is_k_f_subnormal(F, img, Q.group), (H.order, N.order)
    if name == "ksn:preimage":
        N = s.choice(lat.normal)
        Q = quotient(G, N)
        X = s.choice(s.ksn_in(F, Q.group.whole))
        H = lat.canonical(Q.preimage(X))
        return G, F, True, is_k_f_subnormal(F, H, G), (H.order, N.order)
    if name == "ksn:transitive":
        R = s.choice(s.ksn_in(F, G.whole))
        H = s.choice(s.ksn_in(F, R))
        return G, F, True, is_k_f_subnormal(F, H, G), (H.order, R.order)
    if name == "ksn:meet_subgroup":
        H = s.choice(s.ksn_in(F, G.whole))
        R = s.choice(lat)
        I = lat.get(H.bits & R.bits)
        return G, F, True, is_k_f_subnormal(F, I, R), (H.order, R.order)
    if name == "ksn:meet_pair":
        sn = s.ksn_in(F, G.whole)
        H, R = s.choice(sn), s.choice(sn)
        I = lat.get(H.bits & R.bits)
        return G, F, True, is_k_f_subnormal(F, I, G), (H.order, R.order)
    if name == "ksn:join_normal":
        R = s.choice(lat)
        H = s.choice(s.ksn_in(F, R))
        N = s.choice(lat.normal)
        HN, RN = lat.canonical(join(H, N)), lat.canonical(join(R, N))
        return G, F, True, is_k_f_subnormal(F, HN, RN), (H.order, R.order, N.order)
    if name == "ksn:z_closure":
        H = s.choice(lat)
        a, b = is_k_f_subnormal(F, H, G), is_k_f_subnormal(ZClosure(F), H, G)
        return G, F, True, a == b, (H.order, a)
    raise ValueError(name)


def verify_sampled_lemmas(
    tier=48, formations: Iterable[str | Formation] = DEFAULT_FORMATIONS, budget: int = 500, seed: int = 0,
    lemmas: Iterable[str] = LEMMAS,
) -> Report:
    rep = Report("lemmas")
    fs = [_formation(f) for f in formations]
    for name in lemmas:
        s = _Sampler(_groups(tier), fs, seed)
        per_group: dict[tuple[str, str], list[int]] = {}
        failures: dict[tuple[str, str], list] = {}
        for _ in range(budget):
            G, F, premise, conclusion, detail = _sample_lemma(name, s)
            key = (G.label, str(F))
            counts = per_group.setdefault(key, [0, 0])
            counts[0] += 1
            if premise and not conclusion:
                counts[1] += 1
                failures.setdefault(key, []).append(list(detail))
        for (label, f), (n, nfail) in per_group.items():
            rep.add(label, name, nfail == 0, f, samples=n, failures=failures.get((label, f), [])[:3])
    return rep


def verify_lemma_suite(
    tier=48, formations: Iterable[str | Formation] = DEFAULT_FORMATIONS, budget: int = 500, seed: int = 0,
    oracle: bool = False,
) -> Report:
    """Every formation/subnormality property over the tier."""
    fs = [_formation(f) for f in formations]
    rep = verify_sampled_lemmas(tier, fs, budget, seed)
    groups = _groups(tier)
    for G in groups:
        check_baer(G, rep)
        check_jordan_holder(G, rep)
        check_sylow(G, rep)
        for F in fs:
            check_route_equivalence(F, G, rep)
            check_int_identity(F, G, rep)
            check_hypercenter_restriction(F, G, rep)
            check_z_closure_hypercenter(F, G, rep)
            check_centrality_routes(F, G, rep)
            check_formation_closure(F, G, rep)
            if oracle:
                check_chain_methods(F, G, rep)
                if G.order <= 60:
                    check_hypercenter_oracle(F, G, rep)
    return rep


def verify_critical(tier="medium", sigmas: Iterable[Partition] = ()) -> Report:
    rep = Report("critical")
    groups = _groups(tier)
    for G in groups:
        graph = n_critical_graph(G)
        if not formation_membership(Nilpotent(), G):
            rep.add(G.label, "has_schmidt_subgroup", bool(graph.edges), edges=sorted(graph.edges))
        for sigma in sigmas:
            v = hall_decomposition_check(G, sigma)
            rep.add(G.label, "hall_decomposition", v != Verdict.VIOLATED, sigma=sigma, verdict=v.value)
    for sigma in sigmas:
        F = SigmaNilpotent(sigma)
        slice_ = [G for G in groups if formation_membership(F, G)]
        cls = n_critical_graph_of_class(slice_)
        crossing = sorted(e for e in cls.edges if sigma.block_id(e[0]) != sigma.block_id(e[1]))
        rep.add("*", "class_graph_respects_blocks", not crossing, F, sigma, crossing=crossing,
                graph=cls.to_document())
    return rep


SUITES: dict[str, Callable] = {
    "theorem1": verify_theorem1,
    "hall": verify_hall,
    "corollaries": verify_corollaries,
    "lemmas": verify_lemma_suite,
    "critical": verify_critical,
}
