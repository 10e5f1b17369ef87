"""Finite-group computations around formation hypercenters and K-F-subnormality."""

from .catalog import builtin_catalog, get_group
from .critical import (
    NCriticalGraph,
    Verdict,
    hall_decomposition_check,
    is_schmidt,
    n_critical_graph,
)
from .formations import (
    Nilpotent,
    Partition,
    PiGroups,
    SigmaNilpotent,
    SpecError,
    Supersoluble,
    VStar,
    WBar,
    ZClosure,
    formation_membership,
    hypercenter,
    int_f,
    is_f_central,
    parse_formation,
)
from .groups import Group, GroupError, OrderCapExceeded, Subgroup, construct_group
from .lattice import all_subgroups, chief_series, sylow_subgroups
from .subnormality import c_f, is_k_f_subnormal, ksn_chain, s_f, weak_subnormalizers

__all__ = [
    "Group", "GroupError", "NCriticalGraph", "Nilpotent", "OrderCapExceeded", "Partition", "PiGroups",
    "SigmaNilpotent", "SpecError", "Subgroup", "Supersoluble", "VStar", "Verdict", "WBar", "ZClosure",
    "all_subgroups", "builtin_catalog", "c_f", "chief_series", "construct_group", "formation_membership",
    "get_group", "hall_decomposition_check", "hypercenter", "int_f", "is_f_central", "is_k_f_subnormal",
    "is_schmidt", "ksn_chain", "n_critical_graph", "parse_formation", "s_f", "sylow_subgroups",
    "weak_subnormalizers",
]
