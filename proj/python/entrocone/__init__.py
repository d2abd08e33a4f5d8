"""Entropy cones of classical-quantum causal structures.

Thin Python surface over the C++ core: build a scenario, assemble or
project its entropy cone, enumerate extreme rays, prove inequalities with
exact certificates, and evaluate candidate inequalities on distributions.
"""

from entrocone._core import (
    check,
    coexisting_sets,
    cone_rows,
    emit,
    entropies,
    eval_slack,
    extreme_rays,
    inequality_names,
    monogamy_check,
    scan,
    scenario_names,
    validate,
    witness_distribution,
)

__all__ = [
    "check",
    "coexisting_sets",
    "cone_rows",
    "emit",
    "entropies",
    "eval_slack",
    "extreme_rays",
    "inequality_names",
    "monogamy_check",
    "scan",
    "scenario_names",
    "validate",
    "witness_distribution",
]
