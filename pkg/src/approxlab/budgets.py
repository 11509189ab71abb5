"""Global work budget.

Search-heavy operations estimate their search space up front and
refuse loudly when the estimate exceeds the budget.  The default is
10^8 elementary steps, overridable via the APPROXLAB_BUDGET
environment variable or per call.
"""

from __future__ import annotations

import os

from .errors import ResourceBudgetError

DEFAULT_BUDGET = 10**8


def effective_budget(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get("APPROXLAB_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ResourceBudgetError(f"APPROXLAB_BUDGET={raw!r} is not an integer")
    return DEFAULT_BUDGET


def charge(estimate: int, budget: int | None, what: str):
    limit = effective_budget(budget)
    if estimate > limit:
        raise ResourceBudgetError(
            f"{what}: estimated search space {estimate} exceeds budget {limit}",
            estimate=estimate,
            budget=limit,
        )
