"""Search budgets: vertex-count caps, state caps and a soft wall-clock limit."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace

from .errors import BudgetExceeded

ENV_BUDGET_MS = "TWWKIT_BUDGET_MS"


@dataclass(frozen=True)
class Limits:
    """Caps for an exhaustive search.

    ``None`` means "use the operation's default" for ``max_n`` and
    "unbounded" for the other two fields.
    """

    max_n: int | None = None
    max_states: int | None = None
    time_ms: int | None = None

    def with_defaults(self, max_n: int) -> Limits:
        out = self
        if out.max_n is None:
            out = replace(out, max_n=max_n)
        if out.time_ms is None:
            env = os.environ.get(ENV_BUDGET_MS)
            if env:
                out = replace(out, time_ms=int(env))
        return out


class Meter:
    """Counts visited states and enforces the state and time caps."""

    def __init__(self, limits: Limits, what: str):
        self.limits = limits
        self.what = what
        self.states = 0
        self._deadline = None
        if limits.time_ms is not None:
            self._deadline = time.monotonic() + limits.time_ms / 1000.0
        # bounds reported if the budget trips
        self.lower: int | None = None
        self.upper: int | None = None

    def tick(self) -> None:
        self.states += 1
        cap = self.limits.max_states
        if cap is not None and self.states > cap:
            raise BudgetExceeded(f"{self.what}: more than {cap} states", self.lower, self.upper)
        if self._deadline is not None and (self.states & 1023) == 0:
            if time.monotonic() > self._deadline:
                raise BudgetExceeded(
                    f"{self.what}: time budget of {self.limits.time_ms} ms exhausted",
                    self.lower,
                    self.upper,
                )


def check_size(n: int, limits: Limits, what: str) -> None:
    if limits.max_n is not None and n > limits.max_n:
        raise BudgetExceeded(f"{what}: n={n} exceeds the exhaustive-search cap of {limits.max_n}")
