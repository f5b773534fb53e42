"""Shared transform plans, built once per (setup, grid) and reused across suites."""
from __future__ import annotations

import threading

from ..core import Grid, TransformPlan
from ..geometry import ReflectionSetup

_CACHE: dict = {}
_LOCK = threading.Lock()
_LIMIT = 6


def get_plan(setup: ReflectionSetup, n: int, x_max: float) -> TransformPlan:
    key = (setup.d, setup.k, int(n), float(x_max))
    with _LOCK:
        plan = _CACHE.get(key)
        if plan is None:
            plan = TransformPlan(Grid(setup, int(n), float(x_max)))
            if len(_CACHE) >= _LIMIT:
                _CACHE.pop(next(iter(_CACHE)))
            _CACHE[key] = plan
        return plan


def clear():
    with _LOCK:
        _CACHE.clear()
