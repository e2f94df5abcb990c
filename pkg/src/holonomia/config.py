"""Tunable defaults, overridable from the environment."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Config:
    zeilberger_max_order: int = 6   # largest telescoper order tried
    series_check_order: int = 30    # power_series self-check against the direct series
    default_digits: int = 30        # decimal digits for numeric evaluation

    @classmethod
    def from_env(cls, environ=None) -> "Config":
        """Read HOLONOMIA_<FIELD> overrides; HOLONOMIA_MAX_ORDER is the short form."""
        env = os.environ if environ is None else environ
        vals = {}
        for f in fields(cls):
            v = env.get(f"HOLONOMIA_{f.name.upper()}")
            if v:
                vals[f.name] = int(v)
        if env.get("HOLONOMIA_MAX_ORDER"):
            vals["zeilberger_max_order"] = int(env["HOLONOMIA_MAX_ORDER"])
        return cls(**vals)
