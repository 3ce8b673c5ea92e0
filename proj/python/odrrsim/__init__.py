"""Deficit-round-robin family scheduling simulator (DRR, ODRR, ODRREDC, ODRRSDC)."""

import json as _json
from fractions import Fraction as _Fraction

from ._core import (  # noqa: F401
    EngineError,
    MetricsError,
    ScenarioError,
    delay_bound_literal,
    expand_trace_csv,
    max_packet_size,
    oracle_simulate,
    run,
    validate,
)
from . import _core as _c

POLICIES = ("drr", "odrr", "odrredc", "odrrsdc")


def penalty_factor(attempted_bytes: int, successful_bytes: int) -> _Fraction:
    """Exact successful/attempted byte ratio."""
    num, den = _c.penalty_factor(attempted_bytes, successful_bytes)
    return _Fraction(num, den)


def delay_bound(n_critical: int, s_bytes: int, max_quantum_bytes: int,
                output_rate_bps: int) -> _Fraction:
    """Latency-critical delay bound in seconds, exact."""
    num, den = _c.delay_bound(n_critical, s_bytes, max_quantum_bytes, output_rate_bps)
    return _Fraction(num, den)


def run_summary(scenario_json: str, policy: str = "drr", seed: int = 1, **kwargs) -> dict:
    """Run a simulation and return the parsed JSON summary."""
    art = run(scenario_json, policy=policy, seed=seed, **kwargs)
    return _json.loads(art["summary_json"])
