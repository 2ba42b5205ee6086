"""Recursion schemes over chain-bounded partial orders.

Evaluations are fuel-bounded. Functions that return a single value raise
Exhausted when the budget runs out; report-producing functions record the
exhaustion in the report instead.
"""

import json

from ._zorn import (
    NatSeq,
    check_goal,
    maximal_ideal_demo,
    proper_ideal_z,
)
from . import _zorn

__all__ = [
    "Exhausted",
    "NatSeq",
    "check_goal",
    "divergence",
    "eta",
    "maximal_ideal_demo",
    "omega_n_sample",
    "proper_ideal_z",
    "run_campaign",
    "simple_rec_bounded",
    "subset_phi",
]


class Exhausted(RuntimeError):
    """The evaluation ran out of fuel, scan range or stack."""

    def __init__(self, info):
        super().__init__(f"exhausted ({info['reason']}) after {info['unfoldings']} unfoldings")
        self.info = info


def _value(outcome):
    if "exhausted" in outcome:
        raise Exhausted(outcome["exhausted"])
    return outcome["value"]


def subset_phi(fuel=1000):
    return _value(_zorn.subset_phi(fuel))


def divergence(fuel=1000):
    return _value(_zorn.divergence(fuel))


def simple_rec_bounded(n, fuel=1000):
    return _value(_zorn.simple_rec_bounded(n, fuel))


def omega_n_sample(n, fuel=1000):
    """(direct value, value via controlled recursion)"""
    both = _zorn.omega_n_sample(n, fuel)
    return _value(both["direct"]), _value(both["via_controlled"])


def eta(phi, x, k, fuel=100000):
    return _value(_zorn.eta(phi, x, k, fuel))


def run_campaign(**config):
    """One dict per case, in case order. Accepts the GenConfig fields."""
    return [json.loads(line) for line in _zorn.run_campaign_jsonl(**config)]
