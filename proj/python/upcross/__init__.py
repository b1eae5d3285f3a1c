"""Upcrossing inequalities for stationary sequences: interval covering
tools, process models, window statistics and the simulation harness."""

import json

from ._upcross import *  # noqa: F401,F403
from ._upcross import run_suites_json as _run_suites_json


def run_suites(trials, seed, eps):
    """Randomized covering suites as a list of dicts."""
    return json.loads(_run_suites_json(trials, seed, list(eps)))
