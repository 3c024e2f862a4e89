"""Pipeline optimum (internal solver) against exhaustive enumeration."""

from __future__ import annotations

import pytest

from opsat.codec import BitWidth
from opsat.evaluator import brute_force_optimum
from opsat.pipeline import RunConfig, run_ground

from conftest import data_text, ground
from randmodels import random_model

WIDTH = BitWidth(8, 1)   # every subexpression of a generated model stays within 100


def pipeline_optimum(gm, width):
    rep = run_ground(gm, RunConfig(), width)
    if rep.status == "infeasible":
        return None
    assert rep.status == "optimum"
    assert rep.feasible
    return rep.objective


@pytest.mark.parametrize("seed", range(60))
def test_random_integer_model(seed):
    text = random_model(seed)
    gm = ground(text)
    bf = brute_force_optimum(gm)
    got = pipeline_optimum(gm, WIDTH)
    assert got == (bf.value if bf.feasible else None), text


@pytest.mark.parametrize("model, data, width", [
    ("mkp", "knapsack_tiny", BitWidth(4, 0)),
    ("gcp", "triangle", BitWidth(3, 0)),
])
def test_fixed_examples(model, data, width):
    gm = ground(model, data_text(data))
    assert pipeline_optimum(gm, width) == brute_force_optimum(gm).value
