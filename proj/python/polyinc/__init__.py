"""Exact verifiers for the polynomial incidence graph Cay(V, N_q)."""

import json

from . import _core
from ._core import (
    ConfigError,
    CycInt,
    Field,
    HypothesisError,
    PolyincError,
    PolySpace,
    SizeLimitError,
    connection,
    conway_polynomial,
    point_poly_incidences,
    pp_incidence_sum,
)

__all__ = [
    "ConfigError",
    "CycInt",
    "Field",
    "HypothesisError",
    "PolyincError",
    "PolySpace",
    "SizeLimitError",
    "check_spectrum",
    "connection",
    "conway_polynomial",
    "counterexample",
    "default_config",
    "key_lemma",
    "point_poly_incidences",
    "pp_incidence_sum",
    "run",
    "spectrum",
]


def spectrum(space, entries=False):
    return json.loads(_core.spectrum(space, entries))


def check_spectrum(space):
    return json.loads(_core.check_spectrum(space))


def key_lemma(space):
    return json.loads(_core.key_lemma(space))


def counterexample(q, m, r):
    return json.loads(_core.counterexample(q, m, r))


def default_config():
    return json.loads(_core.default_config())


def run(config):
    """Runs an experiment config (dict); returns (exit_code, verdict dicts)."""
    code, lines = _core.run(json.dumps(config))
    return code, [json.loads(line) for line in lines]
