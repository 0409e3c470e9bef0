"""Schatten quasi-norm experiments for pseudo-differential operators."""

import json

from ._psido import (
    InvalidArgument,
    PsidoError,
    Symbol,
    assemble_interval_projection,
    assemble_t_quant,
    builtin_symbol,
    check_holder,
    check_triangle,
    domain_fixtures,
    experiment_kinds,
    fit_loglog_slope,
    grid_points,
    lattice_qnorm,
    qnorm,
    schatten_norm,
    singular_values,
    smoothness_orders,
    symbol_families,
    t_matrix,
)
from . import _psido


def validate_config(config):
    """List of violations (empty when valid)."""
    return _psido._validate_config(json.dumps(config))


def run(config, workers=None, seed=None):
    """Run an experiment from a config dict; returns the report as a dict."""
    return json.loads(_psido._run(json.dumps(config), workers, seed))


def verdict(report):
    return _psido._verdict(json.dumps(report))


def table(report):
    return _psido._table(json.dumps(report))


def csv(report):
    return _psido._csv(json.dumps(report))


__all__ = [
    "InvalidArgument",
    "PsidoError",
    "Symbol",
    "assemble_interval_projection",
    "assemble_t_quant",
    "builtin_symbol",
    "check_holder",
    "check_triangle",
    "csv",
    "domain_fixtures",
    "experiment_kinds",
    "fit_loglog_slope",
    "grid_points",
    "lattice_qnorm",
    "qnorm",
    "run",
    "schatten_norm",
    "singular_values",
    "smoothness_orders",
    "symbol_families",
    "t_matrix",
    "table",
    "validate_config",
    "verdict",
]
