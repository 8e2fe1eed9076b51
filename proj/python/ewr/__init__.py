"""Python bindings for the ewr library."""

import json

from ._ewr import (  # noqa: F401
    AssumptionViolation,
    IoError,
    MeasurementEnsemble,
    ValidationError,
    cli,
    data_gradient,
    data_term,
    generate_dataset,
    max_step,
    network_output,
    pga_reconstruct,
    phi,
    phi_prime,
    prox_f,
    prox_fconj,
    prox_l1,
    random_unitary,
    synthesize,
    transform_gamma,
    unroll,
)
from . import _ewr

__version__ = "0.1.0"


def bound_constants(n, k, m, delta, norm_a, g_inf, taus, c_in=1.0, c_out=1.0, alpha=0.05,
                    nonlinearity="pseudo_huber", strict=True):
    """gamma, K_L, M_L, covering logs, Rademacher and generalization bounds as a dict."""
    return json.loads(_ewr._bound_constants_json(n, k, m, delta, norm_a, g_inf, list(taus), c_in, c_out,
                                                 alpha, nonlinearity, strict))


def figure1(l_max=8, grid=64, refine=20, inner=50, g_seed=42, general_u2=False):
    return json.loads(_ewr._figure1_json(l_max, grid, refine, inner, g_seed, general_u2))


def property_suite(seed=1, trials=1000, only=(), skip=()):
    return json.loads(_ewr._property_suite_json(seed, trials, list(only), list(skip)))
