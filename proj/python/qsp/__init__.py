"""Python interface to the qsp C++ library."""

import json

from . import _core
from ._core import (
    InputError,
    NumericalError,
    ResourceError,
    coideal_braid,
    irrep,
    kz_braid,
    lambda_from_trace,
    lambda_of_t,
    psi,
    rmatrix,
    t_of_lambda,
    vogan_e_matrix,
    ybe_residual,
)

__all__ = [
    "InputError",
    "NumericalError",
    "ResourceError",
    "check_diagram",
    "coideal_braid",
    "irrep",
    "kz_braid",
    "lambda_from_trace",
    "lambda_of_t",
    "list_diagrams",
    "psi",
    "rmatrix",
    "root_datum",
    "t_of_lambda",
    "verify_axioms",
    "verify_kz",
    "verify_rank_one",
    "vogan_e_matrix",
    "ybe_residual",
]


def root_datum(algebra):
    return json.loads(_core.root_datum(algebra))


def check_diagram(diagram):
    """diagram: dict such as {"type": "A", "rank": 3, "X": [2], "tau": [[1, 3]]}"""
    return json.loads(_core.check_diagram(json.dumps(diagram)))


def list_diagrams(type, rank):
    return json.loads(_core.list_diagrams(type, rank))


def verify_rank_one(q=0.7, r=0.25, levels=20):
    return json.loads(_core.verify_rank_one(q, r, levels))


def verify_axioms(source, q=0.7):
    return json.loads(_core.verify_axioms(source, q))


def verify_kz(q=0.7):
    return json.loads(_core.verify_kz(q))
