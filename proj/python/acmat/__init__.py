"""Nearby commuting matrices."""

import json

import numpy as np

from ._acmat import (
    choose_exponents,
    commutator,
    fnv1a,
    op_norm,
    quarter_tridiag,
    suite_ids,
    tn_lift,
    voiculescu,
)
from . import _acmat

__all__ = [
    "choose_exponents",
    "commutator",
    "commute",
    "fnv1a",
    "op_norm",
    "quarter_tridiag",
    "run_suite",
    "suite_ids",
    "sweep",
    "tn_lift",
    "voiculescu",
    "winding_number",
]


def _cmat(M):
    return np.asarray(M, dtype=np.complex128)


def commute(A, B, gamma2=1.0):
    """Nearby commuting pair for Hermitian contractions A, B; returns (A', B', report)."""
    Ap, Bp, report = _acmat._commute(_cmat(A), _cmat(B), gamma2)
    return Ap, Bp, json.loads(report)


def sweep(A0, B0, X, Y, scales):
    """Runs the pipeline on (A0 + sX, B0 + sY) for each scale s."""
    return json.loads(_acmat._sweep(_cmat(A0), _cmat(B0), _cmat(X), _cmat(Y), list(scales)))


def run_suite(suite, seed=7, trials=100):
    """Seeded property suite; returns the JSON report as a dict."""
    return json.loads(_acmat._run_suite(suite, seed, trials))


def winding_number(U, V, Up, Vp, steps=512):
    """Winding of det along the straight path between two unitary pairs."""
    return json.loads(_acmat._winding(_cmat(U), _cmat(V), _cmat(Up), _cmat(Vp), steps))
