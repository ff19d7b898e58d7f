"""Exact and interval-arithmetic certificates for the convergence constants."""

from .bnb import FunctionId, IntervalBox, Status, certify_negative
from .claims import CLAIMS, Certificate, run_claim, run_claims
from .field import QEta, QSqrt2
from .interval import Interval
from .poly import Polynomial
from .sturm import isolate_root, sturm_count, sturm_sequence
