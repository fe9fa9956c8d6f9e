"""Goodness-of-fit utilities and the exchangeable serial test."""

from features.validation.besag import IIDChain, besag_serial_test, upper_tail_rank
from features.validation.gof import chi_square_gof, ks_statistic, lag_autocorrelation
from features.validation.models import TestReport

__all__ = [
    "IIDChain",
    "TestReport",
    "besag_serial_test",
    "chi_square_gof",
    "ks_statistic",
    "lag_autocorrelation",
    "upper_tail_rank",
]
