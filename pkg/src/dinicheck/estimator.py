"""scikit-learn style front end for :func:`dinicheck.report.classify`."""

from __future__ import annotations

import dataclasses

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    DEFAULT_NS_SPEC,
    check_grid_size,
    check_interval,
    check_ladder,
    check_n_list,
    resolve_sequence,
)
from .criteria import DEFAULT_DELTA_LADDER, DEFAULT_ETA_LADDER
from .metrics import DEFAULT_GRID_SIZE, DEFAULT_TOL_X, sup_deviation
from .report import ClassifyConfig, classify, emit_report


class UniformConvergenceAnalyzer(BaseEstimator):
    """Diagnose whether a function sequence converges uniformly.

    Parameters mirror the CLI options. ``fit`` takes the sequence (gallery
    id, expression text or :class:`~dinicheck.funcspace.FunctionSequence`)
    and its limit, runs the full classification and stores the outcome in
    the trailing-underscore attributes.

    Examples
    --------
    >>> est = UniformConvergenceAnalyzer().fit("monotone_sqrt")
    >>> est.uniformity_
    'uniform_trend'
    >>> "dini" in est.applicable_theorems_
    True
    """

    def __init__(
        self,
        ns=DEFAULT_NS_SPEC,
        interval=None,
        grid_size=DEFAULT_GRID_SIZE,
        delta_ladder=DEFAULT_DELTA_LADDER,
        width_ladder=None,
        eta_ladder=DEFAULT_ETA_LADDER,
        tol_x=DEFAULT_TOL_X,
        monotone_tol=1e-12,
        convexity_tol=1e-12,
        pointwise_tol=1e-2,
        probes=None,
    ):
        self.ns = ns
        self.interval = interval
        self.grid_size = grid_size
        self.delta_ladder = delta_ladder
        self.width_ladder = width_ladder
        self.eta_ladder = eta_ladder
        self.tol_x = tol_x
        self.monotone_tol = monotone_tol
        self.convexity_tol = convexity_tol
        self.pointwise_tol = pointwise_tol
        self.probes = probes

    def _config(self) -> ClassifyConfig:
        return ClassifyConfig(
            grid_size=check_grid_size(self.grid_size),
            delta_ladder=check_ladder(self.delta_ladder, "delta_ladder"),
            width_ladder=check_ladder(self.width_ladder, "width_ladder"),
            eta_ladder=check_ladder(self.eta_ladder, "eta_ladder"),
            tolerances={
                "monotone": self.monotone_tol,
                "convexity": self.convexity_tol,
                "pointwise": self.pointwise_tol,
                "tol_x": self.tol_x,
            },
            probes=None if self.probes is None else tuple(float(p) for p in self.probes),
        )

    def fit(self, X, y=None):
        """``X`` is the sequence, ``y`` its limit (required for expressions)."""
        interval = check_interval(self.interval)
        seq, lim = resolve_sequence(X, y, interval)
        ns = check_n_list(self.ns)
        self.report_ = classify(seq, lim, interval, ns, self._config())
        self.sequence_ = seq
        self.limit_ = lim
        self.ns_ = np.array(self.report_.ns)
        self.sup_devs_ = np.array([d.sup_dev for d in self.report_.deviations])
        self.verdicts_ = {v.criterion: v.status for v in self.report_.verdicts}
        self.uniformity_ = self.report_.uniformity
        self.applicable_theorems_ = list(self.report_.applicable_theorems)
        return self

    def transform(self, ns) -> np.ndarray:
        """Estimated ``sup |f_n - f|`` for each requested ``n``."""
        check_is_fitted(self, "report_")
        ns = check_n_list(ns, min_len=1)
        seq, lim = self.sequence_, self.limit_
        if self.report_.interval != seq.domain:
            seq = dataclasses.replace(seq, domain=self.report_.interval)
            lim = dataclasses.replace(lim, domain=self.report_.interval)
        return np.array([sup_deviation(seq, lim, n, self.grid_size, self.tol_x).sup_dev for n in ns])

    def fit_transform(self, X, y=None, ns=None) -> np.ndarray:
        self.fit(X, y)
        return self.sup_devs_ if ns is None else self.transform(ns)

    def to_json(self) -> str:
        check_is_fitted(self, "report_")
        return emit_report(self.report_, "json")
