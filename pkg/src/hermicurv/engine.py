"""One-stop assembly of every pointwise object the package computes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import (
    ChernConnectionCoeffs,
    ComplexifiedChristoffel,
    InducedRealConnection,
    RealChristoffel,
    chern_coeffs,
    complexified_christoffel,
    induced_real_connection,
    real_christoffel,
)
from .core import ChartPoint
from .curvature import (
    ChernCurvature,
    ComplexifiedCurvature,
    RealCurvature,
    chern_curvature,
    complexified_11_direct,
    complexify_curvature,
    real_curvature,
)
from .dsl import MetricDefinition
from .field import MetricJet, RealMetricJet, jet_at, real_jet_from_complex

__all__ = ["PointGeometry", "geometry_at"]


@dataclass(frozen=True)
class PointGeometry:
    """Everything at one point: jets, connections, curvatures."""

    metric: MetricDefinition
    point: ChartPoint
    jet: MetricJet
    rjet: RealMetricJet
    chern: ChernConnectionCoeffs
    cx_christoffel: ComplexifiedChristoffel
    levi_civita: RealChristoffel
    induced: InducedRealConnection
    kr: ChernCurvature
    rc: RealCurvature
    cx: ComplexifiedCurvature
    mixed_11_direct: np.ndarray

    @property
    def n(self) -> int:
        return self.point.n


def geometry_at(metric: MetricDefinition, p, with_connection_derivatives: bool = True) -> PointGeometry:
    """Compute the full pointwise geometry of a metric.

    One symbolic jet evaluation feeds every downstream object, so calling
    this once per point and sharing the record is the cheap pattern.
    """
    jet = jet_at(metric, p)
    rjet = real_jet_from_complex(jet)
    lc = real_christoffel(rjet)
    rc = real_curvature(rjet, lc)
    return PointGeometry(
        metric=metric,
        point=jet.point,
        jet=jet,
        rjet=rjet,
        chern=chern_coeffs(jet),
        cx_christoffel=complexified_christoffel(jet),
        levi_civita=lc,
        induced=induced_real_connection(jet, with_derivatives=with_connection_derivatives),
        kr=chern_curvature(jet),
        rc=rc,
        cx=complexify_curvature(rc),
        mixed_11_direct=complexified_11_direct(jet),
    )
