#pragma once

#include "jetcartan/connection.hpp"
#include "jetcartan/sampling.hpp"

namespace jetcartan {

/// Direction band of a covariant derivative. The derivative appends one lower
/// slot whose index ranges over the band's directions, so Spatial produces
/// D_{|p} for all p at once (and Temporal's appended time slot has extent 1).
enum class DerivKind { Temporal, Spatial, Vertical };

/// The three covariant derivative operators on d-tensors. Each component gets
/// the frame derivative (delta/delta t, delta/delta x^p or d/dy^p) plus
/// exactly one correction term per index slot: the coefficient family is
/// selected by the slot band (time/space/fiber) and the direction band
/// (G/L/C families), with sign + for upper and - for lower slots. The new
/// lower slot (TimeLower / SpaceLower / FiberLower) is appended last.
DTensor cov_deriv(const DTensor& D, const GammaConnection& conn, DerivKind dir);

/// Residuals of the four h-normality conditions: Gbar - kappa, Lbar, Cbar and
/// all components of nabla J in the three directions.
std::vector<Expr> h_normal_condition_residuals(const GammaConnection& conn,
                                               const TemporalMetric& h);

struct HNormalCheck {
  double max_abs = 0.0;
  Point worst;
  bool pass = false;
  // per-condition maxima: Gbar - kappa, Lbar, Cbar, nabla J
  double gbar = 0.0, lbar = 0.0, cbar = 0.0, nabla_j = 0.0;
};

/// Max absolute residual of the defining conditions over the plan's samples.
HNormalCheck check_h_normal(const GammaConnection& conn, const TemporalMetric& h,
                            const SamplingPlan& plan);

}  // namespace jetcartan
