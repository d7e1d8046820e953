#pragma once

#include "jetcartan/identities.hpp"
#include "jetcartan/sampling.hpp"

namespace jetcartan {

struct IdentityResult {
  std::string name;
  std::string group;
  bool star = false;
  int components = 0;
  double max_abs = 0.0;
  double max_rel = 0.0;  // |lhs-rhs| / (1 + |lhs| + |rhs|)
  Point worst;
  bool pass = false;
  bool suspect = false;  // closed form failed while the general oracle passed
  std::string note;
};

struct VerificationReport {
  std::vector<IdentityResult> rows;
  int points_used = 0;
  int resample_events = 0;

  bool all_pass() const;
  int suspect_count() const;
  const IdentityResult* find(const std::string& name) const;
};

/// Thrown when the sampler cannot produce enough evaluable points.
struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluates every residual at plan.count points drawn from plan.domain
/// (rejecting points failing `valid` and points where any expression hits an
/// evaluation domain error, with bounded retries). A component passes at a
/// point when |residual| <= abs_tol or the scale-relative residual <= rel_tol;
/// an identity passes when every component passes at every point.
/// Deterministic under a fixed seed.
VerificationReport verify(const std::vector<ResidualTensor>& residuals, const SamplingPlan& plan,
                          const PointPredicate& valid = nullptr);

/// Marks failing "bianchi"-group rows as SUSPECT when every "general"-group
/// row passed: a printed identity contradicted by data the frame-indexed
/// identities accept points at a transcription problem, not a math one.
void apply_suspect_policy(VerificationReport& report);

/// Validity predicate keeping metric nondegeneracy: h11 >= 1e-6 and
/// |det phi| >= 1e-6 at the sample point.
PointPredicate metric_validity(const TemporalMetric& h, const SpatialMetric& phi);

}  // namespace jetcartan
