#include "jetcartan/sampling.hpp"

#include <stdexcept>

namespace jetcartan {

Box Box::cube(int n, double t_lo, double t_hi, double s_lo, double s_hi) {
  Box b;
  b.t = {t_lo, t_hi};
  b.x.assign(n, {s_lo, s_hi});
  b.y.assign(n, {s_lo, s_hi});
  return b;
}

void SamplingPlan::validate() const {
  if (count < 1) throw std::invalid_argument("SamplingPlan: count must be >= 1");
  if (abs_tol <= 0 || rel_tol <= 0)
    throw std::invalid_argument("SamplingPlan: tolerances must be positive");
  if (domain.x.size() != domain.y.size())
    throw std::invalid_argument("SamplingPlan: domain shape mismatch");
}

PointSampler::PointSampler(const SamplingPlan& plan, PointPredicate valid)
    : rng_(plan.seed), box_(plan.domain), valid_(std::move(valid)) {}

Point PointSampler::next() {
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Point p;
    p.t = rng_.uniform(box_.t.first, box_.t.second);
    for (auto& [lo, hi] : box_.x) p.x.push_back(rng_.uniform(lo, hi));
    for (auto& [lo, hi] : box_.y) p.y.push_back(rng_.uniform(lo, hi));
    if (!valid_ || valid_(p)) return p;
  }
  throw std::runtime_error("PointSampler: domain predicate rejected too many samples");
}

std::vector<Point> probe_points(int n, int count) {
  SamplingPlan plan;
  plan.seed = 0x9a3e1c5b7ULL;
  plan.count = count;
  plan.domain = Box::cube(n, 0.25, 1.25, -1.0, 1.0);
  PointSampler sampler(plan);
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(sampler.next());
  return pts;
}

}  // namespace jetcartan
