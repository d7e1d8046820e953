#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "jetcartan/expr.hpp"

namespace jetcartan {

/// Axis-aligned sampling box for (t, x, y).
struct Box {
  std::pair<double, double> t{0.25, 1.25};
  std::vector<std::pair<double, double>> x;  // per spatial coordinate
  std::vector<std::pair<double, double>> y;  // per fiber coordinate

  static Box cube(int n, double t_lo, double t_hi, double s_lo, double s_hi);
  int dim() const { return static_cast<int>(x.size()); }
};

struct SamplingPlan {
  std::uint64_t seed = 1;
  int count = 50;
  Box domain;
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;

  void validate() const;
};

/// Deterministic, platform-independent uniform doubles from mt19937_64 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

using PointPredicate = std::function<bool(const Point&)>;

/// Draws points uniformly from the box, rejecting those failing the
/// predicate; throws after `max_attempts` consecutive rejections.
class PointSampler {
 public:
  PointSampler(const SamplingPlan& plan, PointPredicate valid = nullptr);
  Point next();

 private:
  Rng rng_;
  Box box_;
  PointPredicate valid_;
};

/// Fixed probe points used by internal consistency checks (symmetry
/// validation, closed-form vs operator cross-checks).
std::vector<Point> probe_points(int n, int count);

}  // namespace jetcartan
