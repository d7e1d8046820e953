#pragma once

#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "jetcartan/expr.hpp"

namespace jetcartan {

/// One index slot of a d-tensor. Time slots are one-dimensional; Space and
/// Fiber slots have the chart dimension. Fiber slots transform with the
/// composite spatial x inverse-temporal Jacobian.
enum class SlotKind { TimeUpper, TimeLower, SpaceUpper, SpaceLower, FiberUpper, FiberLower };

inline bool slot_is_upper(SlotKind s) {
  return s == SlotKind::TimeUpper || s == SlotKind::SpaceUpper || s == SlotKind::FiberUpper;
}
inline bool slot_is_time(SlotKind s) {
  return s == SlotKind::TimeUpper || s == SlotKind::TimeLower;
}
inline bool slot_is_space(SlotKind s) {
  return s == SlotKind::SpaceUpper || s == SlotKind::SpaceLower;
}
inline bool slot_is_fiber(SlotKind s) {
  return s == SlotKind::FiberUpper || s == SlotKind::FiberLower;
}
const char* slot_name(SlotKind s);

/// Dense array of expressions with a typed index signature. Indices are
/// 0-based; a time slot always takes index 0.
class DTensor {
 public:
  DTensor() : n_(0) {}
  DTensor(int n, std::vector<SlotKind> signature);

  static DTensor scalar(int n, Expr value);

  int dim() const { return n_; }
  const std::vector<SlotKind>& signature() const { return sig_; }
  int rank() const { return static_cast<int>(sig_.size()); }
  int extent(int slot) const { return slot_is_time(sig_[slot]) ? 1 : n_; }
  std::size_t size() const { return comp_.size(); }

  Expr& at(std::initializer_list<int> idx);
  const Expr& at(std::initializer_list<int> idx) const;
  Expr& operator[](std::size_t flat) { return comp_[flat]; }
  const Expr& operator[](std::size_t flat) const { return comp_[flat]; }

  std::size_t flatten(const std::vector<int>& idx) const;
  std::vector<int> unflatten(std::size_t flat) const;

  /// Elementwise map (e.g. simplify every component).
  DTensor map(const std::function<Expr(const Expr&)>& f) const;

  DTensor operator+(const DTensor& o) const;
  DTensor operator-(const DTensor& o) const;
  DTensor scaled(const Expr& s) const;
  DTensor tensor_product(const DTensor& o) const;

  bool same_signature(const DTensor& o) const { return n_ == o.n_ && sig_ == o.sig_; }
  std::string signature_str() const;

 private:
  int n_;
  std::vector<SlotKind> sig_;
  std::vector<Expr> comp_;  // initialized to the constant 0
};

}  // namespace jetcartan
