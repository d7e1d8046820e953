#include "jetcartan/dtensor.hpp"

#include <stdexcept>

namespace jetcartan {

const char* slot_name(SlotKind s) {
  switch (s) {
    case SlotKind::TimeUpper: return "T^";
    case SlotKind::TimeLower: return "T_";
    case SlotKind::SpaceUpper: return "S^";
    case SlotKind::SpaceLower: return "S_";
    case SlotKind::FiberUpper: return "F^";
    default: return "F_";
  }
}

DTensor::DTensor(int n, std::vector<SlotKind> signature) : n_(n), sig_(std::move(signature)) {
  std::size_t total = 1;
  for (std::size_t s = 0; s < sig_.size(); ++s) total *= extent(static_cast<int>(s));
  comp_.assign(total, Expr::rational(0));
}

DTensor DTensor::scalar(int n, Expr value) {
  DTensor d(n, {});
  d.comp_[0] = value;
  return d;
}

std::size_t DTensor::flatten(const std::vector<int>& idx) const {
  if (idx.size() != sig_.size()) throw std::invalid_argument("DTensor: rank mismatch");
  std::size_t flat = 0;
  for (std::size_t s = 0; s < sig_.size(); ++s) {
    int ext = extent(static_cast<int>(s));
    if (idx[s] < 0 || idx[s] >= ext) throw std::out_of_range("DTensor: index out of range");
    flat = flat * ext + idx[s];
  }
  return flat;
}

std::vector<int> DTensor::unflatten(std::size_t flat) const {
  std::vector<int> idx(sig_.size(), 0);
  for (std::size_t s = sig_.size(); s-- > 0;) {
    int ext = extent(static_cast<int>(s));
    idx[s] = static_cast<int>(flat % ext);
    flat /= ext;
  }
  return idx;
}

Expr& DTensor::at(std::initializer_list<int> idx) {
  return comp_[flatten(std::vector<int>(idx))];
}

const Expr& DTensor::at(std::initializer_list<int> idx) const {
  return comp_[flatten(std::vector<int>(idx))];
}

DTensor DTensor::map(const std::function<Expr(const Expr&)>& f) const {
  DTensor out = *this;
  for (Expr& e : out.comp_) e = f(e);
  return out;
}

DTensor DTensor::operator+(const DTensor& o) const {
  if (!same_signature(o)) throw std::invalid_argument("DTensor: signature mismatch in +");
  DTensor out = *this;
  for (std::size_t i = 0; i < comp_.size(); ++i) out.comp_[i] = comp_[i] + o.comp_[i];
  return out;
}

DTensor DTensor::operator-(const DTensor& o) const {
  if (!same_signature(o)) throw std::invalid_argument("DTensor: signature mismatch in -");
  DTensor out = *this;
  for (std::size_t i = 0; i < comp_.size(); ++i) out.comp_[i] = comp_[i] - o.comp_[i];
  return out;
}

DTensor DTensor::scaled(const Expr& s) const {
  DTensor out = *this;
  for (Expr& e : out.comp_) e = s * e;
  return out;
}

DTensor DTensor::tensor_product(const DTensor& o) const {
  if (n_ != o.n_ && rank() != 0 && o.rank() != 0)
    throw std::invalid_argument("DTensor: dimension mismatch in tensor product");
  std::vector<SlotKind> sig = sig_;
  sig.insert(sig.end(), o.sig_.begin(), o.sig_.end());
  DTensor out(rank() == 0 ? o.n_ : n_, std::move(sig));
  for (std::size_t i = 0; i < comp_.size(); ++i)
    for (std::size_t j = 0; j < o.comp_.size(); ++j)
      out.comp_[i * o.comp_.size() + j] = comp_[i] * o.comp_[j];
  return out;
}

std::string DTensor::signature_str() const {
  std::string s;
  for (SlotKind k : sig_) s += slot_name(k);
  return s;
}

}  // namespace jetcartan
