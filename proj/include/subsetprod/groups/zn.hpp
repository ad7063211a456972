#pragma once

#include <optional>
#include <string>

#include "subsetprod/group.hpp"

namespace subsetprod {

// Additive group Z/nZ.
class ZnGroup {
 public:
  struct element_type {
    u64 value = 0;
    friend bool operator==(const element_type&, const element_type&) = default;
  };
  static constexpr bool kAbelian = true;

  explicit ZnGroup(u64 n) : n_(n), width_(byte_width(n - 1)) {
    if (n < 1) throw UsageError("zn: modulus must be positive");
  }

  u64 modulus() const { return n_; }

  element_type make(u64 v) const { return {v % n_}; }
  element_type identity() const { return {0}; }
  element_type op(const element_type& x, const element_type& y) const { return {add_mod(x.value, y.value, n_)}; }
  element_type inv(const element_type& x) const { return {x.value == 0 ? 0 : n_ - x.value}; }

  Encoding encode(const element_type& x) const {
    Encoding e;
    e.append_le(x.value, width_);
    return e;
  }
  element_type decode(const Encoding& e) const {
    if (e.size() != width_) throw InputError("zn: encoding has wrong length");
    u64 v = e.read_le(0, width_);
    if (v >= n_) throw InputError("zn: encoded value out of range");
    return {v};
  }

  // uniform residue
  element_type random_element(Rng& rng) const { return {std::uniform_int_distribution<u64>(0, n_ - 1)(rng)}; }

  std::optional<BigInt> order() const { return BigInt(n_); }
  std::string descriptor() const { return "zn:" + std::to_string(n_); }
  std::string format(const element_type& x) const { return std::to_string(x.value); }

 private:
  u64 n_;
  std::size_t width_;
};

}  // namespace subsetprod
