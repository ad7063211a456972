#pragma once

#include <concepts>
#include <optional>
#include <string>

#include "subsetprod/encoding.hpp"
#include "subsetprod/hash.hpp"
#include "subsetprod/integer.hpp"

namespace subsetprod {

// The generic-group black box. Elements are canonical values: two elements
// are equal iff their encodings are equal, and operator== agrees with that.
template <class G>
concept FiniteGroup = requires(const G& g, const typename G::element_type& x, const Encoding& e, Rng& rng) {
  typename G::element_type;
  { g.identity() } -> std::same_as<typename G::element_type>;
  { g.op(x, x) } -> std::same_as<typename G::element_type>;
  { g.inv(x) } -> std::same_as<typename G::element_type>;
  { g.encode(x) } -> std::same_as<Encoding>;
  { g.decode(e) } -> std::same_as<typename G::element_type>;
  { g.random_element(rng) } -> std::same_as<typename G::element_type>;
  { g.order() } -> std::convertible_to<std::optional<BigInt>>;
  { g.descriptor() } -> std::convertible_to<std::string>;
  { x == x } -> std::convertible_to<bool>;
  { G::kAbelian } -> std::convertible_to<bool>;
};

template <FiniteGroup G>
using Element = typename G::element_type;

// Square-and-multiply; negative exponents go through the inverse.
template <FiniteGroup G, class Exp>
Element<G> power(const G& group, const Element<G>& g, Exp e) {
  Element<G> base = g;
  if (e < 0) {
    base = group.inv(g);
    e = -e;
  }
  Element<G> result = group.identity();
  while (e > 0) {
    if ((e & 1) != 0) result = group.op(result, base);
    e >>= 1;
    if (e > 0) base = group.op(base, base);
  }
  return result;
}

template <FiniteGroup G>
Element<G> random_element(const G& group, std::uint64_t seed) {
  Rng rng(seed);
  return group.random_element(rng);
}

}  // namespace subsetprod
