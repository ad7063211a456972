#pragma once

#include <string>
#include <vector>

#include "subsetprod/descriptor.hpp"
#include "subsetprod/sequence.hpp"

namespace subsetprod::harness {

inline const std::string kPublishedCurve80 = "542ab7d1f505bdaccdbeb6c2e92180d5f38a20493d60f031c1";
inline const std::string kPublishedClass160 = "5cf854598d6059f607c6f17b8fb56314e87314bee7df9164cd";

struct VerifyLine {
  BitOrder order;
  std::size_t popcount = 0;
  bool match = false;
  std::string product;
};

struct VerifyReport {
  std::string which;
  std::string hex;
  std::string target;
  std::string target_note;
  std::size_t stated_count = 0;  // number of terms stated alongside the string
  std::vector<VerifyLine> lines;
  std::uint64_t group_ops = 0;
};

namespace detail {

template <FiniteGroup G>
void verify_orders(VerifyReport& rep, const Instance<G>& inst, const std::vector<BitOrder>& orders) {
  const auto& group = inst.seq.group();
  rep.target = group.format(inst.target.z);
  for (BitOrder o : orders) {
    SubsetBits sel = from_hex(rep.hex, inst.seq.k(), o);
    VerifyLine line{o, sel.count(), false, ""};
    auto v = subset_product(inst.seq, sel);
    rep.group_ops += sel.count();
    line.product = group.format(v);
    line.match = v == inst.target.z;
    rep.lines.push_back(line);
  }
}

}  // namespace detail

// Rebuilds the k = 200 setup of a published large run and evaluates the
// published subsequence under each bit order.
inline VerifyReport verify_paper_run(const std::string& which, const std::string& hex,
                                     std::vector<BitOrder> orders = {BitOrder::Msb, BitOrder::Lsb}) {
  if (hex.size() != 50) throw InputError("hex string must have 50 digits (k = 200), got " + std::to_string(hex.size()));
  VerifyReport rep;
  rep.which = which;
  rep.hex = hex;
  if (which == "curve80") {
    const BigInt p = parse_big("2^80+13");
    CurveGroup<BigInt> E(p, p + 1 + BigInt(1475321552477ULL));
    auto inst = build_curve_sequence(E, 200);
    rep.target_note = "z = P_201, x = " + to_string(inst.target.z.x);
    rep.stated_count = 67;
    detail::verify_orders(rep, inst, orders);
  } else if (which == "class160") {
    const BigInt D = 1 - (BigInt(1) << 160);
    ClassGroup<BigInt> G(D);
    auto inst = build_class_sequence(G, 200);
    std::size_t count = 0;
    u64 l = 2;
    for (;; l = next_prime(l + 1)) {
      if (prime_form<BigInt>(l, D) && ++count == 201) break;
    }
    rep.target_note = "z = [alpha_201], N(alpha_201) = " + std::to_string(l);
    rep.stated_count = 106;
    detail::verify_orders(rep, inst, orders);
  } else {
    throw UsageError("verify-paper-run: expected curve80 or class160, got '" + which + "'");
  }
  return rep;
}

}  // namespace subsetprod::harness
