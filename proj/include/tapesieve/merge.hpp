#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tapesieve/chain_codec.hpp"
#include "tapesieve/cost_model.hpp"
#include "tapesieve/errors.hpp"

namespace tapesieve {

// Chains of one group awaiting the merge. They share one geometry, and no
// value may appear in more than one chain.
struct GroupLedger {
  unsigned group = 0;
  std::uint64_t limit = 0;
  std::vector<CompressedChain> chains;
};

// Merge two chains of identical geometry into one chain decoding to the
// sorted union. Single pass over both streams in section lockstep; a
// decision between two candidates costs residue_bits bool ops, since only
// the low bits ever need comparing. Equal values mean the inputs were not
// disjoint, which signals a bug upstream.
inline CompressedChain merge_two(CompressedChain& a, CompressedChain& b) {
  if (!(a.geometry == b.geometry)) throw GeometryMismatch();
  CostMeter& meter = a.stream.meter();
  ChainWriter out(a.geometry, 0, meter);
  ChainReader ra(a);
  ChainReader rb(b);
  auto va = ra.next();
  auto vb = rb.next();
  while (va || vb) {
    bool take_a;
    if (va && vb) {
      meter.charge_bool(a.geometry.residue_bits);
      meter.charge_branch(1);
      if (*va == *vb)
        throw DuplicateValue("value " + std::to_string(*va) +
                             " present in both merge inputs");
      take_a = *va < *vb;
    } else {
      meter.charge_branch(1);
      take_a = va.has_value();
    }
    if (take_a) {
      out.append_raw(*va);
      va = ra.next();
    } else {
      out.append_raw(*vb);
      vb = rb.next();
    }
  }
  return out.close();
}

// Balanced merging tree: pairwise passes until one chain remains. An empty
// ledger yields the empty chain of the group's geometry. At any instant at
// most three stream tapes are attached: the two pass inputs and the output.
inline CompressedChain merge_group(GroupLedger ledger, CostMeter& meter) {
  if (ledger.chains.empty()) {
    ChainWriter w(SectionGeometry::for_group(ledger.group, ledger.limit), 0,
                  meter);
    return w.close();
  }
  std::vector<CompressedChain> round = std::move(ledger.chains);
  while (round.size() > 1) {
    std::vector<CompressedChain> next;
    next.reserve((round.size() + 1) / 2);
    std::size_t i = 0;
    for (; i + 1 < round.size(); i += 2)
      next.push_back(merge_two(round[i], round[i + 1]));
    if (i < round.size()) next.push_back(std::move(round[i]));
    round = std::move(next);
  }
  return std::move(round.front());
}

}  // namespace tapesieve
