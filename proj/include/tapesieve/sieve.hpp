#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tapesieve/bitnum.hpp"
#include "tapesieve/chain_codec.hpp"
#include "tapesieve/cost_model.hpp"
#include "tapesieve/errors.hpp"
#include "tapesieve/merge.hpp"

namespace tapesieve {

struct SieveConfig {
  std::uint64_t limit = 0;              // table covers 0..limit
  std::uint64_t small_prime_limit = 0;  // max(2, floor(log2 limit))
  std::uint64_t sqrt_limit = 0;         // floor(sqrt(limit))

  static std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
  }

  static SieveConfig for_limit(std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("prime table limit must be >= 2");
    SieveConfig c;
    c.limit = n;
    c.small_prime_limit = std::max<std::uint64_t>(
        2, static_cast<std::uint64_t>(std::bit_width(n)) - 1);
    c.sqrt_limit = isqrt(n);
    return c;
  }
};

// The indicator tape T: after a full run, bit k is 0 exactly when k is
// prime (positions 0 and 1 are left 0 and filtered at emission).
class IndicatorTable {
 public:
  IndicatorTable(std::uint64_t limit, CostMeter& meter)
      : limit_(limit), tape_(meter) {}

  Tape& tape() { return tape_; }
  std::uint64_t limit() const { return limit_; }

  // Unmetered copy of the indicator bits, for tests and verification.
  std::vector<std::uint8_t> snapshot() const {
    std::vector<std::uint8_t> bits(limit_ + 1);
    for (std::uint64_t k = 0; k <= limit_; ++k)
      bits[k] = static_cast<std::uint8_t>(tape_.peek(k));
    return bits;
  }

 private:
  std::uint64_t limit_;
  Tape tape_;
};

struct GroupCost {
  unsigned group = 0;
  std::uint64_t chain_count = 0;
  std::uint64_t element_count = 0;
  std::uint64_t charged = 0;
};

struct PrefixTouch {
  std::uint64_t prime = 0;
  std::uint64_t highest_touched = 0;
  std::uint64_t prefix_end = 0;
};

struct SieveOptions {
  // Record, per medium prime, the highest indicator-tape position its scan
  // touched (prefix-discipline evidence).
  bool record_prefix_touches = false;
};

// The staged sieve. Stages must run in order; each switches the meter to
// its own phase so the cost of every stage is separately attributable.
//
// Tape census per stage (at most, simultaneously attached):
//   stage 0/1: T                                            -> 1
//   stage 2:   T, prime, prime copy, chain value, gap,
//              chain stream, product scratch                -> 7
//   stage 3:   T plus two merge inputs and one output       -> 4
//   stage 4:   T, list stream, position, target             -> 4
//   stage 5:   T, output table                              -> 2
class PrimeSieve {
 public:
  PrimeSieve(SieveConfig cfg, CostMeter& meter, SieveOptions opt = {})
      : cfg_(cfg), meter_(&meter), opt_(opt) {}

  const SieveConfig& config() const { return cfg_; }
  IndicatorTable& table() { return *table_; }

  // Fill positions 0..limit with 0.
  IndicatorTable& stage0_init() {
    meter_->begin_phase("stage0");
    table_.emplace(cfg_.limit, *meter_);
    Tape& t = table_->tape();
    ScanCounter pos(*meter_);
    for (std::uint64_t k = 0; k <= cfg_.limit; ++k) {
      t.write(0);
      t.move_right();
      pos.tick();
    }
    return *table_;
  }

  // For every prime p <= small_prime_limit, one full scan marks the proper
  // multiples of p, keeping the position index modulo p. Each prime is
  // discovered during the previous pass as the first fresh zero beyond it;
  // multiples being marked are skipped as candidates, and everything else
  // still unmarked in (p, next prime) would need a factor <= p, so the
  // first surviving zero is the next prime.
  void stage1_small_primes() {
    meter_->begin_phase("stage1");
    Tape& t = table_->tape();
    std::uint64_t p = 2;
    while (p != 0 && p <= cfg_.small_prime_limit) {
      rewind_table();
      std::uint64_t next = 0;
      ModularCounter mod(p, *meter_);
      ScanCounter pos(*meter_);
      for (std::uint64_t k = 0; k <= cfg_.limit; ++k) {
        bool multiple = (k > 0) && mod.tick();
        if (multiple && k >= 2 * p) {
          t.write(1);
        } else if (next == 0 && k > p && k >= 2) {
          if (t.read() == 0) next = k;
        }
        t.move_right();
        pos.tick();
      }
      p = next;
    }
    first_medium_ = p;
  }

  // For every prime p in (small_prime_limit, sqrt_limit], scan only the
  // first limit/p positions. A zero at position k >= p certifies k as the
  // next chain multiplier: the gap since the previous zero times p, added
  // to the previous element, is the next composite with least factor p.
  // The membership read always happens before the same cell is marked, so
  // multiples of p whose smaller factors are all >= p still enter the
  // chain. Returns one ledger per group, ascending.
  std::vector<GroupLedger>& stage2_medium_primes() {
    meter_->begin_phase("stage2");
    ledgers_.clear();
    prefix_touches_.clear();
    Tape& t = table_->tape();
    std::uint64_t p = first_medium_;
    while (p != 0 && p <= cfg_.sqrt_limit) {
      const std::uint64_t prefix_end = cfg_.limit / p;
      rewind_table();
      if (opt_.record_prefix_touches) t.reset_touch_high_water();
      TapeCounter prime_ctr = TapeCounter::load(p, *meter_);
      TapeCounter chain_value(*meter_);
      TapeCounter gap(*meter_);
      ChainWriter writer(p, cfg_.limit, *meter_);
      ModularCounter mod(p, *meter_);
      ScanCounter pos(*meter_);
      std::uint64_t next = 0;
      bool chain_open = false;
      for (std::uint64_t k = 0; k <= prefix_end; ++k) {
        bool multiple = (k > 0) && mod.tick();
        if (k >= 2) {
          int a = t.read();  // membership read precedes any mark below
          if (a == 0 && k >= p) {
            if (!chain_open) {
              chain_open = true;  // k == p: the chain opens at p*p
              TapeCounter prime_copy = TapeCounter::load(p, *meter_);
              chain_value = shift_add_multiply(prime_ctr, prime_copy);
            } else {
              TapeCounter step = shift_add_multiply(gap, prime_ctr);
              chain_value.add(step);
            }
            writer.append(chain_value);
            gap.reset();
            if (next == 0 && k > p) next = k;
          }
          if (multiple && k != p) t.write(1);
        }
        if (chain_open) gap.increment();
        t.move_right();
        pos.tick();
      }
      if (opt_.record_prefix_touches)
        prefix_touches_.push_back({p, t.touch_high_water(), prefix_end});
      CompressedChain chain = writer.close();
      const unsigned j = group_index_of(p);
      if (ledgers_.empty() || ledgers_.back().group != j) {
        GroupLedger g;
        g.group = j;
        g.limit = cfg_.limit;
        ledgers_.push_back(std::move(g));
      }
      ledgers_.back().chains.push_back(std::move(chain));
      p = next;
    }
    return ledgers_;
  }

  // One merged chain per group, ascending group index.
  std::vector<CompressedChain>& stage3_merge() {
    meter_->begin_phase("stage3");
    merged_.clear();
    group_costs_.clear();
    for (auto& ledger : ledgers_) {
      GroupCost gc;
      gc.group = ledger.group;
      gc.chain_count = ledger.chains.size();
      for (const auto& c : ledger.chains) gc.element_count += c.element_count;
      const std::uint64_t before = meter_->phase_report("stage3").total();
      merged_.push_back(merge_group(std::move(ledger), *meter_));
      gc.charged = meter_->phase_report("stage3").total() - before;
      group_costs_.push_back(gc);
    }
    ledgers_.clear();
    return merged_;
  }

  // Apply every merged list to T in one coordinated pass: a position
  // counter rides along the head and is matched against the next decoded
  // value with the incremental comparison discipline.
  void stage4_apply() {
    meter_->begin_phase("stage4");
    Tape& t = table_->tape();
    for (auto& chain : merged_) {
      ChainReader reader(chain);
      auto value = reader.next();
      if (!value) continue;  // browsing an empty list never touches T
      rewind_table();
      TapeCounter position(*meter_);
      TapeCounter target(*meter_);
      IncrementalMatcher matcher(position, target);
      check_applied_value(*value);
      matcher.note_target_change(target.assign(*value));
      for (;;) {
        if (matcher.equal()) {
          t.write(1);
          value = reader.next();
          if (!value) break;
          check_applied_value(*value);
          matcher.note_target_change(target.assign(*value));
        }
        t.move_right();
        matcher.note_counter_change(position.increment());
      }
    }
  }

  // One pass from position 2; every remaining zero's index joins the table.
  std::vector<std::uint64_t> stage5_emit() {
    meter_->begin_phase("stage5");
    Tape& t = table_->tape();
    rewind_table();
    Tape output(*meter_);
    std::vector<std::uint64_t> primes;
    ScanCounter pos(*meter_);
    for (std::uint64_t k = 0; k <= cfg_.limit; ++k) {
      if (k >= 2 && t.read() == 0) {
        primes.push_back(k);
        output.write(1);  // record marker, then the index bits
        output.move_right();
        const std::uint32_t len = TapeCounter::width_of(k);
        for (std::uint32_t i = 0; i < len; ++i) {
          output.write(static_cast<int>((k >> i) & 1));
          output.move_right();
        }
      }
      t.move_right();
      pos.tick();
    }
    return primes;
  }

  std::uint64_t first_medium_prime() const { return first_medium_; }
  std::vector<GroupLedger>& ledgers() { return ledgers_; }
  std::vector<CompressedChain>& merged() { return merged_; }
  const std::vector<GroupCost>& group_costs() const { return group_costs_; }
  const std::vector<PrefixTouch>& prefix_touches() const {
    return prefix_touches_;
  }

 private:
  void rewind_table() {
    Tape& t = table_->tape();
    ScanCounter back(*meter_);
    while (t.head() > 0) {
      t.move_left();
      back.tick();
    }
  }

  void check_applied_value(std::uint64_t v) const {
    if (v > cfg_.limit)
      throw ValueOutOfRange("list entry " + std::to_string(v) +
                            " exceeds table limit " +
                            std::to_string(cfg_.limit));
  }

  SieveConfig cfg_;
  CostMeter* meter_;
  SieveOptions opt_;
  std::optional<IndicatorTable> table_;
  std::vector<GroupLedger> ledgers_;
  std::vector<CompressedChain> merged_;
  std::vector<GroupCost> group_costs_;
  std::vector<PrefixTouch> prefix_touches_;
  std::uint64_t first_medium_ = 0;
};

struct SieveRun {
  std::vector<std::uint64_t> primes;
  std::vector<StageReport> stages;  // stage0..stage5
  StageReport all;
  std::vector<GroupCost> group_costs;
  std::vector<PrefixTouch> prefix_touches;
  int max_live_tapes = 0;
};

inline SieveRun run_all(std::uint64_t n, SieveOptions opt = {}) {
  SieveConfig cfg = SieveConfig::for_limit(n);
  CostMeter meter;
  PrimeSieve sieve(cfg, meter, opt);
  sieve.stage0_init();
  sieve.stage1_small_primes();
  sieve.stage2_medium_primes();
  sieve.stage3_merge();
  sieve.stage4_apply();
  SieveRun run;
  run.primes = sieve.stage5_emit();
  for (int i = 0; i < 6; ++i)
    run.stages.push_back(meter.phase_report("stage" + std::to_string(i)));
  run.all = meter.totals();
  run.group_costs = sieve.group_costs();
  run.prefix_touches = sieve.prefix_touches();
  run.max_live_tapes = meter.max_live_tapes();
  return run;
}

}  // namespace tapesieve
