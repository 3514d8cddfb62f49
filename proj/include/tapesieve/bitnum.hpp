#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstddef>

#include "tapesieve/cost_model.hpp"

namespace tapesieve {

// Non-negative integer stored on its own tape, least significant bit at
// position 0. Between operations the head rests at position 0. The bit
// length is kept host-side, standing in for the auxiliary length tape a
// machine would carry next to the value; a host mirror of the value drives
// control flow and validation but never replaces a metered access.
//
// Values are assumed to stay below 2^63.
class TapeCounter {
 public:
  explicit TapeCounter(CostMeter& meter) : tape_(meter) {}

  // Writes all bit_length(v) low bits, one per cell.
  static TapeCounter load(std::uint64_t v, CostMeter& meter) {
    TapeCounter c(meter);
    std::uint32_t len = width_of(v);
    for (std::uint32_t i = 0; i < len; ++i) {
      if (i > 0) c.tape_.move_right();
      c.tape_.write(static_cast<int>((v >> i) & 1));
    }
    for (std::uint32_t i = 1; i < len; ++i) c.tape_.move_left();
    c.mirror_ = v;
    c.length_ = len;
    return c;
  }

  // +1 via the carry walk: flip trailing ones to zero, set the first zero.
  // Charges exactly trailing_ones+1 reads, the same number of writes, and
  // the matching walk/park moves. Returns the highest bit position touched.
  std::size_t increment() {
    std::size_t pos = 0;
    while (tape_.read() == 1) {
      tape_.write(0);
      tape_.move_right();
      ++pos;
    }
    tape_.write(1);
    for (std::size_t i = 0; i < pos; ++i) tape_.move_left();
    ++mirror_;
    if (pos + 1 > length_) length_ = static_cast<std::uint32_t>(pos + 1);
    return pos;
  }

  // Zeroes the stored bits; cost proportional to the previous bit length.
  void reset() {
    if (length_ > 0) {
      for (std::uint32_t i = 0; i < length_; ++i) {
        if (i > 0) tape_.move_right();
        tape_.write(0);
      }
      for (std::uint32_t i = 1; i < length_; ++i) tape_.move_left();
    }
    length_ = 0;
    mirror_ = 0;
  }

  // this += x, ripple-carry over both tapes in lockstep.
  void add(TapeCounter& x) {
    std::uint32_t xlen = x.length_;
    std::uint32_t span = std::max(length_, xlen);
    int carry = 0;
    std::uint64_t walked = 0, xwalked = 0;
    for (std::uint32_t i = 0; i < span || carry; ++i) {
      if (i > 0) {
        tape_.move_right();
        ++walked;
        if (i < xlen) {
          x.tape_.move_right();
          ++xwalked;
        }
      }
      int a = tape_.read();
      int b = (i < xlen) ? x.tape_.read() : 0;
      int sum = a ^ b ^ carry;
      carry = (a + b + carry) >= 2;
      meter().charge_bool(2);
      tape_.write(sum);
    }
    while (walked-- > 0) tape_.move_left();
    while (xwalked-- > 0) x.tape_.move_left();
    mirror_ += x.mirror_;
    length_ = width_of(mirror_);
  }

  // Rewrites only the bits that differ from the current value; returns the
  // highest bit position rewritten. Used where consecutive values share a
  // long common suffix above the low bits (list application targets).
  std::size_t assign(std::uint64_t v) {
    std::uint64_t diff = mirror_ ^ v;
    std::size_t reach = 0;
    if (diff != 0) {
      std::uint32_t top = width_of(diff) - 1;
      std::uint64_t walked = 0;
      for (std::uint32_t i = 0; i <= top; ++i) {
        if (i > 0) {
          tape_.move_right();
          ++walked;
        }
        if ((diff >> i) & 1) tape_.write(static_cast<int>((v >> i) & 1));
      }
      while (walked-- > 0) tape_.move_left();
      reach = top;
    }
    mirror_ = v;
    length_ = width_of(v);
    return reach;
  }

  // Reads the value back off the tape (metered).
  std::uint64_t value() {
    std::uint64_t v = 0;
    std::uint64_t walked = 0;
    for (std::uint32_t i = 0; i < length_; ++i) {
      if (i > 0) {
        tape_.move_right();
        ++walked;
      }
      v |= static_cast<std::uint64_t>(tape_.read()) << i;
    }
    while (walked-- > 0) tape_.move_left();
    return v;
  }

  // Host mirror of the value; free, for control flow and tests.
  std::uint64_t mirror() const { return mirror_; }
  std::uint32_t bit_length() const { return length_; }

  Tape& tape() { return tape_; }
  const Tape& tape() const { return tape_; }
  CostMeter& meter() const { return tape_.meter(); }

  // Sync host bookkeeping after the tape was written directly (multiply
  // assembles its result bit by bit on the output tape).
  void sync_mirror(std::uint64_t v) {
    mirror_ = v;
    length_ = width_of(v);
  }

  static std::uint32_t width_of(std::uint64_t v) {
    return static_cast<std::uint32_t>(std::bit_width(v));
  }

 private:
  Tape tape_;
  std::uint32_t length_ = 0;
  std::uint64_t mirror_ = 0;
};

// Full compare from the lowest bit, early exit at the first difference.
// One bool charge per bit pair compared.
inline bool counters_equal(TapeCounter& a, TapeCounter& b) {
  std::uint32_t span = std::max(a.bit_length(), b.bit_length());
  std::uint64_t walked = 0;
  bool eq = true;
  for (std::uint32_t i = 0; i < span; ++i) {
    if (i > 0) {
      a.tape().move_right();
      b.tape().move_right();
      ++walked;
    }
    int x = a.tape().read();
    int y = b.tape().read();
    a.meter().charge_bool(1);
    if (x != y) {
      eq = false;
      break;
    }
  }
  while (walked-- > 0) {
    a.tape().move_left();
    b.tape().move_left();
  }
  return eq;
}

// Equality watcher for increment-then-compare scan loops.
//
// After an increment only a prefix of the counter's bits changed, so the
// watcher re-compares just that prefix and carries the verified-equal
// status of everything above it. A remembered mismatch position answers
// repeat queries for free until an update touches it. Over m increments
// against a fixed target the charged bit comparisons total at most
// 4m + bit_length(target).
class IncrementalMatcher {
 public:
  IncrementalMatcher(TapeCounter& counter, TapeCounter& target)
      : counter_(&counter),
        target_(&target),
        suffix_from_(std::max(counter.bit_length(), target.bit_length())) {}

  // Report the highest bit position touched by an update to either side.
  void note_counter_change(std::size_t reach) { bump(reach); }
  void note_target_change(std::size_t reach) { bump(reach); }

  bool equal() {
    CostMeter& m = counter_->meter();
    m.charge_branch(1);
    if (mismatch_at_ != kNone) return false;
    if (suffix_from_ == 0) return true;
    std::uint64_t walked = 0;
    bool eq = true;
    const std::uint64_t stop = suffix_from_;
    for (std::uint64_t i = 0; i < stop; ++i) {
      if (i > 0) {
        counter_->tape().move_right();
        target_->tape().move_right();
        ++walked;
      }
      int a = counter_->tape().read();
      int b = target_->tape().read();
      m.charge_bool(1);
      if (a != b) {
        mismatch_at_ = i;
        eq = false;
        break;
      }
    }
    while (walked-- > 0) {
      counter_->tape().move_left();
      target_->tape().move_left();
    }
    if (eq) suffix_from_ = 0;
    return eq;
  }

 private:
  void bump(std::size_t reach) {
    if (reach + 1 > suffix_from_) suffix_from_ = reach + 1;
    if (mismatch_at_ != kNone && mismatch_at_ <= reach) mismatch_at_ = kNone;
  }

  static constexpr std::uint64_t kNone = ~0ull;

  TapeCounter* counter_;
  TapeCounter* target_;
  std::uint64_t suffix_from_;
  std::uint64_t mismatch_at_ = kNone;
};

// s * p on a fresh tape by shift-and-add over the bits of s, using the
// stored length of s to bound the walk. Charged cost stays below
// 8 * (bit_length(s)+1) * (bit_length(p)+1).
inline TapeCounter shift_add_multiply(TapeCounter& s, TapeCounter& p) {
  CostMeter& m = s.meter();
  TapeCounter out(m);
  const std::uint32_t slen = s.bit_length();
  const std::uint32_t plen = p.bit_length();
  std::uint64_t out_pos = 0;
  std::uint64_t s_pos = 0;
  for (std::uint32_t k = 0; k < slen; ++k) {
    if (k > 0) {
      s.tape().move_right();
      ++s_pos;
    }
    int sbit = s.tape().read();
    m.charge_branch(1);
    if (sbit) {
      while (out_pos > k) {
        out.tape().move_left();
        --out_pos;
      }
      while (out_pos < k) {
        out.tape().move_right();
        ++out_pos;
      }
      int carry = 0;
      std::uint64_t p_pos = 0;
      for (std::uint32_t i = 0; i < plen || carry; ++i) {
        int pb = 0;
        if (i < plen) {
          if (i > 0) {
            p.tape().move_right();
            ++p_pos;
          }
          pb = p.tape().read();
        }
        int ob = out.tape().read();
        int sum = pb ^ ob ^ carry;
        carry = (pb + ob + carry) >= 2;
        m.charge_bool(1);
        out.tape().write(sum);
        if (i + 1 < plen || carry) {
          out.tape().move_right();
          ++out_pos;
        }
      }
      while (p_pos-- > 0) p.tape().move_left();
    }
  }
  while (s_pos-- > 0) s.tape().move_left();
  while (out_pos-- > 0) out.tape().move_left();
  out.sync_mirror(s.mirror() * p.mirror());
  return out;
}

// Host-mirrored scan index. Maintaining and end-testing a position counter
// during a sequential scan costs O(1) per step amortized (the carry walk
// plus the changed-prefix compare); tick() books that as one conditional.
class ScanCounter {
 public:
  explicit ScanCounter(CostMeter& meter) : meter_(&meter) {}

  void tick() {
    ++value_;
    meter_->charge_branch(1);
  }

  std::uint64_t value() const { return value_; }

 private:
  CostMeter* meter_;
  std::uint64_t value_ = 0;
};

// Scan index kept modulo a fixed divisor; tick() advances one cell and
// reports a wrap, i.e. the scanned position is a multiple of the divisor.
// Same amortized O(1) bookkeeping charge as ScanCounter.
class ModularCounter {
 public:
  ModularCounter(std::uint64_t modulus, CostMeter& meter)
      : modulus_(modulus), meter_(&meter) {}

  bool tick() {
    meter_->charge_branch(1);
    if (++residue_ == modulus_) {
      residue_ = 0;
      return true;
    }
    return false;
  }

  std::uint64_t residue() const { return residue_; }

 private:
  std::uint64_t modulus_;
  std::uint64_t residue_ = 0;
  CostMeter* meter_;
};

}  // namespace tapesieve
