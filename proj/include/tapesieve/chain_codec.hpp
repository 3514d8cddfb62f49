#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tapesieve/bitnum.hpp"
#include "tapesieve/cost_model.hpp"
#include "tapesieve/errors.hpp"

namespace tapesieve {

// Group index of a prime: p sits in group j iff 2^j <= p < 2^(j+1).
inline unsigned group_index_of(std::uint64_t p) {
  return static_cast<unsigned>(std::bit_width(p)) - 1u;
}

// Compression geometry shared by every chain of one group: values in
// [0, limit] are split into sections of 2^(2j) consecutive integers, and an
// element stores only its 2j low bits; the running section index supplies
// the rest.
struct SectionGeometry {
  unsigned group = 0;
  unsigned residue_bits = 0;
  std::uint64_t section_width = 0;
  std::uint64_t section_count = 0;
  std::uint64_t limit = 0;

  static SectionGeometry for_group(unsigned group, std::uint64_t limit) {
    SectionGeometry g;
    g.group = group;
    g.residue_bits = 2 * group;
    g.section_width = std::uint64_t(1) << g.residue_bits;
    g.section_count = (limit + 1 + g.section_width - 1) / g.section_width;
    g.limit = limit;
    return g;
  }

  static SectionGeometry for_prime(std::uint64_t p, std::uint64_t limit) {
    return for_group(group_index_of(p), limit);
  }

  std::uint64_t section_of(std::uint64_t v) const { return v >> residue_bits; }
  std::uint64_t residue_of(std::uint64_t v) const {
    return v & (section_width - 1);
  }

  bool operator==(const SectionGeometry&) const = default;
};

// One encoded sorted list. Stream grammar, in section order: a separator
// bit 1 opens each section, then each element of that section contributes
// a marker bit 0 followed by residue_bits value bits, LSB first. Total
// length is therefore section_count + element_count * (residue_bits + 1).
// Immutable once the writer closes it; prime is 0 for merged lists.
struct CompressedChain {
  std::uint64_t prime = 0;
  SectionGeometry geometry;
  Tape stream;
  std::uint64_t element_count = 0;

  std::uint64_t bit_length() const {
    return geometry.section_count +
           element_count * (geometry.residue_bits + 1);
  }

  // Unmetered dump of the raw stream, for tests and debug output.
  std::string bits_as_text() const {
    std::string s;
    s.reserve(bit_length());
    for (std::uint64_t i = 0; i < bit_length(); ++i)
      s.push_back(stream.peek(i) ? '1' : '0');
    return s;
  }
};

// Single-use append-only encoder. Values must arrive strictly increasing
// and within (0, limit]; separators for skipped sections are emitted on the
// way. close() pads out the remaining sections and seals the stream.
class ChainWriter {
 public:
  ChainWriter(SectionGeometry geometry, std::uint64_t prime, CostMeter& meter)
      : geo_(geometry), prime_(prime), stream_(meter) {}

  ChainWriter(std::uint64_t prime, std::uint64_t limit, CostMeter& meter)
      : ChainWriter(SectionGeometry::for_prime(prime, limit), prime, meter) {}

  // Appends the counter's value; charges the residue-bit reads off its tape.
  void append(TapeCounter& v) {
    std::uint64_t walked = 0;
    for (unsigned i = 0; i < geo_.residue_bits; ++i) {
      if (i > 0) {
        v.tape().move_right();
        ++walked;
      }
      v.tape().read();
    }
    while (walked-- > 0) v.tape().move_left();
    append_raw(v.mirror());
  }

  // Stream-side charges only; used where the bits were already read from
  // another stream (merging).
  void append_raw(std::uint64_t v) {
    require_open();
    if (v > geo_.limit)
      throw RangeExceeded("chain value " + std::to_string(v) +
                          " exceeds limit " + std::to_string(geo_.limit));
    if (any_ && v <= last_)
      throw NonMonotonicAppend("chain value " + std::to_string(v) +
                               " not above previous " + std::to_string(last_));
    const std::uint64_t section = geo_.section_of(v);
    while (next_section_ <= section) {
      stream_.meter().charge_branch(1);
      emit(1);
      ++next_section_;
    }
    emit(0);
    std::uint64_t residue = geo_.residue_of(v);
    for (unsigned i = 0; i < geo_.residue_bits; ++i)
      emit(static_cast<int>((residue >> i) & 1));
    last_ = v;
    any_ = true;
    ++count_;
  }

  CompressedChain close() {
    require_open();
    while (next_section_ < geo_.section_count) {
      stream_.meter().charge_branch(1);
      emit(1);
      ++next_section_;
    }
    closed_ = true;
    stream_.detach_from_census();
    CompressedChain c{prime_, geo_, std::move(stream_), count_};
    return c;
  }

  const SectionGeometry& geometry() const { return geo_; }

 private:
  void require_open() const {
    if (closed_) throw TapeError("chain writer already closed");
  }

  void emit(int bit) {
    stream_.write(bit);
    stream_.move_right();
  }

  SectionGeometry geo_;
  std::uint64_t prime_;
  Tape stream_;
  std::uint64_t next_section_ = 0;
  std::uint64_t last_ = 0;
  std::uint64_t count_ = 0;
  bool any_ = false;
  bool closed_ = false;
};

// Sequential decoder: one pass over the stream tape, rebuilding the high
// bits from the running section index. Throws MalformedStream when the
// grammar or the chain's own counts are violated.
class ChainReader {
 public:
  explicit ChainReader(CompressedChain& chain) : c_(&chain) {
    c_->stream.reattach_to_census();
    while (c_->stream.head() > 0) c_->stream.move_left();
  }

  ~ChainReader() {
    if (c_) c_->stream.detach_from_census();
  }

  ChainReader(const ChainReader&) = delete;
  ChainReader& operator=(const ChainReader&) = delete;

  std::optional<std::uint64_t> next() {
    if (finished_) return std::nullopt;
    const std::uint64_t total = c_->bit_length();
    while (consumed_ < total) {
      int bit = take();
      c_->stream.meter().charge_branch(1);
      if (bit == 1) {
        ++sections_seen_;
        if (sections_seen_ > c_->geometry.section_count)
          throw MalformedStream("more separators than sections");
        continue;
      }
      if (sections_seen_ == 0)
        throw MalformedStream("element before the first separator");
      std::uint64_t residue = 0;
      for (unsigned i = 0; i < c_->geometry.residue_bits; ++i)
        residue |= static_cast<std::uint64_t>(take()) << i;
      std::uint64_t value =
          (sections_seen_ - 1) * c_->geometry.section_width + residue;
      ++elements_seen_;
      if (elements_seen_ > c_->element_count)
        throw MalformedStream("more elements than the chain declares");
      if (any_ && value <= last_)
        throw MalformedStream("decoded values not strictly increasing");
      last_ = value;
      any_ = true;
      return value;
    }
    if (sections_seen_ != c_->geometry.section_count)
      throw MalformedStream("stream ended before all sections were opened");
    if (elements_seen_ != c_->element_count)
      throw MalformedStream("stream ended before all elements were decoded");
    finished_ = true;
    return std::nullopt;
  }

 private:
  int take() {
    int bit = c_->stream.read();
    c_->stream.move_right();
    ++consumed_;
    return bit;
  }

  CompressedChain* c_;
  std::uint64_t consumed_ = 0;
  std::uint64_t sections_seen_ = 0;
  std::uint64_t elements_seen_ = 0;
  std::uint64_t last_ = 0;
  bool any_ = false;
  bool finished_ = false;
};

inline std::vector<std::uint64_t> decode_all(CompressedChain& chain) {
  std::vector<std::uint64_t> out;
  out.reserve(chain.element_count);
  ChainReader r(chain);
  while (auto v = r.next()) out.push_back(*v);
  return out;
}

}  // namespace tapesieve
