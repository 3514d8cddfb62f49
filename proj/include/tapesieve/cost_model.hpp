#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tapesieve/errors.hpp"

namespace tapesieve {

// Totals of the five elementary operation counters for one named phase.
struct StageReport {
  std::string phase;
  std::uint64_t head_moves = 0;
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t bool_ops = 0;
  std::uint64_t branches = 0;

  std::uint64_t total() const {
    return head_moves + reads + writes + bool_ops + branches;
  }
};

// Instruction meter shared by every tape of one run.
//
// Charges accrue to the phase selected by begin_phase(); snapshot() reports
// all phases seen so far without resetting anything, so counters only ever
// go up. The meter also keeps a census of attached tapes (tapes whose head
// is in use): sealed chain streams detach and rejoin only while a reader
// holds them, which is what the per-stage tape-count checks look at.
class CostMeter {
 public:
  CostMeter() { begin_phase("setup"); }

  CostMeter(const CostMeter&) = delete;
  CostMeter& operator=(const CostMeter&) = delete;

  void begin_phase(const std::string& label) {
    for (std::size_t i = 0; i < phases_.size(); ++i) {
      if (phases_[i].phase == label) {
        cur_ = &phases_[i];
        return;
      }
    }
    StageReport r;
    r.phase = label;
    phases_.push_back(std::move(r));
    cur_ = &phases_.back();
  }

  const std::string& current_phase() const { return cur_->phase; }

  std::vector<StageReport> snapshot() const { return phases_; }

  // Report for one phase; zero counters if the phase never ran.
  StageReport phase_report(const std::string& label) const {
    for (const auto& p : phases_)
      if (p.phase == label) return p;
    StageReport r;
    r.phase = label;
    return r;
  }

  StageReport totals() const {
    StageReport t;
    t.phase = "all";
    for (const auto& p : phases_) {
      t.head_moves += p.head_moves;
      t.reads += p.reads;
      t.writes += p.writes;
      t.bool_ops += p.bool_ops;
      t.branches += p.branches;
    }
    return t;
  }

  void charge_move(std::uint64_t count = 1) { cur_->head_moves += count; }
  void charge_read(std::uint64_t count = 1) { cur_->reads += count; }
  void charge_write(std::uint64_t count = 1) { cur_->writes += count; }
  void charge_bool(std::uint64_t count = 1) { cur_->bool_ops += count; }
  void charge_branch(std::uint64_t count = 1) { cur_->branches += count; }

  // Tape census. Attached means the tape's head is live right now.
  void tape_attached() {
    ++live_tapes_;
    if (live_tapes_ > max_live_tapes_) max_live_tapes_ = live_tapes_;
  }
  void tape_detached() { --live_tapes_; }
  int live_tapes() const { return live_tapes_; }
  int max_live_tapes() const { return max_live_tapes_; }
  void reset_max_live_tapes() { max_live_tapes_ = live_tapes_; }

 private:
  std::vector<StageReport> phases_;
  StageReport* cur_ = nullptr;
  int live_tapes_ = 0;
  int max_live_tapes_ = 0;
};

// One-way-infinite tape of bits with a single head.
//
// The head starts at position 0 and may never move left of it. Cells that
// were never written read as 0. Every move/read/write charges the owning
// meter; construction and destruction are free. peek() exists for tests and
// debug output and is deliberately unmetered.
class Tape {
 public:
  using Observer = std::function<void(char op, std::uint64_t pos)>;

  explicit Tape(CostMeter& meter) : meter_(&meter) {
    meter_->tape_attached();
    attached_ = true;
  }

  ~Tape() {
    if (attached_) meter_->tape_detached();
  }

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tape(Tape&& o) noexcept
      : meter_(o.meter_),
        cells_(std::move(o.cells_)),
        head_(o.head_),
        touch_high_water_(o.touch_high_water_),
        attached_(o.attached_),
        observer_(std::move(o.observer_)) {
    o.attached_ = false;
    o.meter_ = nullptr;
  }

  Tape& operator=(Tape&& o) noexcept {
    if (this != &o) {
      if (attached_) meter_->tape_detached();
      meter_ = o.meter_;
      cells_ = std::move(o.cells_);
      head_ = o.head_;
      touch_high_water_ = o.touch_high_water_;
      attached_ = o.attached_;
      observer_ = std::move(o.observer_);
      o.attached_ = false;
      o.meter_ = nullptr;
    }
    return *this;
  }

  void move_right() {
    ++head_;
    meter_->charge_move();
  }

  void move_left() {
    if (head_ == 0) throw MoveBeforeOrigin();
    --head_;
    meter_->charge_move();
  }

  int read() {
    meter_->charge_read();
    if (head_ > touch_high_water_) touch_high_water_ = head_;
    if (observer_) observer_('r', head_);
    return head_ < cells_.size() ? cells_[head_] : 0;
  }

  void write(int bit) {
    meter_->charge_write();
    if (head_ > touch_high_water_) touch_high_water_ = head_;
    if (observer_) observer_('w', head_);
    if (head_ >= cells_.size()) grow(head_ + 1);
    cells_[head_] = static_cast<std::uint8_t>(bit & 1);
  }

  std::uint64_t head() const { return head_; }
  CostMeter& meter() const { return *meter_; }

  // Unmetered random-access view, for assertions and debug dumps only.
  int peek(std::uint64_t pos) const {
    return pos < cells_.size() ? cells_[pos] : 0;
  }
  std::uint64_t written_size() const { return cells_.size(); }

  // Highest position read or written since the last reset; lets tests check
  // prefix-discipline claims without touching the meter.
  std::uint64_t touch_high_water() const { return touch_high_water_; }
  void reset_touch_high_water() { touch_high_water_ = 0; }

  // Census control for archived streams: a closed chain gives its head up
  // and only counts again while a reader is attached.
  void detach_from_census() {
    if (attached_) {
      meter_->tape_detached();
      attached_ = false;
    }
  }
  void reattach_to_census() {
    if (!attached_) {
      meter_->tape_attached();
      attached_ = true;
    }
  }

  // Shadow-trace hook used by tests; leave unset in normal runs.
  void set_observer(Observer f) { observer_ = std::move(f); }

 private:
  void grow(std::uint64_t need) {
    if (need > cells_.capacity()) {
      std::uint64_t cap = cells_.capacity() < 64 ? 64 : cells_.capacity() * 2;
      if (cap < need) cap = need;
      cells_.reserve(cap);
    }
    cells_.resize(need, 0);
  }

  CostMeter* meter_;
  std::vector<std::uint8_t> cells_;
  std::uint64_t head_ = 0;
  std::uint64_t touch_high_water_ = 0;
  bool attached_ = false;
  Observer observer_;
};

}  // namespace tapesieve
