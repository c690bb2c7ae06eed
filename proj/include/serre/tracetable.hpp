// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "serre/localdata.hpp"

namespace serre {

struct TraceEntry {
  std::uint64_t p = 0;
  std::int64_t ap = 0;
  bool good = true;
};

// a_p for every prime p <= X. Bad primes carry the local trace (+1 split,
// -1 nonsplit, 0 additive) and are flagged.
class TraceTable {
 public:
  TraceTable() = default;
  TraceTable(std::uint64_t bound, std::vector<TraceEntry> entries);

  std::uint64_t bound() const { return bound_; }
  const std::vector<TraceEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  const TraceEntry* find(std::uint64_t p) const;
  std::vector<TraceEntry> ramified() const;
  std::size_t goodCount() const;

 private:
  std::uint64_t bound_ = 0;
  std::vector<TraceEntry> entries_;
};

TraceTable traceTable(const GlobalReduction& g, std::uint64_t X);
TraceTable traceTable(const WeierstrassModel& model, std::uint64_t X);

}  // namespace serre
