// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/tracetable.hpp"

#include <algorithm>

#include "serre/parallel.hpp"

namespace serre {

TraceTable::TraceTable(std::uint64_t bound, std::vector<TraceEntry> entries)
    : bound_(bound), entries_(std::move(entries)) {}

const TraceEntry* TraceTable::find(std::uint64_t p) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), p,
                             [](const TraceEntry& e, std::uint64_t q) { return e.p < q; });
  if (it == entries_.end() || it->p != p) return nullptr;
  return &*it;
}

std::vector<TraceEntry> TraceTable::ramified() const {
  std::vector<TraceEntry> out;
  for (const auto& e : entries_)
    if (!e.good) out.push_back(e);
  return out;
}

std::size_t TraceTable::goodCount() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const TraceEntry& e) { return e.good; }));
}

TraceTable traceTable(const GlobalReduction& g, std::uint64_t X) {
  std::vector<std::uint64_t> primes = primesUpTo(X);
  std::vector<TraceEntry> entries(primes.size());
  const Integer A = -27 * g.inv.c4, B = -54 * g.inv.c6;
  const unsigned threads = primes.size() > 2000 ? 0 : 1;
  parallelFor(
      primes.size(),
      [&](std::size_t i) {
        const std::uint64_t p = primes[i];
        TraceEntry& e = entries[i];
        e.p = p;
        if (!g.isGood(p)) {
          e.good = false;
          e.ap = g.local(Integer(static_cast<unsigned long>(p)))->localTrace();
          return;
        }
        if (p < 5) {
          e.ap = tracePointCountNaive(g.minimalModel, p);
        } else if (p < kPointCountCrossover) {
          e.ap = traceShortNaive(reduceMod(A, p), reduceMod(B, p), p);
        } else {
          e.ap = traceShortBsgs(reduceMod(A, p), reduceMod(B, p), p);
        }
        if (!hasseWeilHolds(e.ap, p)) throw InvariantViolation("Hasse-Weil bound violated at p = " + std::to_string(p));
      },
      threads);
  return TraceTable(X, std::move(entries));
}

TraceTable traceTable(const WeierstrassModel& model, std::uint64_t X) { return traceTable(globalReduce(model), X); }

}  // namespace serre
