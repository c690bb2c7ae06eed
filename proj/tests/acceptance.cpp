// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

// Acceptance gate. Prints one [PASS]/[FAIL] line per criterion and writes the
// numbers behind each verdict to <workdir>/acceptance_report.json.

#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "oracles.hpp"
#include "serre/arith.hpp"
#include "serre/errors.hpp"
#include "serre/family.hpp"
#include "serre/galois.hpp"
#include "serre/parallel.hpp"
#include "serre/report.hpp"
#include "serre/symprime.hpp"

using namespace serre;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr double kAc1SecondsBudget = 60.0;
constexpr std::size_t kAc1Curves = 100;
constexpr std::uint64_t kAc1PrimeLow = 5, kAc1PrimeHigh = 1000;
constexpr std::uint64_t kCorpusTraceBound = 1000;
constexpr std::uint64_t kCorpusCeiling = 10000;
constexpr std::size_t kAc5RelationPairs = 50, kAc5RelationPrimes = 20, kAc5ConductorPairs = 20;
constexpr std::size_t kAc6Pairs = 50;
constexpr std::uint64_t kAc6X = 2000, kAc6Window = 50;
constexpr std::uint64_t kAc7X = 10000;
constexpr std::size_t kAc7SurjectiveCurves = 20;
constexpr double kAc9Within100 = 0.99, kAc9Within1000 = 1.0;
constexpr double kAc9SecondsBudget = 600.0;
constexpr double kAc10Low = 0.4, kAc10High = 0.6;
constexpr std::size_t kAc10Discriminants = 13;
constexpr std::size_t kAc11Pairs = 10;

struct Verdict {
  bool pass = false;
  std::string summary;
  Json detail;
};

struct CorpusCurve {
  const CurveRecord* record;
  TraceTable traces;  // to kCorpusTraceBound
};

// --- AC1 -----------------------------------------------------------------

Verdict ac1() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<long> a(-10000, 10000), small(0, 1), mid(-1, 1);
  auto primes = primesUpTo(kAc1PrimeHigh);
  std::size_t compared = 0, mismatches = 0, curves = 0;
  auto start = std::chrono::steady_clock::now();
  while (curves < kAc1Curves) {
    WeierstrassModel m(small(rng), mid(rng), small(rng), a(rng), a(rng));
    Invariants inv;
    try {
      inv = invariants(m);
    } catch (const SingularModel&) {
      continue;
    }
    ++curves;
    for (std::uint64_t p : primes) {
      if (p < kAc1PrimeLow || inv.disc % static_cast<unsigned long>(p) == 0) continue;
      ++compared;
      if (tracePointCountBsgs(m, p) != tracePointCountNaive(m, p)) ++mismatches;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Verdict v;
  v.pass = mismatches == 0 && secs < kAc1SecondsBudget;
  v.summary = std::to_string(compared) + " traces compared, " + std::to_string(mismatches) + " mismatches, " +
              formatReal(secs) + " s";
  v.detail = {{"curves", curves}, {"compared", compared}, {"mismatches", mismatches}, {"seconds", secs}};
  return v;
}

// --- AC2 -----------------------------------------------------------------

Verdict ac2(const std::vector<CorpusCurve>& corpus, std::uint64_t extraChecked) {
  std::size_t checked = 0, bad = 0;
  for (const auto& c : corpus)
    for (const auto& e : c.traces.entries()) {
      if (!e.good) continue;
      ++checked;
      if (static_cast<__int128>(e.ap) * e.ap > 4 * static_cast<__int128>(e.p)) ++bad;
    }
  Verdict v;
  v.pass = bad == 0;
  v.summary = std::to_string(checked + extraChecked) + " traces, " + std::to_string(bad) + " violations";
  v.detail = {{"checked", checked + extraChecked}, {"violations", bad}};
  return v;
}

// --- AC3 -----------------------------------------------------------------

Verdict ac3() {
  Json cases = Json::array();
  std::set<int> valuations;
  std::size_t mismatches = 0;
  for (long p : {5L, 7L, 11L, 13L}) {
    std::vector<WeierstrassModel> suite;
    Integer pk = 1;
    for (int k = 1; k <= 5; ++k) {
      pk *= p;
      suite.push_back(WeierstrassModel(0, 0, 0, 0, pk));    // v(Delta) = 2k
      if (k <= 3) suite.push_back(WeierstrassModel(0, 0, 0, pk, 0));  // v(Delta) = 3k
    }
    for (const auto& m : suite) {
      auto r = tate(m, Integer(p));
      const int v = r.local.vDeltaMin;
      valuations.insert(v);
      // |Phi_p| = 12 / gcd(12, v) for p >= 5.
      const int expect = 12 / std::gcd(12, v);
      const int got = phiTagOrder(phiOrder(r.local));
      const bool phi4 = got == 4, listed = v == 3 || v == 9;
      if (got != expect || phi4 != listed) ++mismatches;
      cases.push_back({{"p", p}, {"model", m.str()}, {"vDelta", v}, {"kodaira", r.local.kodaira.str()},
                       {"phi", got}});
    }
  }
  Verdict v;
  const std::set<int> want{2, 3, 4, 6, 8, 9, 10};
  v.pass = mismatches == 0 && valuations == want;
  v.summary = std::to_string(cases.size()) + " cases, " + std::to_string(mismatches) + " mismatches, v(Delta) covered " +
              std::to_string(valuations.size()) + "/7 potentially good values in 2..10";
  v.detail = {{"cases", cases}, {"mismatches", mismatches}};
  return v;
}

// --- AC4 -----------------------------------------------------------------

Verdict ac4(const std::vector<CorpusCurve>& corpus, const std::vector<GlobalReduction>& extra) {
  std::size_t curves = 0, locals = 0, violations = 0;
  auto check = [&](const GlobalReduction& g) {
    ++curves;
    for (const auto& l : g.locals) {
      ++locals;
      const int cap = l.p == 2 ? 8 : l.p == 3 ? 5 : 2;
      if (l.conductorExp > cap) ++violations;
    }
    try {
      checkReductionInvariants(g);
    } catch (const InvariantViolation&) {
      ++violations;
    }
  };
  for (const auto& c : corpus) check(c.record->reduction);
  for (const auto& g : extra) check(g);
  // The guard itself fires on an out-of-range exponent.
  GlobalReduction forged = corpus.front().record->reduction;
  LocalReduction l;
  l.p = 7;
  l.conductorExp = 3;
  l.redType = ReductionType::additive;
  forged.locals.push_back(l);
  forged.conductor *= 343;
  bool guardFires = false;
  try {
    checkReductionInvariants(forged);
  } catch (const InvariantViolation&) {
    guardFires = true;
  }
  Verdict v;
  v.pass = violations == 0 && guardFires;
  v.summary = std::to_string(curves) + " curves, " + std::to_string(locals) + " bad primes, " +
              std::to_string(violations) + " violations, guard " + (guardFires ? "fires" : "silent");
  v.detail = {{"curves", curves}, {"badPrimes", locals}, {"violations", violations}, {"guardFires", guardFires}};
  return v;
}

// --- AC5 -----------------------------------------------------------------

Verdict ac5(const std::vector<CorpusCurve>& corpus, std::vector<GlobalReduction>& processed) {
  std::mt19937_64 rng(5005);
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);
  std::uniform_int_distribution<long> dd(-200, 200);
  auto primes = primesUpTo(5000);
  std::size_t relPairs = 0, relChecks = 0, relBad = 0;
  while (relPairs < kAc5RelationPairs) {
    const auto& g = corpus[pick(rng)].record->reduction;
    long d = dd(rng);
    if (d == 0 || d == 1 || !isSquarefree(Integer(d))) continue;
    auto tw = globalReduce(quadraticTwist(g.minimalModel, d));
    processed.push_back(tw);
    std::size_t n = 0;
    for (std::uint64_t p : primes) {
      if (n == kAc5RelationPrimes) break;
      if (!g.isGood(p) || !tw.isGood(p) || d % static_cast<long>(p) == 0) continue;
      ++n;
      ++relChecks;
      if (countPoints(tw.minimalModel, p) !=
          kronecker(static_cast<std::int64_t>(d), static_cast<std::int64_t>(p)) * countPoints(g.minimalModel, p))
        ++relBad;
    }
    ++relPairs;
  }
  // Conductor relation: d coprime to 6N and the character unramified at 2 or
  // the curve good at 2, so D_chi^2 accounts for the whole change.
  std::size_t condPairs = 0, condBad = 0;
  Json condCases = Json::array();
  while (condPairs < kAc5ConductorPairs) {
    const auto& g = corpus[pick(rng)].record->reduction;
    long d = dd(rng);
    if (d == 0 || d == 1 || !isSquarefree(Integer(d))) continue;
    if (std::gcd(d, 6L) != 1 || gcd(Integer(d), g.conductor) != 1) continue;
    const Integer D = fieldDiscriminant(Integer(d));
    if (D % 4 == 0 && g.conductor % 2 == 0) continue;
    auto tw = globalReduce(quadraticTwist(g.minimalModel, d));
    processed.push_back(tw);
    const Integer expect = g.conductor * D * D;
    if (tw.conductor != expect) ++condBad;
    condCases.push_back({{"N", toJson(g.conductor)}, {"d", d}, {"twistN", toJson(tw.conductor)}});
    ++condPairs;
  }
  Verdict v;
  v.pass = relBad == 0 && condBad == 0;
  v.summary = std::to_string(relChecks) + " trace relations (" + std::to_string(relBad) + " bad), " +
              std::to_string(condPairs) + " conductor relations (" + std::to_string(condBad) + " bad)";
  v.detail = {{"traceChecks", relChecks}, {"traceBad", relBad}, {"conductorCases", condCases}, {"conductorBad", condBad}};
  return v;
}

// --- AC6 -----------------------------------------------------------------

Verdict ac6(const std::vector<CorpusCurve>& corpus) {
  // Non-CM curves: CM curves are never surjective at large ell, so the lemma
  // does not apply to them.
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (!isCM(corpus[i].record->reduction.inv.j)) pool.push_back(i);
  std::mt19937_64 rng(6006);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::size_t done = 0, failed = 0;
  Json cases = Json::array();
  std::map<std::size_t, std::pair<TraceTable, std::uint64_t>> cache;
  auto data = [&](std::size_t i) -> std::pair<TraceTable, std::uint64_t>& {
    auto it = cache.find(i);
    if (it != cache.end()) return it->second;
    const auto& g = corpus[i].record->reduction;
    TraceTable t = traceTable(g, kAc6X);
    std::uint64_t c = empiricalC(g, t, kAc6X);
    return cache.emplace(i, std::make_pair(std::move(t), c)).first->second;
  };
  while (done < kAc6Pairs) {
    std::size_t i = pool[pick(rng)], j = pool[pick(rng)];
    if (i == j) continue;
    const auto& gi = corpus[i].record->reduction;
    const auto& gj = corpus[j].record->reduction;
    if (gi.inv.j == gj.inv.j) continue;
    auto& di = data(i);
    auto& dj = data(j);
    CurveData e1{&gi, &di.first}, e2{&gj, &dj.first};
    ComparisonReport r;
    try {
      r = comparisonBound(e1, e2, di.second, dj.second, kAc6X);
    } catch (const NoWitnessBelow&) {
      continue;
    }
    if (r.windowHigh != r.bound + kAc6Window || !r.spotCheckPassed) ++failed;
    cases.push_back({{"first", corpus[i].record->label}, {"second", corpus[j].record->label},
                     {"cE1", di.second}, {"cE2", dj.second}, {"witness", r.witness.p}, {"bound", r.bound},
                     {"spotCheckPassed", r.spotCheckPassed}});
    ++done;
  }
  const Rational c56 = cDelta(Rational(5, 6));
  Verdict v;
  v.pass = failed == 0 && c56 == 5558;
  v.summary = std::to_string(done) + " pairs, " + std::to_string(failed) + " spot-check failures, c(5/6) = " +
              c56.get_str();
  v.detail = {{"pairs", cases}, {"failures", failed}, {"c56", c56.get_str()}};
  return v;
}

// --- AC7 -----------------------------------------------------------------

Verdict ac7(const std::vector<CorpusCurve>& corpus) {
  const std::vector<std::uint64_t> ells{5, 13, 17, 29, 37};
  Verdict v;
  const CurveRecord* found = nullptr;
  std::uint64_t foundEll = 0;
  for (const auto& c : corpus) {
    const auto& g = c.record->reduction;
    if (isCM(g.inv.j)) continue;
    for (std::uint64_t ell : ells) {
      if (!notAdditivePotentiallyGood(g, ell)) continue;
      ImageReport r;
      try {
        r = imageTest(g, c.traces, ell, kCorpusTraceBound);
      } catch (const InsufficientSamples&) {
        continue;
      }
      if (r.verdict != ImageVerdict::nonsurjectiveWitnessed) continue;
      bool ns = false;
      for (auto o : r.obstructions) ns = ns || o == Obstruction::nonsplitCartanNormalizer;
      if (!ns) continue;
      found = c.record;
      foundEll = ell;
      break;
    }
    if (found) break;
  }
  if (!found) {
    v.summary = "no corpus curve with a witnessed nonsplit Cartan normalizer image at ell = 1 mod 4";
    return v;
  }
  const auto& g = found->reduction;
  TraceTable t = traceTable(g, kAc7X);
  auto cands = epsilonCandidates(g, foundEll);
  auto pruned = pruneEpsilon(cands, t, foundEll);
  std::size_t divisibilityFailures = 0, minusOneTests = 0;
  Json survivors = Json::array();
  for (const auto& c : pruned.candidates) {
    for (const auto& e : t.entries()) {
      if (!e.good || e.p == foundEll || c.value(e.p) != -1) continue;
      ++minusOneTests;
      if (e.ap % static_cast<std::int64_t>(foundEll) != 0) ++divisibilityFailures;
    }
    survivors.push_back(toJson(c));
  }

  // Surjective side: every candidate dies.
  std::size_t surjectiveCurves = 0, nonEmpty = 0;
  for (const auto& c : corpus) {
    if (surjectiveCurves == kAc7SurjectiveCurves) break;
    const auto& gc = c.record->reduction;
    ImageReport r;
    try {
      r = imageTest(gc, c.traces, foundEll, kCorpusTraceBound);
    } catch (const InsufficientSamples&) {
      continue;
    }
    if (r.verdict != ImageVerdict::surjective) continue;
    ++surjectiveCurves;
    auto tc = traceTable(gc, kAc7X);
    if (!pruneEpsilon(epsilonCandidates(gc, foundEll), tc, foundEll).candidates.empty()) ++nonEmpty;
  }
  v.pass = !pruned.candidates.empty() && divisibilityFailures == 0 && surjectiveCurves == kAc7SurjectiveCurves &&
           nonEmpty == 0;
  v.summary = found->label + " at ell = " + std::to_string(foundEll) + ": " + std::to_string(pruned.candidates.size()) +
              " of " + std::to_string(cands.candidates.size()) + " candidates survive, " +
              std::to_string(minusOneTests) + " (-1)-prime checks, " + std::to_string(divisibilityFailures) +
              " failures; " + std::to_string(nonEmpty) + "/" + std::to_string(surjectiveCurves) +
              " surjective curves keep survivors";
  v.detail = {{"curve", found->label}, {"ell", foundEll}, {"survivors", survivors},
              {"divisibilityFailures", divisibilityFailures}, {"surjectiveCurves", surjectiveCurves},
              {"surjectiveWithSurvivors", nonEmpty}};
  return v;
}

// --- AC8 -----------------------------------------------------------------

Verdict ac8(const std::vector<CorpusCurve>& corpus) {
  std::size_t identities = 0, identityBad = 0, rankin = 0, rankinBad = 0;
  for (const auto& c : corpus)
    for (const auto& e : c.traces.entries()) {
      if (!e.good) continue;
      auto t = normalizedEigenvalue(e.p, e.ap);
      ++identities;
      const Rational t2 = t.tSquared();
      auto s = symCoeffs(t);
      if (!symIdentityHolds(t2) || (t2 - 1) * (t2 - 1) != 1 + s.sym2 + s.sym4) ++identityBad;
      auto minus = normalizedEigenvalue(e.p, -e.ap);
      for (const auto* u : {&t, &minus}) {
        ++rankin;
        if (rankinCoeff(*u, t) != 1 + s.sym2 + s.sym4) ++rankinBad;
      }
    }
  Verdict v;
  v.pass = identityBad == 0 && rankinBad == 0 && identities > 0;
  v.summary = std::to_string(identities) + " identities, " + std::to_string(rankin) + " Rankin checks, " +
              std::to_string(identityBad + rankinBad) + " failures";
  v.detail = {{"identities", identities}, {"rankinChecks", rankin}, {"failures", identityBad + rankinBad}};
  return v;
}

// --- AC9 -----------------------------------------------------------------

// Squarefree d with a_p(E2) = (d/p) a_p(E1) at every common good p in the
// tables, searched over signed products of primes dividing 2 N1 N2. Such a
// pair is a twist of an isogenous curve even when the j-invariants differ.
std::optional<Integer> twistCharacter(const GlobalReduction& g1, const TraceTable& t1, const GlobalReduction& g2,
                                      const TraceTable& t2) {
  std::set<Integer> support{Integer(2)};
  for (const auto& l : g1.locals) support.insert(l.p);
  for (const auto& l : g2.locals) support.insert(l.p);
  std::vector<Integer> ps(support.begin(), support.end());
  if (ps.size() > 16) return std::nullopt;
  const auto& a = t1.entries();
  const auto& b = t2.entries();
  for (std::uint64_t mask = 0; mask < (1ULL << ps.size()); ++mask)
    for (int sign : {1, -1}) {
      Integer d = sign;
      for (std::size_t k = 0; k < ps.size(); ++k)
        if (mask >> k & 1) d *= ps[k];
      bool ok = true;
      for (std::size_t k = 0; k < std::min(a.size(), b.size()) && ok; ++k) {
        if (!a[k].good || !b[k].good) continue;
        const std::int64_t p = static_cast<std::int64_t>(a[k].p);
        // (d/p) only depends on d mod 8p for p > 0.
        const auto r = static_cast<std::int64_t>(mpz_fdiv_ui(d.get_mpz_t(), static_cast<unsigned long>(8 * p)));
        ok = b[k].ap == oracle::kronecker(r, p) * a[k].ap;
      }
      if (ok) return d;
    }
  return std::nullopt;
}

Verdict ac9(const Corpus& corpus, const std::vector<CorpusCurve>& curves) {
  auto start = std::chrono::steady_clock::now();
  Family fam = buildFamily(corpus, {FilterTag::all, Integer(static_cast<unsigned long>(kCorpusCeiling))});
  std::map<std::string, const TraceTable*> byLabel;
  for (const auto& c : curves) byLabel[c.record->label] = &c.traces;
  const std::size_t n = fam.members.size();
  // Class ids for same-j and same (conductor, fingerprint).
  std::vector<std::size_t> jId(n), fpId(n);
  {
    std::map<std::string, std::size_t> js, fps;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = *fam.members[i].record;
      jId[i] = js.emplace(r.reduction.inv.j.get_str(), js.size()).first->second;
      std::string key = r.conductor().get_str();
      for (auto a : fam.members[i].print) key += "," + std::to_string(a);
      fpId[i] = fps.emplace(key, fps.size()).first->second;
    }
  }
  std::vector<const TraceTable*> tables(n);
  for (std::size_t i = 0; i < n; ++i) tables[i] = byLabel.at(fam.members[i].record->label);

  struct Tally {
    std::uint64_t clean = 0, within100 = 0, within1000 = 0, excluded = 0, twistClass = 0;
    std::uint64_t maxWitness = 0;
    std::map<std::uint64_t, std::uint64_t> histogram;
    std::vector<std::pair<std::size_t, std::size_t>> missing;
  };
  std::vector<Tally> tallies(n);
  parallelFor(n, [&](std::size_t i) {
    Tally& t = tallies[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (jId[i] == jId[j] || fpId[i] == fpId[j]) {
        ++t.excluded;
        continue;
      }
      auto w = findPairWitness(*tables[i], *tables[j], kCorpusTraceBound);
      if (!w && twistCharacter(fam.members[i].record->reduction, *tables[i], fam.members[j].record->reduction,
                               *tables[j])) {
        ++t.twistClass;
        continue;
      }
      ++t.clean;
      if (!w) {
        if (t.missing.size() < 20) t.missing.emplace_back(i, j);
        continue;
      }
      ++t.within1000;
      if (w->p <= 100) ++t.within100;
      t.maxWitness = std::max(t.maxWitness, w->p);
      ++t.histogram[w->p];
    }
  });
  Tally total;
  for (const auto& t : tallies) {
    total.clean += t.clean;
    total.within100 += t.within100;
    total.within1000 += t.within1000;
    total.excluded += t.excluded;
    total.twistClass += t.twistClass;
    total.maxWitness = std::max(total.maxWitness, t.maxWitness);
    for (const auto& [p, c] : t.histogram) total.histogram[p] += c;
    for (const auto& m : t.missing)
      if (total.missing.size() < 20) total.missing.push_back(m);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double f100 = total.clean ? static_cast<double>(total.within100) / total.clean : 0.0;
  const double f1000 = total.clean ? static_cast<double>(total.within1000) / total.clean : 0.0;
  Verdict v;
  v.pass = total.clean > 0 && f100 >= kAc9Within100 && f1000 >= kAc9Within1000 && secs < kAc9SecondsBudget;
  v.summary = std::to_string(n) + " curves, " + std::to_string(total.clean) + " clean pairs (" +
              std::to_string(total.excluded) + " same-j or colliding, " + std::to_string(total.twistClass) +
              " twists of isogenous curves excluded): <=100 " + formatReal(f100) + ", <=1000 " +
              formatReal(f1000) + ", max witness " + std::to_string(total.maxWitness) + ", " + formatReal(secs) + " s";
  Json hist = Json::object();
  for (const auto& [p, c] : total.histogram) hist[std::to_string(p)] = c;
  Json missing = Json::array();
  for (const auto& [i, j] : total.missing)
    missing.push_back({fam.members[i].record->label, fam.members[j].record->label});
  v.detail = {{"familySize", n}, {"cleanPairs", total.clean}, {"excludedPairs", total.excluded}, {"twistOfIsogenousPairs", total.twistClass},
              {"fractionWithin100", f100}, {"fractionWithin1000", f1000}, {"histogram", hist},
              {"noWitnessExamples", missing}, {"seconds", secs}};
  return v;
}

// --- AC10 ----------------------------------------------------------------

Verdict ac10() {
  std::vector<Integer> ceilings{Integer(1000), Integer(10000), Integer(100000), Integer(1000000)};
  auto c = cmCensus(ceilings);
  // Independent count of class number one discriminants by form enumeration.
  std::size_t listed = 0;
  for (long D : classNumberOneDiscriminants(-200)) {
    (void)D;
    ++listed;
  }
  Verdict v;
  v.pass = c.fitted && c.exponent >= kAc10Low && c.exponent <= kAc10High && c.discriminants.size() == kAc10Discriminants &&
           listed == kAc10Discriminants;
  std::string counts;
  Json rows = Json::array();
  for (const auto& r : c.rows) {
    counts += (counts.empty() ? "" : ", ") + r.ceiling.get_str() + ":" + std::to_string(r.count);
    rows.push_back({{"ceiling", toJson(r.ceiling)}, {"count", r.count}});
  }
  v.summary = "exponent " + formatReal(c.exponent) + " (se " + formatReal(c.exponentStdError) + "), quadratic-only " +
              formatReal(c.exponentQuadratic) + ", counts " + counts + ", " + std::to_string(c.discriminants.size()) +
              " discriminants";
  v.detail = {{"exponent", c.exponent}, {"stdError", c.exponentStdError}, {"exponentQuadratic", c.exponentQuadratic},
              {"rows", rows}, {"discriminants", c.discriminants}};
  return v;
}

// --- AC11 ----------------------------------------------------------------

Verdict ac11(const std::vector<CorpusCurve>& corpus) {
  const std::vector<double> Xs{1000.0, 10000.0};
  const std::uint64_t bound = 2 * 10000;
  const auto psi = SmoothTestFunction::psi();
  // Twist pairs: S and H must agree to the bit.
  std::size_t twistPairs = 0, twistMismatch = 0;
  std::vector<const CurveRecord*> nonCM;
  for (const auto& c : corpus)
    if (!isCM(c.record->reduction.inv.j)) nonCM.push_back(c.record);
  Json twistCases = Json::array();
  for (std::size_t k = 0; k < 5; ++k) {
    const auto& g = nonCM[k * 97 % nonCM.size()]->reduction;
    Sym2Series s1(traceTable(g, bound), bound);
    for (long d : {-1L, 5L}) {
      auto tw = globalReduce(quadraticTwist(g.minimalModel, d));
      Sym2Series s2(traceTable(tw, bound), bound);
      const Integer N12 = g.conductor * tw.conductor;
      const double S = smoothSumS(s1, Xs[0], psi, N12), H = smoothSumH(s1, s2, Xs[0], psi, N12);
      ++twistPairs;
      if (S != H) ++twistMismatch;
      twistCases.push_back({{"conductor", toJson(g.conductor)}, {"d", d}, {"S", S}, {"H", H}});
    }
  }
  // Non-isogenous pairs: |H| / sqrt(S1 S2) at X = 1e3 and 1e4.
  std::mt19937_64 rng(1111);
  std::uniform_int_distribution<std::size_t> pick(0, nonCM.size() - 1);
  std::size_t decreasing = 0, pairs = 0;
  Json pairCases = Json::array();
  while (pairs < kAc11Pairs) {
    const auto* a = nonCM[pick(rng)];
    const auto* b = nonCM[pick(rng)];
    if (a == b || a->reduction.inv.j == b->reduction.inv.j) continue;
    auto ta = traceTable(a->reduction, bound), tb = traceTable(b->reduction, bound);
    if (!findPairWitness(ta, tb, 1000)) continue;  // isogenous or twist
    Sym2Series sa(ta, bound), sb(tb, bound);
    const Integer N12 = a->conductor() * b->conductor();
    std::vector<double> ratios;
    for (double X : Xs) {
      const double S1 = smoothSumS(sa, X, psi, N12), S2 = smoothSumS(sb, X, psi, N12);
      const double H = smoothSumH(sa, sb, X, psi, N12);
      ratios.push_back(std::fabs(H) / std::sqrt(S1 * S2));
    }
    const bool dec = ratios[1] < ratios[0];
    decreasing += dec;
    pairCases.push_back({{"first", a->label}, {"second", b->label}, {"ratio1e3", ratios[0]}, {"ratio1e4", ratios[1]},
                         {"decreasing", dec}});
    ++pairs;
  }
  Verdict v;
  v.pass = twistMismatch == 0 && decreasing == pairs;
  v.summary = std::to_string(twistPairs) + " twist pairs with S == H (" + std::to_string(twistMismatch) +
              " mismatches); |H|/sqrt(S1 S2) decreases from 1e3 to 1e4 on " + std::to_string(decreasing) + "/" +
              std::to_string(pairs) + " pairs";
  v.detail = {{"twistPairs", twistCases}, {"pairs", pairCases}};
  return v;
}

// --- AC12 ----------------------------------------------------------------

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult runCapture(const std::string& cmd) {
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Verdict ac12(const std::string& cli, const std::string& corpusPath, const std::string& workdir) {
  const std::string small = workdir + "/small_corpus.csv";
  {
    std::ofstream f(small);
    f << "a1,a2,a3,a4,a6,label\n0,-1,1,-10,-20,11a\n1,0,1,4,-6,14a\n0,0,1,-1,0,37a\n0,1,1,0,0,43a\n"
         "0,0,0,0,1,36a\n0,0,1,-370440,3354797,ns5\n";
  }
  const std::vector<std::pair<std::string, std::string>> commands{
      {"tate", "tate '[0,0,0,0,25]' -p 5"},
      {"tate-file", "tate " + small + " -p 2 --format csv"},
      {"ap", "ap '[0,0,1,-1,0]' -X 2000"},
      {"image", "image '[0,0,1,-1,0]' -l 7 -X 2000"},
      {"pair", "pair '[0,0,1,-1,0]' '[0,1,1,0,0]' -X 2000"},
      {"epsilon", "epsilon '[0,0,1,-370440,3354797]' -l 5 -X 3000"},
      {"family", "family " + corpusPath + " --filter ss -N 3000"},
      {"family-csv", "family " + corpusPath + " --filter add12 -N 2000 --format csv"},
      {"pairs", "pairs " + corpusPath + " -X 500 --sample 400 --seed 17"},
      {"cm-census", "cm-census -N 100000"},
      {"symsum", "symsum " + small + " --pair 37a,43a -X 2000"},
      {"cdelta", "cdelta 5/6"},
  };
  std::size_t identical = 0, failures = 0;
  Json cases = Json::array();
  for (const auto& [name, args] : commands) {
    auto a = runCapture("'" + cli + "' " + args + " 2>/dev/null");
    auto b = runCapture("SERRE_LAB_THREADS=1 '" + cli + "' " + args + " 2>/dev/null");
    const bool same = a.code == 0 && b.code == 0 && a.out == b.out && !a.out.empty();
    if (same)
      ++identical;
    else
      ++failures;
    std::ofstream(workdir + "/ac12_" + name + ".out", std::ios::binary) << a.out;
    cases.push_back({{"command", name}, {"exit", a.code}, {"bytes", a.out.size()}, {"identical", same}});
  }
  Verdict v;
  v.pass = failures == 0;
  v.summary = std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " subcommands byte-identical across two runs (default threads vs 1 thread)";
  v.detail = {{"runs", cases}};
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serre-lab acceptance gate"};
  std::string cli, workdir = "acceptance_work", corpusPath = std::string(SERRE_DATA_DIR) + "/desk_corpus.csv";
  app.add_option("--cli", cli, "path to the serre-lab binary")->required();
  app.add_option("--workdir", workdir, "scratch directory for outputs");
  app.add_option("--corpus", corpusPath, "desk corpus CSV");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(workdir);

  Corpus corpus = ingest(corpusPath);
  std::vector<CorpusCurve> curves(corpus.records.size());
  parallelFor(curves.size(), [&](std::size_t i) {
    curves[i].record = &corpus.records[i];
    curves[i].traces = traceTable(corpus.records[i].reduction, kCorpusTraceBound);
  });
  std::cout << "corpus: " << corpus.records.size() << " curves, " << corpus.rejects.size() << " rejects\n";

  // Some criteria reuse curves produced by others, so results are collected
  // and printed in criterion order at the end.
  std::map<int, std::pair<std::string, Verdict>> results;
  auto record = [&](const std::string& id, const Verdict& v) {
    std::cerr << "finished " << id << std::endl;
    results[std::stoi(id.substr(2))] = {id, v};
  };
  auto guarded = [&](const std::string& id, auto&& fn) {
    try {
      record(id, fn());
    } catch (const std::exception& e) {
      Verdict v;
      v.summary = std::string("threw: ") + e.what();
      record(id, v);
    }
  };

  std::vector<GlobalReduction> processed;
  guarded("AC1", [&] { return ac1(); });
  guarded("AC3", [&] { return ac3(); });
  guarded("AC5", [&] { return ac5(curves, processed); });
  guarded("AC2", [&] {
    std::uint64_t extra = 0;
    for (const auto& g : processed) {
      auto t = traceTable(g, kCorpusTraceBound);
      for (const auto& e : t.entries())
        if (e.good) {
          if (!hasseWeilHolds(e.ap, e.p)) throw InvariantViolation("Hasse bound fails at " + std::to_string(e.p));
          ++extra;
        }
    }
    return ac2(curves, extra);
  });
  guarded("AC4", [&] { return ac4(curves, processed); });
  guarded("AC6", [&] { return ac6(curves); });
  guarded("AC7", [&] { return ac7(curves); });
  guarded("AC8", [&] { return ac8(curves); });
  guarded("AC9", [&] { return ac9(corpus, curves); });
  guarded("AC10", [&] { return ac10(); });
  guarded("AC11", [&] { return ac11(curves); });
  guarded("AC12", [&] { return ac12(cli, corpusPath, workdir); });

  Json report = Json::object();
  int failed = 0;
  for (const auto& [n, entry] : results) {
    const auto& [id, v] = entry;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << id << "  " << v.summary << "\n";
    report[id] = {{"pass", v.pass}, {"summary", v.summary}, {"detail", v.detail}};
    if (!v.pass) ++failed;
  }
  std::ofstream(workdir + "/acceptance_report.json") << emitJson(report);
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
