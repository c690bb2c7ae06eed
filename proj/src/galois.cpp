// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/galois.hpp"

#include <algorithm>

namespace serre {

std::string toString(ImageVerdict v) {
  switch (v) {
    case ImageVerdict::surjective: return "surjective";
    case ImageVerdict::nonsurjectiveWitnessed: return "nonsurjectiveWitnessed";
    case ImageVerdict::undetermined: return "undetermined";
  }
  return "?";
}

std::string toString(Obstruction o) {
  switch (o) {
    case Obstruction::borel: return "borel";
    case Obstruction::splitCartanNormalizer: return "splitCartanNormalizer";
    case Obstruction::nonsplitCartanNormalizer: return "nonsplitCartanNormalizer";
    case Obstruction::exceptional: return "exceptional";
    case Obstruction::twoTorsionPoint: return "twoTorsionPoint";
    case Obstruction::squareDiscriminant: return "squareDiscriminant";
    case Obstruction::traceDataInconclusive: return "traceDataInconclusive";
  }
  return "?";
}

std::string toString(JointVerdict v) {
  switch (v) {
    case JointVerdict::jointlySurjective: return "jointlySurjective";
    case JointVerdict::failed: return "failed";
    case JointVerdict::undetermined: return "undetermined";
  }
  return "?";
}

namespace {

std::vector<char> squareTable(std::uint64_t ell) {
  std::vector<char> sq(ell, 0);
  for (std::uint64_t y = 0; y < ell; ++y) sq[y * y % ell] = 1;
  return sq;
}

struct SampleClass {
  bool discZero, discSquare, traceZero, projectiveSmall;
};

SampleClass classify(std::uint64_t ell, const std::vector<char>& sq, const FrobeniusSample& s) {
  const std::uint64_t tr = s.trace % ell, det = s.det % ell;
  const std::uint64_t disc = (tr * tr + 4 * (ell - det)) % ell;
  SampleClass c;
  c.discZero = disc == 0;
  c.discSquare = sq[disc] != 0;
  c.traceZero = tr == 0;
  const std::uint64_t u = tr * tr % ell * invmod(det, ell) % ell;
  const std::uint64_t golden = (u * u + 3 * (ell - u) + 1) % ell;
  c.projectiveSmall = u == 0 || u == 1 || u == 2 || u == 4 % ell || golden == 0;
  return c;
}

std::vector<FrobeniusSample> collectSamples(const TraceTable& t, std::uint64_t ell, std::uint64_t X) {
  std::vector<FrobeniusSample> out;
  for (const auto& e : t.entries()) {
    if (e.p > X) break;
    if (!e.good || e.p == ell) continue;
    std::int64_t r = e.ap % static_cast<std::int64_t>(ell);
    if (r < 0) r += static_cast<std::int64_t>(ell);
    out.push_back({e.p, static_cast<std::uint64_t>(r), e.p % ell});
  }
  return out;
}

ImageReport imageTestTwo(const GlobalReduction& g) {
  ImageReport r;
  r.ell = 2;
  const Invariants& inv = g.inv;
  auto roots = integerRootsOfMonicCubic(inv.b2, 8 * inv.b4, 16 * inv.b6);
  if (!roots.empty()) r.obstructions.push_back(Obstruction::twoTorsionPoint);
  if (isPerfectSquare(inv.disc)) r.obstructions.push_back(Obstruction::squareDiscriminant);
  r.verdict = r.obstructions.empty() ? ImageVerdict::surjective : ImageVerdict::nonsurjectiveWitnessed;
  return r;
}

}  // namespace

ImageCertificates scanCertificates(std::uint64_t ell, const std::vector<FrobeniusSample>& samples) {
  ImageCertificates c;
  const auto sq = squareTable(ell);
  for (const auto& s : samples) {
    if (s.det % ell == 0) continue;
    SampleClass k = classify(ell, sq, s);
    if (!k.discZero && !k.discSquare && !k.traceZero && !c.nonsquareDiscriminant) {
      c.nonsquareDiscriminant = true;
      c.witness[0] = s.p;
    }
    if (!k.discZero && k.discSquare && !k.traceZero && !c.squareDiscriminantTrace) {
      c.squareDiscriminantTrace = true;
      c.witness[1] = s.p;
    }
    if (!k.projectiveSmall && !c.exceptionalExcluded) {
      c.exceptionalExcluded = true;
      c.witness[2] = s.p;
    }
    if (c.all()) break;
  }
  return c;
}

std::vector<Obstruction> compatibleObstructions(std::uint64_t ell, const std::vector<FrobeniusSample>& samples) {
  const auto sq = squareTable(ell);
  bool borel = true, split = true, nonsplit = true, exceptional = true;
  for (const auto& s : samples) {
    if (s.det % ell == 0) continue;
    SampleClass k = classify(ell, sq, s);
    if (!k.discSquare) borel = false;  // zero discriminant counts as square
    if (!k.discSquare && !k.traceZero) split = false;
    if (k.discSquare && !k.discZero && !k.traceZero) nonsplit = false;
    if (!k.projectiveSmall) exceptional = false;
  }
  std::vector<Obstruction> out;
  if (borel) out.push_back(Obstruction::borel);
  if (split) out.push_back(Obstruction::splitCartanNormalizer);
  if (nonsplit) out.push_back(Obstruction::nonsplitCartanNormalizer);
  if (exceptional) out.push_back(Obstruction::exceptional);
  return out;
}

ImageReport imageTest(const GlobalReduction& g, const TraceTable& t, std::uint64_t ell, std::uint64_t X) {
  if (!isPrime(ell)) throw InvalidArgument("imageTest: ell must be prime");
  if (ell == 2) return imageTestTwo(g);
  if (X > t.bound()) throw PreconditionFailed("imageTest: trace table covers only p <= " + std::to_string(t.bound()));
  ImageReport r;
  r.ell = ell;
  r.sampleBound = X;
  auto samples = collectSamples(t, ell, X);
  r.samples = samples.size();
  r.certificates = scanCertificates(ell, samples);
  if (ell == 3) {
    r.verdict = ImageVerdict::undetermined;
    r.obstructions.push_back(Obstruction::traceDataInconclusive);
    return r;
  }
  if (r.certificates.all()) {
    r.verdict = ImageVerdict::surjective;
    return r;
  }
  if (samples.size() < kMinImageSamples)
    throw InsufficientSamples("imageTest: only " + std::to_string(samples.size()) + " usable primes below " +
                              std::to_string(X));
  r.obstructions = compatibleObstructions(ell, samples);
  if (samples.size() < kWitnessImageSamples) {
    r.verdict = ImageVerdict::undetermined;
    return r;
  }
  r.verdict = ImageVerdict::nonsurjectiveWitnessed;
  r.heuristic = true;
  return r;
}

std::vector<Integer> integerRootsOfMonicCubic(const Integer& b, const Integer& c, const Integer& d) {
  auto f = [&](const Integer& x) -> Integer { return ((x + b) * x + c) * x + d; };
  Integer M = 1 + std::max({Integer(abs(b)), Integer(abs(c)), Integer(abs(d))});
  std::vector<Integer> roots;
  auto addRoot = [&](const Integer& x) {
    if (std::find(roots.begin(), roots.end(), x) == roots.end()) roots.push_back(x);
  };
  // Root search on an interval where f is monotone.
  auto monotone = [&](Integer lo, Integer hi) {
    if (lo > hi) return;
    int slo = sgn(f(lo)), shi = sgn(f(hi));
    if (slo == 0) addRoot(lo);
    if (shi == 0) addRoot(hi);
    if (slo == 0 || shi == 0 || slo == shi) return;
    while (hi - lo > 1) {
      Integer mid = (lo + hi) / 2;
      int sm = sgn(f(mid));
      if (sm == 0) {
        addRoot(mid);
        return;
      }
      if (sm == slo) lo = mid; else hi = mid;
    }
  };
  Integer dprime = 4 * b * b - 12 * c;  // discriminant of f' up to a factor
  if (dprime <= 0) {
    monotone(-M, M);
  } else {
    Integer s = sqrt(dprime);
    Integer k1, k2;
    Integer n1 = -2 * b - s, n2 = -2 * b + s;
    mpz_fdiv_q_ui(k1.get_mpz_t(), n1.get_mpz_t(), 6);
    mpz_fdiv_q_ui(k2.get_mpz_t(), n2.get_mpz_t(), 6);
    monotone(-M, k1 - 2);
    monotone(k1 + 3, k2 - 2);
    monotone(k2 + 3, M);
    for (Integer x = k1 - 2; x <= k1 + 2; ++x)
      if (f(x) == 0) addRoot(x);
    for (Integer x = k2 - 2; x <= k2 + 2; ++x)
      if (f(x) == 0) addRoot(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

JointReport jointSurjectivityTest(const CurveData& e1, const CurveData& e2, std::uint64_t ell, std::uint64_t X) {
  JointReport jr;
  jr.ell = ell;
  auto verdictOf = [&](const CurveData& e) {
    try {
      return imageTest(*e.reduction, *e.traces, ell, X).verdict;
    } catch (const InsufficientSamples&) {
      return ImageVerdict::undetermined;
    }
  };
  jr.first = verdictOf(e1);
  jr.second = verdictOf(e2);
  if (jr.first == ImageVerdict::nonsurjectiveWitnessed) {
    jr.verdict = JointVerdict::failed;
    jr.reason = "condition-i";
    return jr;
  }
  if (jr.second == ImageVerdict::nonsurjectiveWitnessed) {
    jr.verdict = JointVerdict::failed;
    jr.reason = "condition-ii";
    return jr;
  }
  if (jr.first != ImageVerdict::surjective || jr.second != ImageVerdict::surjective) {
    jr.verdict = JointVerdict::undetermined;
    jr.reason = jr.first != ImageVerdict::surjective ? "condition-i" : "condition-ii";
    return jr;
  }
  const auto& a = e1.traces->entries();
  const auto& b = e2.traces->entries();
  const std::int64_t L = static_cast<std::int64_t>(ell);
  std::size_t usable = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].p > X) break;
    if (!a[i].good || !b[i].good || a[i].p == ell) continue;
    ++usable;
    std::int64_t s = (a[i].ap + b[i].ap) % L, d = (a[i].ap - b[i].ap) % L;
    if (s != 0 && d != 0) {
      jr.verdict = JointVerdict::jointlySurjective;
      jr.witness = a[i].p;
      return jr;
    }
  }
  // Without a distinguishing prime the verdict needs enough samples to call it failed.
  jr.verdict = usable < kWitnessImageSamples ? JointVerdict::undetermined : JointVerdict::failed;
  jr.reason = "condition-iii";
  return jr;
}

std::optional<PairWitness> findPairWitness(const TraceTable& t1, const TraceTable& t2, std::uint64_t X) {
  const auto& a = t1.entries();
  const auto& b = t2.entries();
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].p > X) break;
    if (!a[i].good || !b[i].good) continue;
    if (std::llabs(a[i].ap) != std::llabs(b[i].ap)) return PairWitness{a[i].p, a[i].ap, b[i].ap};
  }
  return std::nullopt;
}

PairWitness pairWitness(const TraceTable& t1, const TraceTable& t2, std::uint64_t X) {
  if (X > t1.bound() || X > t2.bound()) throw PreconditionFailed("pairWitness: trace tables do not cover X");
  auto w = findPairWitness(t1, t2, X);
  if (!w) throw NoWitnessBelow(X);
  return *w;
}

std::uint64_t comparisonBoundValue(std::uint64_t cE1, std::uint64_t cE2, std::uint64_t witnessPrime) {
  return std::max({cE1, cE2, isqrtCeil(16 * witnessPrime)});
}

ComparisonReport comparisonBound(const CurveData& e1, const CurveData& e2, std::uint64_t cE1, std::uint64_t cE2,
                                 std::uint64_t X) {
  ComparisonReport r;
  r.witness = pairWitness(*e1.traces, *e2.traces, X);
  r.bound = comparisonBoundValue(cE1, cE2, r.witness.p);
  r.windowLow = r.bound;
  r.windowHigh = r.bound + 50;
  for (std::uint64_t ell = r.windowLow + 1; ell <= r.windowHigh; ++ell) {
    if (!isPrime(ell)) continue;
    JointReport jr;
    try {
      jr = jointSurjectivityTest(e1, e2, ell, X);
    } catch (const InsufficientSamples&) {
      jr.ell = ell;
      jr.verdict = JointVerdict::undetermined;
      jr.reason = "insufficient-samples";
    }
    if (jr.verdict != JointVerdict::jointlySurjective) r.spotCheckPassed = false;
    r.spotCheck.push_back(jr);
  }
  return r;
}

std::vector<std::uint64_t> defaultEllWindow() { return primesUpTo(97); }

SurjectivityScan empiricalSurjectivityBound(const GlobalReduction& g, const TraceTable& t,
                                            const std::vector<std::uint64_t>& window, std::uint64_t X) {
  SurjectivityScan s;
  for (std::uint64_t ell : window) {
    ImageReport r;
    try {
      r = imageTest(g, t, ell, X);
    } catch (const InsufficientSamples&) {
      r.ell = ell;
      r.sampleBound = X;
      r.verdict = ImageVerdict::undetermined;
    }
    if (r.verdict != ImageVerdict::surjective) s.bound = std::max(s.bound, ell);
    s.reports.push_back(r);
  }
  return s;
}

}  // namespace serre
