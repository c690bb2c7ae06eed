// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "serre/tracetable.hpp"

namespace serre {

// Sample counts below which imageTest refuses to decide, and at which a
// missing certificate is reported as witnessed non-surjectivity.
constexpr std::size_t kMinImageSamples = 10;
constexpr std::size_t kWitnessImageSamples = 100;

enum class ImageVerdict { surjective, nonsurjectiveWitnessed, undetermined };
std::string toString(ImageVerdict v);

// Proper-subgroup classes of GL2(F_ell) that the sampled (trace, det) data
// is compatible with.
enum class Obstruction {
  borel,                     // every sampled char poly splits mod ell
  splitCartanNormalizer,     // every sample: square discriminant or trace 0
  nonsplitCartanNormalizer,  // every sample: nonsquare/zero discriminant or trace 0
  exceptional,               // every sample has projective order <= 5
  twoTorsionPoint,           // ell = 2: rational root of the 2-division cubic
  squareDiscriminant,        // ell = 2: Delta is a square
  traceDataInconclusive,     // ell = 3: trace/det cannot separate classes
};
std::string toString(Obstruction o);

struct ImageCertificates {
  bool nonsquareDiscriminant = false;     // disc nonzero nonsquare, trace != 0
  bool squareDiscriminantTrace = false;   // disc nonzero square, trace != 0
  bool exceptionalExcluded = false;       // u = tr^2/det outside {0,1,2,4}, u^2-3u+1 != 0
  std::uint64_t witness[3] = {0, 0, 0};   // first prime realizing each certificate
  bool all() const { return nonsquareDiscriminant && squareDiscriminantTrace && exceptionalExcluded; }
};

struct ImageReport {
  std::uint64_t ell = 0;
  ImageVerdict verdict = ImageVerdict::undetermined;
  std::uint64_t sampleBound = 0;
  std::size_t samples = 0;
  ImageCertificates certificates;
  std::vector<Obstruction> obstructions;
  bool heuristic = false;  // true for any non-surjective verdict reached by sampling
};

struct FrobeniusSample {
  std::uint64_t p = 0;
  std::uint64_t trace = 0;  // a_p mod ell
  std::uint64_t det = 0;    // p mod ell
};

// Certificates and compatible obstruction classes from sampled Frobenius
// data. Exposed for oracle testing.
ImageCertificates scanCertificates(std::uint64_t ell, const std::vector<FrobeniusSample>& samples);
std::vector<Obstruction> compatibleObstructions(std::uint64_t ell, const std::vector<FrobeniusSample>& samples);

// Throws InsufficientSamples when fewer than kMinImageSamples usable primes
// exist and the certificates are incomplete.
ImageReport imageTest(const GlobalReduction& g, const TraceTable& t, std::uint64_t ell, std::uint64_t X);

// Integer roots of x^3 + b x^2 + c x + d.
std::vector<Integer> integerRootsOfMonicCubic(const Integer& b, const Integer& c, const Integer& d);

enum class JointVerdict { jointlySurjective, failed, undetermined };
std::string toString(JointVerdict v);

struct JointReport {
  std::uint64_t ell = 0;
  JointVerdict verdict = JointVerdict::undetermined;
  std::string reason;  // "condition-i", "condition-ii", "condition-iii" or ""
  std::uint64_t witness = 0;  // prime with a_p(E1) != +-a_p(E2) mod ell
  ImageVerdict first = ImageVerdict::undetermined, second = ImageVerdict::undetermined;
};

struct CurveData {
  const GlobalReduction* reduction;
  const TraceTable* traces;
};

JointReport jointSurjectivityTest(const CurveData& e1, const CurveData& e2, std::uint64_t ell, std::uint64_t X);

struct PairWitness {
  std::uint64_t p = 0;
  std::int64_t ap1 = 0, ap2 = 0;
};

std::optional<PairWitness> findPairWitness(const TraceTable& t1, const TraceTable& t2, std::uint64_t X);
// Throws NoWitnessBelow(X).
PairWitness pairWitness(const TraceTable& t1, const TraceTable& t2, std::uint64_t X);

struct ComparisonReport {
  std::uint64_t bound = 0;
  PairWitness witness;
  std::uint64_t windowLow = 0, windowHigh = 0;  // (bound, bound + 50]
  std::vector<JointReport> spotCheck;
  bool spotCheckPassed = true;
};

// max{cE1, cE2, ceil(4 sqrt(p))} from the pair witness.
std::uint64_t comparisonBoundValue(std::uint64_t cE1, std::uint64_t cE2, std::uint64_t witnessPrime);

// Throws NoWitnessBelow(X) when the pair witness is missing.
ComparisonReport comparisonBound(const CurveData& e1, const CurveData& e2, std::uint64_t cE1, std::uint64_t cE2,
                                 std::uint64_t X);

struct SurjectivityScan {
  std::uint64_t bound = 2;  // largest ell in the window that is not certified surjective
  std::vector<ImageReport> reports;
};

// Window-bounded empirical analogue of c(E).
SurjectivityScan empiricalSurjectivityBound(const GlobalReduction& g, const TraceTable& t,
                                            const std::vector<std::uint64_t>& window, std::uint64_t X);
std::vector<std::uint64_t> defaultEllWindow();  // primes 2..97

// --- quadratic characters attached to non-surjective primes -------------

struct EpsilonCandidate {
  Integer modulus;        // sign * 2^v2 * 3^v3 * ell^vl * D
  Integer discriminant;   // discriminant of Q(sqrt(modulus))
  int sign = 1, v2 = 0, v3 = 0, vl = 0;
  std::uint64_t minusOnePrimes = 0;  // good primes tested with value -1

  int value(std::uint64_t p) const;
};

struct EpsilonCandidateSet {
  std::uint64_t ell = 0;
  Integer baseSupport = 1;  // product of additive potentially good p not in {2,3,ell} with |Phi_p| = 4
  std::size_t enumerated = 0;
  std::uint64_t testedThrough = 0;
  std::vector<EpsilonCandidate> candidates;
};

EpsilonCandidateSet epsilonCandidates(const GlobalReduction& g, std::uint64_t ell);
EpsilonCandidateSet pruneEpsilon(const EpsilonCandidateSet& cands, const TraceTable& t, std::uint64_t ell);

// True unless ell is a prime of additive, potentially good reduction.
bool notAdditivePotentiallyGood(const GlobalReduction& g, std::uint64_t ell);

struct ScriptLEntry {
  std::uint64_t ell = 0;
  ImageReport image;
  std::vector<EpsilonCandidate> survivors;
};

struct ScriptLReport {
  std::vector<ScriptLEntry> primes;
  std::uint64_t witness = 0;  // 0 when the set is empty
  std::int64_t apAtWitness = 0;
  Integer product = 1;
  bool divides = true;
  bool hasseHolds = true;
};

// Throws NoCommonWitness when the set is nonempty and no p <= X works.
ScriptLReport scriptLScan(const GlobalReduction& g, const TraceTable& t, const std::vector<std::uint64_t>& window,
                          std::uint64_t X);

}  // namespace serre
