// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "serre/galois.hpp"

namespace serre {

struct CurveRecord {
  std::string label;
  WeierstrassModel model;  // as read
  GlobalReduction reduction;
  std::size_t row = 0;  // 1-based data row in the source file
  std::optional<std::string> traceCachePath;

  const Integer& conductor() const { return reduction.conductor; }
};

struct RejectedRow {
  std::size_t row = 0;
  std::string text;
  std::string error;
};

struct Corpus {
  std::vector<CurveRecord> records;
  std::vector<RejectedRow> rejects;
  std::size_t rowCount = 0;  // data rows seen, header excluded

  const CurveRecord* find(const std::string& label) const;
};

enum class CorpusFormat { csvAinvariants, jsonLines };

// Picks jsonLines for *.jsonl / *.json, CSV otherwise.
CorpusFormat formatForPath(const std::string& path);
Corpus ingest(const std::string& path, CorpusFormat format);
Corpus ingest(const std::string& path);
Corpus ingestText(const std::string& text, CorpusFormat format);

enum class FilterTag { all, semistable, additiveCond12, cmOnly, nonCM };
std::string toString(FilterTag t);
// Accepts all|ss|semistable|add12|additiveCond12|cm|cmOnly|noncm|nonCM.
FilterTag parseFilterTag(const std::string& s);

struct FamilyFilter {
  FilterTag tag = FilterTag::all;
  Integer ceiling = 0;  // conductor ceiling N; 0 for none
};

bool admits(const FamilyFilter& f, const CurveRecord& r);

constexpr std::size_t kFingerprintPrimes = 20;
using Fingerprint = std::array<std::int64_t, kFingerprintPrimes>;
// a_p at the first 20 primes, local trace at bad ones.
Fingerprint fingerprint(const GlobalReduction& g);

struct FamilyMember {
  const CurveRecord* record = nullptr;
  Fingerprint print{};
  std::string collidesWith;  // first earlier member with the same conductor and fingerprint
};

struct Family {
  FamilyFilter filter;
  std::vector<FamilyMember> members;  // by conductor, then label
  std::size_t distinctFingerprints = 0;
};

Family buildFamily(const Corpus& corpus, const FamilyFilter& filter);

// Rational j-invariants with complex multiplication, one per class number one
// discriminant, ordered as the discriminants (descending).
const std::vector<long>& cmDiscriminants();
const std::vector<Integer>& cmJInvariants();
bool isCM(const Rational& j);

struct PairRecord {
  std::uint32_t first = 0, second = 0;  // member indices, first < second
  std::optional<PairWitness> witness;  // empty when no witness below X
  std::uint64_t comparisonBound = 0;   // 0 without a witness
  bool sameJ = false;                  // twists of each other over Q-bar
  bool fingerprintCollision = false;
  bool withinLogSquare = false;  // witness <= (log max(N1, N2))^2

  bool clean() const { return !sameJ && !fingerprintCollision; }
};

struct PairStatistics {
  std::uint64_t X = 0;
  std::size_t sampleCap = 0;
  std::uint64_t seed = 0;
  std::size_t familySize = 0;
  std::uint64_t totalPairs = 0;
  std::vector<PairRecord> pairs;  // sorted by (first, second)
  std::map<std::uint64_t, std::size_t> witnessHistogram;
  // Fractions over pairs that are neither same-j nor fingerprint collisions.
  std::size_t cleanPairs = 0;
  double fractionWithin100 = 0, fractionWithin1000 = 0, fractionWithinLogSquare = 0;
  std::vector<std::size_t> noWitness;  // indices into pairs
};

// Uniform sample of at most sampleCap unordered pairs, drawn from a
// mt19937_64 seeded with seed. All pairs when sampleCap covers them.
PairStatistics pairStatistics(const Family& family, std::uint64_t X, std::size_t sampleCap, std::uint64_t seed);

// Per-curve empirical surjectivity bound over primes <= 97.
std::uint64_t empiricalC(const GlobalReduction& g, const TraceTable& t, std::uint64_t X);

struct CMBaseCurve {
  long discriminant = 0;
  Integer j;
  WeierstrassModel model;
  Integer conductor;
};

// Fixed minimal-conductor model per CM j-invariant, checked on first use
// against the computed j-invariant and the a_p = 0 density below 500.
const std::vector<CMBaseCurve>& cmBaseCurves();

// Some model with the given j-invariant (j != 0, 1728 rational), then the
// quadratic twist of least conductor among twists by signed products of its
// bad primes; ties go to the smaller coefficient string.
WeierstrassModel minimalTwistWithJ(const Rational& j);

struct CensusTwist {
  long discriminant = 0;  // CM discriminant of the base
  TwistOrder order = TwistOrder::quadratic;
  Integer parameter;
  WeierstrassModel minimalModel;
  Integer conductor;
};

struct CensusRow {
  Integer ceiling;
  std::size_t count = 0;
  double normalized = 0;  // count / sqrt(ceiling)
  std::map<long, std::size_t> perDiscriminant;
};

struct CensusReport {
  std::vector<long> discriminants;
  std::vector<CensusRow> rows;  // ascending ceilings
  double exponent = 0, exponentStdError = 0, residual = 0;
  bool fitted = false;  // needs two ceilings with nonzero counts
  // Same fit restricted to j != 0, 1728 (quadratic twists only).
  double exponentQuadratic = 0;
  bool fittedQuadratic = false;
  std::vector<CensusTwist> twists;  // all curves found below the largest ceiling
};

CensusReport cmCensus(const std::vector<Integer>& ceilings);
CensusReport cmCensus(const Integer& ceiling);

struct ExponentFit {
  double slope = 0, stdError = 0, residual = 0;
};
// Least squares of log y against log x; points with y == 0 are skipped.
std::optional<ExponentFit> fitExponent(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace serre
