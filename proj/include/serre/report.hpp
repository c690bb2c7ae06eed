// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "serre/family.hpp"
#include "serre/symprime.hpp"

namespace serre {

using Json = nlohmann::json;  // object keys come out sorted

// printf("%.12g"); non-finite values become "inf", "-inf" or "nan".
std::string formatReal(double v);
// Indented JSON, sorted keys, reals at 12 significant digits, trailing newline.
std::string emitJson(const Json& doc);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 quoting; header line always present.
std::string emitCsv(const Table& t);
// Inverse of emitCsv. Throws ParseError on ragged rows or bad quoting.
Table parseCsv(const std::string& text);

enum class ReportFormat { json, csv };
ReportFormat parseReportFormat(const std::string& s);

struct Report {
  std::string kind;
  Json json;
  Table table;
};

std::string reportEmit(const Report& r, ReportFormat format);
// Writes the rendered report; throws SerreError naming the path on I/O failure.
void reportEmit(const Report& r, ReportFormat format, const std::string& path);

// Big integers stay exact: JSON numbers when they fit in 64 bits, strings otherwise.
Json toJson(const Integer& n);
Json toJson(const Rational& q);
Json toJson(const WeierstrassModel& m);
Json toJson(const LocalReduction& l);
Json toJson(const GlobalReduction& g);
Json toJson(const ImageReport& r);
Json toJson(const JointReport& r);
Json toJson(const EpsilonCandidate& c);

struct SymSumResult {
  std::string label1, label2;
  double X = 0;
  double s1 = 0, s2 = 0, h = 0;  // S(X) for each curve and the cross sum H(X)
  double ratio = 0;              // |H| / sqrt(S1 S2)
  bool sameJ = false;
  std::vector<std::uint64_t> excludedPrimes;  // primes dividing N1 N2
};

Report tateReport(const WeierstrassModel& input, const TateResult& r);
Report globalReport(const std::string& label, const GlobalReduction& g);
Report apReport(const WeierstrassModel& input, const GlobalReduction& g, const TraceTable& t);
Report imageReport(const WeierstrassModel& input, const ImageReport& r);
Report pairReport(const WeierstrassModel& m1, const WeierstrassModel& m2, std::uint64_t cE1, std::uint64_t cE2,
                  const std::optional<ComparisonReport>& r, std::uint64_t X);
Report epsilonReport(const WeierstrassModel& input, const EpsilonCandidateSet& enumerated,
                     const EpsilonCandidateSet& pruned, const ImageReport& image);
Report scriptLReport(const WeierstrassModel& input, const ScriptLReport& r);
Report familyReport(const Corpus& corpus, const Family& f);
Report rejectsReport(const Corpus& corpus);
Report pairsReport(const Family& f, const PairStatistics& s);
Report censusReport(const CensusReport& c);
Report symsumReport(const SymSumResult& s);
Report cdeltaReport(const Rational& delta);

Table censusTable(const CensusReport& c);
// Rebuilds ceilings, counts, per-discriminant counts and fit from censusTable output.
CensusReport parseCensusCsv(const std::string& text);

}  // namespace serre
