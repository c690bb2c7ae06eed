// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/family.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "serre/parallel.hpp"

namespace serre {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> splitCommas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Integer parseCoefficient(const std::string& s) {
  std::string t = trim(s);
  if (!t.empty() && t[0] == '+') t = t.substr(1);
  if (t.empty() || t == "-") throw ParseError("empty coefficient");
  for (std::size_t i = (t[0] == '-') ? 1 : 0; i < t.size(); ++i)
    if (t[i] < '0' || t[i] > '9') throw ParseError("non-integer coefficient '" + s + "'");
  return Integer(t);
}

Integer jsonCoefficient(const nlohmann::json& v, const char* key) {
  if (!v.contains(key)) throw ParseError(std::string("missing field ") + key);
  const auto& x = v.at(key);
  if (x.is_number_integer()) return Integer(x.dump());
  if (x.is_string()) return parseCoefficient(x.get<std::string>());
  throw ParseError(std::string("field ") + key + " is not an integer");
}

struct RowData {
  WeierstrassModel model;
  std::string label;
};

// Parse and reduce one row; everything except invariant violations becomes a reject.
void acceptRow(Corpus& c, std::size_t row, const std::string& text, const std::function<RowData()>& parse,
               std::unordered_set<std::string>& labels) {
  try {
    RowData d = parse();
    CurveRecord r;
    r.model = d.model;
    r.label = d.label.empty() ? d.model.str() : d.label;
    r.row = row;
    if (labels.count(r.label)) throw ParseError("duplicate label '" + r.label + "'");
    r.reduction = globalReduce(r.model);
    labels.insert(r.label);
    c.records.push_back(std::move(r));
  } catch (const InvariantViolation&) {
    throw;
  } catch (const SerreError& e) {
    c.rejects.push_back({row, text, e.what()});
  } catch (const nlohmann::json::exception& e) {
    c.rejects.push_back({row, text, std::string("malformed JSON: ") + e.what()});
  }
}

}  // namespace

const CurveRecord* Corpus::find(const std::string& label) const {
  for (const auto& r : records)
    if (r.label == label) return &r;
  return nullptr;
}

CorpusFormat formatForPath(const std::string& path) {
  auto ends = [&](const std::string& suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  return (ends(".jsonl") || ends(".json")) ? CorpusFormat::jsonLines : CorpusFormat::csvAinvariants;
}

Corpus ingestText(const std::string& text, CorpusFormat format) {
  Corpus c;
  std::unordered_set<std::string> labels;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (format == CorpusFormat::csvAinvariants && first && t.rfind("a1", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    ++row;
    ++c.rowCount;
    if (format == CorpusFormat::csvAinvariants) {
      acceptRow(c, row, t, [&] {
        auto f = splitCommas(t);
        if (f.size() != 5 && f.size() != 6)
          throw ParseError("expected 5 coefficients and an optional label, got " + std::to_string(f.size()) + " fields");
        RowData d;
        d.model = WeierstrassModel(parseCoefficient(f[0]), parseCoefficient(f[1]), parseCoefficient(f[2]),
                                   parseCoefficient(f[3]), parseCoefficient(f[4]));
        if (f.size() == 6) d.label = f[5];
        return d;
      }, labels);
    } else {
      acceptRow(c, row, t, [&] {
        auto v = nlohmann::json::parse(t);
        if (!v.is_object()) throw ParseError("row is not a JSON object");
        RowData d;
        d.model = WeierstrassModel(jsonCoefficient(v, "a1"), jsonCoefficient(v, "a2"), jsonCoefficient(v, "a3"),
                                   jsonCoefficient(v, "a4"), jsonCoefficient(v, "a6"));
        if (v.contains("label")) {
          if (!v["label"].is_string()) throw ParseError("label is not a string");
          d.label = v["label"].get<std::string>();
        }
        return d;
      }, labels);
    }
  }
  return c;
}

Corpus ingest(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open corpus file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ingestText(ss.str(), format);
}

Corpus ingest(const std::string& path) { return ingest(path, formatForPath(path)); }

std::string toString(FilterTag t) {
  switch (t) {
    case FilterTag::all: return "all";
    case FilterTag::semistable: return "semistable";
    case FilterTag::additiveCond12: return "additiveCond12";
    case FilterTag::cmOnly: return "cmOnly";
    case FilterTag::nonCM: return "nonCM";
  }
  return "?";
}

FilterTag parseFilterTag(const std::string& s) {
  if (s == "all") return FilterTag::all;
  if (s == "ss" || s == "semistable") return FilterTag::semistable;
  if (s == "add12" || s == "additiveCond12") return FilterTag::additiveCond12;
  if (s == "cm" || s == "cmOnly") return FilterTag::cmOnly;
  if (s == "noncm" || s == "nonCM") return FilterTag::nonCM;
  throw InvalidArgument("unknown filter '" + s + "'");
}

bool admits(const FamilyFilter& f, const CurveRecord& r) {
  const GlobalReduction& g = r.reduction;
  if (f.ceiling > 0 && g.conductor > f.ceiling) return false;
  switch (f.tag) {
    case FilterTag::all: return true;
    case FilterTag::semistable: return g.semistable;
    case FilterTag::additiveCond12: return g.satisfiesCondition12;
    case FilterTag::cmOnly: return isCM(g.inv.j);
    case FilterTag::nonCM: return !isCM(g.inv.j);
  }
  return false;
}

Fingerprint fingerprint(const GlobalReduction& g) {
  static const std::vector<std::uint64_t> primes = [] {
    auto ps = primesUpTo(100);
    ps.resize(kFingerprintPrimes);
    return ps;
  }();
  Fingerprint fp{};
  for (std::size_t i = 0; i < kFingerprintPrimes; ++i) {
    const LocalReduction* l = g.local(Integer(static_cast<unsigned long>(primes[i])));
    fp[i] = l ? l->localTrace() : countPoints(g.minimalModel, primes[i]);
  }
  return fp;
}

Family buildFamily(const Corpus& corpus, const FamilyFilter& filter) {
  Family fam;
  fam.filter = filter;
  for (const auto& r : corpus.records)
    if (admits(filter, r)) fam.members.push_back({&r, {}, {}});
  std::sort(fam.members.begin(), fam.members.end(), [](const FamilyMember& a, const FamilyMember& b) {
    int c = cmp(a.record->conductor(), b.record->conductor());
    if (c != 0) return c < 0;
    return a.record->label < b.record->label;
  });
  parallelFor(fam.members.size(), [&](std::size_t i) { fam.members[i].print = fingerprint(fam.members[i].record->reduction); });
  std::map<std::pair<std::string, Fingerprint>, std::string> seen;
  for (auto& m : fam.members) {
    auto key = std::make_pair(m.record->conductor().get_str(), m.print);
    auto it = seen.find(key);
    if (it == seen.end())
      seen.emplace(key, m.record->label);
    else
      m.collidesWith = it->second;
  }
  fam.distinctFingerprints = seen.size();
  return fam;
}

std::uint64_t empiricalC(const GlobalReduction& g, const TraceTable& t, std::uint64_t X) {
  return empiricalSurjectivityBound(g, t, defaultEllWindow(), X).bound;
}

PairStatistics pairStatistics(const Family& family, std::uint64_t X, std::size_t sampleCap, std::uint64_t seed) {
  PairStatistics st;
  st.X = X;
  st.sampleCap = sampleCap;
  st.seed = seed;
  const std::uint64_t n = family.members.size();
  st.familySize = n;
  st.totalPairs = n < 2 ? 0 : n * (n - 1) / 2;
  if (st.totalPairs == 0 || sampleCap == 0) return st;

  // Pair indices in lexicographic order of (i, j).
  std::vector<std::uint64_t> chosen;
  if (sampleCap >= st.totalPairs) {
    chosen.resize(st.totalPairs);
    for (std::uint64_t k = 0; k < st.totalPairs; ++k) chosen[k] = k;
  } else {
    std::mt19937_64 rng(seed);
    std::set<std::uint64_t> pick;
    // Floyd's sampling of sampleCap distinct indices.
    for (std::uint64_t j = st.totalPairs - sampleCap; j < st.totalPairs; ++j) {
      std::uniform_int_distribution<std::uint64_t> dist(0, j);
      std::uint64_t v = dist(rng);
      if (!pick.insert(v).second) pick.insert(j);
    }
    chosen.assign(pick.begin(), pick.end());
  }
  st.pairs.resize(chosen.size());
  {
    std::uint64_t i = 0, rowStart = 0;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      while (chosen[k] >= rowStart + (n - 1 - i)) {
        rowStart += n - 1 - i;
        ++i;
      }
      st.pairs[k].first = static_cast<std::uint32_t>(i);
      st.pairs[k].second = static_cast<std::uint32_t>(i + 1 + (chosen[k] - rowStart));
    }
  }

  std::vector<char> used(n, 0);
  for (const auto& p : st.pairs) used[p.first] = used[p.second] = 1;
  std::vector<TraceTable> tables(n);
  std::vector<std::uint64_t> cE(n, 0);
  parallelFor(n, [&](std::size_t i) {
    if (!used[i]) return;
    const GlobalReduction& g = family.members[i].record->reduction;
    tables[i] = traceTable(g, X);
    cE[i] = empiricalC(g, tables[i], X);
  });

  parallelFor(st.pairs.size(), [&](std::size_t k) {
    PairRecord& pr = st.pairs[k];
    const auto& m1 = family.members[pr.first];
    const auto& m2 = family.members[pr.second];
    pr.sameJ = m1.record->reduction.inv.j == m2.record->reduction.inv.j;
    pr.fingerprintCollision = m1.print == m2.print && m1.record->conductor() == m2.record->conductor();
    pr.witness = findPairWitness(tables[pr.first], tables[pr.second], X);
    if (pr.witness) {
      pr.comparisonBound = comparisonBoundValue(cE[pr.first], cE[pr.second], pr.witness->p);
      double logN = std::log(std::max(m1.record->conductor(), m2.record->conductor()).get_d());
      pr.withinLogSquare = static_cast<double>(pr.witness->p) <= logN * logN;
    }
  });

  std::size_t w100 = 0, w1000 = 0, wlog = 0;
  for (std::size_t k = 0; k < st.pairs.size(); ++k) {
    const PairRecord& pr = st.pairs[k];
    if (pr.witness)
      ++st.witnessHistogram[pr.witness->p];
    else
      st.noWitness.push_back(k);
    if (!pr.clean()) continue;
    ++st.cleanPairs;
    if (pr.witness && pr.witness->p <= 100) ++w100;
    if (pr.witness && pr.witness->p <= 1000) ++w1000;
    if (pr.withinLogSquare) ++wlog;
  }
  if (st.cleanPairs) {
    const double c = static_cast<double>(st.cleanPairs);
    st.fractionWithin100 = w100 / c;
    st.fractionWithin1000 = w1000 / c;
    st.fractionWithinLogSquare = wlog / c;
  }
  return st;
}

}  // namespace serre
