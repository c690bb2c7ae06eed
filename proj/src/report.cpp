// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace serre {

std::string formatReal(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

void emitValue(const Json& v, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        emitValue(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emitValue(v[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      double d = v.get<double>();
      out += std::isfinite(d) ? formatReal(d) : Json(formatReal(d)).dump();
      return;
    }
    default:
      out += v.dump();
  }
}

std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string str(std::uint64_t v) { return std::to_string(v); }

std::string boolStr(bool b) { return b ? "true" : "false"; }

Json primesJson(const std::vector<std::uint64_t>& v) {
  Json a = Json::array();
  for (auto p : v) a.push_back(p);
  return a;
}

}  // namespace

std::string emitJson(const Json& doc) {
  std::string out;
  emitValue(doc, out, 0);
  out += "\n";
  return out;
}

std::string emitCsv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csvField(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csvField(row[i]);
    out += "\n";
  }
  return out;
}

Table parseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> cur;
  std::string field;
  bool quoted = false, fieldStarted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) throw ParseError("csv: stray quote in field");
      quoted = fieldStarted = true;
    } else if (c == ',') {
      cur.push_back(field);
      field.clear();
      fieldStarted = true;
    } else if (c == '\n') {
      cur.push_back(field);
      lines.push_back(cur);
      cur.clear();
      field.clear();
      fieldStarted = false;
    } else if (c != '\r') {
      field += c;
      fieldStarted = true;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quote");
  if (fieldStarted || !field.empty() || !cur.empty()) {
    cur.push_back(field);
    lines.push_back(cur);
  }
  Table t;
  if (lines.empty()) return t;
  t.columns = lines[0];
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.columns.size())
      throw ParseError("csv: row " + std::to_string(i) + " has " + std::to_string(lines[i].size()) + " fields, expected " +
                       std::to_string(t.columns.size()));
    t.rows.push_back(lines[i]);
  }
  return t;
}

ReportFormat parseReportFormat(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw InvalidArgument("unknown format '" + s + "' (expected json or csv)");
}

std::string reportEmit(const Report& r, ReportFormat format) {
  return format == ReportFormat::json ? emitJson(r.json) : emitCsv(r.table);
}

void reportEmit(const Report& r, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SerreError("cannot open " + path + " for writing");
  out << reportEmit(r, format);
  out.close();
  if (!out) throw SerreError("write failed for " + path);
}

Json toJson(const Integer& n) {
  if (n.fits_slong_p()) return Json(static_cast<std::int64_t>(n.get_si()));
  return Json(n.get_str());
}

Json toJson(const Rational& q) {
  if (q.get_den() == 1) return toJson(q.get_num());
  return Json(q.get_str());
}

Json toJson(const WeierstrassModel& m) { return Json::array({toJson(m.a1), toJson(m.a2), toJson(m.a3), toJson(m.a4), toJson(m.a6)}); }

Json toJson(const LocalReduction& l) {
  Json j;
  j["p"] = toJson(l.p);
  j["kodaira"] = l.kodaira.str();
  j["conductorExponent"] = l.conductorExp;
  j["vDeltaMin"] = l.vDeltaMin;
  j["reduction"] = toString(l.redType);
  j["potentiallyGood"] = l.potGood;
  j["phi"] = toString(l.phi);
  j["localTrace"] = l.localTrace();
  return j;
}

Json toJson(const GlobalReduction& g) {
  Json j;
  j["minimalModel"] = toJson(g.minimalModel);
  j["conductor"] = toJson(g.conductor);
  j["discriminant"] = toJson(g.inv.disc);
  j["j"] = toJson(g.inv.j);
  j["semistable"] = g.semistable;
  j["satisfiesCondition12"] = g.satisfiesCondition12;
  j["nAdd"] = toJson(g.nAdd);
  j["nMult"] = toJson(g.nMult);
  j["cm"] = isCM(g.inv.j);
  Json locals = Json::array();
  for (const auto& l : g.locals) locals.push_back(toJson(l));
  j["badPrimes"] = locals;
  return j;
}

Json toJson(const ImageReport& r) {
  Json j;
  j["ell"] = r.ell;
  j["verdict"] = toString(r.verdict);
  j["sampleBound"] = r.sampleBound;
  j["samples"] = r.samples;
  j["heuristic"] = r.heuristic;
  Json c;
  c["nonsquareDiscriminant"] = r.certificates.nonsquareDiscriminant;
  c["squareDiscriminantTrace"] = r.certificates.squareDiscriminantTrace;
  c["exceptionalExcluded"] = r.certificates.exceptionalExcluded;
  c["witnesses"] = Json::array({r.certificates.witness[0], r.certificates.witness[1], r.certificates.witness[2]});
  j["certificates"] = c;
  Json obs = Json::array();
  for (auto o : r.obstructions) obs.push_back(toString(o));
  j["obstructions"] = obs;
  return j;
}

Json toJson(const JointReport& r) {
  Json j;
  j["ell"] = r.ell;
  j["verdict"] = toString(r.verdict);
  j["reason"] = r.reason;
  j["witness"] = r.witness;
  j["first"] = toString(r.first);
  j["second"] = toString(r.second);
  return j;
}

Json toJson(const EpsilonCandidate& c) {
  Json j;
  j["modulus"] = toJson(c.modulus);
  j["discriminant"] = toJson(c.discriminant);
  j["sign"] = c.sign;
  j["v2"] = c.v2;
  j["v3"] = c.v3;
  j["vEll"] = c.vl;
  j["minusOnePrimes"] = c.minusOnePrimes;
  return j;
}

Report tateReport(const WeierstrassModel& input, const TateResult& r) {
  Report rep{"tate", {}, {}};
  rep.json["kind"] = "tate";
  rep.json["input"] = toJson(input);
  rep.json["local"] = toJson(r.local);
  rep.json["minimalModelAtP"] = toJson(r.minimalModel);
  rep.table.columns = {"model", "p", "kodaira", "conductor_exponent", "v_delta_min", "reduction", "pot_good", "phi"};
  const auto& l = r.local;
  rep.table.rows.push_back({input.str(), l.p.get_str(), l.kodaira.str(), std::to_string(l.conductorExp),
                            std::to_string(l.vDeltaMin), toString(l.redType), boolStr(l.potGood), toString(l.phi)});
  return rep;
}

Report globalReport(const std::string& label, const GlobalReduction& g) {
  Report rep{"reduction", {}, {}};
  rep.json = toJson(g);
  rep.json["kind"] = "reduction";
  rep.json["label"] = label;
  rep.table.columns = {"label", "conductor", "p", "kodaira", "conductor_exponent", "reduction", "phi"};
  for (const auto& l : g.locals)
    rep.table.rows.push_back({label, g.conductor.get_str(), l.p.get_str(), l.kodaira.str(), std::to_string(l.conductorExp),
                              toString(l.redType), toString(l.phi)});
  return rep;
}

Report apReport(const WeierstrassModel& input, const GlobalReduction& g, const TraceTable& t) {
  Report rep{"ap", {}, {}};
  rep.json["kind"] = "ap";
  rep.json["input"] = toJson(input);
  rep.json["conductor"] = toJson(g.conductor);
  rep.json["bound"] = t.bound();
  Json rows = Json::array();
  rep.table.columns = {"p", "ap", "good"};
  for (const auto& e : t.entries()) {
    rows.push_back(Json{{"p", e.p}, {"ap", e.ap}, {"good", e.good}});
    rep.table.rows.push_back({str(e.p), std::to_string(e.ap), boolStr(e.good)});
  }
  rep.json["traces"] = rows;
  return rep;
}

Report imageReport(const WeierstrassModel& input, const ImageReport& r) {
  Report rep{"image", {}, {}};
  rep.json = toJson(r);
  rep.json["kind"] = "image";
  rep.json["input"] = toJson(input);
  std::string obs;
  for (auto o : r.obstructions) obs += (obs.empty() ? "" : ";") + toString(o);
  rep.table.columns = {"model", "ell", "verdict", "samples", "heuristic", "obstructions"};
  rep.table.rows.push_back({input.str(), str(r.ell), toString(r.verdict), str(r.samples), boolStr(r.heuristic), obs});
  return rep;
}

Report pairReport(const WeierstrassModel& m1, const WeierstrassModel& m2, std::uint64_t cE1, std::uint64_t cE2,
                  const std::optional<ComparisonReport>& r, std::uint64_t X) {
  Report rep{"pair", {}, {}};
  rep.json["kind"] = "pair";
  rep.json["curves"] = Json::array({toJson(m1), toJson(m2)});
  rep.json["X"] = X;
  rep.json["cE"] = Json::array({cE1, cE2});
  rep.table.columns = {"model1", "model2", "witness", "ap1", "ap2", "comparison_bound", "spot_check_passed"};
  if (!r) {
    rep.json["witness"] = nullptr;
    rep.json["comparisonBound"] = nullptr;
    rep.table.rows.push_back({m1.str(), m2.str(), "", "", "", "", ""});
    return rep;
  }
  rep.json["witness"] = Json{{"p", r->witness.p}, {"ap1", r->witness.ap1}, {"ap2", r->witness.ap2}};
  rep.json["comparisonBound"] = r->bound;
  rep.json["window"] = Json::array({r->windowLow, r->windowHigh});
  Json spot = Json::array();
  for (const auto& j : r->spotCheck) spot.push_back(toJson(j));
  rep.json["spotCheck"] = spot;
  rep.json["spotCheckPassed"] = r->spotCheckPassed;
  rep.table.rows.push_back({m1.str(), m2.str(), str(r->witness.p), std::to_string(r->witness.ap1),
                            std::to_string(r->witness.ap2), str(r->bound), boolStr(r->spotCheckPassed)});
  return rep;
}

Report epsilonReport(const WeierstrassModel& input, const EpsilonCandidateSet& enumerated,
                     const EpsilonCandidateSet& pruned, const ImageReport& image) {
  Report rep{"epsilon", {}, {}};
  rep.json["kind"] = "epsilon";
  rep.json["input"] = toJson(input);
  rep.json["ell"] = enumerated.ell;
  rep.json["baseSupport"] = toJson(enumerated.baseSupport);
  rep.json["enumerated"] = enumerated.enumerated;
  rep.json["nonPrincipal"] = enumerated.candidates.size();
  rep.json["testedThrough"] = pruned.testedThrough;
  rep.json["image"] = toJson(image);
  Json surv = Json::array();
  rep.table.columns = {"ell", "modulus", "discriminant", "minus_one_primes"};
  for (const auto& c : pruned.candidates) {
    surv.push_back(toJson(c));
    rep.table.rows.push_back({str(enumerated.ell), c.modulus.get_str(), c.discriminant.get_str(), str(c.minusOnePrimes)});
  }
  rep.json["survivors"] = surv;
  return rep;
}

Report scriptLReport(const WeierstrassModel& input, const ScriptLReport& r) {
  Report rep{"scriptL", {}, {}};
  rep.json["kind"] = "scriptL";
  rep.json["input"] = toJson(input);
  Json ps = Json::array();
  for (const auto& e : r.primes) ps.push_back(Json{{"ell", e.ell}, {"survivors", e.survivors.size()}});
  rep.json["primes"] = ps;
  rep.json["witness"] = r.witness;
  rep.json["apAtWitness"] = r.apAtWitness;
  rep.json["product"] = toJson(r.product);
  rep.json["divides"] = r.divides;
  rep.json["hasseHolds"] = r.hasseHolds;
  rep.table.columns = {"primes", "product", "witness", "ap", "divides", "hasse_holds"};
  std::string ls;
  for (const auto& e : r.primes) ls += (ls.empty() ? "" : ";") + str(e.ell);
  rep.table.rows.push_back({ls, r.product.get_str(), str(r.witness), std::to_string(r.apAtWitness), boolStr(r.divides),
                            boolStr(r.hasseHolds)});
  return rep;
}

Report familyReport(const Corpus& corpus, const Family& f) {
  Report rep{"family", {}, {}};
  rep.json["kind"] = "family";
  rep.json["filter"] = toString(f.filter.tag);
  rep.json["ceiling"] = toJson(f.filter.ceiling);
  rep.json["count"] = f.members.size();
  rep.json["distinctFingerprints"] = f.distinctFingerprints;
  rep.json["corpusRows"] = corpus.rowCount;
  rep.json["rejected"] = corpus.rejects.size();
  Json ms = Json::array();
  rep.table.columns = {"label", "conductor", "model", "semistable", "cond12", "cm", "collides_with"};
  for (const auto& m : f.members) {
    const auto& r = *m.record;
    const auto& g = r.reduction;
    bool cm = isCM(g.inv.j);
    ms.push_back(Json{{"label", r.label},
                      {"conductor", toJson(g.conductor)},
                      {"model", toJson(g.minimalModel)},
                      {"semistable", g.semistable},
                      {"satisfiesCondition12", g.satisfiesCondition12},
                      {"cm", cm},
                      {"collidesWith", m.collidesWith}});
    rep.table.rows.push_back({r.label, g.conductor.get_str(), g.minimalModel.str(), boolStr(g.semistable),
                              boolStr(g.satisfiesCondition12), boolStr(cm), m.collidesWith});
  }
  rep.json["members"] = ms;
  return rep;
}

Report rejectsReport(const Corpus& corpus) {
  Report rep{"rejects", {}, {}};
  rep.json["kind"] = "rejects";
  Json rs = Json::array();
  rep.table.columns = {"row", "text", "error"};
  for (const auto& r : corpus.rejects) {
    rs.push_back(Json{{"row", r.row}, {"text", r.text}, {"error", r.error}});
    rep.table.rows.push_back({str(r.row), r.text, r.error});
  }
  rep.json["rejects"] = rs;
  return rep;
}

Report pairsReport(const Family& f, const PairStatistics& s) {
  Report rep{"pairs", {}, {}};
  rep.json["kind"] = "pairs";
  rep.json["X"] = s.X;
  rep.json["sampleCap"] = s.sampleCap;
  rep.json["seed"] = s.seed;
  rep.json["familySize"] = s.familySize;
  rep.json["totalPairs"] = s.totalPairs;
  rep.json["sampled"] = s.pairs.size();
  rep.json["cleanPairs"] = s.cleanPairs;
  rep.json["fractionWitnessAtMost100"] = s.fractionWithin100;
  rep.json["fractionWitnessAtMost1000"] = s.fractionWithin1000;
  rep.json["fractionWitnessAtMostLogSquare"] = s.fractionWithinLogSquare;
  Json hist = Json::object();
  for (const auto& [p, c] : s.witnessHistogram) hist[std::to_string(p)] = c;
  rep.json["witnessHistogram"] = hist;
  Json nw = Json::array();
  for (auto k : s.noWitness) {
    const auto& pr = s.pairs[k];
    nw.push_back(Json::array({f.members[pr.first].record->label, f.members[pr.second].record->label}));
  }
  rep.json["noWitness"] = nw;
  Json ps = Json::array();
  rep.table.columns = {"label1", "label2", "conductor1", "conductor2", "witness", "comparison_bound", "same_j",
                       "fingerprint_collision", "within_log_square"};
  for (const auto& pr : s.pairs) {
    const auto& r1 = *f.members[pr.first].record;
    const auto& r2 = *f.members[pr.second].record;
    std::string w = pr.witness ? str(pr.witness->p) : "";
    ps.push_back(Json{{"label1", r1.label},
                      {"label2", r2.label},
                      {"witness", pr.witness ? Json(pr.witness->p) : Json(nullptr)},
                      {"comparisonBound", pr.comparisonBound},
                      {"sameJ", pr.sameJ},
                      {"fingerprintCollision", pr.fingerprintCollision},
                      {"withinLogSquare", pr.withinLogSquare}});
    rep.table.rows.push_back({r1.label, r2.label, r1.conductor().get_str(), r2.conductor().get_str(), w,
                              str(pr.comparisonBound), boolStr(pr.sameJ), boolStr(pr.fingerprintCollision),
                              boolStr(pr.withinLogSquare)});
  }
  rep.json["pairs"] = ps;
  return rep;
}

Table censusTable(const CensusReport& c) {
  Table t;
  t.columns = {"ceiling", "count", "count_over_sqrt_n"};
  for (long d : c.discriminants) t.columns.push_back("D" + std::to_string(d));
  for (const char* col : {"exponent", "exponent_stderr", "residual", "exponent_quadratic"}) t.columns.push_back(col);
  for (const auto& row : c.rows) {
    std::vector<std::string> r{row.ceiling.get_str(), str(row.count), formatReal(row.normalized)};
    for (long d : c.discriminants) {
      auto it = row.perDiscriminant.find(d);
      r.push_back(str(it == row.perDiscriminant.end() ? 0 : it->second));
    }
    r.push_back(c.fitted ? formatReal(c.exponent) : "");
    r.push_back(c.fitted ? formatReal(c.exponentStdError) : "");
    r.push_back(c.fitted ? formatReal(c.residual) : "");
    r.push_back(c.fittedQuadratic ? formatReal(c.exponentQuadratic) : "");
    t.rows.push_back(r);
  }
  return t;
}

CensusReport parseCensusCsv(const std::string& text) {
  Table t = parseCsv(text);
  CensusReport c;
  if (t.columns.size() < 7 || t.columns[0] != "ceiling" || t.columns[1] != "count")
    throw ParseError("census csv: unexpected header");
  const std::size_t nd = t.columns.size() - 7;
  for (std::size_t i = 0; i < nd; ++i) {
    const std::string& col = t.columns[3 + i];
    if (col.size() < 2 || col[0] != 'D') throw ParseError("census csv: bad discriminant column " + col);
    c.discriminants.push_back(std::stol(col.substr(1)));
  }
  auto real = [](const std::string& s) { return std::stod(s); };
  for (const auto& r : t.rows) {
    CensusRow row;
    row.ceiling = Integer(r[0]);
    row.count = std::stoul(r[1]);
    row.normalized = real(r[2]);
    for (std::size_t i = 0; i < nd; ++i) row.perDiscriminant[c.discriminants[i]] = std::stoul(r[3 + i]);
    const std::size_t base = 3 + nd;
    if (!r[base].empty()) {
      c.fitted = true;
      c.exponent = real(r[base]);
      c.exponentStdError = real(r[base + 1]);
      c.residual = real(r[base + 2]);
    }
    if (!r[base + 3].empty()) {
      c.fittedQuadratic = true;
      c.exponentQuadratic = real(r[base + 3]);
    }
    c.rows.push_back(row);
  }
  return c;
}

Report censusReport(const CensusReport& c) {
  Report rep{"cm-census", {}, {}};
  rep.json["kind"] = "cm-census";
  rep.json["discriminants"] = c.discriminants;
  Json js = Json::array();
  for (const auto& j : cmJInvariants()) js.push_back(toJson(j));
  rep.json["jInvariants"] = js;
  Json rows = Json::array();
  for (const auto& row : c.rows) {
    Json per = Json::object();
    for (const auto& [d, n] : row.perDiscriminant) per[std::to_string(d)] = n;
    rows.push_back(Json{{"ceiling", toJson(row.ceiling)}, {"count", row.count}, {"countOverSqrtN", row.normalized},
                        {"perDiscriminant", per}});
  }
  rep.json["rows"] = rows;
  rep.json["fitted"] = c.fitted;
  rep.json["exponent"] = c.exponent;
  rep.json["exponentStdError"] = c.exponentStdError;
  rep.json["residual"] = c.residual;
  rep.json["exponentQuadraticOnly"] = c.exponentQuadratic;
  rep.table = censusTable(c);
  return rep;
}

Report symsumReport(const SymSumResult& s) {
  Report rep{"symsum", {}, {}};
  rep.json["kind"] = "symsum";
  rep.json["labels"] = Json::array({s.label1, s.label2});
  rep.json["X"] = s.X;
  rep.json["S1"] = s.s1;
  rep.json["S2"] = s.s2;
  rep.json["H"] = s.h;
  rep.json["ratio"] = s.ratio;
  rep.json["sameJ"] = s.sameJ;
  rep.json["excludedPrimes"] = primesJson(s.excludedPrimes);
  rep.table.columns = {"label1", "label2", "X", "S1", "S2", "H", "ratio", "same_j"};
  rep.table.rows.push_back({s.label1, s.label2, formatReal(s.X), formatReal(s.s1), formatReal(s.s2), formatReal(s.h),
                            formatReal(s.ratio), boolStr(s.sameJ)});
  return rep;
}

Report cdeltaReport(const Rational& delta) {
  Report rep{"cdelta", {}, {}};
  Rational c = cDelta(delta), w = cDeltaWorking(delta);
  rep.json["kind"] = "cdelta";
  rep.json["delta"] = toJson(delta);
  rep.json["c"] = toJson(c);
  rep.json["cDecimal"] = c.get_d();
  rep.json["cWorking"] = toJson(w);
  rep.json["cWorkingDecimal"] = w.get_d();
  rep.table.columns = {"delta", "c", "c_decimal", "c_working", "c_working_decimal"};
  rep.table.rows.push_back({delta.get_str(), c.get_str(), formatReal(c.get_d()), w.get_str(), formatReal(w.get_d())});
  return rep;
}

}  // namespace serre
