// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "serre/parallel.hpp"

namespace serre {

Rational parseRational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw ParseError("empty rational");
  try {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw ParseError("mixed decimal and fraction");
      std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
      bool neg = !whole.empty() && whole[0] == '-';
      if (neg || (!whole.empty() && whole[0] == '+')) whole = whole.substr(1);
      if (whole.empty()) whole = "0";
      for (char c : whole + frac)
        if (c < '0' || c > '9') throw ParseError("bad decimal '" + text + "'");
      Integer den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      Rational q(Integer(whole + frac, 10), den);
      q.canonicalize();
      return neg ? Rational(-q) : q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw ParseError("bad rational '" + text + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + text + "'");
  }
}

std::vector<CorpusRow> boxSearchCorpus(const BoxSearchOptions& opt) {
  std::vector<WeierstrassModel> models;
  for (long a1 = 0; a1 <= 1; ++a1)
    for (long a2 = -1; a2 <= 1; ++a2)
      for (long a3 = 0; a3 <= 1; ++a3)
        for (long a4 = -opt.box; a4 <= opt.box; ++a4)
          for (long a6 = -opt.box; a6 <= opt.box; ++a6) models.emplace_back(a1, a2, a3, a4, a6);
  std::vector<std::optional<CorpusRow>> kept(models.size());
  const Integer maxN = opt.maxConductor;
  parallelFor(models.size(), [&](std::size_t i) {
    const WeierstrassModel& m = models[i];
    try {
      Invariants inv = invariants(m);
      (void)inv;
    } catch (const SingularModel&) {
      return;
    }
    GlobalReduction g = globalReduce(m);
    if (g.minimalModel != m || g.conductor > maxN) return;
    kept[i] = CorpusRow{"", m, g.conductor};
  });
  std::vector<CorpusRow> rows;
  for (auto& k : kept)
    if (k) rows.push_back(*k);
  std::set<std::string> present;
  for (const auto& r : rows) present.insert(r.model.str());
  if (opt.withExtras) {
    for (const auto& b : cmBaseCurves()) {
      GlobalReduction g = globalReduce(b.model);
      if (present.insert(g.minimalModel.str()).second)
        rows.push_back({"cm" + std::to_string(-b.discriminant), g.minimalModel, g.conductor});
    }
    // j-values on the modular curve for the normalizer of a nonsplit Cartan
    // at 5; t = 4..7 give non-CM j.
    for (long t = 4; t <= 7; ++t) {
      Integer num = Integer(8000) * t * t * t * (t + 1) * (t * t - 5 * t + 10) * (t * t - 5 * t + 10) * (t * t - 5 * t + 10);
      Integer den = Integer(t * t - 5);
      den = den * den * den * den * den;
      Rational j(num, den);
      j.canonicalize();
      WeierstrassModel m = minimalTwistWithJ(j);
      GlobalReduction g = globalReduce(m);
      if (present.insert(g.minimalModel.str()).second) rows.push_back({"ns5t" + std::to_string(t), g.minimalModel, g.conductor});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const CorpusRow& a, const CorpusRow& b) {
    int c = cmp(a.conductor, b.conductor);
    if (c != 0) return c < 0;
    return a.model.str() < b.model.str();
  });
  std::map<std::string, int> perN;
  for (auto& r : rows) {
    int k = ++perN[r.conductor.get_str()];
    std::string suffix = r.label.empty() ? std::to_string(k) : r.label;
    r.label = r.conductor.get_str() + "." + suffix;
  }
  return rows;
}

std::string corpusCsv(const std::vector<CorpusRow>& rows) {
  std::ostringstream out;
  out << "a1,a2,a3,a4,a6,label\n";
  for (const auto& r : rows)
    out << r.model.a1 << "," << r.model.a2 << "," << r.model.a3 << "," << r.model.a4 << "," << r.model.a6 << "," << r.label
        << "\n";
  return out.str();
}

namespace {

struct Output {
  std::string format = "json";
  std::string path;
};

void emit(const Report& r, const Output& o, std::ostream& out) {
  ReportFormat f = parseReportFormat(o.format);
  if (o.path.empty())
    out << reportEmit(r, f);
  else
    reportEmit(r, f, o.path);
}

// Merge per-item reports of one kind into a single document.
Report mergeReports(const std::string& kind, const std::vector<Report>& parts) {
  Report m{kind, {}, {}};
  m.json["kind"] = kind;
  m.json["results"] = Json::array();
  for (const auto& p : parts) {
    m.json["results"].push_back(p.json);
    if (m.table.columns.empty()) m.table.columns = p.table.columns;
    for (const auto& row : p.table.rows) m.table.rows.push_back(row);
  }
  return m;
}

int reportRejects(const Corpus& c, std::ostream& err) {
  for (const auto& r : c.rejects) err << "reject row " << r.row << ": " << r.error << "\n";
  return c.rejects.empty() ? kExitOk : kExitRejects;
}

bool looksLikeModel(const std::string& s) {
  try {
    parseModel(s);
    return true;
  } catch (const SerreError&) {
    return false;
  }
}

std::uint64_t toPrime(const std::string& what, std::uint64_t v) {
  if (!isPrime(v)) throw InvalidArgument(what + " must be prime, got " + std::to_string(v));
  return v;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"serre-lab: reduction data, Frobenius traces, mod-ell images and family statistics for elliptic curves"};
  app.require_subcommand(1);
  app.fallthrough();
  Output o;
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.path, "write the report to this file instead of stdout");

  std::string curve, curve2, file, pairLabels, filter = "all", rational, ceilingList;
  std::uint64_t p = 0, X = 1000, ell = 0, sampleCap = 10000, seed = 1;
  std::string ceilingText = "0", realX;
  bool scan = false;
  long box = 24, maxN = 10000;
  bool noExtras = false;

  auto* tate = app.add_subcommand("tate", "local reduction data at p");
  tate->add_option("curve", curve, "model [a1,a2,a3,a4,a6] or corpus file")->required();
  tate->add_option("-p", p, "prime")->required();

  auto* ap = app.add_subcommand("ap", "Frobenius traces for p <= X");
  ap->add_option("curve", curve)->required();
  ap->add_option("-X", X, "bound")->required();

  auto* image = app.add_subcommand("image", "mod-ell image diagnostics");
  image->add_option("curve", curve)->required();
  image->add_option("-l", ell, "prime ell")->required();
  image->add_option("-X", X, "sample bound")->required();

  auto* pair = app.add_subcommand("pair", "pair witness and comparison bound");
  pair->add_option("curve1", curve)->required();
  pair->add_option("curve2", curve2)->required();
  pair->add_option("-X", X, "bound")->required();

  auto* eps = app.add_subcommand("epsilon", "quadratic character candidates at ell");
  eps->add_option("curve", curve)->required();
  eps->add_option("-l", ell, "prime ell > 3")->required();
  eps->add_option("-X", X, "bound")->required();
  eps->add_flag("--scan", scan, "run the divisibility scan over ell <= 97 instead");

  auto* fam = app.add_subcommand("family", "conductor-ordered family");
  fam->add_option("file", file)->required();
  fam->add_option("--filter", filter)->check(CLI::IsMember({"all", "ss", "add12", "cm", "noncm"}));
  fam->add_option("-N", ceilingText, "conductor ceiling")->required();

  auto* pairs = app.add_subcommand("pairs", "pair statistics over a corpus");
  pairs->add_option("file", file)->required();
  pairs->add_option("-X", X, "bound")->required();
  pairs->add_option("--sample", sampleCap, "maximum number of pairs");
  pairs->add_option("--seed", seed, "sampling seed");
  pairs->add_option("--filter", filter)->check(CLI::IsMember({"all", "ss", "add12", "cm", "noncm"}));
  pairs->add_option("-N", ceilingText, "conductor ceiling (0 = none)");

  auto* census = app.add_subcommand("cm-census", "CM twist census");
  census->add_option("-N", ceilingText, "largest ceiling")->required();
  census->add_option("--ceilings", ceilingList, "explicit comma-separated ceilings");

  auto* sym = app.add_subcommand("symsum", "smoothed Sym^2 sums S(X) and H(X)");
  sym->add_option("file", file)->required();
  sym->add_option("--pair", pairLabels, "label1,label2")->required();
  sym->add_option("-X", realX, "real X")->required();

  auto* cd = app.add_subcommand("cdelta", "the exponent c(delta)");
  cd->add_option("delta", rational)->required();

  auto* gen = app.add_subcommand("gen-corpus", "box search corpus of reduced minimal models");
  gen->add_option("--box", box, "coefficient box for a4, a6");
  gen->add_option("--max-conductor", maxN, "conductor ceiling");
  gen->add_flag("--no-extras", noExtras, "skip CM base curves and nonsplit-Cartan examples");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitRejects;
  }

  try {
    if (tate->parsed()) {
      const Integer P(static_cast<unsigned long>(toPrime("p", p)));
      if (looksLikeModel(curve)) {
        WeierstrassModel m = parseModel(curve);
        emit(tateReport(m, serre::tate(m, P)), o, out);
        return kExitOk;
      }
      Corpus c = ingest(curve);
      std::vector<Report> parts;
      for (const auto& r : c.records) {
        Report part = tateReport(r.model, serre::tate(r.model, P));
        part.json["label"] = r.label;
        parts.push_back(part);
      }
      emit(mergeReports("tate", parts), o, out);
      return reportRejects(c, err);
    }
    if (ap->parsed()) {
      WeierstrassModel m = parseModel(curve);
      GlobalReduction g = globalReduce(m);
      emit(apReport(m, g, traceTable(g, X)), o, out);
      return kExitOk;
    }
    if (image->parsed()) {
      WeierstrassModel m = parseModel(curve);
      GlobalReduction g = globalReduce(m);
      emit(imageReport(m, imageTest(g, traceTable(g, X), toPrime("ell", ell), X)), o, out);
      return kExitOk;
    }
    if (pair->parsed()) {
      WeierstrassModel m1 = parseModel(curve), m2 = parseModel(curve2);
      GlobalReduction g1 = globalReduce(m1), g2 = globalReduce(m2);
      TraceTable t1 = traceTable(g1, X), t2 = traceTable(g2, X);
      std::uint64_t c1 = empiricalC(g1, t1, X), c2 = empiricalC(g2, t2, X);
      std::optional<ComparisonReport> cr;
      try {
        cr = comparisonBound({&g1, &t1}, {&g2, &t2}, c1, c2, X);
      } catch (const NoWitnessBelow& e) {
        err << "note: " << e.what() << "\n";
      }
      emit(pairReport(m1, m2, c1, c2, cr, X), o, out);
      return kExitOk;
    }
    if (eps->parsed()) {
      WeierstrassModel m = parseModel(curve);
      GlobalReduction g = globalReduce(m);
      TraceTable t = traceTable(g, X);
      if (scan) {
        emit(scriptLReport(m, scriptLScan(g, t, defaultEllWindow(), X)), o, out);
        return kExitOk;
      }
      toPrime("ell", ell);
      EpsilonCandidateSet all = epsilonCandidates(g, ell);
      EpsilonCandidateSet pruned = pruneEpsilon(all, t, ell);
      emit(epsilonReport(m, all, pruned, imageTest(g, t, ell, X)), o, out);
      return kExitOk;
    }
    if (fam->parsed()) {
      Corpus c = ingest(file);
      Family f = buildFamily(c, {parseFilterTag(filter), Integer(ceilingText)});
      emit(familyReport(c, f), o, out);
      return reportRejects(c, err);
    }
    if (pairs->parsed()) {
      Corpus c = ingest(file);
      Integer ceiling(ceilingText);
      if (ceiling == 0) {
        ceiling = 1;
        for (const auto& r : c.records) ceiling = std::max(ceiling, r.conductor());
      }
      Family f = buildFamily(c, {parseFilterTag(filter), ceiling});
      emit(pairsReport(f, pairStatistics(f, X, sampleCap, seed)), o, out);
      return reportRejects(c, err);
    }
    if (census->parsed()) {
      std::vector<Integer> ceilings;
      if (!ceilingList.empty()) {
        std::stringstream ss(ceilingList);
        std::string item;
        while (std::getline(ss, item, ',')) ceilings.emplace_back(item);
      } else {
        Integer N(ceilingText);
        for (Integer c = 10; c < N; c *= 10) ceilings.push_back(c);
        ceilings.push_back(N);
      }
      emit(censusReport(cmCensus(ceilings)), o, out);
      return kExitOk;
    }
    if (sym->parsed()) {
      Corpus c = ingest(file);
      auto comma = pairLabels.find(',');
      if (comma == std::string::npos) throw InvalidArgument("--pair expects label1,label2");
      const CurveRecord* r1 = c.find(pairLabels.substr(0, comma));
      const CurveRecord* r2 = c.find(pairLabels.substr(comma + 1));
      if (!r1 || !r2) throw InvalidArgument("label not found in corpus: " + pairLabels);
      double x = std::stod(realX);
      if (!(x >= 1)) throw InvalidArgument("-X must be >= 1");
      SmoothTestFunction psi = SmoothTestFunction::psi();
      auto top = static_cast<std::uint64_t>(std::floor(x * psi.hi()));
      TraceTable t1 = traceTable(r1->reduction, top), t2 = traceTable(r2->reduction, top);
      Sym2Series s1(t1, top), s2(t2, top);
      Integer N12 = r1->conductor() * r2->conductor();
      SymSumResult res;
      res.label1 = r1->label;
      res.label2 = r2->label;
      res.X = x;
      res.s1 = smoothSumS(s1, x, psi, N12);
      res.s2 = smoothSumS(s2, x, psi, N12);
      res.h = smoothSumH(s1, s2, x, psi, N12);
      res.ratio = (res.s1 > 0 && res.s2 > 0) ? std::fabs(res.h) / std::sqrt(res.s1 * res.s2) : 0.0;
      res.sameJ = r1->reduction.inv.j == r2->reduction.inv.j;
      for (const auto& pe : factorize(N12).factors) res.excludedPrimes.push_back(pe.first.get_ui());
      emit(symsumReport(res), o, out);
      return reportRejects(c, err);
    }
    if (cd->parsed()) {
      emit(cdeltaReport(parseRational(rational)), o, out);
      return kExitOk;
    }
    if (gen->parsed()) {
      BoxSearchOptions opt;
      opt.box = box;
      opt.maxConductor = maxN;
      opt.withExtras = !noExtras;
      std::string csv = corpusCsv(boxSearchCorpus(opt));
      if (o.path.empty()) {
        out << csv;
      } else {
        std::ofstream f(o.path, std::ios::binary | std::ios::trunc);
        if (!f) throw SerreError("cannot open " + o.path + " for writing");
        f << csv;
      }
      return kExitOk;
    }
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const SerreError& e) {
    err << "error: " << e.what() << "\n";
    return kExitRejects;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRejects;
  }
  return kExitOk;
}

}  // namespace serre
