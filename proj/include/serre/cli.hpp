// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "serre/report.hpp"

namespace serre {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitRejects = 1;  // parse rejects present, or any other user-facing error
constexpr int kExitInvariant = 2;

// Runs the serre-lab command line; reports go to out, diagnostics to err.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a/b", an integer, or a terminating decimal such as "0.8".
Rational parseRational(const std::string& s);

struct BoxSearchOptions {
  long box = 24;              // |a4|, |a6| <= box
  long maxConductor = 10000;
  bool withExtras = true;     // CM bases and non-CM curves with mod-5 image in a nonsplit Cartan normalizer
};

struct CorpusRow {
  std::string label;
  WeierstrassModel model;
  Integer conductor;
};

// Reduced minimal models with a1 in {0,1}, a2 in {-1,0,1}, a3 in {0,1} inside
// the box, labelled "<N>.<k>" in coefficient-string order within each conductor.
std::vector<CorpusRow> boxSearchCorpus(const BoxSearchOptions& opt);
std::string corpusCsv(const std::vector<CorpusRow>& rows);

}  // namespace serre
