// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include <algorithm>

#include "serre/galois.hpp"

namespace serre {

int EpsilonCandidate::value(std::uint64_t p) const {
  if (discriminant.fits_slong_p()) return kronecker(static_cast<std::int64_t>(discriminant.get_si()), static_cast<std::int64_t>(p));
  return kronecker(discriminant, Integer(static_cast<unsigned long>(p)));
}

bool notAdditivePotentiallyGood(const GlobalReduction& g, std::uint64_t ell) {
  const LocalReduction* l = g.local(Integer(static_cast<unsigned long>(ell)));
  return !(l && l->redType == ReductionType::additive && l->potGood);
}

EpsilonCandidateSet epsilonCandidates(const GlobalReduction& g, std::uint64_t ell) {
  if (ell <= 3 || !isPrime(ell)) throw InvalidArgument("epsilonCandidates: ell must be a prime > 3");
  EpsilonCandidateSet set;
  set.ell = ell;
  const Integer L(static_cast<unsigned long>(ell));
  for (const auto& l : g.locals) {
    if (l.p == 2 || l.p == 3 || l.p == L) continue;
    if (l.redType == ReductionType::additive && l.potGood && l.phi == PhiTag::order4) set.baseSupport *= l.p;
  }
  for (int sign : {1, -1})
    for (int v2 = 0; v2 <= 3; ++v2)
      for (int v3 = 0; v3 <= 1; ++v3)
        for (int vl = 0; vl <= 1; ++vl) {
          ++set.enumerated;
          EpsilonCandidate c;
          c.sign = sign;
          c.v2 = v2;
          c.v3 = v3;
          c.vl = vl;
          c.modulus = Integer(sign) * (Integer(1) << v2) * (v3 ? 3 : 1) * (vl ? L : Integer(1)) * set.baseSupport;
          c.discriminant = characterDiscriminant(c.modulus);
          if (c.discriminant == 1) continue;  // principal character
          set.candidates.push_back(c);
        }
  return set;
}

EpsilonCandidateSet pruneEpsilon(const EpsilonCandidateSet& cands, const TraceTable& t, std::uint64_t ell) {
  EpsilonCandidateSet out = cands;
  out.testedThrough = std::max(cands.testedThrough, t.bound());
  std::vector<char> alive(out.candidates.size(), 1);
  const std::int64_t L = static_cast<std::int64_t>(ell);
  for (const auto& e : t.entries()) {
    if (!e.good || e.p == ell) continue;
    const bool divisible = e.ap % L == 0;
    for (std::size_t i = 0; i < out.candidates.size(); ++i) {
      if (!alive[i]) continue;
      if (out.candidates[i].value(e.p) != -1) continue;
      ++out.candidates[i].minusOnePrimes;
      if (!divisible) alive[i] = 0;
    }
  }
  std::vector<EpsilonCandidate> kept;
  for (std::size_t i = 0; i < out.candidates.size(); ++i)
    if (alive[i]) kept.push_back(out.candidates[i]);
  out.candidates = std::move(kept);
  return out;
}

ScriptLReport scriptLScan(const GlobalReduction& g, const TraceTable& t, const std::vector<std::uint64_t>& window,
                          std::uint64_t X) {
  ScriptLReport rep;
  for (std::uint64_t ell : window) {
    if (ell % 4 != 1 || !isPrime(ell)) continue;
    if (!notAdditivePotentiallyGood(g, ell)) continue;
    ImageReport image;
    try {
      image = imageTest(g, t, ell, X);
    } catch (const InsufficientSamples&) {
      continue;
    }
    if (image.verdict != ImageVerdict::nonsurjectiveWitnessed) continue;
    const auto& obs = image.obstructions;
    bool nonsplit = std::find(obs.begin(), obs.end(), Obstruction::nonsplitCartanNormalizer) != obs.end();
    bool borel = std::find(obs.begin(), obs.end(), Obstruction::borel) != obs.end();
    if (!nonsplit || borel || !image.certificates.nonsquareDiscriminant) continue;
    auto survivors = pruneEpsilon(epsilonCandidates(g, ell), t, ell).candidates;
    if (survivors.empty()) continue;
    rep.primes.push_back({ell, image, survivors});
    rep.product *= Integer(static_cast<unsigned long>(ell));
  }
  if (rep.primes.empty()) return rep;

  for (const auto& e : t.entries()) {
    if (e.p > X) break;
    if (!e.good || e.ap == 0) continue;
    bool inSet = false, ok = true;
    for (const auto& entry : rep.primes) {
      if (entry.ell == e.p) inSet = true;
      bool some = std::any_of(entry.survivors.begin(), entry.survivors.end(),
                              [&](const EpsilonCandidate& c) { return c.value(e.p) == -1; });
      if (!some) ok = false;
    }
    if (inSet || !ok) continue;
    rep.witness = e.p;
    rep.apAtWitness = e.ap;
    rep.divides = mpz_divisible_p(Integer(static_cast<long>(e.ap)).get_mpz_t(), rep.product.get_mpz_t()) != 0;
    rep.hasseHolds = rep.product * rep.product <= Integer(static_cast<unsigned long>(4 * e.p));
    return rep;
  }
  throw NoCommonWitness("scriptLScan: no prime p <= " + std::to_string(X) +
                        " with nonzero a_p and value -1 for every selected ell");
}

}  // namespace serre
