// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "serre/curve.hpp"

namespace serre {

enum class KodairaFamily { I0, In, II, III, IV, I0Star, InStar, IIStar, IIIStar, IVStar };

struct Kodaira {
  KodairaFamily family = KodairaFamily::I0;
  int n = 0;  // subscript for In and InStar

  std::string str() const;  // "I0", "I5", "II", "I0*", "I3*", "IV*", ...
  bool operator==(const Kodaira& o) const { return family == o.family && n == o.n; }
};

enum class ReductionType { good, multSplit, multNonsplit, additive };
std::string toString(ReductionType t);

// Order of the semistability-defect group at an additive potentially good
// prime. For p = 2, 3 only a group tag is reported.
enum class PhiTag { none, order2, order3, order4, order6, z3SemidirectZ4, q8, sl2f3, undetermined23 };
std::string toString(PhiTag t);
int phiTagOrder(PhiTag t);  // 0 when not a plain order

enum class InertialClass { principalSeries_tps114, supercuspidal_tscu24, other };
std::string toString(InertialClass c);

struct InertialTypeTag {
  Integer p;
  InertialClass cls = InertialClass::other;
};

struct LocalReduction {
  Integer p;
  Kodaira kodaira;
  int conductorExp = 0;
  int vDeltaMin = 0;
  ReductionType redType = ReductionType::good;
  bool potGood = true;
  PhiTag phi = PhiTag::none;  // set for additive potentially good primes

  // Local trace convention at bad primes: +1 split, -1 nonsplit, 0 additive.
  int localTrace() const;
};

struct TateResult {
  LocalReduction local;
  WeierstrassModel minimalModel;  // minimal at p, isomorphic over Q
};

// Tate's algorithm at p (any prime, including 2 and 3).
TateResult tate(const WeierstrassModel& model, const Integer& p);

struct GlobalReduction {
  WeierstrassModel minimalModel;
  Invariants inv;
  Integer conductor;
  std::vector<LocalReduction> locals;  // primes dividing the minimal discriminant, ascending
  bool semistable = true;
  bool satisfiesCondition12 = true;
  Integer nAdd = 1;   // additive part away from 2, 3
  Integer nMult = 1;  // multiplicative part away from 2, 3

  const LocalReduction* local(const Integer& p) const;
  bool isGood(std::uint64_t p) const;
  std::vector<std::uint64_t> badPrimes() const;
};

// Global minimal model, conductor and flags. Throws InvariantViolation if
// the conductor-exponent bounds or N_add^2 <= N fail.
GlobalReduction globalReduce(const WeierstrassModel& model);

// Checks the structural bounds; throws InvariantViolation with a message.
void checkReductionInvariants(const GlobalReduction& g);

// Throws NotAdditivePotGood unless the prime is additive, potentially good.
PhiTag phiOrder(const LocalReduction& local);
// Table lookup for p >= 5 from v_p(Delta_min).
PhiTag phiFromDiscriminantValuation(int vDeltaMin);
// Throws PreconditionFailed unless p >= 5 additive potentially good with |Phi_p| = 4.
InertialTypeTag inertialType(const LocalReduction& local);
// v_p(j) >= 0.
bool potentialGoodness(const Rational& j, const Integer& p);
inline bool potentialGoodness(const LocalReduction& local) { return local.potGood; }

}  // namespace serre
