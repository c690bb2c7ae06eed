// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "serre/arith.hpp"

namespace serre {

struct WeierstrassModel {
  Integer a1, a2, a3, a4, a6;

  WeierstrassModel() = default;
  WeierstrassModel(Integer a1_, Integer a2_, Integer a3_, Integer a4_, Integer a6_)
      : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)), a4(std::move(a4_)), a6(std::move(a6_)) {}
  WeierstrassModel(long a1_, long a2_, long a3_, long a4_, long a6_)
      : a1(a1_), a2(a2_), a3(a3_), a4(a4_), a6(a6_) {}

  static WeierstrassModel shortForm(const Integer& a4, const Integer& a6) { return {0, 0, 0, a4, a6}; }

  bool operator==(const WeierstrassModel& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
  }
  bool operator!=(const WeierstrassModel& o) const { return !(*this == o); }

  // "[a1,a2,a3,a4,a6]"
  std::string str() const;
};

// Parses "[a1,a2,a3,a4,a6]" or "a1,a2,a3,a4,a6". Throws ParseError.
WeierstrassModel parseModel(const std::string& text);

struct Invariants {
  Integer b2, b4, b6, b8, c4, c6, disc;
  Rational j;
};

// Throws SingularModel when the discriminant vanishes.
Invariants invariants(const WeierstrassModel& model);

// Standard change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
// The result must be integral; throws InvalidArgument otherwise.
WeierstrassModel changeCoordinates(const WeierstrassModel& model, const Integer& r, const Integer& s,
                                   const Integer& t, const Integer& u = 1);

// Model y^2 = x^3 - 27 c4 x - 54 c6 (isomorphic over Q).
WeierstrassModel shortModel(const WeierstrassModel& model);

// Quadratic twist by squarefree d. The result is not yet minimized; callers
// wanting the minimal model pass it through globalReduce.
WeierstrassModel quadraticTwist(const WeierstrassModel& model, const Integer& d);

enum class TwistOrder { quadratic = 2, quartic = 4, sextic = 6 };

struct TwistSpec {
  WeierstrassModel base;
  TwistOrder order = TwistOrder::quadratic;
  Integer parameter;  // d for quadratic, defining parameter otherwise
};

// y^2 = x^3 + d x for j = 1728 bases and y^2 = x^3 + d for j = 0 bases.
// Throws PreconditionFailed when the base j-invariant does not permit it.
WeierstrassModel applyTwist(const TwistSpec& spec);

// --- Frobenius traces -----------------------------------------------------

constexpr std::uint64_t kPointCountCrossover = 1ULL << 16;

// a_p by character-sum enumeration on the short model (p >= 5) or by affine
// enumeration of the given model (p = 2, 3). Throws BadReduction if the model
// is singular mod p.
std::int64_t tracePointCountNaive(const WeierstrassModel& model, std::uint64_t p);

// a_p by baby-step/giant-step order finding on E and its quadratic twist.
// Requires p >= 5.
std::int64_t tracePointCountBsgs(const WeierstrassModel& model, std::uint64_t p);

// Dispatches between the two strategies at kPointCountCrossover.
std::int64_t countPoints(const WeierstrassModel& model, std::uint64_t p);

// Same as above but takes precomputed short coefficients mod p.
std::int64_t traceShortNaive(std::uint64_t A, std::uint64_t B, std::uint64_t p);
std::int64_t traceShortBsgs(std::uint64_t A, std::uint64_t B, std::uint64_t p);

bool hasseWeilHolds(std::int64_t ap, std::uint64_t p);

}  // namespace serre
