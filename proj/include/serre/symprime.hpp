// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "serre/tracetable.hpp"

namespace serre {

// t = a_p / sqrt(p), kept as the exact pair (a_p, p).
struct NormalizedEigenvalue {
  std::uint64_t p = 0;
  std::int64_t ap = 0;

  Rational tSquared() const;
  double value() const;
};

// Throws RamanujanViolation when a_p^2 > 4p.
NormalizedEigenvalue normalizedEigenvalue(std::uint64_t p, std::int64_t ap);

struct SymCoefficients {
  Rational sym2;  // t^2 - 1
  Rational sym4;  // t^4 - 3 t^2 + 1
};

SymCoefficients symCoeffs(const NormalizedEigenvalue& t);
// Same from t^2 directly; throws RamanujanViolation unless 0 <= t^2 <= 4.
SymCoefficients symCoeffsFromSquare(const Rational& tSquared);
// (t^2 - 1)^2 == 1 + Sym2 + Sym4, exactly.
bool symIdentityHolds(const Rational& tSquared);

// (t1^2 - 1)(t2^2 - 1); throws InvalidArgument when the primes differ.
Rational rankinCoeff(const NormalizedEigenvalue& t1, const NormalizedEigenvalue& t2);

// Element a + b sqrt(p) of Q(sqrt(p)).
struct QuadraticSurd {
  Rational a, b;
  std::uint64_t p = 1;

  QuadraticSurd operator*(const QuadraticSurd& o) const;
  QuadraticSurd operator+(const QuadraticSurd& o) const;
  QuadraticSurd operator-(const QuadraticSurd& o) const;
  bool operator==(const QuadraticSurd& o) const { return a == o.a && b == o.b; }
  double toDouble() const;
};

// alpha^k + beta^k for the Satake pair with alpha + beta = t, alpha beta = 1.
QuadraticSurd satakePowerSum(const NormalizedEigenvalue& t, int k);
// Power sum of the Sym^m parameters {alpha^(m - 2i)}, raised to the k-th power.
QuadraticSurd symPowerSum(const NormalizedEigenvalue& t, int m, int k);

struct SatakeData {
  const TraceTable* traces = nullptr;
  int symPower = 1;  // 1 for the curve itself
};

struct VonMangoldtTerm {
  std::uint64_t p = 0;
  int k = 0;
  std::uint64_t pk = 0;
  QuadraticSurd overLog;  // coefficient divided by log p
  double value = 0.0;
};

struct VonMangoldtSeries {
  std::uint64_t bound = 0;
  std::vector<VonMangoldtTerm> terms;  // ordered by p^k
  std::vector<std::uint64_t> ramified;
};

VonMangoldtSeries vonMangoldt(const SatakeData& s1, const SatakeData& s2, std::uint64_t X);

// 2 (4 + numerator / delta) / (1 - 1 / (2 delta)); default numerator 923.
Rational cDelta(const Rational& delta);
Rational cDelta(const Rational& delta, const Rational& numerator);
// Same with the working constant 922.5.
Rational cDeltaWorking(const Rational& delta);

// Normalized exp(-1/((u-a)(b-u))) bump on [a, b] with integral 1.
class SmoothTestFunction {
 public:
  static SmoothTestFunction bump(double lo, double hi);
  static SmoothTestFunction zero(double lo, double hi);
  static SmoothTestFunction psi() { return bump(1.0, 2.0); }
  static SmoothTestFunction phi() { return bump(0.5, 1.0); }

  double operator()(double u) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double normalization() const { return scale_; }
  // Integral over the support by composite Simpson with n panels.
  double simpsonIntegral(int panels) const;

 private:
  SmoothTestFunction(double lo, double hi, double scale) : lo_(lo), hi_(hi), scale_(scale) {}
  double lo_, hi_, scale_;
};

// Sym^2 Dirichlet coefficients lambda(n) for n <= bound, extracted from the
// degree-3 Euler factors at good primes.
class Sym2Series {
 public:
  Sym2Series(const TraceTable& t, std::uint64_t bound);

  std::uint64_t bound() const { return bound_; }
  // Throws CoefficientGap when n involves a prime without good data.
  const Rational& coefficient(std::uint64_t n) const;
  bool available(std::uint64_t n) const { return n >= 1 && n <= bound_ && ok_[n]; }

  // lambda(p^k) for k = 0..K from the local recursion.
  static std::vector<Rational> primePowerCoefficients(const Rational& tSquared, int K);

 private:
  std::uint64_t bound_;
  std::vector<Rational> coeff_;
  std::vector<char> ok_;
};

double smoothSumS(const Sym2Series& s1, double X, const SmoothTestFunction& psi, const Integer& coprimeTo);
double smoothSumH(const Sym2Series& s1, const Sym2Series& s2, double X, const SmoothTestFunction& psi,
                  const Integer& coprimeTo);

// Least good p <= bound with |a_p(E1)| != |a_p(E2)|.
std::optional<std::uint64_t> linnikScanPair(const TraceTable& t1, const TraceTable& t2, std::uint64_t bound);
// Least p <= bound with p not dividing 6N, chi(p) = -1 and a_p != 0, chi the
// character of Q(sqrt(chiModulus)).
std::optional<std::uint64_t> linnikScanCharacter(const TraceTable& t, const Integer& conductor,
                                                 const Integer& chiModulus, std::uint64_t bound);

}  // namespace serre
