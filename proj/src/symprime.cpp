// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/symprime.hpp"

#include <cmath>

namespace serre {

Rational NormalizedEigenvalue::tSquared() const {
  Rational t2(Integer(static_cast<long>(ap)) * Integer(static_cast<long>(ap)), Integer(static_cast<unsigned long>(p)));
  t2.canonicalize();
  return t2;
}

double NormalizedEigenvalue::value() const { return static_cast<double>(ap) / std::sqrt(static_cast<double>(p)); }

NormalizedEigenvalue normalizedEigenvalue(std::uint64_t p, std::int64_t ap) {
  if (!hasseWeilHolds(ap, p))
    throw RamanujanViolation("a_p = " + std::to_string(ap) + " exceeds 2 sqrt(p) at p = " + std::to_string(p));
  return {p, ap};
}

SymCoefficients symCoeffsFromSquare(const Rational& t2) {
  if (t2 < 0 || t2 > 4) throw RamanujanViolation("t^2 = " + t2.get_str() + " outside [0, 4]");
  return {t2 - 1, t2 * t2 - 3 * t2 + 1};
}

SymCoefficients symCoeffs(const NormalizedEigenvalue& t) { return symCoeffsFromSquare(normalizedEigenvalue(t.p, t.ap).tSquared()); }

bool symIdentityHolds(const Rational& t2) {
  SymCoefficients c = symCoeffsFromSquare(t2);
  Rational lhs = (t2 - 1) * (t2 - 1);
  return lhs == 1 + c.sym2 + c.sym4;
}

Rational rankinCoeff(const NormalizedEigenvalue& t1, const NormalizedEigenvalue& t2) {
  if (t1.p != t2.p) throw InvalidArgument("rankinCoeff: eigenvalues at different primes");
  return symCoeffs(t1).sym2 * symCoeffs(t2).sym2;
}

QuadraticSurd QuadraticSurd::operator*(const QuadraticSurd& o) const {
  std::uint64_t q = p != 1 ? p : o.p;
  Rational pq(Integer(static_cast<unsigned long>(q)));
  return {a * o.a + pq * b * o.b, a * o.b + b * o.a, q};
}

QuadraticSurd QuadraticSurd::operator+(const QuadraticSurd& o) const { return {a + o.a, b + o.b, p != 1 ? p : o.p}; }

QuadraticSurd QuadraticSurd::operator-(const QuadraticSurd& o) const { return {a - o.a, b - o.b, p != 1 ? p : o.p}; }

double QuadraticSurd::toDouble() const { return a.get_d() + b.get_d() * std::sqrt(static_cast<double>(p)); }

QuadraticSurd satakePowerSum(const NormalizedEigenvalue& t, int k) {
  if (k < 0) throw InvalidArgument("satakePowerSum: k must be >= 0");
  Rational coeff(Integer(static_cast<long>(t.ap)), Integer(static_cast<unsigned long>(t.p)));
  coeff.canonicalize();
  const QuadraticSurd tt{0, coeff, t.p};
  QuadraticSurd prev{2, 0, t.p}, cur = tt;
  if (k == 0) return prev;
  for (int i = 1; i < k; ++i) {
    QuadraticSurd next = tt * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

QuadraticSurd symPowerSum(const NormalizedEigenvalue& t, int m, int k) {
  if (m < 0) throw InvalidArgument("symPowerSum: m must be >= 0");
  QuadraticSurd sum{0, 0, t.p};
  if (m % 2 == 0) {
    sum.a = 1;
    for (int j = 1; j <= m / 2; ++j) sum = sum + satakePowerSum(t, 2 * j * k);
  } else {
    for (int j = 1; j <= (m + 1) / 2; ++j) sum = sum + satakePowerSum(t, (2 * j - 1) * k);
  }
  return sum;
}

VonMangoldtSeries vonMangoldt(const SatakeData& s1, const SatakeData& s2, std::uint64_t X) {
  VonMangoldtSeries series;
  series.bound = X;
  if (X < 2) return series;
  if (!s1.traces || !s2.traces || s1.traces->bound() < X || s2.traces->bound() < X)
    throw CoefficientGap("vonMangoldt: trace data must cover p <= " + std::to_string(X));
  for (std::uint64_t p : primesUpTo(X)) {
    const TraceEntry* e1 = s1.traces->find(p);
    const TraceEntry* e2 = s2.traces->find(p);
    if (!e1->good || !e2->good) {
      series.ramified.push_back(p);
      continue;
    }
    NormalizedEigenvalue t1 = normalizedEigenvalue(p, e1->ap), t2 = normalizedEigenvalue(p, e2->ap);
    const double logp = std::log(static_cast<double>(p));
    std::uint64_t pk = p;
    for (int k = 1;; ++k) {
      VonMangoldtTerm term;
      term.p = p;
      term.k = k;
      term.pk = pk;
      term.overLog = symPowerSum(t1, s1.symPower, k) * symPowerSum(t2, s2.symPower, k);
      term.value = term.overLog.toDouble() * logp;
      series.terms.push_back(term);
      if (pk > X / p) break;
      pk *= p;
    }
  }
  std::sort(series.terms.begin(), series.terms.end(),
            [](const VonMangoldtTerm& a, const VonMangoldtTerm& b) { return a.pk < b.pk; });
  return series;
}

Rational cDelta(const Rational& delta, const Rational& numerator) {
  if (delta <= Rational(1, 2)) throw InvalidArgument("cDelta: delta must exceed 1/2");
  Rational c = 2 * (4 + numerator / delta) / (1 - 1 / (2 * delta));
  c.canonicalize();
  return c;
}

Rational cDelta(const Rational& delta) { return cDelta(delta, Rational(923)); }

Rational cDeltaWorking(const Rational& delta) { return cDelta(delta, Rational(1845, 2)); }

}  // namespace serre
