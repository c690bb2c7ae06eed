// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numeric>

#include "serre/parallel.hpp"
#include "serre/symprime.hpp"

namespace serre {

namespace {

double rawBump(double u, double lo, double hi) {
  if (u <= lo || u >= hi) return 0.0;
  return std::exp(-1.0 / ((u - lo) * (hi - u)));
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

constexpr std::uint64_t kSumBlock = 4096;

template <class Term>
double blockedSum(std::uint64_t first, std::uint64_t last, Term term) {
  if (last < first) return 0.0;
  const std::uint64_t count = last - first + 1;
  const std::size_t blocks = static_cast<std::size_t>((count + kSumBlock - 1) / kSumBlock);
  std::vector<CompensatedSum> partial(blocks);
  parallelFor(blocks, [&](std::size_t b) {
    std::uint64_t lo = first + b * kSumBlock;
    std::uint64_t hi = std::min(last, lo + kSumBlock - 1);
    for (std::uint64_t n = lo; n <= hi; ++n) partial[b].add(term(n));
  });
  CompensatedSum total;
  for (const auto& p : partial) {
    total.add(p.sum);
    total.add(p.carry);
  }
  return total.value();
}

}  // namespace

SmoothTestFunction SmoothTestFunction::bump(double lo, double hi) {
  if (!(hi > lo)) throw InvalidArgument("bump: empty support");
  boost::math::quadrature::tanh_sinh<double> integrator;
  double mass = integrator.integrate([&](double u) { return rawBump(u, lo, hi); }, lo, hi);
  return SmoothTestFunction(lo, hi, 1.0 / mass);
}

SmoothTestFunction SmoothTestFunction::zero(double lo, double hi) { return SmoothTestFunction(lo, hi, 0.0); }

double SmoothTestFunction::operator()(double u) const { return scale_ == 0.0 ? 0.0 : scale_ * rawBump(u, lo_, hi_); }

double SmoothTestFunction::simpsonIntegral(int panels) const {
  if (panels % 2) ++panels;
  const double h = (hi_ - lo_) / panels;
  double s = (*this)(lo_) + (*this)(hi_);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * (*this)(lo_ + i * h);
  return s * h / 3.0;
}

std::vector<Rational> Sym2Series::primePowerCoefficients(const Rational& t2, int K) {
  // Local factor 1 / ((1 - a^2 x)(1 - x)(1 - b^2 x)) with ab = 1.
  const Rational e1 = t2 - 1, e2 = t2 - 1, e3 = 1;
  std::vector<Rational> c(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    if (k == 0) {
      c[0] = 1;
      continue;
    }
    Rational v = e1 * c[k - 1];
    if (k >= 2) v -= e2 * c[k - 2];
    if (k >= 3) v += e3 * c[k - 3];
    c[k] = v;
  }
  return c;
}

Sym2Series::Sym2Series(const TraceTable& t, std::uint64_t bound)
    : bound_(bound), coeff_(bound + 1), ok_(bound + 1, 0) {
  if (bound == 0) return;
  coeff_[1] = 1;
  ok_[1] = 1;
  PrimeSieve sieve(std::max<std::uint64_t>(bound, 2));
  for (std::uint64_t n = 2; n <= bound; ++n) {
    std::uint64_t p = sieve.smallestFactor(n);
    std::uint64_t m = n, pk = 1;
    int k = 0;
    while (m % p == 0) {
      m /= p;
      pk *= p;
      ++k;
    }
    if (!ok_[m]) continue;
    const TraceEntry* e = t.find(p);
    if (!e || !e->good) continue;
    if (m == 1) {
      // Prime power: build from the recursion once per prime.
      if (k == 1) {
        auto c = primePowerCoefficients(normalizedEigenvalue(p, e->ap).tSquared(), 1);
        coeff_[n] = c[1];
      } else {
        Rational t2 = normalizedEigenvalue(p, e->ap).tSquared();
        auto c = primePowerCoefficients(t2, k);
        coeff_[n] = c[k];
      }
    } else {
      if (!ok_[pk]) continue;
      coeff_[n] = coeff_[pk] * coeff_[m];
    }
    ok_[n] = 1;
  }
}

const Rational& Sym2Series::coefficient(std::uint64_t n) const {
  if (!available(n)) throw CoefficientGap("Sym2Series: no coefficient for n = " + std::to_string(n));
  return coeff_[n];
}

namespace {

struct SumRange {
  std::uint64_t first, last;
};

SumRange rangeFor(double X, const SmoothTestFunction& psi) {
  double a = std::ceil(X * psi.lo()), b = std::floor(X * psi.hi());
  if (b < 1 || b < a) return {1, 0};
  return {static_cast<std::uint64_t>(std::max(1.0, a)), static_cast<std::uint64_t>(b)};
}

bool coprime(std::uint64_t n, const Integer& m) {
  if (m == 0) return n == 1;
  return mpz_gcd_ui(nullptr, m.get_mpz_t(), n) == 1;
}

}  // namespace

double smoothSumS(const Sym2Series& s1, double X, const SmoothTestFunction& psi, const Integer& coprimeTo) {
  SumRange r = rangeFor(X, psi);
  if (r.last >= r.first && r.last > s1.bound())
    throw CoefficientGap("smoothSumS: coefficients needed up to " + std::to_string(r.last));
  return blockedSum(r.first, r.last, [&](std::uint64_t n) {
    if (!coprime(n, coprimeTo)) return 0.0;
    const Rational& c = s1.coefficient(n);
    Rational sq = c * c;
    return sq.get_d() * psi(static_cast<double>(n) / X);
  });
}

double smoothSumH(const Sym2Series& s1, const Sym2Series& s2, double X, const SmoothTestFunction& psi,
                  const Integer& coprimeTo) {
  SumRange r = rangeFor(X, psi);
  if (r.last >= r.first && (r.last > s1.bound() || r.last > s2.bound()))
    throw CoefficientGap("smoothSumH: coefficients needed up to " + std::to_string(r.last));
  return blockedSum(r.first, r.last, [&](std::uint64_t n) {
    if (!coprime(n, coprimeTo)) return 0.0;
    Rational prod = s1.coefficient(n) * s2.coefficient(n);
    return prod.get_d() * psi(static_cast<double>(n) / X);
  });
}

std::optional<std::uint64_t> linnikScanPair(const TraceTable& t1, const TraceTable& t2, std::uint64_t bound) {
  const auto& a = t1.entries();
  const auto& b = t2.entries();
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].p > bound) break;
    if (a[i].good && b[i].good && std::llabs(a[i].ap) != std::llabs(b[i].ap)) return a[i].p;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> linnikScanCharacter(const TraceTable& t, const Integer& conductor, const Integer& chiModulus,
                                                 std::uint64_t bound) {
  if (chiModulus == 0) throw InvalidArgument("linnikScanCharacter: modulus must be nonzero");
  const Integer disc = characterDiscriminant(chiModulus);
  if (disc == 1) return std::nullopt;
  for (const auto& e : t.entries()) {
    if (e.p > bound) break;
    if (e.p == 2 || e.p == 3 || !e.good) continue;
    if (mpz_divisible_ui_p(conductor.get_mpz_t(), e.p)) continue;
    if (e.ap != 0 && kronecker(disc, Integer(static_cast<unsigned long>(e.p))) == -1) return e.p;
  }
  return std::nullopt;
}

}  // namespace serre
