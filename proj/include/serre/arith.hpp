// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "serre/errors.hpp"

namespace serre {

using Integer = mpz_class;
using Rational = mpq_class;

// Full Kronecker symbol (a/n), including n even, negative or zero.
int kronecker(const Integer& a, const Integer& n);
int kronecker(std::int64_t a, std::int64_t n);

struct Factorization {
  int sign = 1;
  std::vector<std::pair<Integer, int>> factors;  // ascending, distinct primes

  Integer value() const;
  Integer radical() const;
  int valuation(const Integer& p) const;
};

// Trial division up to smoothBound, then a Pollard rho pass on the cofactor.
// Throws IncompleteFactorization when a composite cofactor survives.
Factorization factorize(const Integer& n, const Integer& smoothBound = 1000000);

Integer radical(const Integer& n);

// v_p(n); returns INT32_MAX-ish sentinel for n = 0.
int valuation(const Integer& n, const Integer& p);
constexpr int kInfiniteValuation = 1 << 30;

bool isProbablePrime(const Integer& n);
bool isPrime(std::uint64_t n);
bool isSquarefree(const Integer& n);
bool isPerfectSquare(const Integer& n);
bool isDiscriminant(const Integer& d);
bool isFundamentalDiscriminant(const Integer& d);

// Discriminant of Q(sqrt(d)) for squarefree d != 1.
Integer fieldDiscriminant(const Integer& d);
// Squarefree s with n = s * k^2.
Integer squarefreePart(const Integer& n);
// Discriminant of the quadratic character attached to Q(sqrt(m)); 1 when m
// is a square.
Integer characterDiscriminant(const Integer& m);

// Number of reduced primitive forms of discriminant D < 0.
long classNumber(const Integer& d);

// Class-number-one discriminants in [lowest, -3], found by enumeration.
std::vector<long> classNumberOneDiscriminants(long lowest);

class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t bound);
  std::uint64_t bound() const { return bound_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  bool isPrime(std::uint64_t n) const;
  // Smallest prime factor of n for 2 <= n <= bound.
  std::uint32_t smallestFactor(std::uint64_t n) const { return spf_[n]; }

 private:
  std::uint64_t bound_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint64_t> primes_;
};

// Primes <= bound. Cached per process for small bounds.
std::vector<std::uint64_t> primesUpTo(std::uint64_t bound);

// Modular helpers on 64-bit words.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);
// Square root of a residue modulo an odd prime; a must be a square.
std::uint64_t sqrtmod(std::uint64_t a, std::uint64_t p);
std::uint64_t reduceMod(const Integer& a, std::uint64_t m);

std::uint64_t isqrtFloor(std::uint64_t n);
std::uint64_t isqrtCeil(std::uint64_t n);

}  // namespace serre
