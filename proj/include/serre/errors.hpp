// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace serre {

class SerreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public SerreError {
 public:
  using SerreError::SerreError;
};

class SingularModel : public SerreError {
 public:
  SingularModel() : SerreError("singular model: discriminant is zero") {}
};

class BadReduction : public SerreError {
 public:
  explicit BadReduction(unsigned long p)
      : SerreError("bad reduction at p = " + std::to_string(p)), prime(p) {}
  unsigned long prime;
};

class IncompleteFactorization : public SerreError {
 public:
  explicit IncompleteFactorization(const mpz_class& c)
      : SerreError("incomplete factorization, cofactor " + c.get_str()), cofactor(c) {}
  mpz_class cofactor;
};

class InsufficientSamples : public SerreError {
 public:
  using SerreError::SerreError;
};

class NoWitnessBelow : public SerreError {
 public:
  explicit NoWitnessBelow(unsigned long x)
      : SerreError("no witness prime below " + std::to_string(x)), bound(x) {}
  unsigned long bound;
};

class RamanujanViolation : public SerreError {
 public:
  using SerreError::SerreError;
};

class CoefficientGap : public SerreError {
 public:
  using SerreError::SerreError;
};

class PreconditionFailed : public SerreError {
 public:
  using SerreError::SerreError;
};

class NotAdditivePotGood : public SerreError {
 public:
  using SerreError::SerreError;
};

// Raised when a structural bound (conductor exponents, N_add^2 <= N, ...)
// fails. The CLI maps it to exit code 2.
class InvariantViolation : public SerreError {
 public:
  using SerreError::SerreError;
};

class NoCommonWitness : public SerreError {
 public:
  using SerreError::SerreError;
};

class ParseError : public SerreError {
 public:
  using SerreError::SerreError;
};

}  // namespace serre
