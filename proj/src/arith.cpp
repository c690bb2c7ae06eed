// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace serre {

namespace {

int kroneckerTwo(unsigned r8) { return (r8 == 3 || r8 == 5) ? -1 : 1; }

}  // namespace

int kronecker(const Integer& a0, const Integer& n0) {
  if (n0 == 0) return (abs(a0) == 1) ? 1 : 0;
  Integer a = a0;
  Integer n = n0;
  int s = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) s = -s;
  }
  mp_bitcnt_t v = mpz_scan1(n.get_mpz_t(), 0);
  if (v > 0) {
    if (mpz_even_p(a.get_mpz_t())) return 0;
    n >>= v;
    if (v & 1) s *= kroneckerTwo(static_cast<unsigned>(mpz_fdiv_ui(a.get_mpz_t(), 8)));
  }
  mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  while (a != 0) {
    mp_bitcnt_t t = mpz_scan1(a.get_mpz_t(), 0);
    a >>= t;
    if (t & 1) s *= kroneckerTwo(static_cast<unsigned>(mpz_fdiv_ui(n.get_mpz_t(), 8)));
    if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3) s = -s;
    std::swap(a, n);
    mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  }
  return n == 1 ? s : 0;
}

int kronecker(std::int64_t a0, std::int64_t n0) {
  if (n0 == 0) return (a0 == 1 || a0 == -1) ? 1 : 0;
  int s = 1;
  std::uint64_t n;
  if (n0 < 0) {
    n = static_cast<std::uint64_t>(-(static_cast<__int128>(n0)));
    if (a0 < 0) s = -s;
  } else {
    n = static_cast<std::uint64_t>(n0);
  }
  int v = __builtin_ctzll(n);
  if (v > 0) {
    if ((a0 & 1) == 0) return 0;
    n >>= v;
    unsigned r8 = static_cast<unsigned>(((a0 % 8) + 8) % 8);
    if (v & 1) s *= kroneckerTwo(r8);
  }
  __int128 am = static_cast<__int128>(a0) % static_cast<__int128>(n);
  if (am < 0) am += n;
  std::uint64_t a = static_cast<std::uint64_t>(am);
  while (a != 0) {
    int t = __builtin_ctzll(a);
    a >>= t;
    if (t & 1) s *= kroneckerTwo(static_cast<unsigned>(n % 8));
    if ((a & 3) == 3 && (n & 3) == 3) s = -s;
    std::swap(a, n);
    a %= n;
  }
  return n == 1 ? s : 0;
}

Integer Factorization::value() const {
  Integer v = sign;
  for (const auto& [p, e] : factors) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    v *= pe;
  }
  return v;
}

Integer Factorization::radical() const {
  Integer r = 1;
  for (const auto& [p, e] : factors) r *= p;
  return r;
}

int Factorization::valuation(const Integer& p) const {
  for (const auto& [q, e] : factors)
    if (q == p) return e;
  return 0;
}

bool isProbablePrime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

bool isPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // Deterministic witness set for 64-bit inputs.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0.
Integer rhoFactor(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  const unsigned long maxIterations = 1UL << 22;
  for (unsigned long c = 1; c < 20; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1, iterations = 0;
    const unsigned long m = 128;
    auto f = [&](const Integer& v) {
      Integer w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    while (g == 1 && iterations < maxIterations) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Integer diff = abs(x - y);
          q = q * diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      iterations += r;
      r *= 2;
    }
    if (g == n) {
      do {
        ys = f(ys);
        Integer diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

void splitCofactor(const Integer& n, std::map<Integer, int>& out, std::vector<Integer>& stuck) {
  if (n == 1) return;
  if (isProbablePrime(n)) {
    out[n] += 1;
    return;
  }
  Integer d = rhoFactor(n);
  if (d == 0) {
    stuck.push_back(n);
    return;
  }
  Integer rest = n / d;
  splitCofactor(d, out, stuck);
  splitCofactor(rest, out, stuck);
}

}  // namespace

Factorization factorize(const Integer& n, const Integer& smoothBound) {
  if (n == 0) throw InvalidArgument("factorize: n must be nonzero");
  Factorization result;
  result.sign = n < 0 ? -1 : 1;
  Integer c = abs(n);
  std::map<Integer, int> found;
  const std::uint64_t bound = smoothBound.fits_ulong_p() ? smoothBound.get_ui() : (1UL << 32);
  const std::uint64_t trialBound = std::min<std::uint64_t>(bound, 1UL << 24);
  for (std::uint64_t p : primesUpTo(trialBound)) {
    if (c == 1) break;
    if (c.fits_ulong_p() && p * p > c.get_ui()) break;
    if (mpz_divisible_ui_p(c.get_mpz_t(), p)) {
      int e = 0;
      do {
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(c.get_mpz_t(), p));
      found[Integer(static_cast<unsigned long>(p))] = e;
    }
  }
  std::vector<Integer> stuck;
  splitCofactor(c, found, stuck);
  if (!stuck.empty()) {
    Integer rest = 1;
    for (const auto& s : stuck) rest *= s;
    throw IncompleteFactorization(rest);
  }
  for (auto& [p, e] : found) result.factors.emplace_back(p, e);
  return result;
}

Integer radical(const Integer& n) { return factorize(n).radical(); }

int valuation(const Integer& n, const Integer& p) {
  if (n == 0) return kInfiniteValuation;
  if (p.fits_ulong_p()) {
    unsigned long pp = p.get_ui();
    if (!mpz_divisible_ui_p(n.get_mpz_t(), pp)) return 0;
    Integer c = n;
    int v = 0;
    while (mpz_divisible_ui_p(c.get_mpz_t(), pp)) {
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), pp);
      ++v;
    }
    return v;
  }
  Integer c = n;
  int v = 0;
  while (mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

bool isSquarefree(const Integer& n) {
  if (n == 0) return false;
  for (const auto& [p, e] : factorize(n).factors)
    if (e > 1) return false;
  return true;
}

bool isPerfectSquare(const Integer& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool isDiscriminant(const Integer& d) {
  unsigned long r = mpz_fdiv_ui(d.get_mpz_t(), 4);
  return r == 0 || r == 1;
}

bool isFundamentalDiscriminant(const Integer& d) {
  if (d == 0 || d == 1) return false;
  unsigned long r = mpz_fdiv_ui(d.get_mpz_t(), 4);
  if (r == 1) return isSquarefree(d);
  if (r != 0) return false;
  Integer m = d / 4;
  unsigned long rm = mpz_fdiv_ui(m.get_mpz_t(), 4);
  return (rm == 2 || rm == 3) && isSquarefree(m);
}

Integer fieldDiscriminant(const Integer& d) {
  if (d == 0 || d == 1 || !isSquarefree(d)) throw InvalidArgument("fieldDiscriminant: need squarefree d != 0, 1");
  return mpz_fdiv_ui(d.get_mpz_t(), 4) == 1 ? d : Integer(4 * d);
}

Integer squarefreePart(const Integer& n) {
  if (n == 0) throw InvalidArgument("squarefreePart: n must be nonzero");
  Factorization f = factorize(n);
  Integer s = f.sign;
  for (const auto& [p, e] : f.factors)
    if (e % 2 == 1) s *= p;
  return s;
}

Integer characterDiscriminant(const Integer& m) {
  Integer s = squarefreePart(m);
  if (s == 1) return 1;
  return fieldDiscriminant(s);
}

long classNumber(const Integer& dz) {
  if (dz >= 0 || !isDiscriminant(dz) || !dz.fits_slong_p())
    throw InvalidArgument("classNumber: D must be a negative discriminant, got " + dz.get_str());
  const long d = dz.get_si();
  const long absd = -d;
  long h = 0;
  for (long a = 1; 3 * a * a <= absd; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      if (((b - d) & 1) != 0) continue;
      long num = b * b - d;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      ++h;
    }
  }
  return h;
}

std::vector<long> classNumberOneDiscriminants(long lowest) {
  std::vector<long> out;
  for (long d = -3; d >= lowest; --d) {
    if (!isDiscriminant(Integer(d))) continue;
    if (classNumber(Integer(d)) == 1) out.push_back(d);
  }
  return out;
}

PrimeSieve::PrimeSieve(std::uint64_t bound) : bound_(bound), spf_(bound + 1, 0) {
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(i);
    }
    for (std::uint64_t p : primes_) {
      if (p > spf_[i] || i * p > bound) break;
      spf_[i * p] = static_cast<std::uint32_t>(p);
    }
  }
}

bool PrimeSieve::isPrime(std::uint64_t n) const {
  if (n > bound_) return serre::isPrime(n);
  return n >= 2 && spf_[n] == n;
}

std::vector<std::uint64_t> primesUpTo(std::uint64_t bound) {
  static std::mutex mu;
  static std::shared_ptr<const std::vector<std::uint64_t>> cache;
  static std::uint64_t cachedBound = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> local;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (!cache || cachedBound < bound) {
      std::uint64_t b = std::max<std::uint64_t>(bound, 1 << 16);
      std::vector<char> composite(b + 1, 0);
      auto primes = std::make_shared<std::vector<std::uint64_t>>();
      for (std::uint64_t i = 2; i <= b; ++i) {
        if (composite[i]) continue;
        primes->push_back(i);
        for (std::uint64_t j = i * i; j <= b; j += i) composite[j] = 1;
      }
      cache = primes;
      cachedBound = b;
    }
    local = cache;
  }
  auto end = std::upper_bound(local->begin(), local->end(), bound);
  return std::vector<std::uint64_t>(local->begin(), end);
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, newt = 1;
  __int128 r = m, newr = a % m;
  while (newr != 0) {
    __int128 q = r / newr;
    std::tie(t, newt) = std::make_pair(newt, t - q * newt);
    std::tie(r, newr) = std::make_pair(newr, r - q * newr);
  }
  if (r != 1) throw InvalidArgument("invmod: not invertible");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t sqrtmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = static_cast<std::uint64_t>(s);
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t t = powmod(a, q, p);
  std::uint64_t r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
      if (i == m) throw InvalidArgument("sqrtmod: not a square");
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

std::uint64_t reduceMod(const Integer& a, std::uint64_t m) {
  return mpz_fdiv_ui(a.get_mpz_t(), m);
}

std::uint64_t isqrtFloor(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t isqrtCeil(std::uint64_t n) {
  std::uint64_t r = isqrtFloor(n);
  return r * r == n ? r : r + 1;
}

}  // namespace serre
