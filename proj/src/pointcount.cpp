// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

// Frobenius traces over F_p: character sums for small p, baby-step/giant-step
// group-order search with twist narrowing for large p.

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "serre/curve.hpp"

namespace serre {

namespace {

constexpr std::uint64_t kCachedLegendreBound = 1 << 13;

std::vector<std::int8_t> buildLegendreTable(std::uint64_t p) {
  std::vector<std::int8_t> chi(p, -1);
  chi[0] = 0;
  for (std::uint64_t y = 1; y <= p / 2; ++y) chi[y * y % p] = 1;
  return chi;
}

const std::vector<std::int8_t>& cachedLegendreTable(std::uint64_t p) {
  static std::once_flag once;
  static std::vector<std::vector<std::int8_t>> tables;
  std::call_once(once, [] {
    tables.resize(kCachedLegendreBound);
    for (std::uint64_t q : primesUpTo(kCachedLegendreBound - 1))
      if (q >= 5) tables[q] = buildLegendreTable(q);
  });
  return tables[p];
}

std::int64_t affineTrace(const WeierstrassModel& m, std::uint64_t p) {
  Invariants inv = invariants(m);
  if (mpz_divisible_ui_p(inv.disc.get_mpz_t(), p)) throw BadReduction(p);
  const std::int64_t P = static_cast<std::int64_t>(p);
  std::int64_t a1 = reduceMod(m.a1, p), a2 = reduceMod(m.a2, p), a3 = reduceMod(m.a3, p),
               a4 = reduceMod(m.a4, p), a6 = reduceMod(m.a6, p);
  std::int64_t count = 1;
  for (std::int64_t x = 0; x < P; ++x) {
    for (std::int64_t y = 0; y < P; ++y) {
      std::int64_t lhs = (y * y + a1 * x * y + a3 * y) % P;
      std::int64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % P;
      if (lhs == rhs) ++count;
    }
  }
  return P + 1 - count;
}

// --- group law on y^2 = x^3 + A x + B over F_p ---------------------------

struct Point {
  std::uint64_t x = 0, y = 0;
  bool inf = true;
  bool operator==(const Point& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

class ShortCurve {
 public:
  ShortCurve(std::uint64_t A, std::uint64_t B, std::uint64_t p) : A_(A % p), B_(B % p), p_(p) {}

  std::uint64_t rhs(std::uint64_t x) const {
    std::uint64_t x2 = mulmod(x, x, p_);
    std::uint64_t v = mulmod(x2, x, p_);
    v = addm(v, mulmod(A_, x, p_));
    return addm(v, B_);
  }

  Point negate(const Point& P) const {
    if (P.inf) return P;
    return {P.x, P.y == 0 ? 0 : p_ - P.y, false};
  }

  Point add(const Point& P, const Point& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    std::uint64_t lambda;
    if (P.x == Q.x) {
      if (addm(P.y, Q.y) == 0) return Point{};
      std::uint64_t num = addm(mulmod(3, mulmod(P.x, P.x, p_), p_), A_);
      lambda = mulmod(num, invmod(mulmod(2, P.y, p_), p_), p_);
    } else {
      lambda = mulmod(subm(Q.y, P.y), invmod(subm(Q.x, P.x), p_), p_);
    }
    std::uint64_t x3 = subm(subm(mulmod(lambda, lambda, p_), P.x), Q.x);
    std::uint64_t y3 = subm(mulmod(lambda, subm(P.x, x3), p_), P.y);
    return {x3, y3, false};
  }

  Point mul(const Point& P, std::uint64_t k) const {
    Point result, base = P;
    while (k > 0) {
      if (k & 1) result = add(result, base);
      base = add(base, base);
      k >>= 1;
    }
    return result;
  }

  template <class Rng>
  Point random(Rng& rng) const {
    std::uniform_int_distribution<std::uint64_t> dist(0, p_ - 1);
    for (;;) {
      std::uint64_t x = dist(rng);
      std::uint64_t f = rhs(x);
      if (f == 0) return {x, 0, false};
      if (powmod(f, (p_ - 1) / 2, p_) != 1) continue;
      std::uint64_t y = sqrtmod(f, p_);
      if (dist(rng) & 1) y = p_ - y;
      return {x, y, false};
    }
  }

 private:
  std::uint64_t addm(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t subm(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }

  std::uint64_t A_, B_, p_;
};

struct PointHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
    return std::hash<std::uint64_t>()(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

// Some M in [lo, hi] with M P = O. Existence is the caller's guarantee.
std::uint64_t annihilatorInInterval(const ShortCurve& E, const Point& P, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t width = hi - lo + 1;
  const std::uint64_t m = std::max<std::uint64_t>(1, isqrtCeil(width));
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t, PointHash> baby;
  baby.reserve(m * 2);
  Point jP;
  for (std::uint64_t j = 0; j < m; ++j) {
    if (!jP.inf) baby.emplace(std::make_pair(jP.x, jP.y), j);
    jP = E.add(jP, P);
  }
  const Point step = E.mul(P, m);
  Point R = E.mul(P, lo);
  for (std::uint64_t base = lo; base <= hi; base += m) {
    if (R.inf) return base;
    Point negR = E.negate(R);
    auto it = baby.find({negR.x, negR.y});
    if (it != baby.end() && base + it->second <= hi) return base + it->second;
    R = E.add(R, step);
  }
  throw InvariantViolation("point order search left the Hasse interval");
}

std::uint64_t orderFromMultiple(const ShortCurve& E, const Point& P, std::uint64_t M) {
  std::uint64_t order = M;
  Factorization f = factorize(Integer(static_cast<unsigned long>(M)));
  for (const auto& [q, e] : f.factors) {
    std::uint64_t qq = q.get_ui();
    for (int i = 0; i < e; ++i) {
      if (E.mul(P, order / qq).inf)
        order /= qq;
      else
        break;
    }
  }
  return order;
}

// Explicit subgroup generated by points, used only when order data alone
// cannot pin the group order (tiny p).
class SubgroupClosure {
 public:
  explicit SubgroupClosure(const ShortCurve& E) : E_(E) { insert(Point{}); }

  void adjoin(const Point& g) {
    if (contains(g)) return;
    std::uint64_t m = 1;
    Point mg = g;
    while (!contains(mg)) {
      mg = E_.add(mg, g);
      ++m;
    }
    std::vector<Point> base = elements_;
    Point kg = g;
    for (std::uint64_t k = 1; k < m; ++k) {
      for (const Point& h : base) insert(E_.add(h, kg));
      kg = E_.add(kg, g);
    }
  }
  std::uint64_t size() const { return elements_.size(); }

 private:
  bool contains(const Point& P) const { return keys_.count(packed(P)) > 0; }
  void insert(const Point& P) {
    if (keys_.insert(packed(P)).second) elements_.push_back(P);
  }
  std::uint64_t packed(const Point& P) const { return P.inf ? ~0ULL : (P.x << 32) ^ P.y; }

  const ShortCurve& E_;
  std::vector<Point> elements_;
  std::unordered_set<std::uint64_t> keys_;
};

std::vector<std::uint64_t> consistentOrders(std::uint64_t lo, std::uint64_t hi, std::uint64_t total,
                                            std::uint64_t divE, std::uint64_t divT) {
  std::vector<std::uint64_t> out;
  std::uint64_t first = (lo + divE - 1) / divE * divE;
  for (std::uint64_t n = first; n <= hi; n += divE)
    if ((total - n) % divT == 0) out.push_back(n);
  return out;
}

}  // namespace

std::int64_t traceShortNaive(std::uint64_t A, std::uint64_t B, std::uint64_t p) {
  if (p < 5) throw InvalidArgument("traceShortNaive: p must be >= 5");
  if (p >= (1ULL << 31)) throw InvalidArgument("traceShortNaive: p too large for enumeration");
  A %= p;
  B %= p;
  std::uint64_t d = (4 * mulmod(mulmod(A, A, p), A, p) + 27 * mulmod(B, B, p)) % p;
  if (d == 0) throw BadReduction(p);
  std::vector<std::int8_t> local;
  const std::vector<std::int8_t>* chi;
  if (p < kCachedLegendreBound) {
    chi = &cachedLegendreTable(p);
  } else {
    local = buildLegendreTable(p);
    chi = &local;
  }
  std::int64_t sum = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t f = ((x * x % p) * x + A * x + B) % p;
    sum += (*chi)[f];
  }
  return -sum;
}

std::int64_t traceShortBsgs(std::uint64_t A, std::uint64_t B, std::uint64_t p) {
  if (p < 5) throw InvalidArgument("traceShortBsgs: p must be >= 5");
  if (p >= (1ULL << 62)) throw InvalidArgument("traceShortBsgs: p too large");
  A %= p;
  B %= p;
  std::uint64_t d = (mulmod(4, mulmod(mulmod(A, A, p), A, p), p) + mulmod(27, mulmod(B, B, p), p)) % p;
  if (d == 0) throw BadReduction(p);

  const std::uint64_t spread = isqrtFloor(4 * p);
  const std::uint64_t lo = p + 1 - spread, hi = p + 1 + spread;
  const std::uint64_t total = 2 * p + 2;  // #E + #E' for the quadratic twist E'

  std::uint64_t g = 2;
  while (powmod(g, (p - 1) / 2, p) != p - 1) ++g;
  const ShortCurve E(A, B, p);
  const ShortCurve T(mulmod(A, mulmod(g, g, p), p), mulmod(B, mulmod(mulmod(g, g, p), g, p), p), p);

  std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ULL ^ (A << 17) ^ (B << 3) ^ 0x5eed);
  std::uint64_t lamE = 1, lamT = 1;
  for (int iter = 0; iter < 48; ++iter) {
    bool onTwist = (iter % 2) == 1;
    const ShortCurve& C = onTwist ? T : E;
    Point P = C.random(rng);
    std::uint64_t M = annihilatorInInterval(C, P, lo, hi);
    std::uint64_t ord = orderFromMultiple(C, P, M);
    if (onTwist)
      lamT = std::lcm(lamT, ord);
    else
      lamE = std::lcm(lamE, ord);
    if (iter % 2 == 1) {
      auto cands = consistentOrders(lo, hi, total, lamE, lamT);
      if (cands.size() == 1) return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(cands[0]);
    }
  }

  // Exponent data is ambiguous; only happens for small p.
  if (p > (1ULL << 20)) throw InvariantViolation("baby-step/giant-step failed to isolate group order");
  SubgroupClosure HE(E), HT(T);
  for (int iter = 0; iter < 4000; ++iter) {
    HE.adjoin(E.random(rng));
    HT.adjoin(T.random(rng));
    auto cands = consistentOrders(lo, hi, total, HE.size(), HT.size());
    if (cands.size() == 1) return static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(cands[0]);
  }
  throw InvariantViolation("subgroup closure failed to isolate group order");
}

std::int64_t tracePointCountNaive(const WeierstrassModel& model, std::uint64_t p) {
  if (p < 5) return affineTrace(model, p);
  Invariants inv = invariants(model);
  if (mpz_divisible_ui_p(inv.disc.get_mpz_t(), p)) throw BadReduction(p);
  Integer A = -27 * inv.c4, B = -54 * inv.c6;
  return traceShortNaive(reduceMod(A, p), reduceMod(B, p), p);
}

std::int64_t tracePointCountBsgs(const WeierstrassModel& model, std::uint64_t p) {
  if (p < 5) throw InvalidArgument("tracePointCountBsgs: p must be >= 5");
  Invariants inv = invariants(model);
  if (mpz_divisible_ui_p(inv.disc.get_mpz_t(), p)) throw BadReduction(p);
  Integer A = -27 * inv.c4, B = -54 * inv.c6;
  return traceShortBsgs(reduceMod(A, p), reduceMod(B, p), p);
}

std::int64_t countPoints(const WeierstrassModel& model, std::uint64_t p) {
  if (p < kPointCountCrossover) return tracePointCountNaive(model, p);
  return tracePointCountBsgs(model, p);
}

}  // namespace serre
