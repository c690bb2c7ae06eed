// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/curve.hpp"

#include <cctype>
#include <cmath>

namespace serre {

std::string WeierstrassModel::str() const {
  return "[" + a1.get_str() + "," + a2.get_str() + "," + a3.get_str() + "," + a4.get_str() + "," +
         a6.get_str() + "]";
}

namespace {

bool parseInteger(const std::string& raw, Integer& out) {
  std::size_t b = 0, e = raw.size();
  while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
  std::string s = raw.substr(b, e - b);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return out.set_str(s, 10) == 0;
}

}  // namespace

WeierstrassModel parseModel(const std::string& text) {
  std::string s = text;
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) throw ParseError("empty curve specification");
  s = s.substr(b, e - b + 1);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ParseError("unbalanced brackets in '" + text + "'");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = s.find(',', start);
    parts.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 5) throw ParseError("expected 5 coefficients in '" + text + "'");
  Integer a[5];
  for (int i = 0; i < 5; ++i)
    if (!parseInteger(parts[i], a[i])) throw ParseError("non-integer coefficient '" + parts[i] + "'");
  return {a[0], a[1], a[2], a[3], a[4]};
}

Invariants invariants(const WeierstrassModel& m) {
  Invariants inv;
  inv.b2 = m.a1 * m.a1 + 4 * m.a2;
  inv.b4 = m.a1 * m.a3 + 2 * m.a4;
  inv.b6 = m.a3 * m.a3 + 4 * m.a6;
  inv.b8 = m.a1 * m.a1 * m.a6 + 4 * m.a2 * m.a6 - m.a1 * m.a3 * m.a4 + m.a2 * m.a3 * m.a3 - m.a4 * m.a4;
  inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
  inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
  inv.disc = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4 - 27 * inv.b6 * inv.b6 +
             9 * inv.b2 * inv.b4 * inv.b6;
  if (inv.disc == 0) throw SingularModel();
  inv.j = Rational(inv.c4 * inv.c4 * inv.c4, inv.disc);
  inv.j.canonicalize();
  return inv;
}

WeierstrassModel changeCoordinates(const WeierstrassModel& m, const Integer& r, const Integer& s, const Integer& t,
                                   const Integer& u) {
  if (u == 0) throw InvalidArgument("changeCoordinates: u must be nonzero");
  Integer n1 = m.a1 + 2 * s;
  Integer n2 = m.a2 - s * m.a1 + 3 * r - s * s;
  Integer n3 = m.a3 + r * m.a1 + 2 * t;
  Integer n4 = m.a4 - s * m.a3 + 2 * r * m.a2 - (t + r * s) * m.a1 + 3 * r * r - 2 * s * t;
  Integer n6 = m.a6 + r * m.a4 + r * r * m.a2 + r * r * r - t * m.a3 - t * t - r * t * m.a1;
  if (u == 1) return {n1, n2, n3, n4, n6};
  Integer u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  auto exact = [](const Integer& num, const Integer& den) {
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
      throw InvalidArgument("changeCoordinates: non-integral result");
    Integer q;
    mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return q;
  };
  return {exact(n1, u), exact(n2, u2), exact(n3, u3), exact(n4, u4), exact(n6, u6)};
}

WeierstrassModel shortModel(const WeierstrassModel& m) {
  Invariants inv = invariants(m);
  return WeierstrassModel::shortForm(-27 * inv.c4, -54 * inv.c6);
}

WeierstrassModel quadraticTwist(const WeierstrassModel& m, const Integer& d) {
  if (d == 0 || !isSquarefree(d)) throw InvalidArgument("quadraticTwist: d must be squarefree and nonzero, got " + d.get_str());
  Invariants inv = invariants(m);
  return WeierstrassModel::shortForm(-27 * inv.c4 * d * d, -54 * inv.c6 * d * d * d);
}

WeierstrassModel applyTwist(const TwistSpec& spec) {
  if (spec.parameter == 0) throw InvalidArgument("applyTwist: parameter must be nonzero");
  Invariants inv = invariants(spec.base);
  switch (spec.order) {
    case TwistOrder::quadratic:
      return quadraticTwist(spec.base, spec.parameter);
    case TwistOrder::quartic:
      if (inv.j != 1728) throw PreconditionFailed("quartic twists need j = 1728");
      return WeierstrassModel::shortForm(spec.parameter, 0);
    case TwistOrder::sextic:
      if (inv.j != 0) throw PreconditionFailed("sextic twists need j = 0");
      return WeierstrassModel::shortForm(0, spec.parameter);
  }
  throw InvalidArgument("applyTwist: unknown order");
}

bool hasseWeilHolds(std::int64_t ap, std::uint64_t p) {
  return static_cast<unsigned __int128>(static_cast<__int128>(ap) * ap) <= static_cast<unsigned __int128>(4) * p;
}

}  // namespace serre
