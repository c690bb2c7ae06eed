// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>

#include "serre/family.hpp"
#include "serre/parallel.hpp"

namespace serre {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

// Lowest discriminant scanned when searching for class number one.
constexpr long kClassNumberScanFloor = -2000;

// j((b + sqrt(D)) / 2) from E4^3 / (E4^3 - E6^2), b = D mod 2; q is real here.
Integer jFromDiscriminant(long D) {
  const Real pi = boost::math::constants::pi<Real>();
  Real q = boost::multiprecision::exp(-pi * boost::multiprecision::sqrt(Real(-D)));
  if (D % 2 != 0) q = -q;
  Real e4 = 1, e6 = 1, qn = 1;
  for (int n = 1; n <= 60; ++n) {
    qn *= q;
    Real s3 = 0, s5 = 0;
    for (int d = 1; d <= n; ++d) {
      if (n % d) continue;
      Real dd = d;
      s3 += dd * dd * dd;
      s5 += dd * dd * dd * dd * dd;
    }
    e4 += 240 * s3 * qn;
    e6 -= 504 * s5 * qn;
  }
  Real e43 = e4 * e4 * e4;
  Real j = 1728 * e43 / (e43 - e6 * e6);
  Real r = boost::multiprecision::round(j);
  if (boost::multiprecision::abs(j - r) > Real(1e-6)) throw InvariantViolation("j-invariant for D = " + std::to_string(D) + " is not integral");
  return Integer(static_cast<boost::multiprecision::cpp_int>(r).str());
}

struct BaseEntry {
  long D;
  long a[5];
};

// Minimal-conductor representatives (ties broken by the smaller coefficient
// string); conductor in the comment.
const BaseEntry kBaseTable[] = {
    {-3, {0, 0, 1, 0, 0}},                     // 27
    {-4, {0, 0, 0, -1, 0}},                    // 32
    {-7, {1, -1, 0, -107, 552}},               // 49
    {-8, {0, -1, 0, -13, 21}},                 // 256
    {-11, {0, -1, 1, -7, 10}},                 // 121
    {-12, {0, 0, 0, -135, -594}},              // 36
    {-16, {0, 0, 0, -11, -14}},                // 32
    {-19, {0, 0, 1, -13718, -619025}},         // 361
    {-27, {0, 0, 1, -270, -1708}},             // 27
    {-28, {1, -1, 0, -1822, 30393}},           // 49
    {-43, {0, 0, 1, -1590140, -771794326}},    // 1849
    {-67, {0, 0, 1, -33083930, -73244287055}},  // 4489
    {-163, {0, 0, 1, -2174420, 1234136692}},   // 26569
};

double zeroTraceDensity(const GlobalReduction& g) {
  std::size_t good = 0, zero = 0;
  for (std::uint64_t p : primesUpTo(500)) {
    if (p < 5 || !g.isGood(p)) continue;
    ++good;
    if (countPoints(g.minimalModel, p) == 0) ++zero;
  }
  return good ? static_cast<double>(zero) / good : 0.0;
}

struct Candidate {
  TwistOrder order;
  Integer parameter;
  WeierstrassModel model;
  std::vector<Integer> localPrimes;  // primes whose exponent is not forced
  Integer forced;                    // product of p^2 over the other bad primes
};

// Squarefree r coprime to `avoid` with r^2 <= bound, with their prime factors.
std::vector<std::pair<long, std::vector<long>>> squarefreeCoprime(long rootBound, long avoid) {
  std::vector<std::pair<long, std::vector<long>>> out;
  PrimeSieve sieve(std::max<long>(rootBound, 2));
  for (long r = 1; r <= rootBound; ++r) {
    if (std::gcd(r, avoid) != 1) continue;
    std::vector<long> ps;
    long m = r;
    bool sf = true;
    while (m > 1) {
      long p = sieve.smallestFactor(m);
      m /= p;
      if (m % p == 0) {
        sf = false;
        break;
      }
      ps.push_back(p);
    }
    if (sf) out.emplace_back(r, ps);
  }
  return out;
}

Integer ipow(long b, int e) {
  Integer r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

const std::vector<long>& cmDiscriminants() {
  static const std::vector<long> ds = classNumberOneDiscriminants(kClassNumberScanFloor);
  return ds;
}

const std::vector<Integer>& cmJInvariants() {
  static const std::vector<Integer> js = [] {
    std::vector<Integer> out;
    for (long d : cmDiscriminants()) out.push_back(jFromDiscriminant(d));
    return out;
  }();
  return js;
}

bool isCM(const Rational& j) {
  if (j.get_den() != 1) return false;
  const auto& js = cmJInvariants();
  return std::find(js.begin(), js.end(), j.get_num()) != js.end();
}

const std::vector<CMBaseCurve>& cmBaseCurves() {
  static const std::vector<CMBaseCurve> bases = [] {
    const auto& ds = cmDiscriminants();
    const auto& js = cmJInvariants();
    std::vector<CMBaseCurve> out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const BaseEntry* e = nullptr;
      for (const auto& b : kBaseTable)
        if (b.D == ds[i]) e = &b;
      if (!e) throw InvariantViolation("no stored CM base model for D = " + std::to_string(ds[i]));
      CMBaseCurve c;
      c.discriminant = ds[i];
      c.j = js[i];
      c.model = WeierstrassModel(e->a[0], e->a[1], e->a[2], e->a[3], e->a[4]);
      GlobalReduction g = globalReduce(c.model);
      if (g.inv.j != Rational(c.j))
        throw InvariantViolation("CM base model " + c.model.str() + " has j = " + g.inv.j.get_str() + ", expected " + c.j.get_str());
      double dens = zeroTraceDensity(g);
      if (std::fabs(dens - 0.5) > 0.15)
        throw InvariantViolation("CM base model " + c.model.str() + " has a_p = 0 density " + std::to_string(dens));
      c.conductor = g.conductor;
      out.push_back(c);
    }
    return out;
  }();
  return bases;
}

std::optional<ExponentFit> fitExponent(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (y[i] <= 0 || x[i] <= 0) continue;
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const std::size_t n = lx.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0) return std::nullopt;
  ExponentFit f;
  f.slope = sxy / sxx;
  const double icpt = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ly[i] - (icpt + f.slope * lx[i]);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  f.stdError = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return f;
}

CensusReport cmCensus(const std::vector<Integer>& ceilingsIn) {
  CensusReport rep;
  rep.discriminants = cmDiscriminants();
  std::vector<Integer> ceilings = ceilingsIn;
  std::sort(ceilings.begin(), ceilings.end());
  ceilings.erase(std::unique(ceilings.begin(), ceilings.end()), ceilings.end());
  if (ceilings.empty()) return rep;
  for (const auto& c : ceilings)
    if (c < 1) throw InvalidArgument("cmCensus: ceiling must be >= 1");
  const Integer nMax = ceilings.back();
  Integer root;
  mpz_sqrt(root.get_mpz_t(), nMax.get_mpz_t());
  if (!root.fits_slong_p()) throw InvalidArgument("cmCensus: ceiling too large");
  const long rootBound = root.get_si();

  // Candidate twists: a small part built from primes dividing 6 N_base (free
  // exponents) times a part m coprime to that, each prime of which forces
  // conductor exponent 2.
  std::vector<std::pair<long, Candidate>> cands;
  for (const auto& base : cmBaseCurves()) {
    const long D = base.discriminant;
    Integer sixN = 6 * base.conductor;
    long avoid = sixN.fits_slong_p() ? sixN.get_si() : 0;
    auto ms = squarefreeCoprime(rootBound, avoid);
    std::vector<long> smallPrimes;
    for (const auto& pe : factorize(sixN).factors) smallPrimes.push_back(pe.first.get_si());

    if (D == -3 || D == -4) {
      const int maxExp = D == -3 ? 5 : 3;
      const TwistOrder order = D == -3 ? TwistOrder::sextic : TwistOrder::quartic;
      // Small part: every exponent pattern at 2 and 3.
      std::vector<Integer> smalls{1};
      for (long p : {2L, 3L}) {
        std::vector<Integer> next;
        for (const auto& s : smalls)
          for (int e = 0; e <= maxExp; ++e) next.push_back(s * ipow(p, e));
        smalls = next;
      }
      for (const auto& [r, ps] : ms) {
        std::vector<Integer> larges{1};
        for (long p : ps) {
          std::vector<Integer> next;
          for (const auto& s : larges)
            for (int e = 1; e <= maxExp; ++e) next.push_back(s * ipow(p, e));
          larges = next;
        }
        for (const auto& s : smalls)
          for (const auto& l : larges)
            for (int sign : {1, -1}) {
              Candidate c;
              c.order = order;
              c.parameter = sign * s * l;
              c.model = applyTwist({base.model, order, c.parameter});
              c.localPrimes = {2, 3};
              c.forced = Integer(r) * r;
              cands.emplace_back(D, std::move(c));
            }
      }
    } else {
      std::vector<Integer> smalls{1};
      for (long p : smallPrimes) {
        std::vector<Integer> next;
        for (const auto& s : smalls) {
          next.push_back(s);
          next.push_back(s * p);
        }
        smalls = next;
      }
      for (const auto& [r, ps] : ms)
        for (const auto& s : smalls)
          for (int sign : {1, -1}) {
            Candidate c;
            c.order = TwistOrder::quadratic;
            c.parameter = sign * s * r;
            if (c.parameter == 1) {
              c.model = base.model;
            } else {
              c.model = quadraticTwist(base.model, c.parameter);
            }
            for (long p : smallPrimes) c.localPrimes.push_back(p);
            c.forced = Integer(r) * r;
            cands.emplace_back(D, std::move(c));
          }
    }
  }

  // Exponents at the free primes come from Tate's algorithm; only candidates
  // that can fit under the ceiling get a full reduction.
  std::vector<std::optional<CensusTwist>> found(cands.size());
  parallelFor(cands.size(), [&](std::size_t i) {
    const Candidate& c = cands[i].second;
    if (c.forced > nMax) return;
    Integer bound = c.forced;
    for (const auto& p : c.localPrimes) {
      bound *= ipow(p.get_si(), tate(c.model, p).local.conductorExp);
      if (bound > nMax) return;
    }
    GlobalReduction g = globalReduce(c.model);
    if (g.conductor > nMax) return;
    found[i] = CensusTwist{cands[i].first, c.order, c.parameter, g.minimalModel, g.conductor};
  });

  std::set<std::string> seen;
  for (auto& f : found) {
    if (!f) continue;
    if (!seen.insert(f->minimalModel.str()).second) continue;
    rep.twists.push_back(*f);
  }
  std::sort(rep.twists.begin(), rep.twists.end(), [](const CensusTwist& a, const CensusTwist& b) {
    int c = cmp(a.conductor, b.conductor);
    if (c != 0) return c < 0;
    return a.minimalModel.str() < b.minimalModel.str();
  });

  std::vector<double> xs, ys, ysQuad;
  for (const auto& N : ceilings) {
    CensusRow row;
    row.ceiling = N;
    for (long d : rep.discriminants) row.perDiscriminant[d] = 0;
    for (const auto& t : rep.twists) {
      if (t.conductor > N) break;
      ++row.count;
      ++row.perDiscriminant[t.discriminant];
    }
    row.normalized = row.count / std::sqrt(N.get_d());
    xs.push_back(N.get_d());
    ys.push_back(static_cast<double>(row.count));
    ysQuad.push_back(static_cast<double>(row.count - row.perDiscriminant[-3] - row.perDiscriminant[-4]));
    rep.rows.push_back(row);
  }
  if (auto fit = fitExponent(xs, ys)) {
    rep.fitted = true;
    rep.exponent = fit->slope;
    rep.exponentStdError = fit->stdError;
    rep.residual = fit->residual;
  }
  if (auto fit = fitExponent(xs, ysQuad)) {
    rep.fittedQuadratic = true;
    rep.exponentQuadratic = fit->slope;
  }
  return rep;
}

WeierstrassModel minimalTwistWithJ(const Rational& j) {
  if (j == 0 || j == 1728) throw InvalidArgument("minimalTwistWithJ: j must differ from 0 and 1728");
  const Integer a = j.get_num(), b = j.get_den();
  const Integer k = a - 1728 * b;
  // y^2 = x^3 - 3 j (j - 1728) x - 2 j (j - 1728)^2, scaled by u = b.
  WeierstrassModel m(0, 0, 0, -3 * a * k * b * b, -2 * a * k * k * b * b * b);
  GlobalReduction g0 = globalReduce(m);
  std::vector<Integer> ps;
  for (const auto& l : g0.locals) ps.push_back(l.p);
  if (ps.size() > 20) throw InvalidArgument("minimalTwistWithJ: too many bad primes");
  Integer best = 0;
  WeierstrassModel bestModel;
  for (unsigned long mask = 0; mask < (1UL << ps.size()); ++mask)
    for (int sign : {1, -1}) {
      Integer d = sign;
      for (std::size_t i = 0; i < ps.size(); ++i)
        if ((mask >> i) & 1) d *= ps[i];
      GlobalReduction g = globalReduce(d == 1 ? m : quadraticTwist(m, d));
      if (best == 0 || g.conductor < best || (g.conductor == best && g.minimalModel.str() < bestModel.str())) {
        best = g.conductor;
        bestModel = g.minimalModel;
      }
    }
  return bestModel;
}

CensusReport cmCensus(const Integer& ceiling) { return cmCensus(std::vector<Integer>{ceiling}); }

}  // namespace serre
