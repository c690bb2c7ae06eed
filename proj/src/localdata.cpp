// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include "serre/localdata.hpp"

#include <algorithm>
#include <numeric>

namespace serre {

std::string Kodaira::str() const {
  switch (family) {
    case KodairaFamily::I0: return "I0";
    case KodairaFamily::In: return "I" + std::to_string(n);
    case KodairaFamily::II: return "II";
    case KodairaFamily::III: return "III";
    case KodairaFamily::IV: return "IV";
    case KodairaFamily::I0Star: return "I0*";
    case KodairaFamily::InStar: return "I" + std::to_string(n) + "*";
    case KodairaFamily::IIStar: return "II*";
    case KodairaFamily::IIIStar: return "III*";
    case KodairaFamily::IVStar: return "IV*";
  }
  return "?";
}

std::string toString(ReductionType t) {
  switch (t) {
    case ReductionType::good: return "good";
    case ReductionType::multSplit: return "multSplit";
    case ReductionType::multNonsplit: return "multNonsplit";
    case ReductionType::additive: return "additive";
  }
  return "?";
}

std::string toString(PhiTag t) {
  switch (t) {
    case PhiTag::none: return "none";
    case PhiTag::order2: return "2";
    case PhiTag::order3: return "3";
    case PhiTag::order4: return "4";
    case PhiTag::order6: return "6";
    case PhiTag::z3SemidirectZ4: return "Z3xZ4";
    case PhiTag::q8: return "Q8";
    case PhiTag::sl2f3: return "SL2F3";
    case PhiTag::undetermined23: return "undetermined23";
  }
  return "?";
}

int phiTagOrder(PhiTag t) {
  switch (t) {
    case PhiTag::order2: return 2;
    case PhiTag::order3: return 3;
    case PhiTag::order4: return 4;
    case PhiTag::order6: return 6;
    default: return 0;
  }
}

std::string toString(InertialClass c) {
  switch (c) {
    case InertialClass::principalSeries_tps114: return "principalSeries_tps114";
    case InertialClass::supercuspidal_tscu24: return "supercuspidal_tscu24";
    case InertialClass::other: return "other";
  }
  return "?";
}

int LocalReduction::localTrace() const {
  switch (redType) {
    case ReductionType::multSplit: return 1;
    case ReductionType::multNonsplit: return -1;
    default: return 0;
  }
}

bool potentialGoodness(const Rational& j, const Integer& p) {
  return valuation(j.get_den(), p) == 0;
}

PhiTag phiFromDiscriminantValuation(int v) {
  switch (v) {
    case 6: return PhiTag::order2;
    case 4:
    case 8: return PhiTag::order3;
    case 3:
    case 9: return PhiTag::order4;
    case 2:
    case 10: return PhiTag::order6;
    default: return PhiTag::none;
  }
}

namespace {

// For p = 2, 3 the ramification index over the maximal unramified extension
// must make e * v(Delta) divisible by 12. When gcd(v, 12) = 1 this forces the
// full automorphism group of the supersingular reduction.
PhiTag phiTagSmallPrime(unsigned long p, int v) {
  if (std::gcd(v, 12) != 1) return PhiTag::undetermined23;
  return p == 2 ? PhiTag::sl2f3 : PhiTag::z3SemidirectZ4;
}

class TateRunner {
 public:
  TateRunner(const WeierstrassModel& m, const Integer& p) : C_(m), p_(p) {
    p2_ = p * p;
    p3_ = p2_ * p;
    p4_ = p3_ * p;
    p6_ = p4_ * p2_;
    if (p != 2) half_ = inverse(2, p);
  }

  TateResult run() {
    LocalReduction L;
    L.p = p_;
    for (;;) {
      Invariants inv = invariants(C_);
      const int vD = val(inv.disc);
      L.vDeltaMin = vD;
      if (vD == 0) {
        L.kodaira = {KodairaFamily::I0, 0};
        L.conductorExp = 0;
        L.redType = ReductionType::good;
        L.potGood = true;
        return finish(L);
      }

      // Move the singular point to (0, 0).
      Integer r, t;
      if (p_ == 2) {
        if (pdiv(inv.b2)) {
          r = mod(C_.a4, p_);
          t = mod(r * (1 + C_.a2 + C_.a4) + C_.a6, p_);
        } else {
          r = mod(C_.a3, p_);
          t = mod(r + C_.a4, p_);
        }
      } else if (p_ == 3) {
        r = pdiv(inv.b2) ? mod(-inv.b6, p_) : mod(-inv.b2 * inv.b4, p_);
        t = mod(C_.a1 * r + C_.a3, p_);
      } else {
        if (pdiv(inv.c4))
          r = mod(-inv.b2 * inverse(12, p_), p_);
        else
          r = mod(-(inv.c6 + inv.b2 * inv.c4) * inverse(12 * inv.c4, p_), p_);
        t = mod(-(C_.a1 * r + C_.a3) * half_, p_);
      }
      apply(r, 0, t);
      require(pdiv(C_.a3) && pdiv(C_.a4) && pdiv(C_.a6), "singular point not at origin");
      inv = invariants(C_);

      if (!pdiv(inv.c4)) {
        L.kodaira = {KodairaFamily::In, vD};
        L.conductorExp = 1;
        L.redType = splitNode() ? ReductionType::multSplit : ReductionType::multNonsplit;
        return finish(L);
      }
      L.redType = ReductionType::additive;

      if (val(C_.a6) < 2) return additive(L, {KodairaFamily::II, 0}, vD);
      if (val(inv.b8) < 3) return additive(L, {KodairaFamily::III, 0}, vD - 1);
      if (val(inv.b6) < 3) return additive(L, {KodairaFamily::IV, 0}, vD - 2);

      // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
      Integer s;
      if (p_ == 2) {
        s = mod(C_.a2, 2);
        t = 2 * mod(exact(C_.a6, 4), 2);
      } else {
        s = mod(-C_.a1 * half_, p_);
        t = mod(-C_.a3 * inverse(2, p2_), p2_);
      }
      apply(0, s, t);
      require(pdiv(C_.a1) && pdiv(C_.a2) && divisible(C_.a3, p2_) && divisible(C_.a4, p2_) &&
                  divisible(C_.a6, p3_),
              "second coordinate change");

      const Integer b = exact(C_.a2, p_), c = exact(C_.a4, p2_), d = exact(C_.a6, p3_);
      const Integer w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
      const Integer x = 3 * c - b * b;

      if (!pdiv(w)) return additive(L, {KodairaFamily::I0Star, 0}, vD - 4);

      if (!pdiv(x)) {
        // Double root of the cubic: type I_m*.
        Integer root;
        if (p_ == 2)
          root = mod(c, 2);
        else if (p_ == 3)
          root = mod(b * c, 3);
        else
          root = mod((b * c - 9 * d) * inverse(2 * x, p_), p_);
        apply(p_ * root, 0, 0);
        int ix = 3, iy = 3;
        Integer mx = p2_, my = p2_;
        for (;;) {
          Integer xa2 = exact(C_.a2, p_), xa3 = exact(C_.a3, my), xa4 = exact(C_.a4, p_ * mx),
                  xa6 = exact(C_.a6, mx * my);
          if (!pdiv(xa3 * xa3 + 4 * xa6)) break;
          Integer ty = (p_ == 2) ? Integer(my * mod(xa6, 2)) : Integer(my * mod(-xa3 * half_, p_));
          apply(0, 0, ty);
          my *= p_;
          ++iy;
          xa2 = exact(C_.a2, p_);
          xa4 = exact(C_.a4, p_ * mx);
          xa6 = exact(C_.a6, mx * my);
          if (!pdiv(xa4 * xa4 - 4 * xa2 * xa6)) break;
          Integer rx = (p_ == 2) ? Integer(mx * mod(xa6 * xa2, 2))
                                 : Integer(mx * mod(-xa4 * half_ * inverse(xa2, p_), p_));
          apply(rx, 0, 0);
          mx *= p_;
          ++ix;
        }
        const int m = ix + iy - 5;
        return additive(L, {KodairaFamily::InStar, m}, vD - m - 4);
      }

      // Triple root.
      Integer root;
      if (p_ == 2)
        root = mod(b, 2);
      else if (p_ == 3)
        root = mod(-d, 3);
      else
        root = mod(-b * inverse(3, p_), p_);
      apply(p_ * root, 0, 0);
      Integer x3 = exact(C_.a3, p2_), x6 = exact(C_.a6, p4_);
      if (!pdiv(x3 * x3 + 4 * x6)) return additive(L, {KodairaFamily::IVStar, 0}, vD - 6);

      Integer tz = (p_ == 2) ? Integer(p2_ * mod(x6, 2)) : Integer(p2_ * mod(-x3 * half_, p_));
      apply(0, 0, tz);
      require(divisible(C_.a3, p3_) && divisible(C_.a6, p4_ * p_), "triple-root coordinate change");
      if (val(C_.a4) < 4) return additive(L, {KodairaFamily::IIIStar, 0}, vD - 7);
      if (val(C_.a6) < 6) return additive(L, {KodairaFamily::IIStar, 0}, vD - 8);

      // Not minimal at p: scale down and start over.
      C_ = changeCoordinates(C_, 0, 0, 0, p_);
    }
  }

 private:
  TateResult additive(LocalReduction& L, Kodaira k, int f) {
    L.kodaira = k;
    L.conductorExp = f;
    return finish(L);
  }

  TateResult finish(LocalReduction& L) {
    Invariants inv = invariants(C_);
    L.vDeltaMin = val(inv.disc);
    if (L.redType == ReductionType::additive) {
      L.potGood = potentialGoodness(inv.j, p_);
      if (L.potGood) {
        if (p_ == 2 || p_ == 3)
          L.phi = phiTagSmallPrime(p_.get_ui(), L.vDeltaMin);
        else
          L.phi = phiFromDiscriminantValuation(L.vDeltaMin);
      }
    } else {
      L.potGood = L.redType == ReductionType::good;
    }
    return {L, C_};
  }

  bool splitNode() const {
    if (p_ == 2) {
      Integer a1 = mod(C_.a1, 2), a2 = mod(C_.a2, 2);
      return mod(-a2, 2) == 0 || mod(1 + a1 - a2, 2) == 0;
    }
    Integer b2 = C_.a1 * C_.a1 + 4 * C_.a2;
    return kronecker(b2, p_) == 1;
  }

  void apply(const Integer& r, const Integer& s, const Integer& t) { C_ = changeCoordinates(C_, r, s, t); }

  bool pdiv(const Integer& x) const { return mpz_divisible_p(x.get_mpz_t(), p_.get_mpz_t()) != 0; }
  static bool divisible(const Integer& x, const Integer& m) { return mpz_divisible_p(x.get_mpz_t(), m.get_mpz_t()) != 0; }
  int val(const Integer& x) const { return valuation(x, p_); }
  static Integer mod(const Integer& x, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
  }
  static Integer mod(const Integer& x, long m) { return mod(x, Integer(m)); }
  static Integer inverse(const Integer& x, const Integer& m) {
    Integer r;
    Integer xm = mod(x, m);
    if (mpz_invert(r.get_mpz_t(), xm.get_mpz_t(), m.get_mpz_t()) == 0)
      throw InvariantViolation("Tate: non-invertible residue");
    return r;
  }
  static Integer inverse(long x, const Integer& m) { return inverse(Integer(x), m); }
  static Integer exact(const Integer& x, const Integer& d) {
    if (!divisible(x, d)) throw InvariantViolation("Tate: divisibility expected for " + x.get_str() + " / " + d.get_str());
    Integer q;
    mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
    return q;
  }
  static Integer exact(const Integer& x, long d) { return exact(x, Integer(d)); }
  static void require(bool ok, const char* what) {
    if (!ok) throw InvariantViolation(std::string("Tate: ") + what);
  }

  WeierstrassModel C_;
  Integer p_, p2_, p3_, p4_, p6_, half_;
};

WeierstrassModel standardize(const WeierstrassModel& m) {
  auto floorDiv = [](const Integer& a, long d) {
    Integer q;
    mpz_fdiv_q_ui(q.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(d));
    return q;
  };
  Integer s = -floorDiv(m.a1, 2);
  Integer v = m.a2 - s * m.a1 - s * s;
  Integer r = -floorDiv(v + 1, 3);
  Integer t = -floorDiv(m.a3 + r * m.a1, 2);
  return changeCoordinates(m, r, s, t);
}

}  // namespace

TateResult tate(const WeierstrassModel& model, const Integer& p) {
  if (!isProbablePrime(p)) throw InvalidArgument("tate: p must be prime, got " + p.get_str());
  invariants(model);
  return TateRunner(model, p).run();
}

const LocalReduction* GlobalReduction::local(const Integer& p) const {
  for (const auto& l : locals)
    if (l.p == p) return &l;
  return nullptr;
}

bool GlobalReduction::isGood(std::uint64_t p) const {
  return !mpz_divisible_ui_p(conductor.get_mpz_t(), p);
}

std::vector<std::uint64_t> GlobalReduction::badPrimes() const {
  std::vector<std::uint64_t> out;
  for (const auto& l : locals)
    if (l.conductorExp > 0 && l.p.fits_ulong_p()) out.push_back(l.p.get_ui());
  return out;
}

void checkReductionInvariants(const GlobalReduction& g) {
  Integer n = 1;
  for (const auto& l : g.locals) {
    const std::string at = " at p = " + l.p.get_str() + " for " + g.minimalModel.str();
    const int f = l.conductorExp;
    if (f < 0) throw InvariantViolation("negative conductor exponent" + at);
    if ((f == 0) != (l.redType == ReductionType::good)) throw InvariantViolation("f_p = 0 iff good violated" + at);
    bool mult = l.redType == ReductionType::multSplit || l.redType == ReductionType::multNonsplit;
    if ((f == 1) != mult) throw InvariantViolation("f_p = 1 iff multiplicative violated" + at);
    if (l.p == 2 && f > 8) throw InvariantViolation("f_2 > 8" + at);
    if (l.p == 3 && f > 5) throw InvariantViolation("f_3 > 5" + at);
    if (l.p > 3 && f > 2) throw InvariantViolation("f_p > 2" + at);
    if (l.p > 3 && l.redType == ReductionType::additive && f != 2) throw InvariantViolation("additive f_p != 2" + at);
    Integer pf;
    mpz_pow_ui(pf.get_mpz_t(), l.p.get_mpz_t(), static_cast<unsigned long>(f));
    n *= pf;
  }
  if (n != g.conductor) throw InvariantViolation("conductor is not the product of local factors");
  if (g.nAdd * g.nAdd > g.conductor) throw InvariantViolation("N_add^2 > N for " + g.minimalModel.str());
}

GlobalReduction globalReduce(const WeierstrassModel& model) {
  Invariants inv0 = invariants(model);
  Factorization fac = factorize(inv0.disc, Integer(1 << 16));
  WeierstrassModel C = model;
  GlobalReduction g;
  std::vector<LocalReduction> locals;
  for (const auto& [p, e] : fac.factors) {
    TateResult tr = tate(C, p);
    C = tr.minimalModel;
    if (tr.local.redType != ReductionType::good) locals.push_back(tr.local);
  }
  g.minimalModel = standardize(C);
  g.inv = invariants(g.minimalModel);
  g.locals = std::move(locals);
  g.conductor = 1;
  for (auto& l : g.locals) {
    Integer pf;
    mpz_pow_ui(pf.get_mpz_t(), l.p.get_mpz_t(), static_cast<unsigned long>(l.conductorExp));
    g.conductor *= pf;
    if (l.conductorExp > 1) g.semistable = false;
    if (l.p > 3) {
      if (l.redType == ReductionType::additive) g.nAdd *= l.p;
      else g.nMult *= l.p;
      if (l.redType == ReductionType::additive && l.potGood && l.phi == PhiTag::order4) g.satisfiesCondition12 = false;
    }
  }
  checkReductionInvariants(g);
  return g;
}

PhiTag phiOrder(const LocalReduction& local) {
  if (local.redType != ReductionType::additive || !local.potGood)
    throw NotAdditivePotGood("phiOrder: p = " + local.p.get_str() + " is not additive potentially good");
  return local.phi;
}

InertialTypeTag inertialType(const LocalReduction& local) {
  if (local.p < 5 || local.redType != ReductionType::additive || !local.potGood || local.phi != PhiTag::order4)
    throw PreconditionFailed("inertialType: needs p >= 5 additive potentially good with |Phi_p| = 4");
  InertialTypeTag tag;
  tag.p = local.p;
  tag.cls = mpz_fdiv_ui(local.p.get_mpz_t(), 4) == 1 ? InertialClass::principalSeries_tps114
                                                      : InertialClass::supercuspidal_tscu24;
  return tag;
}

}  // namespace serre
