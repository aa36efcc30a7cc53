#pragma once

// Spherical Whittaker vectors of unramified principal series with trivial
// central character, evaluated by Iwasawa reduction and the closed torus
// formula: W0(n t k) = psi_{c1,c2}(n) * delta_B^{1/2}(t) * (Weyl character
// of the dual Satake class at the coweight of t), zero off the dominant
// cone, W0(1) = 1.

#include <gmpxx.h>

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "cyclotomic.hpp"
#include "group.hpp"
#include "iwasawa.hpp"

namespace paratwist {

inline mpq_class mpq_pow(const mpq_class& b, long e) {
  if (e == 0) return mpq_class(1);
  mpq_class base = e > 0 ? b : mpq_class(1) / b;
  long n = e > 0 ? e : -e;
  mpq_class r(1);
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

inline mpq_class q_pow(int p, long e) { return mpq_pow(mpq_class(p), e); }

struct SatakeGL2 {
  mpq_class a1, a2;  // a1 a2 = 1 (trivial central character)
  void validate() const {
    if (a1 * a2 != 1) throw std::invalid_argument("GL2 Satake: a1 a2 = 1 required");
    if (a1 == a2) throw std::invalid_argument("GL2 Satake: irregular (a1 = a2)");
    if (a1 == 0) throw std::invalid_argument("GL2 Satake: nonzero");
  }
};

struct SatakeGSp4 {
  // chi1(pi), chi2(pi), sigma(pi) of the type I datum chi1 x chi2 x| sigma
  mpq_class u, v, w;
  void validate() const {
    if (u == 0 || v == 0 || w == 0) throw std::invalid_argument("GSp4 Satake: nonzero");
    if (u * v * w * w != 1)
      throw std::invalid_argument("GSp4 Satake: chi1 chi2 sigma^2 = 1 required");
    // regularity: no positive dual root evaluates to 1
    if (u == v || v == 1 || u == 1 || u * v == 1)
      throw std::invalid_argument("GSp4 Satake: irregular datum");
  }
};

struct WhittakerDatum {
  int size = 4;
  int p = 3;
  const CycContext* ctx = nullptr;
  SatakeGL2 gl2;
  SatakeGSp4 gsp4;
  long c1 = 1, c2 = 1;  // psi_{c1,c2}; units

  static WhittakerDatum make_gl2(int p, int M, const mpq_class& a1, const mpq_class& a2) {
    WhittakerDatum d;
    d.size = 2;
    d.p = p;
    d.ctx = CycContext::get(p, M);
    d.gl2 = SatakeGL2{a1, a2};
    d.gl2.validate();
    return d;
  }

  static WhittakerDatum make_gsp4(int p, int M, const mpq_class& u, const mpq_class& v,
                                  const mpq_class& w, long c1, long c2) {
    WhittakerDatum d;
    d.size = 4;
    d.p = p;
    d.ctx = CycContext::get(p, M);
    d.gsp4 = SatakeGSp4{u, v, w};
    d.gsp4.validate();
    if (c1 % p == 0 || c2 % p == 0) throw std::invalid_argument("c1, c2 must be units");
    d.c1 = c1;
    d.c2 = c2;
    return d;
  }
};

// x + y sqrt(p); the torus values of W0 have no zeta part.
struct CSPair {
  mpq_class x, y;
  bool zero() const { return x == 0 && y == 0; }
};

// Character value of the unramified inducing character at the coweight
// (e1, e2; c) resp. (e1, e2): a monomial in the Satake values.
inline mpq_class satake_monomial(const WhittakerDatum& d, long e1, long e2, long c) {
  if (d.size == 2) return mpq_pow(d.gl2.a1, e1) * mpq_pow(d.gl2.a2, e2);
  return mpq_pow(d.gsp4.u, e1) * mpq_pow(d.gsp4.v, e2) * mpq_pow(d.gsp4.w, c);
}

// Weyl character of Sp(4,C)-type highest weight read off the dominant
// coweight (e1, e2; c); alternating sum over the 8-element Weyl group in
// doubled coordinates: x1 = 2 e1 + 3, x2 = 2 e2 + 1, reflections
// (x1,x2) -> (x2,x1) and (x1,x2) -> (x1, 2c - x2).
inline mpq_class weyl_character_gsp4(const SatakeGSp4& s, long e1, long e2, long c) {
  struct Node {
    long x1, x2;
    int sign;
  };
  auto orbit_sum = [&](long x1, long x2, long cc) {
    std::vector<Node> todo{{x1, x2, 1}};
    std::set<std::pair<long, long>> seen{{x1, x2}};
    mpq_class acc(0);
    while (!todo.empty()) {
      Node nd = todo.back();
      todo.pop_back();
      // exponent of the monomial: (x - rho-double)/2 per coordinate
      acc += mpq_class(nd.sign) * mpq_pow(s.u, (nd.x1 - 3) / 2) * mpq_pow(s.v, (nd.x2 - 1) / 2);
      Node a{nd.x2, nd.x1, -nd.sign};
      Node b{nd.x1, cc - nd.x2, -nd.sign};
      for (auto& nx : {a, b})
        if (seen.emplace(nx.x1, nx.x2).second) todo.push_back(nx);
    }
    return acc;
  };
  mpq_class num = orbit_sum(2 * e1 + 3, 2 * e2 + 1, 2 * c);
  mpq_class den = orbit_sum(3, 1, 0);
  if (den == 0) throw std::logic_error("Weyl denominator zero: irregular Satake datum");
  return mpq_pow(s.w, c) * num / den;
}

inline mpq_class weyl_character_gl2(const SatakeGL2& s, long e1, long e2) {
  // (a1^{e1+1} a2^{e2} - a2^{e1+1} a1^{e2}) / (a1 - a2)
  mpq_class num = mpq_pow(s.a1, e1 + 1) * mpq_pow(s.a2, e2) -
                  mpq_pow(s.a2, e1 + 1) * mpq_pow(s.a1, e2);
  return num / (s.a1 - s.a2);
}

// W0 on the pure-uniformizer torus point with valuation vector e:
// delta_B^{1/2} * Weyl character; zero off the dominant cone.
class SphericalEvaluator {
 public:
  explicit SphericalEvaluator(WhittakerDatum d) : d_(std::move(d)) {}

  const WhittakerDatum& datum() const { return d_; }

  const CSPair& torus_value(const std::array<int, 4>& e) const {
    std::int64_t key;
    if (d_.size == 2)
      key = (std::int64_t(e[0]) << 20) ^ std::int64_t(e[1] + (1 << 19));
    else
      key = ((std::int64_t(e[0]) + (1 << 15)) << 36) ^ ((std::int64_t(e[1]) + (1 << 15)) << 18) ^
            (std::int64_t(e[2]) + (1 << 15));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    CSPair val = compute(e);
    return memo_.emplace(key, std::move(val)).first->second;
  }

  // psi(c * num/den) as an exponent of zeta_{p^M}: 0 for integral
  // arguments, throws psi_depth_error when the denominator exceeds M.
  template <class Int>
  long psi_exponent(const Int& num, const Int& den, long cmult) const {
    using ops = int_ops<Int>;
    if (ops::is_zero(num) || cmult == 0) return 0;
    Int cn = ops::mul(num, ops::from_long(cmult));
    Int dd = den;
    int vn = strip_p<Int>(cn, d_.p), vd = strip_p<Int>(dd, d_.p);
    int m = vd - vn;
    if (m <= 0) return 0;
    if (m > d_.ctx->M) throw psi_depth_error(m, d_.ctx->M);
    long mod = ipow(d_.p, m);
    long u = mul_mod(reduce_unit<Int>(cn, mod), inv_mod(reduce_unit<Int>(dd, mod), mod), mod);
    return u * ipow(d_.p, d_.ctx->M - m);
  }

  // Full evaluation of W0 at a matrix (consumed): Iwasawa reduction, psi
  // of the two simple-root coordinates, torus lookup.
  template <class Int>
  bool eval(ColMat<Int> m, long& zeta_exp, CSPair const*& cs) const {
    Triangular<Int> t = reduce_triangular<Int>(m, d_.p, nullptr);
    std::array<int, 4> e = t.e;
    if (!dominant(e)) return false;
    const CSPair& val = torus_value(e);
    if (val.zero()) return false;
    long k = psi_exponent<Int>(t.n01_num, t.n01_den, d_.c1);
    if (d_.size == 4) {
      long k2 = psi_exponent<Int>(t.n12_num, t.n12_den, d_.c2);
      k = mod_positive(k + k2, d_.ctx->order);
    }
    zeta_exp = k;
    cs = &val;
    return true;
  }

  bool dominant(const std::array<int, 4>& e) const {
    if (d_.size == 2) return e[0] >= e[1];
    long c = long(e[0]) + e[3];
    return e[0] >= e[1] && 2 * long(e[1]) >= c;
  }

  Cyc torus_value_cyc(const std::array<int, 4>& e) const {
    if (!dominant(e)) return Cyc::zero();
    const CSPair& v = torus_value(e);
    return Cyc::from_parts(d_.ctx, {{0, v.x}}, {{0, v.y}});
  }

 private:
  // Divides x by p^v in place, returns v.
  template <class Int>
  static int strip_p(Int& x, int p) {
    using ops = int_ops<Int>;
    Int pp = ops::from_long(p);
    int v = 0;
    for (;;) {
      Int r = x % pp;
      if (!ops::is_zero(r)) break;
      x = ops::divexact(x, pp);
      ++v;
    }
    return v;
  }

  template <class Int>
  static long reduce_unit(const Int& x, long mod) {
    using ops = int_ops<Int>;
    Int m = ops::from_long(mod);
    Int r = x % m;
    long v = long_from<Int>(r);
    return mod_positive(v, mod);
  }

  template <class Int>
  static long long_from(const Int& v);

  CSPair compute(const std::array<int, 4>& e) const {
    CSPair out;
    if (d_.size == 2) {
      long m = e[0] - e[1];
      if (m < 0) return out;
      mpq_class ch = weyl_character_gl2(d_.gl2, e[0], e[1]);
      put_half_power(out, ch, -m);
      return out;
    }
    long c = long(e[0]) + e[3];
    if (!(e[0] >= e[1] && 2 * long(e[1]) >= c)) return out;
    mpq_class ch = weyl_character_gsp4(d_.gsp4, e[0], e[1], c);
    // delta_B^{1/2}(t) = |t1|^2 |t2| |lambda|^{-3/2} = sqrt(p)^{-(4e1+2e2-3c)}
    put_half_power(out, ch, -(4 * long(e[0]) + 2 * long(e[1]) - 3 * c));
    return out;
  }

  void put_half_power(CSPair& out, const mpq_class& ch, long sqrt_pow) const {
    // ch * sqrt(p)^sqrt_pow as x + y sqrt(p)
    bool odd = mod_positive(sqrt_pow, 2) == 1;
    long rp = odd ? (sqrt_pow - 1) / 2 : sqrt_pow / 2;
    mpq_class scale = mpq_pow(mpq_class(d_.p), rp);
    if (odd)
      out.y = ch * scale;
    else
      out.x = ch * scale;
  }

  WhittakerDatum d_;
  mutable std::unordered_map<std::int64_t, CSPair> memo_;
};

template <>
inline long SphericalEvaluator::long_from<i128>(const i128& v) {
  return long(v);
}
template <>
inline long SphericalEvaluator::long_from<mpz_class>(const mpz_class& v) {
  return v.get_si();
}

}  // namespace paratwist
