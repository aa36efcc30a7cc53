#pragma once

// Quadratic characters of F^x, Haar quadrature over compact sets, Gauss
// sums G(chi, k) = int_{O^x} chi(u) psi(u pi^k) du, and the
// change-of-variable bijection u -> u(1 + b u^{-1} pi^t) on O^x/(1+p^n).

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "padic.hpp"
#include "zeta_series.hpp"

namespace paratwist {

class QuadChar {
 public:
  QuadChar(int p, int conductor, int sign_at_uniformizer)
      : p_(p), c_(conductor), sign_pi_(sign_at_uniformizer) {
    if (p % 2 == 0) throw std::invalid_argument("p = 2 deferred");
    if (sign_pi_ != 1 && sign_pi_ != -1) throw std::invalid_argument("sign");
    if (c_ != 0 && c_ != 1)
      throw std::invalid_argument("odd p: quadratic conductor is 0 or 1");
    if (c_ == 1) {
      for (long u = 1; u < p; ++u)
        unit_values_[u] = pow_mod(u, (p - 1) / 2, p) == 1 ? 1 : -1;
    }
  }

  int prime() const { return p_; }
  int conductor() const { return c_; }
  int sign_at_uniformizer() const { return sign_pi_; }
  bool is_ramified() const { return c_ > 0; }
  const std::map<long, int>& unit_values() const { return unit_values_; }

  int value_on_unit(long u) const {
    if (c_ == 0) return 1;
    return unit_values_.at(mod_positive(u, ipow(p_, c_)));
  }

  // chi(x) = chi(pi)^{v(x)} * chi(unit part), x != 0.
  int operator()(const Padic& x) const {
    if (x.is_zero()) throw std::domain_error("chi(0)");
    int v = x.valuation();
    int s = (sign_pi_ == -1 && (mod_positive(v, 2) == 1)) ? -1 : 1;
    if (c_ == 0) return s;
    return s * value_on_unit(x.unit_part().reduce(c_).value());
  }

  std::string str() const {
    if (c_ == 0) return sign_pi_ == 1 ? "trivial" : "unramified";
    return std::string("ramified(pi->") + (sign_pi_ == 1 ? "+1" : "-1") + ")";
  }

 private:
  int p_, c_, sign_pi_;
  std::map<long, int> unit_values_;
};

// The four quadratic characters of F^x for odd p: F^x/(F^x)^2 has order 4.
inline std::vector<QuadChar> enumerate_quadratic_characters(int p) {
  if (p % 2 == 0) throw std::invalid_argument("p = 2 deferred");
  return {QuadChar(p, 0, 1), QuadChar(p, 0, -1), QuadChar(p, 1, 1), QuadChar(p, 1, -1)};
}

// Finite Haar quadrature: a list of representatives, each of weight
// q^{-level}.  d^x u on a unit shell and du on an ideal share this shape.
struct Quadrature {
  std::string tag;
  int p = 3;
  int level = 0;  // per-point weight q^{-level}
  std::vector<Padic> points;

  mpq_class weight() const {
    mpz_class pl;
    mpz_ui_pow_ui(pl.get_mpz_t(), p, unsigned(level));
    return mpq_class(1) / mpq_class(pl);
  }
  mpq_class total_mass() const { return weight() * mpq_class(long(points.size())); }

  // Unit shell u pi^m, u over units mod p^L; mass (1 - q^{-1}) q^{-m}.
  static Quadrature unit_shell(int p, int L, int m = 0) {
    Quadrature q;
    q.tag = "units mod p^" + std::to_string(L) + (m ? " * pi^" + std::to_string(m) : "");
    q.p = p;
    q.level = L;
    Padic shell = Padic::uniformizer_pow(p, m);
    for (auto& u : unit_representatives(p, L))
      q.points.push_back(Padic(p, u.value()) * shell);
    return q;
  }

  // Additive p^a / p^b, b >= a: representatives v pi^a, v in O/p^{b-a};
  // mass q^{-a}.
  static Quadrature ideal(int p, int a, int b) {
    if (b < a) throw std::invalid_argument("ideal quadrature: b >= a");
    Quadrature q;
    q.tag = "p^" + std::to_string(a) + " / p^" + std::to_string(b);
    q.p = p;
    q.level = b;
    Padic shell = Padic::uniformizer_pow(p, a);
    long count = ipow(p, b - a);
    for (long v = 0; v < count; ++v) q.points.push_back(Padic(p, v) * shell);
    return q;
  }
};

inline Cyc gauss_sum_at_level(const CycContext* ctx, const QuadChar& chi, int k, int L) {
  int p = chi.prime();
  Padic pik = Padic::uniformizer_pow(p, k);
  Cyc acc = Cyc::zero();
  for (auto& u : unit_representatives(p, L)) {
    Padic x(p, u.value());
    Cyc term = psi(ctx, x * pik) * mpq_class(chi(x));
    acc = acc + term;
  }
  mpz_class pl;
  mpz_ui_pow_ui(pl.get_mpz_t(), p, unsigned(L));
  return acc * (mpq_class(1) / mpq_class(pl));
}

// G(chi, k); the integrand is constant on units mod p^L for
// L = max(c(chi), -k, 1).
inline Cyc gauss_sum(const CycContext* ctx, const QuadChar& chi, int k) {
  int L = std::max({chi.conductor(), -k, 1});
  return gauss_sum_at_level(ctx, chi, k, L);
}

struct ChangeLemmaReport {
  bool bijection = false;
  bool sums_equal = false;
  long classes = 0;
  bool pass() const { return bijection && sums_equal; }
};

// u -> u(1 + b u^{-1} pi^t) = u + b pi^t is a bijection of O^x/(1+p^n),
// hence Haar sums of any class function agree.
inline ChangeLemmaReport verify_change_lemma(int p, const Padic& b, int t, int n,
                                             std::mt19937_64& rng) {
  if (t < 1 || n < 1) throw std::invalid_argument("change lemma: t, n >= 1");
  if (!b.is_integral()) throw std::invalid_argument("change lemma: b in O");
  ChangeLemmaReport rep;
  long mod = ipow(p, n);
  long shift = mod_positive((b * Padic::uniformizer_pow(p, t)).reduce(n).value(), mod);
  auto units = unit_representatives(p, n);
  rep.classes = long(units.size());

  std::map<long, long> f;  // random test function on unit classes
  std::uniform_int_distribution<long> dist(-50, 50);
  for (auto& u : units) f[u.value()] = dist(rng);

  std::vector<bool> hit(std::size_t(mod), false);
  bool bij = true;
  long sum_f = 0, sum_f_sigma = 0;
  for (auto& u : units) {
    long image = mod_positive(u.value() + shift, mod);
    if (image % p == 0 || hit[std::size_t(image)]) bij = false;
    if (image % p != 0) {
      hit[std::size_t(image)] = true;
      sum_f_sigma += f.at(image);
    }
    sum_f += f.at(u.value());
  }
  rep.bijection = bij;
  rep.sums_equal = bij && (sum_f == sum_f_sigma);
  return rep;
}

}  // namespace paratwist
