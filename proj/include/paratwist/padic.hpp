#pragma once

// Exact model of the local field F: rational numbers carrying the p-adic
// valuation, |pi| = q^{-1} with q = p.  The ring of integers is the set of
// scalars with v >= 0; units of O may have prime-to-p denominators (e.g.
// 1/5 at p = 3), which is why the full rational is kept rather than just
// numerator / p^k.

#include <gmpxx.h>

#include <limits>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"

namespace paratwist {

constexpr int kValInfinity = std::numeric_limits<int>::max();

class Residue;

class Padic {
 public:
  Padic() : p_(3), v_(1, 0) {}
  Padic(int p, long n) : p_(check(p)), v_(n) {}
  Padic(int p, const mpq_class& v) : p_(check(p)), v_(v) { v_.canonicalize(); }
  Padic(int p, long num, long den) : p_(check(p)), v_(num, den) { v_.canonicalize(); }

  static Padic uniformizer_pow(int p, int e) {
    mpq_class x;
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, unsigned(e >= 0 ? e : -e));
    if (e >= 0)
      x = pe;
    else
      x = mpq_class(1) / mpq_class(pe);
    return Padic(p, x);
  }

  int prime() const { return p_; }
  const mpq_class& value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  // v_p; +infinity sentinel for 0.
  int valuation() const {
    if (v_ == 0) return kValInfinity;
    int v = 0;
    if (mpz_divisible_ui_p(v_.get_num().get_mpz_t(), p_))
      v = vp_mpz(v_.get_num(), p_);
    else if (mpz_divisible_ui_p(v_.get_den().get_mpz_t(), p_))
      v = -vp_mpz(v_.get_den(), p_);
    return v;
  }

  bool is_integral() const { return is_zero() || valuation() >= 0; }
  bool is_unit() const { return !is_zero() && valuation() == 0; }

  // x = unit * pi^v; returns the unit.
  Padic unit_part() const {
    if (is_zero()) throw std::domain_error("unit_part(0)");
    return Padic(p_, v_ / uniformizer_pow(p_, valuation()).v_);
  }

  Padic operator+(const Padic& o) const { return Padic(p_, v_ + same(o).v_); }
  Padic operator-(const Padic& o) const { return Padic(p_, v_ - same(o).v_); }
  Padic operator*(const Padic& o) const { return Padic(p_, v_ * same(o).v_); }
  Padic operator/(const Padic& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero");
    return Padic(p_, v_ / same(o).v_);
  }
  Padic operator-() const { return Padic(p_, mpq_class(-v_)); }
  bool operator==(const Padic& o) const { return p_ == o.p_ && v_ == o.v_; }
  bool operator!=(const Padic& o) const { return !(*this == o); }

  Residue reduce(int m) const;

  std::string str() const { return v_.get_str(); }

 private:
  static int check(int p) {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
    return p;
  }
  const Padic& same(const Padic& o) const {
    if (p_ != o.p_) throw std::invalid_argument("mixed primes");
    return o;
  }

  int p_;
  mpq_class v_;
};

// Element of O/p^m, value in [0, p^m).  Moduli stay within long range at
// desk scale (p <= 5, m <= a dozen).
class Residue {
 public:
  Residue(int p, int m, long value)
      : p_(p), m_(m), mod_(ipow(p, m)), v_(mod_positive(value, mod_)) {}

  int prime() const { return p_; }
  int modulus_exponent() const { return m_; }
  long modulus() const { return mod_; }
  long value() const { return v_; }
  bool is_unit() const { return v_ % p_ != 0; }

  Residue operator+(const Residue& o) const { return Residue(p_, m_, v_ + o.match(*this).v_); }
  Residue operator-(const Residue& o) const { return Residue(p_, m_, v_ - o.match(*this).v_); }
  Residue operator*(const Residue& o) const {
    return Residue(p_, m_, mul_mod(v_, o.match(*this).v_, mod_));
  }
  Residue inverse() const { return Residue(p_, m_, inv_mod(v_, mod_)); }
  bool operator==(const Residue& o) const {
    return p_ == o.p_ && m_ == o.m_ && v_ == o.v_;
  }
  bool operator!=(const Residue& o) const { return !(*this == o); }

 private:
  const Residue& match(const Residue& o) const {
    if (p_ != o.p_ || m_ != o.m_) throw std::invalid_argument("mixed moduli");
    return *this;
  }
  int p_, m_;
  long mod_, v_;
};

inline Residue Padic::reduce(int m) const {
  if (m < 1) throw std::invalid_argument("reduce: m >= 1");
  if (!is_integral()) throw std::domain_error("reduce: negative valuation");
  long mod = ipow(p_, m);
  // num/den with gcd(den, p) = 1 once v >= 0; invert den mod p^m.
  mpz_class num = v_.get_num(), den = v_.get_den();
  long n = mpz_fdiv_ui(num.get_mpz_t(), (unsigned long)mod);
  long d = mpz_fdiv_ui(den.get_mpz_t(), (unsigned long)mod);
  return Residue(p_, m, mul_mod(n, inv_mod(d, mod), mod));
}

// The units of O/p^m, exactly q^m - q^{m-1} of them.
inline std::vector<Residue> unit_representatives(int p, int m) {
  if (m < 1) throw std::invalid_argument("unit_representatives: m >= 1");
  long mod = ipow(p, m);
  std::vector<Residue> out;
  out.reserve(std::size_t(mod - mod / p));
  for (long u = 1; u < mod; ++u)
    if (u % p != 0) out.emplace_back(p, m, u);
  return out;
}

// All of O/p^m.
inline std::vector<Residue> residue_representatives(int p, int m) {
  long mod = ipow(p, m);
  std::vector<Residue> out;
  out.reserve(std::size_t(mod));
  for (long u = 0; u < mod; ++u) out.emplace_back(p, m, u);
  return out;
}

}  // namespace paratwist
