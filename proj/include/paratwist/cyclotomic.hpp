#pragma once

// The value field Q(zeta_{p^M}, sqrt p).  Elements are a + b*sqrt(p) with
// a, b sparse polynomials in zeta = zeta_{p^M}, reduced to the power basis
// {zeta^i : 0 <= i < phi(p^M)} modulo the cyclotomic polynomial.  For
// p = 1 mod 4 the square root already lies in Q(zeta_p): sqrt(p) is the
// quadratic Gauss sum sum_t (t|p) zeta_p^t, and the b-part is folded into
// the a-part so equality stays a plain coefficient comparison.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"
#include "padic.hpp"

namespace paratwist {

struct psi_depth_error : std::runtime_error {
  explicit psi_depth_error(int need, int have)
      : std::runtime_error("psi depth " + std::to_string(need) +
                           " exceeds cyclotomic depth M = " + std::to_string(have) +
                           "; raise M in the configuration") {}
};

class CycContext {
 public:
  int p;
  int M;           // zeta has exact order p^M
  long order;      // p^M
  long phi;        // (p-1) p^{M-1}
  long step;       // p^{M-1}
  std::vector<std::pair<long, int>> sqrt_expansion;  // nonempty iff p = 1 mod 4

  static const CycContext* get(int p, int M) {
    static std::map<std::pair<int, int>, std::unique_ptr<CycContext>> cache;
    auto key = std::make_pair(p, M);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::unique_ptr<CycContext>(new CycContext(p, M))).first;
    return it->second.get();
  }

 private:
  CycContext(int p_, int M_) : p(p_), M(M_) {
    if (p < 3 || M < 1) throw std::invalid_argument("CycContext: odd p, M >= 1");
    order = ipow(p, M);
    step = ipow(p, M - 1);
    phi = order - step;
    if (p % 4 == 1) {
      // sqrt(p) = sum_{t=1}^{p-1} (t|p) zeta_p^t, the Gauss sum with
      // positive sign for p = 1 mod 4.
      for (long t = 1; t < p; ++t) {
        int leg = pow_mod(t, (p - 1) / 2, p) == 1 ? 1 : -1;
        sqrt_expansion.emplace_back(t * step, leg);
      }
    }
  }
};

class Cyc {
 public:
  Cyc() : ctx_(nullptr) {}
  explicit Cyc(const mpq_class& r) : ctx_(nullptr) {
    if (r != 0) a_[0] = r;
  }
  explicit Cyc(long r) : Cyc(mpq_class(r)) {}

  static Cyc zero() { return Cyc(); }
  static Cyc one() { return Cyc(mpq_class(1)); }

  static Cyc zeta_power(const CycContext* c, long e) {
    Cyc z;
    z.ctx_ = c;
    add_reduced(c, z.a_, e, mpq_class(1));
    z.normalize();
    return z;
  }

  // (sqrt p)^e, any integer e; even powers are rational, odd ones are
  // p^{(e-1)/2} sqrt p.
  static Cyc sqrt_p_power(const CycContext* c, long e) {
    bool odd = mod_positive(e, 2) == 1;
    long rpow = odd ? (e - 1) / 2 : e / 2;  // exact: e-1 is even when odd
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), c->p, unsigned(rpow >= 0 ? rpow : -rpow));
    mpq_class rat = rpow >= 0 ? mpq_class(pe) : mpq_class(1) / mpq_class(pe);
    Cyc z;
    z.ctx_ = c;
    if (odd)
      z.b_[0] = rat;
    else
      z.a_[0] = rat;
    z.normalize();
    return z;
  }

  const CycContext* context() const { return ctx_; }
  bool is_zero() const { return a_.empty() && b_.empty(); }
  bool is_rational() const {
    return b_.empty() && (a_.empty() || (a_.size() == 1 && a_.begin()->first == 0));
  }
  mpq_class rational_value() const {
    if (!is_rational()) throw std::domain_error("not rational");
    return a_.empty() ? mpq_class(0) : a_.begin()->second;
  }

  Cyc operator+(const Cyc& o) const {
    Cyc r = *this;
    r.ctx_ = merged_ctx(o);
    for (auto& [e, c] : o.a_) r.a_[e] += c;
    for (auto& [e, c] : o.b_) r.b_[e] += c;
    r.normalize();
    return r;
  }

  Cyc operator-(const Cyc& o) const { return *this + o.negated(); }

  Cyc negated() const {
    Cyc r = *this;
    for (auto& [e, c] : r.a_) c = -c;
    for (auto& [e, c] : r.b_) c = -c;
    return r;
  }

  Cyc operator*(const Cyc& o) const {
    const CycContext* c = merged_ctx(o);
    Cyc r;
    r.ctx_ = c;
    mpq_class prat = c ? mpq_class(c->p) : mpq_class(0);
    // (a1 + b1 s)(a2 + b2 s) = a1 a2 + p b1 b2 + (a1 b2 + b1 a2) s
    poly_addmul(c, r.a_, a_, o.a_, mpq_class(1));
    if (!b_.empty() && !o.b_.empty()) poly_addmul(c, r.a_, b_, o.b_, prat);
    poly_addmul(c, r.b_, a_, o.b_, mpq_class(1));
    poly_addmul(c, r.b_, b_, o.a_, mpq_class(1));
    r.normalize();
    return r;
  }

  Cyc operator*(const mpq_class& s) const {
    Cyc r = *this;
    if (s == 0) return Cyc();
    for (auto& [e, c] : r.a_) c *= s;
    for (auto& [e, c] : r.b_) c *= s;
    return r;
  }

  bool operator==(const Cyc& o) const { return a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const Cyc& o) const { return !(*this == o); }

  // Galois twist zeta -> zeta^{-1}, sqrt p fixed.
  Cyc conjugated() const {
    Cyc r;
    r.ctx_ = ctx_;
    for (auto& [e, c] : a_) add_reduced(ctx_, r.a_, ctx_ ? (ctx_->order - e) % ctx_->order : 0, c);
    for (auto& [e, c] : b_) add_reduced(ctx_, r.b_, ctx_ ? (ctx_->order - e) % ctx_->order : 0, c);
    r.normalize();
    return r;
  }

  Cyc conj_abs_square() const { return *this * conjugated(); }

  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    auto part = [&](const std::map<long, mpq_class>& m, bool root) {
      for (auto& [e, c] : m) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        if (e != 0) os << "*z^" << e;
        if (root) os << "*r";
      }
    };
    part(a_, false);
    part(b_, true);
    return os.str();
  }

  const std::map<long, mpq_class>& zeta_part() const { return a_; }
  const std::map<long, mpq_class>& root_part() const { return b_; }

  // Builds a + b sqrt(p) from raw coefficient maps (exponents reduced here).
  static Cyc from_parts(const CycContext* c, const std::map<long, mpq_class>& a,
                        const std::map<long, mpq_class>& b) {
    Cyc r;
    r.ctx_ = c;
    for (auto& [e, q] : a) add_reduced(c, r.a_, e, q);
    for (auto& [e, q] : b) add_reduced(c, r.b_, e, q);
    r.normalize();
    return r;
  }

 private:
  const CycContext* merged_ctx(const Cyc& o) const {
    if (!ctx_) return o.ctx_;
    if (!o.ctx_ || o.ctx_ == ctx_) return ctx_;
    throw std::invalid_argument("mixed cyclotomic contexts");
  }

  // coeff * zeta^e into m, reducing mod the cyclotomic polynomial:
  // zeta^(r + (p-1)p^{M-1}) = -sum_{j<p-1} zeta^(r + j p^{M-1}).
  static void add_reduced(const CycContext* ctx, std::map<long, mpq_class>& m, long e,
                          const mpq_class& coeff) {
    if (coeff == 0) return;
    if (!ctx) {
      if (e != 0) throw std::logic_error("zeta power without context");
      m[0] += coeff;
      return;
    }
    e = mod_positive(e, ctx->order);
    if (e < ctx->phi) {
      m[e] += coeff;
      return;
    }
    long r = e - ctx->phi;
    for (int j = 0; j + 1 < ctx->p; ++j) m[r + j * ctx->step] -= coeff;
  }

  static void poly_addmul(const CycContext* ctx, std::map<long, mpq_class>& out,
                          const std::map<long, mpq_class>& x,
                          const std::map<long, mpq_class>& y, const mpq_class& scale) {
    if (scale == 0) return;
    for (auto& [e1, c1] : x)
      for (auto& [e2, c2] : y) add_reduced(ctx, out, e1 + e2, c1 * c2 * scale);
  }

  void normalize() {
    for (auto it = a_.begin(); it != a_.end();)
      it = (it->second == 0) ? a_.erase(it) : std::next(it);
    for (auto it = b_.begin(); it != b_.end();)
      it = (it->second == 0) ? b_.erase(it) : std::next(it);
    if (ctx_ && !b_.empty() && !ctx_->sqrt_expansion.empty()) {
      // p = 1 mod 4: fold b sqrt(p) into the zeta basis.
      std::map<long, mpq_class> b;
      b.swap(b_);
      for (auto& [e, c] : b)
        for (auto& [t, leg] : ctx_->sqrt_expansion) add_reduced(ctx_, a_, e + t, c * leg);
      for (auto it = a_.begin(); it != a_.end();)
        it = (it->second == 0) ? a_.erase(it) : std::next(it);
    }
  }

  const CycContext* ctx_;
  std::map<long, mpq_class> a_, b_;
};

// psi(x) for the additive character with psi(O) = 1, psi(p^-1) != 1:
// x = u pi^{-m} mod O gives zeta_{p^m}^u.
inline Cyc psi(const CycContext* ctx, const Padic& x) {
  if (x.is_zero() || x.valuation() >= 0) return Cyc::one();
  int m = -x.valuation();
  if (m > ctx->M) throw psi_depth_error(m, ctx->M);
  Padic shifted = x * Padic::uniformizer_pow(x.prime(), m);
  long u = shifted.reduce(m).value();
  return Cyc::zeta_power(ctx, u * ipow(ctx->p, ctx->M - m));
}

}  // namespace paratwist
