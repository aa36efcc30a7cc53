#pragma once

// Finite formal combinations sum_i c_i pi(g_i) W0 of right-translates of
// the spherical Whittaker vector.  Evaluation is lazy:
//   (pi(h) W)(x) = W(x h),  so  v(g) = sum_i c_i W0(g g_i),
// and translation maps g_i -> h g_i.  Matrices are cached in the checked
// 128-bit lane with transparent fallback to GMP.

#include <memory>
#include <unordered_map>
#include <vector>

#include "whittaker.hpp"

namespace paratwist {

inline std::uint64_t& eval_work_counter() {
  static std::uint64_t c = 0;
  return c;
}

class SmoothVector {
 public:
  struct Term {
    Cyc coeff;
    GroupElement g;
  };

  explicit SmoothVector(std::shared_ptr<SphericalEvaluator> ev) : ev_(std::move(ev)) {}

  static SmoothVector spherical(std::shared_ptr<SphericalEvaluator> ev) {
    SmoothVector v(std::move(ev));
    int p = v.ev_->datum().p;
    v.add_term(Cyc::one(), group_identity(p, v.ev_->datum().size));
    return v;
  }

  static SmoothVector zero(std::shared_ptr<SphericalEvaluator> ev) {
    return SmoothVector(std::move(ev));
  }

  void add_term(Cyc coeff, GroupElement g) {
    if (coeff.is_zero()) return;
    terms_.push_back(Term{std::move(coeff), std::move(g)});
    cache_.clear();
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero_vector() const { return terms_.empty(); }
  std::shared_ptr<SphericalEvaluator> evaluator() const { return ev_; }
  const WhittakerDatum& datum() const { return ev_->datum(); }

  SmoothVector translated(const GroupElement& h) const {
    SmoothVector r(ev_);
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back(Term{t.coeff, h * t.g});
    return r;
  }

  SmoothVector scaled(const Cyc& c) const {
    SmoothVector r(ev_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back(Term{t.coeff * c, t.g});
    return r;
  }

  SmoothVector operator+(const SmoothVector& o) const {
    SmoothVector r(ev_);
    r.terms_ = terms_;
    r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
    return r;
  }

  SmoothVector operator-(const SmoothVector& o) const {
    return *this + o.scaled(Cyc(mpq_class(-1)));
  }

  // Sums coefficients of terms whose translate matrices are exactly equal;
  // sound for any evaluation since pi(g) = pi(g).
  SmoothVector merged_exact() const {
    SmoothVector r(ev_);
    std::unordered_map<std::string, std::size_t> index;
    for (auto& t : terms_) {
      std::string key = t.g.mat().key();
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(std::move(key), r.terms_.size());
        r.terms_.push_back(t);
      } else {
        r.terms_[it->second].coeff = r.terms_[it->second].coeff + t.coeff;
      }
    }
    std::vector<Term> kept;
    kept.reserve(r.terms_.size());
    for (auto& t : r.terms_)
      if (!t.coeff.is_zero()) kept.push_back(std::move(t));
    r.terms_ = std::move(kept);
    return r;
  }

  // Optional sampled canonicalization: merges terms only when their
  // evaluations agree at every probe point.  Off by default everywhere.
  SmoothVector canonicalized_by_sampling(const std::vector<GroupElement>& probes) const {
    SmoothVector r(ev_);
    std::vector<bool> used(terms_.size(), false);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (used[i]) continue;
      Term acc = terms_[i];
      for (std::size_t j = i + 1; j < terms_.size(); ++j) {
        if (used[j]) continue;
        bool same = true;
        for (auto& x : probes) {
          SmoothVector a(ev_), b(ev_);
          a.add_term(Cyc::one(), terms_[i].g);
          b.add_term(Cyc::one(), terms_[j].g);
          if (a.eval(x) != b.eval(x)) {
            same = false;
            break;
          }
        }
        if (same) {
          acc.coeff = acc.coeff + terms_[j].coeff;
          used[j] = true;
        }
      }
      if (!acc.coeff.is_zero()) r.terms_.push_back(std::move(acc));
    }
    return r;
  }

  Cyc eval(const GroupElement& g) const {
    build_cache();
    const FracMat<mpz_class>& gz = g.mat();
    bool have128 = true;
    FracMat<i128> gi;
    try {
      gi = to_i128(gz);
    } catch (const overflow_error&) {
      have128 = false;
    }

    const CycContext* ctx = ev_->datum().ctx;
    std::map<long, mpq_class> acc_x, acc_y;
    Cyc odd_acc = Cyc::zero();  // terms with non-rational coefficients

    for (std::size_t i = 0; i < terms_.size(); ++i) {
      ++eval_work_counter();
      const FastTerm& ft = cache_[i];
      long k = 0;
      const CSPair* cs = nullptr;
      bool nonzero = false, done = false;
      if (have128 && ft.has128) {
        try {
          FracMat<i128> prod = gi * ft.m128;
          nonzero = ev_->eval<i128>(ColMat<i128>::from(prod), k, cs);
          done = true;
        } catch (const overflow_error&) {
          done = false;
        }
      }
      if (!done) {
        FracMat<mpz_class> prod = gz * terms_[i].g.mat();
        nonzero = ev_->eval<mpz_class>(ColMat<mpz_class>::from(prod), k, cs);
      }
      if (!nonzero) continue;
      if (ft.rat_coeff) {
        if (cs->x != 0) acc_x[k] += ft.c_rat * cs->x;
        if (cs->y != 0) acc_y[k] += ft.c_rat * cs->y;
      } else {
        Cyc val = Cyc::zeta_power(ctx, k) *
                  Cyc::from_parts(ctx, {{0, cs->x}}, {{0, cs->y}});
        odd_acc = odd_acc + terms_[i].coeff * val;
      }
    }
    return Cyc::from_parts(ctx, acc_x, acc_y) + odd_acc;
  }

 private:
  struct FastTerm {
    bool has128 = false;
    FracMat<i128> m128;
    bool rat_coeff = false;
    mpq_class c_rat;
  };

  void build_cache() const {
    if (cache_.size() == terms_.size()) return;
    cache_.clear();
    cache_.reserve(terms_.size());
    for (auto& t : terms_) {
      FastTerm ft;
      try {
        ft.m128 = to_i128(t.g.mat());
        ft.has128 = true;
      } catch (const overflow_error&) {
        ft.has128 = false;
      }
      if (t.coeff.is_rational()) {
        ft.rat_coeff = true;
        ft.c_rat = t.coeff.rational_value();
      }
      cache_.push_back(std::move(ft));
    }
  }

  std::shared_ptr<SphericalEvaluator> ev_;
  std::vector<Term> terms_;
  mutable std::vector<FastTerm> cache_;
};

}  // namespace paratwist
