#pragma once

// Laurent polynomials in the formal variable X = q^{-s} with Cyc
// coefficients.  The zeta integrals of interest have finitely supported
// X-expansions over a stabilized valuation window, so no rational-function
// algebra is needed.

#include <map>
#include <sstream>

#include "cyclotomic.hpp"

namespace paratwist {

class ZetaSeries {
 public:
  ZetaSeries() = default;

  static ZetaSeries constant(const Cyc& c) {
    ZetaSeries s;
    s.set(0, c);
    return s;
  }

  void set(int e, const Cyc& c) {
    if (c.is_zero())
      c_.erase(e);
    else
      c_[e] = c;
  }

  void add(int e, const Cyc& c) {
    auto it = c_.find(e);
    Cyc v = (it == c_.end()) ? c : it->second + c;
    set(e, v);
  }

  Cyc coefficient(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? Cyc::zero() : it->second;
  }

  bool is_zero() const { return c_.empty(); }

  // True iff the series is the single coefficient c at X^0.
  bool is_constant_equal(const Cyc& c) const {
    if (c.is_zero()) return c_.empty();
    return c_.size() == 1 && c_.begin()->first == 0 && c_.begin()->second == c;
  }

  ZetaSeries operator+(const ZetaSeries& o) const {
    ZetaSeries r = *this;
    for (auto& [e, c] : o.c_) r.add(e, c);
    return r;
  }

  ZetaSeries operator*(const ZetaSeries& o) const {
    ZetaSeries r;
    for (auto& [e1, c1] : c_)
      for (auto& [e2, c2] : o.c_) r.add(e1 + e2, c1 * c2);
    return r;
  }

  ZetaSeries scaled(const Cyc& s) const {
    ZetaSeries r;
    for (auto& [e, c] : c_) r.add(e, c * s);
    return r;
  }

  bool operator==(const ZetaSeries& o) const { return c_ == o.c_; }
  bool operator!=(const ZetaSeries& o) const { return !(*this == o); }

  const std::map<int, Cyc>& coefficients() const { return c_; }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : c_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      if (e != 0) os << "*X^" << e;
    }
    return os.str();
  }

 private:
  std::map<int, Cyc> c_;
};

}  // namespace paratwist
