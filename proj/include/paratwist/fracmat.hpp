#pragma once

// Exact n x n matrices over Q (n = 2 or 4) stored as an integer matrix
// with one positive common denominator.  Templated over the integer type:
// mpz_class is the safe lane, __int128 the fast lane (checked ops, callers
// fall back to mpz on overflow).

#include <array>
#include <stdexcept>
#include <string>

#include "numeric.hpp"
#include "padic.hpp"

namespace paratwist {

template <class Int>
struct FracMat {
  int n = 0;
  std::array<Int, 16> a{};  // row-major, n*n entries used
  Int den = Int(1);

  static FracMat identity(int n) {
    FracMat m;
    m.n = n;
    for (int i = 0; i < n; ++i) m.at(i, i) = Int(1);
    return m;
  }

  Int& at(int i, int j) { return a[std::size_t(i * n + j)]; }
  const Int& at(int i, int j) const { return a[std::size_t(i * n + j)]; }

  bool is_zero_entry(int i, int j) const { return int_ops<Int>::is_zero(at(i, j)); }

  FracMat operator*(const FracMat& o) const {
    if (n != o.n) throw std::invalid_argument("size mismatch");
    using ops = int_ops<Int>;
    FracMat r;
    r.n = n;
    r.den = ops::mul(den, o.den);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Int s = Int(0);
        for (int k = 0; k < n; ++k)
          s = ops::add(s, ops::mul(at(i, k), o.at(k, j)));
        r.at(i, j) = s;
      }
    r.reduce_content();
    return r;
  }

  FracMat transposed() const {
    FracMat r = *this;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.at(i, j) = at(j, i);
    return r;
  }

  FracMat negated() const {
    FracMat r = *this;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.at(i, j) = int_ops<Int>::neg(r.at(i, j));
    return r;
  }

  void scale_den(const Int& s) {
    using ops = int_ops<Int>;
    if (ops::is_zero(s)) throw std::invalid_argument("scale by zero");
    den = ops::mul(den, s);
    reduce_content();
  }

  // Divide out the gcd of all entries and the denominator; den > 0.
  void reduce_content() {
    using ops = int_ops<Int>;
    Int g = den;
    for (int i = 0; i < n * n; ++i) {
      if (ops::equal(g, Int(1))) break;
      g = ops::gcd(g, a[std::size_t(i)]);
    }
    if (!ops::is_zero(g) && !ops::equal(g, Int(1))) {
      den = ops::divexact(den, g);
      for (int i = 0; i < n * n; ++i)
        a[std::size_t(i)] = ops::divexact(a[std::size_t(i)], g);
    }
    if (ops::is_neg(den)) {
      den = ops::neg(den);
      for (int i = 0; i < n * n; ++i) a[std::size_t(i)] = ops::neg(a[std::size_t(i)]);
    }
  }

  bool operator==(const FracMat& o) const {
    using ops = int_ops<Int>;
    if (n != o.n) return false;
    // cross-multiplied compare; inputs are kept content-reduced, but do
    // not rely on it
    for (int i = 0; i < n * n; ++i)
      if (!ops::equal(ops::mul(a[std::size_t(i)], o.den), ops::mul(o.a[std::size_t(i)], den)))
        return false;
    return true;
  }
  bool operator!=(const FracMat& o) const { return !(*this == o); }

  std::string key() const {
    using ops = int_ops<Int>;
    FracMat c = *this;
    c.reduce_content();
    std::string k = std::to_string(n) + "|" + ops::str(c.den);
    for (int i = 0; i < n * n; ++i) k += "," + ops::str(c.a[std::size_t(i)]);
    return k;
  }

  std::string str() const {
    using ops = int_ops<Int>;
    std::string s = "[";
    for (int i = 0; i < n; ++i) {
      s += i ? "; " : "";
      for (int j = 0; j < n; ++j) s += (j ? ", " : "") + ops::str(at(i, j));
    }
    s += "] / " + ops::str(den);
    return s;
  }
};

template <class Int>
inline FracMat<mpz_class> to_mpz(const FracMat<Int>& m);

template <>
inline FracMat<mpz_class> to_mpz(const FracMat<mpz_class>& m) {
  return m;
}

inline mpz_class mpz_from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  mpz_class hi((unsigned long)(u >> 64)), lo((unsigned long)(u & ~0ULL));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

inline i128 i128_from_mpz(const mpz_class& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 126) throw overflow_error();
  mpz_class av = abs(v);
  mpz_class hi = av >> 64;
  unsigned __int128 u =
      ((unsigned __int128)hi.get_ui() << 64) | mpz_class(av & mpz_class((unsigned long)~0ULL)).get_ui();
  i128 r = (i128)u;
  return v < 0 ? -r : r;
}

template <>
inline FracMat<mpz_class> to_mpz(const FracMat<i128>& m) {
  FracMat<mpz_class> r;
  r.n = m.n;
  r.den = mpz_from_i128(m.den);
  for (int i = 0; i < m.n * m.n; ++i) r.a[std::size_t(i)] = mpz_from_i128(m.a[std::size_t(i)]);
  return r;
}

inline FracMat<i128> to_i128(const FracMat<mpz_class>& m) {
  FracMat<i128> r;
  r.n = m.n;
  r.den = i128_from_mpz(m.den);
  for (int i = 0; i < m.n * m.n; ++i) r.a[std::size_t(i)] = i128_from_mpz(m.a[std::size_t(i)]);
  return r;
}

// v_p(entry) relative to the denominator; kValInfinity for 0.
template <class Int>
inline int entry_valuation(const FracMat<Int>& m, int i, int j, int p) {
  if (m.is_zero_entry(i, j)) return kValInfinity;
  return vp<Int>(m.at(i, j), p) - vp<Int>(m.den, p);
}

}  // namespace paratwist
