#pragma once

// Small integer kernel shared by the exact-arithmetic types: p-adic
// valuations, p-power tables, modular inverses, and a checked 128-bit
// integer lane used by the fast matrix path.  Every operation here is
// exact; overflow in the 128-bit lane throws and callers fall back to GMP.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace paratwist {

using i128 = __int128;

struct overflow_error : std::runtime_error {
  overflow_error() : std::runtime_error("int128 overflow, use the big lane") {}
};

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error();
  return r;
}

inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error();
  return r;
}

inline i128 checked_sub(i128 a, i128 b) {
  i128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw overflow_error();
  return r;
}

inline i128 abs128(i128 a) { return a < 0 ? -a : a; }

inline i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string s;
  while (u) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

// Trait layer so the group kernel can run over i128 or mpz_class.
template <class Int>
struct int_ops;

template <>
struct int_ops<i128> {
  static i128 mul(i128 a, i128 b) { return checked_mul(a, b); }
  static i128 add(i128 a, i128 b) { return checked_add(a, b); }
  static i128 sub(i128 a, i128 b) { return checked_sub(a, b); }
  static i128 neg(i128 a) { return -a; }
  static bool is_zero(i128 a) { return a == 0; }
  static bool is_neg(i128 a) { return a < 0; }
  static i128 divexact(i128 a, i128 b) { return a / b; }
  static i128 gcd(i128 a, i128 b) { return gcd128(a, b); }
  static i128 from_long(long v) { return v; }
  static bool equal(i128 a, i128 b) { return a == b; }
  static std::string str(i128 a) { return to_string(a); }
};

template <>
struct int_ops<mpz_class> {
  static mpz_class mul(const mpz_class& a, const mpz_class& b) { return a * b; }
  static mpz_class add(const mpz_class& a, const mpz_class& b) { return a + b; }
  static mpz_class sub(const mpz_class& a, const mpz_class& b) { return a - b; }
  static mpz_class neg(const mpz_class& a) { return -a; }
  static bool is_zero(const mpz_class& a) { return a == 0; }
  static bool is_neg(const mpz_class& a) { return a < 0; }
  static mpz_class divexact(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
  }
  static mpz_class from_long(long v) { return mpz_class(v); }
  static bool equal(const mpz_class& a, const mpz_class& b) { return a == b; }
  static std::string str(const mpz_class& a) { return a.get_str(); }
};

// v_p of a nonzero integer.
template <class Int>
inline int vp(Int a, int p) {
  if (int_ops<Int>::is_zero(a)) throw std::invalid_argument("vp(0) undefined");
  int v = 0;
  Int q = std::move(a), pp = int_ops<Int>::from_long(p);
  for (;;) {
    Int r = q % pp;
    if (!int_ops<Int>::is_zero(r)) break;
    q = int_ops<Int>::divexact(q, pp);
    ++v;
  }
  return v;
}

inline int vp_mpz(const mpz_class& a, int p) {
  if (a == 0) throw std::invalid_argument("vp(0) undefined");
  mpz_class r, q = a, pp = p;
  int v = 0;
  for (;;) {
    if (!mpz_divisible_p(q.get_mpz_t(), pp.get_mpz_t())) break;
    mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), pp.get_mpz_t());
    ++v;
  }
  return v;
}

inline long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (long)2e17 / (b > 0 ? b : 1)) throw std::overflow_error("ipow");
    r *= b;
  }
  return r;
}

inline long mod_positive(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline long mul_mod(long a, long b, long m) {
  return (long)(((__int128)a * b) % m);
}

// Inverse of a mod m, gcd(a, m) = 1.
inline long inv_mod(long a, long m) {
  long t = 0, nt = 1, r = m, nr = mod_positive(a, m);
  while (nr != 0) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::domain_error("inv_mod: not a unit");
  return mod_positive(t, m);
}

inline long pow_mod(long b, long e, long m) {
  long r = 1;
  b = mod_positive(b, m);
  while (e > 0) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace paratwist
