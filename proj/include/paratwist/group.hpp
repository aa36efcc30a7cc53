#pragma once

// GL(2,F) and GSp(4,F) elements over the exact scalar model.  GSp(4) is
// taken with respect to the antidiagonal form
//     J = [ . . . 1 ; . . 1 . ; . -1 . . ; -1 . . . ],
// tg J g = lambda(g) J.  Congruence subgroups are entrywise valuation
// patterns together with lambda in O^x.

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracmat.hpp"
#include "padic.hpp"

namespace paratwist {

inline FracMat<mpz_class> symplectic_form4() {
  FracMat<mpz_class> j;
  j.n = 4;
  j.at(0, 3) = 1;
  j.at(1, 2) = 1;
  j.at(2, 1) = -1;
  j.at(3, 0) = -1;
  return j;
}

struct similitude_error : std::runtime_error {
  explicit similitude_error(const std::string& what) : std::runtime_error(what) {}
};

// Returns lambda with tg J g = lambda J, or throws naming the violated
// entry.
inline mpq_class similitude_of(const FracMat<mpz_class>& g) {
  if (g.n != 4) throw std::invalid_argument("similitude: 4x4 only");
  FracMat<mpz_class> t = g.transposed() * symplectic_form4() * g;
  // t = lambda J exactly; lambda = t(0,3)/t.den
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      mpz_class expect = t.at(0, 3) * symplectic_form4().at(i, j);
      if (t.at(i, j) != expect)
        throw similitude_error("not in GSp(4): tgJg - lambda J nonzero at entry (" +
                               std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  if (t.at(0, 3) == 0) throw similitude_error("not in GSp(4): lambda = 0");
  mpq_class lam(t.at(0, 3), t.den);
  lam.canonicalize();
  return lam;
}

template <class Int>
inline Int det2(const FracMat<Int>& m) {
  using ops = int_ops<Int>;
  return ops::sub(ops::mul(m.at(0, 0), m.at(1, 1)), ops::mul(m.at(0, 1), m.at(1, 0)));
}

class GroupElement {
 public:
  GroupElement() : p_(3), m_(FracMat<mpz_class>::identity(2)) {}

  GroupElement(int p, FracMat<mpz_class> m) : p_(p), m_(std::move(m)) {
    m_.reduce_content();
    if (m_.n == 4) {
      lambda_ = similitude_of(m_);
    } else if (m_.n == 2) {
      if (det2(m_) == 0) throw std::invalid_argument("singular 2x2 element");
    } else {
      throw std::invalid_argument("size 2 or 4");
    }
  }

  int size() const { return m_.n; }
  int prime() const { return p_; }
  const FracMat<mpz_class>& mat() const { return m_; }

  Padic entry(int i, int j) const {
    mpq_class v(m_.at(i, j), m_.den);
    v.canonicalize();
    return Padic(p_, v);
  }

  Padic similitude() const {
    if (m_.n != 4) throw std::invalid_argument("similitude: 4x4 only");
    return Padic(p_, lambda_);
  }

  Padic determinant() const {
    mpz_class d;
    if (m_.n == 2)
      d = det2(m_);
    else {
      // det = lambda^2 for GSp(4)
      mpq_class l2 = lambda_ * lambda_;
      return Padic(p_, l2);
    }
    mpq_class v(d, m_.den * m_.den);
    v.canonicalize();
    return Padic(p_, v);
  }

  GroupElement operator*(const GroupElement& o) const {
    if (p_ != o.p_) throw std::invalid_argument("mixed primes");
    return GroupElement(p_, m_ * o.m_);
  }

  GroupElement inverse() const {
    if (m_.n == 2) {
      FracMat<mpz_class> r;
      r.n = 2;
      mpz_class d = det2(m_);
      // (a b; c d)^-1 = (d -b; -c a) * den / det
      r.at(0, 0) = m_.at(1, 1);
      r.at(0, 1) = -m_.at(0, 1);
      r.at(1, 0) = -m_.at(1, 0);
      r.at(1, 1) = m_.at(0, 0);
      // value = adj/den / (det/den^2) = adj * den / det
      for (int i = 0; i < 4; ++i) r.a[std::size_t(i)] *= m_.den;
      r.den = d;
      r.reduce_content();
      return GroupElement(p_, r);
    }
    // g^-1 = lambda^-1 J^-1 tg J; entries stay integral when g does.
    FracMat<mpz_class> j = symplectic_form4();
    FracMat<mpz_class> jinv = j.negated();  // J^2 = -I
    FracMat<mpz_class> r = jinv * m_.transposed() * j;
    // divide by lambda
    r.den *= lambda_.get_num();
    for (int i = 0; i < 16; ++i) r.a[std::size_t(i)] *= lambda_.get_den();
    r.reduce_content();
    return GroupElement(p_, r);
  }

  bool operator==(const GroupElement& o) const { return p_ == o.p_ && m_ == o.m_; }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }

  bool is_identity() const { return m_ == FracMat<mpz_class>::identity(m_.n); }

  int entry_val(int i, int j) const { return entry_valuation(m_, i, j, p_); }

  std::string str() const { return m_.str(); }

 private:
  int p_;
  FracMat<mpz_class> m_;
  mpq_class lambda_ = 1;
};

// ---- builders ---------------------------------------------------------

inline FracMat<mpz_class> mat_from_padic(int n, const std::vector<Padic>& entries) {
  FracMat<mpz_class> m;
  m.n = n;
  mpz_class den(1);
  for (auto& e : entries) {
    mpz_class d = e.value().get_den();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
    den = den / g * d;
  }
  for (int i = 0; i < n * n; ++i) {
    const mpq_class& v = entries[std::size_t(i)].value();
    m.a[std::size_t(i)] = v.get_num() * (den / v.get_den());
  }
  m.den = den;
  m.reduce_content();
  return m;
}

inline GroupElement group_identity(int p, int n) {
  return GroupElement(p, FracMat<mpz_class>::identity(n));
}

inline GroupElement diag4(int p, const Padic& a, const Padic& b, const Padic& c, const Padic& d) {
  Padic z(p, 0);
  return GroupElement(p, mat_from_padic(4, {a, z, z, z, z, b, z, z, z, z, c, z, z, z, z, d}));
}

inline GroupElement diag2(int p, const Padic& a, const Padic& b) {
  Padic z(p, 0);
  return GroupElement(p, mat_from_padic(2, {a, z, z, b}));
}

// eta = diag(pi^-1, 1, 1, pi), tau = diag(1, pi^-1, pi, 1)
inline GroupElement eta_elem(int p) {
  return diag4(p, Padic::uniformizer_pow(p, -1), Padic(p, 1), Padic(p, 1),
               Padic::uniformizer_pow(p, 1));
}

inline GroupElement tau_elem(int p) {
  return diag4(p, Padic(p, 1), Padic::uniformizer_pow(p, -1), Padic::uniformizer_pow(p, 1),
               Padic(p, 1));
}

inline GroupElement tau_pow(int p, int c) {
  return diag4(p, Padic(p, 1), Padic::uniformizer_pow(p, -c), Padic::uniformizer_pow(p, c),
               Padic(p, 1));
}

// t_n = [ . . . -pi^-n ; . 1 . . ; . . 1 . ; pi^n . . . ]
inline GroupElement t_n_elem(int p, int n) {
  Padic z(p, 0), one(p, 1);
  Padic up = Padic::uniformizer_pow(p, n), um = Padic::uniformizer_pow(p, -n);
  return GroupElement(
      p, mat_from_padic(4, {z, z, z, -um, z, one, z, z, z, z, one, z, up, z, z, z}));
}

// The Weyl element [1 . . . ; . . 1 . ; . -1 . . ; . . . 1] from the
// T^Kl definition.
inline GroupElement weyl_s_elem(int p) {
  Padic z(p, 0), one(p, 1);
  return GroupElement(
      p, mat_from_padic(4, {one, z, z, z, z, z, one, z, z, -one, z, z, z, z, z, one}));
}

// Short-root Weyl representative, swaps the pairs (1,2) and (3,4);
// lambda = 1.
inline GroupElement weyl_alpha_elem(int p) {
  Padic z(p, 0), one(p, 1);
  return GroupElement(
      p, mat_from_padic(4, {z, one, z, z, -one, z, z, z, z, z, z, -one, z, z, one, z}));
}

enum class Root4 {
  Alpha,          // I + x (E12 - E34)
  Beta,           // I + x E23
  AlphaBeta,      // I + x (E13 + E24)
  TwoAlphaBeta,   // I + x E14
  MAlpha,         // I + x (E21 - E43)
  MBeta,          // I + x E32
  MAlphaBeta,     // I + x (E31 + E42)
  MTwoAlphaBeta,  // I + x E41
};

inline GroupElement root_elem(int p, Root4 r, const Padic& x) {
  std::vector<Padic> e(16, Padic(p, 0));
  for (int i = 0; i < 4; ++i) e[std::size_t(i * 4 + i)] = Padic(p, 1);
  auto set = [&](int i, int j, const Padic& v) { e[std::size_t(i * 4 + j)] = v; };
  switch (r) {
    case Root4::Alpha: set(0, 1, x); set(2, 3, -x); break;
    case Root4::Beta: set(1, 2, x); break;
    case Root4::AlphaBeta: set(0, 2, x); set(1, 3, x); break;
    case Root4::TwoAlphaBeta: set(0, 3, x); break;
    case Root4::MAlpha: set(1, 0, x); set(3, 2, -x); break;
    case Root4::MBeta: set(2, 1, x); break;
    case Root4::MAlphaBeta: set(2, 0, x); set(3, 1, x); break;
    case Root4::MTwoAlphaBeta: set(3, 0, x); break;
  }
  return GroupElement(p, mat_from_padic(4, e));
}

// The upper-triangular integrand block of v^chi:
// entries (1,2) = -a pi^-c, (1,3) = b pi^-2c, (1,4) = z, (2,4) = b pi^-2c,
// (3,4) = a pi^-c.
inline GroupElement vchi_unipotent(int p, const Padic& a, const Padic& b, const Padic& z, int c) {
  Padic zero(p, 0), one(p, 1);
  Padic apc = a * Padic::uniformizer_pow(p, -c);
  Padic bpc = b * Padic::uniformizer_pow(p, -2 * c);
  return GroupElement(p, mat_from_padic(4, {one, -apc, bpc, z,     //
                                            zero, one, zero, bpc,  //
                                            zero, zero, one, apc,  //
                                            zero, zero, zero, one}));
}

// The level-lowering test element of the vanishing criterion:
// [1 r1/pi r2/pi . ; . 1 . r2/pi ; . . 1 -r1/pi ; . . . 1].
inline GroupElement vanishing_probe(int p, const Padic& r1, const Padic& r2) {
  Padic z(p, 0), one(p, 1);
  Padic pinv = Padic::uniformizer_pow(p, -1);
  Padic a = r1 * pinv, b = r2 * pinv;
  return GroupElement(p, mat_from_padic(4, {one, a, b, z,   //
                                            z, one, z, b,   //
                                            z, z, one, -a,  //
                                            z, z, z, one}));
}

inline GroupElement gl2_upper(int p, const Padic& x) {
  Padic z(p, 0), one(p, 1);
  return GroupElement(p, mat_from_padic(2, {one, x, z, one}));
}

inline GroupElement gl2_lower(int p, const Padic& y) {
  Padic z(p, 0), one(p, 1);
  return GroupElement(p, mat_from_padic(2, {one, z, y, one}));
}

// ---- subgroup specifications ------------------------------------------

struct EntrySpec {
  enum Kind { Any, Zero, One, Ideal } kind = Any;
  int e = 0;  // Ideal: valuation >= e
};

struct SubgroupSpec {
  enum Kind { Gamma0, Klingen, Paramodular, PrincipalPattern } kind = Gamma0;
  int level = 0;
  int size = 2;
  std::array<EntrySpec, 16> pattern{};  // PrincipalPattern only
  std::string name;

  static SubgroupSpec gamma0(int n) {
    SubgroupSpec s;
    s.kind = Gamma0;
    s.level = n;
    s.size = 2;
    s.name = "Gamma0(p^" + std::to_string(n) + ")";
    return s;
  }
  static SubgroupSpec klingen(int n) {
    SubgroupSpec s;
    s.kind = Klingen;
    s.level = n;
    s.size = 4;
    s.name = "Kl(p^" + std::to_string(n) + ")";
    return s;
  }
  static SubgroupSpec paramodular(int n) {
    SubgroupSpec s;
    s.kind = Paramodular;
    s.level = n;
    s.size = 4;
    s.name = "K(p^" + std::to_string(n) + ")";
    return s;
  }

  static SubgroupSpec principal(const std::array<EntrySpec, 16>& pat, std::string name) {
    SubgroupSpec s;
    s.kind = PrincipalPattern;
    s.size = 4;
    s.pattern = pat;
    s.name = std::move(name);
    return s;
  }

  // Transformation group of v^chi: lambda in O^x and
  // [ O O O p^-2c ; . O O O ; . p^2c O O ; . . . O ].
  static SubgroupSpec vchi_group(int c) {
    std::array<EntrySpec, 16> pat{};
    auto set = [&](int i, int j, EntrySpec::Kind k, int e = 0) {
      pat[std::size_t(i * 4 + j)] = EntrySpec{k, e};
    };
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) set(i, j, EntrySpec::Ideal, 0);
    set(0, 3, EntrySpec::Ideal, -2 * c);
    set(2, 1, EntrySpec::Ideal, 2 * c);
    for (int i = 1; i < 4; ++i) set(i, 0, EntrySpec::Zero);
    set(3, 1, EntrySpec::Zero);
    set(3, 2, EntrySpec::Zero);
    return principal(pat, "vchi-invariance(c=" + std::to_string(c) + ")");
  }

  // Lower-unipotent invariance group of v^chi with exponents
  // L1 = max(n+c, 3c) off the corner and L2 = max(n+2c, 4c) at (4,1).
  static SubgroupSpec vchi_congruence_group(int n, int c) {
    int L1 = std::max(n + c, 3 * c), L2 = std::max(n + 2 * c, 4 * c);
    std::array<EntrySpec, 16> pat{};
    auto set = [&](int i, int j, EntrySpec::Kind k, int e = 0) {
      pat[std::size_t(i * 4 + j)] = EntrySpec{k, e};
    };
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) set(i, j, i == j ? EntrySpec::One : EntrySpec::Zero);
    set(1, 0, EntrySpec::Ideal, L1);
    set(2, 0, EntrySpec::Ideal, L1);
    set(3, 0, EntrySpec::Ideal, L2);
    set(3, 1, EntrySpec::Ideal, L1);
    set(3, 2, EntrySpec::Ideal, L1);
    return principal(pat, "vchi-congruence(n=" + std::to_string(n) + ",c=" + std::to_string(c) + ")");
  }

  // Invariance group of T^Kl: exponents N - c, zero corner.
  static SubgroupSpec tkl_invariance_group(int N, int c) {
    int e = N - c;
    std::array<EntrySpec, 16> pat{};
    auto set = [&](int i, int j, EntrySpec::Kind k, int ee = 0) {
      pat[std::size_t(i * 4 + j)] = EntrySpec{k, ee};
    };
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) set(i, j, i == j ? EntrySpec::One : EntrySpec::Zero);
    set(1, 0, EntrySpec::Ideal, e);
    set(2, 0, EntrySpec::Ideal, e);
    set(3, 1, EntrySpec::Ideal, e);
    set(3, 2, EntrySpec::Ideal, e);
    return principal(pat, "tkl-invariance(N=" + std::to_string(N) + ",c=" + std::to_string(c) + ")");
  }
};

inline bool entry_ok(const GroupElement& g, int i, int j, const EntrySpec& s) {
  switch (s.kind) {
    case EntrySpec::Any: return true;
    case EntrySpec::Zero: return g.entry(i, j).is_zero();
    case EntrySpec::One: return g.entry(i, j) == Padic(g.prime(), 1);
    case EntrySpec::Ideal: return g.entry(i, j).is_zero() || g.entry(i, j).valuation() >= s.e;
  }
  return false;
}

inline bool is_member(const GroupElement& g, const SubgroupSpec& s) {
  if (g.size() != s.size) return false;
  switch (s.kind) {
    case SubgroupSpec::Gamma0: {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (!g.entry(i, j).is_integral()) return false;
      if (!g.entry(1, 0).is_zero() && g.entry(1, 0).valuation() < s.level) return false;
      return g.determinant().is_unit();
    }
    case SubgroupSpec::Klingen:
    case SubgroupSpec::Paramodular: {
      if (!g.similitude().is_unit()) return false;
      auto need = [&](int i, int j, int e) {
        return g.entry(i, j).is_zero() || g.entry(i, j).valuation() >= e;
      };
      int n = s.level;
      int corner = s.kind == SubgroupSpec::Paramodular ? -n : 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          int e = 0;
          if (i == 3 && j < 3) e = n;
          if ((i == 1 || i == 2) && j == 0) e = n;
          if (i == 0 && j == 3) e = corner;
          if (!need(i, j, e)) return false;
        }
      return true;
    }
    case SubgroupSpec::PrincipalPattern: {
      if (!g.similitude().is_unit()) return false;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (!entry_ok(g, i, j, s.pattern[std::size_t(i * 4 + j)])) return false;
      return true;
    }
  }
  return false;
}

}  // namespace paratwist
