#pragma once

// Brute-force Jacquet-integral oracle for the spherical Whittaker values:
//   J(t) = int_N f0(w_long n t) conj(psi_{c1,c2})(n) dn,
// with f0 the normalized spherical section f0(n t k) = (delta^{1/2} chi)(t).
// The oracle reports J(t) and J(1); the closed-form value W(t) must
// satisfy W(t) * J(1) = J(t), which avoids dividing in the value field.
//
// The computation substitutes n -> t n t^{-1} (Jacobian delta_B(t)) and
// moves t across w_long, leaving the t-independent class function
//   Phi(m) = f0(w_long n(m)),  n(m) = x_a(m1) x_b(m2) x_ab(m3) x_2ab(m4),
// summed over m in prod p^{-T_i}/O against the conjugated character.
// Phi depends only on the valuations of the bottom rows of w_long n(m):
//   row_4   = -(1, m1, m1 m2 + m3, m1 m3 + m4)
//   minors  of rows (3,4): {1, m2, m3, m4, m3^2 - m2 m4},
// giving the Iwasawa torus valuations without matrix reduction.  The
// truncation radii grow until the added spheres contribute exactly zero;
// the report records them.  A literal small-box mode with no substitution
// cross-checks the extraction identity.

#include <array>
#include <map>
#include <unordered_map>
#include <vector>

#include "characters.hpp"
#include "cosets.hpp"
#include "whittaker.hpp"

namespace paratwist {

// f0 at an arbitrary group element: Iwasawa torus valuations, then the
// monomial (delta^{1/2} chi)(t).  No dominance gate, no psi factor.
template <class Int>
inline Cyc f0_eval(const WhittakerDatum& d, const FracMat<Int>& g) {
  ColMat<Int> m = ColMat<Int>::from(g);
  Triangular<Int> t = reduce_triangular<Int>(m, d.p, nullptr);
  long e0 = t.e[0], e1 = t.e[1];
  long c = d.size == 4 ? long(t.e[0]) + t.e[3] : 0;
  long half = d.size == 4 ? -(4 * e0 + 2 * e1 - 3 * c) : -(e0 - e1);
  return Cyc::sqrt_p_power(d.ctx, half) * satake_monomial(d, e0, e1, c);
}

struct JacquetReport {
  Cyc J, J1;  // the integral at t and at 1
  bool stabilized = false;
  std::array<int, 4> truncation{};
  std::string note;

  // exact oracle agreement: the closed-form W(t) times J(1) equals J(t)
  bool matches(const Cyc& w_closed_form) const {
    return stabilized && w_closed_form * J1 == J;
  }
};

namespace detail {

inline int vp_long(long long x, int p) {
  if (x == 0) return kValInfinity;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// (delta^{1/2} chi) at the coweight with the given valuations.
inline CSPair f0_pair(const WhittakerDatum& d, long e0, long e1, long c) {
  long half = d.size == 4 ? -(4 * e0 + 2 * e1 - 3 * c) : -(e0 - e1);
  mpq_class mono = satake_monomial(d, e0, e1, c);
  CSPair out;
  bool odd = mod_positive(half, 2) == 1;
  long rp = odd ? (half - 1) / 2 : half / 2;
  mpq_class scale = mpq_pow(mpq_class(d.p), rp);
  if (odd)
    out.y = mono * scale;
  else
    out.x = mono * scale;
  return out;
}

// psi(-c u pi^{w - T}) as a zeta exponent; exact also when p | u.
inline long psi_exp_neg(const WhittakerDatum& d, long u, int T, long w, long cmult) {
  if (u == 0) return 0;
  long m = T - w;
  if (m <= 0) return 0;
  int vu = vp_long(u, d.p);
  if (m - vu <= 0) return 0;
  if (m - vu > d.ctx->M) throw psi_depth_error(int(m - vu), d.ctx->M);
  long mod = ipow(d.p, int(m));
  long cls = mod_positive(-mul_mod(mod_positive(cmult, mod), mod_positive(u, mod), mod), mod);
  return cls * ipow(d.p, d.ctx->M - int(m));
}

// The GSp(4) box sum
//   S(T) = int_box Phi(n(x)) psi(-c1 pi^wa x1 - c2 pi^wb x2) dx,
// in the coordinates n(x) = x_{2a+b}(x4) x_{a+b}(x3) x_b(x2) x_a(x1),
// whose entries are
//   (1,2) = x1, (2,3) = x2, (1,3) = x3, (2,4) = x3 - x1 x2,
//   (1,4) = x4 - x1 x3, (3,4) = -x1.
// Right multiplication by an integral unipotent changes (x3, x4) by
// x1-coupled amounts only, so cells of size (O, p^{2T1}, p^{T1}, O) map
// into N(O) and the quadrature is exact on them; the character integral
// over a cell is its volume on the dominant cone.  Phi depends on the
// torus valuations of w_long n(x), read off the bottom row
//   -(1, x1, x3, x4 - x1 x3)
// and the 2x2 minors {1, x2, x3 - x1 x2, 2 x1 x3 - x1^2 x2 - x4,
// x3^2 - x2 x4} of the bottom two rows.
class GSp4BoxSum {
 public:
  GSp4BoxSum(const WhittakerDatum& d, long wa, long wb) : d_(d), wa_(wa), wb_(wb) {}

  // shell_var >= 0 restricts that coordinate to its outermost sphere
  // (stabilization slabs).  The cell-volume factor q^{-3 T1} is included.
  Cyc sum(const std::array<int, 4>& T, int shell_var = -1) {
    int T1 = T[0], T2 = T[1], T3 = T[2], T4 = T[3];
    // largest scaled numerator is u1^2 u2 p^{T3+T4}
    int worst = 4 * T1 + T2 + T3 + T4;
    worst = std::max(worst, 2 * (T3 + T1) + T2 + T4);
    __int128 bound = 1;
    for (int i = 0; i < worst; ++i) bound *= d_.p;
    if (bound > (__int128(1) << 61))
      throw std::overflow_error("jacquet: truncation too deep for int64");

    long R1 = ipow(d_.p, T1), R2 = ipow(d_.p, T2 + 2 * T1);
    long R3 = ipow(d_.p, T3 + T1), R4 = ipow(d_.p, T4);
    long long P1 = ipow(d_.p, T1), P2 = ipow(d_.p, T2), P3 = ipow(d_.p, T3),
              P4 = ipow(d_.p, T4);

    // flat accumulator over (torus-class, character-exponent) pairs;
    // all character exponents are multiples of p^{M - depth}
    int depth = int(std::max({long(T1) - wa_, long(T2) - wb_, long(1)}));
    depth = std::min(depth, d_.ctx->M);
    long kstep = ipow(d_.p, d_.ctx->M - depth);
    long kmod = ipow(d_.p, depth);
    acc_.assign(std::size_t(kEKeys) * std::size_t(kmod), 0);
    kmod_ = kmod;
    kstep_ = kstep;

    long long S12 = ipow(d_.p, T1 + T2), S13 = ipow(d_.p, T1 + T3);
    long long S124 = ipow(d_.p, T1 + T2 + T4), S34 = ipow(d_.p, T3 + T4);
    long long S123 = ipow(d_.p, 2 * T1 + T2 + T3), S24 = ipow(d_.p, T2 + T4);
    long long S33 = ipow(d_.p, 2 * T3);

    for (long u1 = 0; u1 < R1; ++u1) {
      if (shell_var == 0 && u1 % d_.p == 0) continue;
      long k1 = psi_exp_neg(d_, u1, T1, wa_, d_.c1);
      int vm1 = u1 == 0 ? 0 : std::min(0, vp_long(u1, d_.p) - T1);
      for (long u2 = 0; u2 < R2; ++u2) {
        if (shell_var == 1 && u2 % d_.p == 0) continue;
        long k = (k1 + psi_exp_neg(d_, u2, T2, wb_, d_.c2)) % d_.ctx->order;
        long kidx = k / kstep;  // exponents are multiples of kstep
        int vm2 = u2 == 0 ? 0 : std::min(0, vp_long(u2, d_.p) - T2);
        for (long u3 = 0; u3 < R3; ++u3) {
          if (shell_var == 2 && u3 % d_.p == 0) continue;
          int vm3 = u3 == 0 ? 0 : std::min(0, vp_long(u3, d_.p) - T3);
          long long n12 = (long long)u1 * u2;   // x1 x2 numerator over S12
          long long n13 = (long long)u1 * u3;   // x1 x3 numerator over S13
          // v(x3 - x1 x2) over common den p^{T1+T2+T3}
          int v_sub = vp3((long long)u3 * S12 - n12 * P3, T1 + T2 + T3);
          int e3_base = std::min({0, vm1, vm3});
          int s2_base = std::min({0, vm2, v_sub});
          for (long u4 = 0; u4 < R4; ++u4) {
            if (shell_var == 3 && u4 % d_.p == 0) continue;
            int e3 = std::min(e3_base,
                              vp3((long long)u4 * S13 - n13 * P4, T1 + T3 + T4));
            int s2 = std::min(
                {s2_base,
                 vp3(2 * n13 * S124 - (long long)u1 * u1 * u2 * S34 -
                         (long long)u4 * S123,
                     2 * T1 + T2 + T3 + T4),
                 vp3((long long)u3 * u3 * S24 - (long long)u2 * u4 * S33,
                     2 * T3 + T2 + T4)});
            ++acc_[std::size_t(ekey(-e3, -(s2 - e3))) * std::size_t(kmod_) +
                   std::size_t(kidx)];
          }
        }
      }
    }
    return assemble() * q_pow(d_.p, -3 * T1);
  }

 private:
  static constexpr int kEOff = 24;
  static constexpr int kESpan = 48;
  static constexpr int kEKeys = kESpan * kESpan;

  static int ekey(long e0, long e1) {
    return int(e0 + kEOff) * kESpan + int(e1 + kEOff);
  }

  int vp3(long long num, int scale) const {
    if (num == 0) return 0;  // +inf, never the minimum against 0
    return std::min(0, vp_long(num, d_.p) - scale);
  }

  Cyc assemble() {
    std::map<long, mpq_class> ax, ay;
    for (std::size_t i = 0; i < acc_.size(); ++i) {
      if (acc_[i] == 0) continue;
      long ek = long(i) / kmod_, kidx = long(i) % kmod_;
      long e0 = ek / kESpan - kEOff, e1 = ek % kESpan - kEOff;
      auto it = phi_.find(ek);
      if (it == phi_.end()) it = phi_.emplace(ek, f0_pair(d_, e0, e1, 0)).first;
      const CSPair& v = it->second;
      long k = kidx * kstep_;
      if (v.x != 0) ax[k] += v.x * acc_[i];
      if (v.y != 0) ay[k] += v.y * acc_[i];
    }
    return Cyc::from_parts(d_.ctx, ax, ay);
  }

  const WhittakerDatum& d_;
  long wa_, wb_;
  std::vector<long> acc_;
  long kmod_ = 1, kstep_ = 1;
  std::unordered_map<long, CSPair> phi_;
};

// Grows T until every +1 sphere contributes exactly zero; false if the
// cap is reached first.
inline bool stabilize_box(GSp4BoxSum& box, std::array<int, 4>& T, int cap) {
  for (int rounds = 0; rounds < 64; ++rounds) {
    bool stable = true;
    for (int i = 0; i < 4; ++i) {
      std::array<int, 4> Tw = T;
      Tw[std::size_t(i)] += 1;
      if (Tw[std::size_t(i)] > cap) return false;
      if (!box.sum(Tw, i).is_zero()) {
        T = Tw;
        stable = false;
      }
    }
    if (stable) return true;
  }
  return false;
}

}  // namespace detail

// GSp(4) oracle at the torus point diag(pi^E1, pi^E2, pi^{C-E2}, pi^{C-E1}).
inline JacquetReport jacquet_oracle_gsp4(const WhittakerDatum& d, long E1, long E2, long C,
                                         int cap = 9) {
  long wa = E1 - E2, wb = 2 * E2 - C;
  detail::GSp4BoxSum box(d, wa, wb);
  detail::GSp4BoxSum box1(d, 0, 0);
  JacquetReport rep;

  std::array<int, 4> T{};
  for (int i = 0; i < 4; ++i) T[std::size_t(i)] = 1;
  T[0] = std::max<long>(wa + 1, 1);
  T[1] = std::max<long>(wb + 1, 1);
  T[2] = std::max<long>(wa + wb + 1, 1);
  T[3] = std::max<long>(2 * wa + wb + 1, 1);
  if (!detail::stabilize_box(box, T, cap)) {
    rep.note = "non-stabilizing truncation (cap reached)";
    rep.truncation = T;
    return rep;
  }
  rep.truncation = T;

  std::array<int, 4> T1{1, 1, 1, 1};
  if (!detail::stabilize_box(box1, T1, cap)) {
    rep.note = "non-stabilizing truncation at t = 1";
    return rep;
  }

  // each class of p^{-T}/O has additive volume 1
  Cyc S = box.sum(T);
  Cyc S1 = box1.sum(T1);
  if (S1.is_zero()) {
    rep.note = "degenerate normalization J(1) = 0";
    return rep;
  }

  // J(t) = delta_B(t) * (delta^{1/2} chi)(w t w^{-1}) * S(t)
  long db_pow = -(4 * E1 + 2 * E2 - 3 * C);
  CSPair pre = detail::f0_pair(d, C - E1, C - E2, C);
  Cyc prefactor = Cyc::sqrt_p_power(d.ctx, 2 * db_pow) *
                  Cyc::from_parts(d.ctx, {{0, pre.x}}, {{0, pre.y}});
  rep.J = prefactor * S;
  rep.J1 = S1;
  rep.stabilized = true;
  rep.note = "T = (" + std::to_string(T[0]) + "," + std::to_string(T[1]) + "," +
             std::to_string(T[2]) + "," + std::to_string(T[3]) + ")";
  return rep;
}

// GL(2) oracle at diag(pi^E0, pi^E1).
inline JacquetReport jacquet_oracle_gl2(const WhittakerDatum& d, long E0, long E1, int cap = 12) {
  long w = E0 - E1;
  JacquetReport rep;
  auto S_of = [&](int T, long weight, bool shell_only) {
    std::map<long, mpq_class> ax, ay;
    long P = ipow(d.p, T);
    for (long u = 0; u < P; ++u) {
      if (shell_only && u % d.p == 0) continue;
      int e1 = u == 0 ? 0 : std::min(0, detail::vp_long(u, d.p) - T);
      CSPair v = detail::f0_pair(d, -e1, e1, 0);
      long k = detail::psi_exp_neg(d, u, T, weight, d.c1);
      if (v.x != 0) ax[k] += v.x;
      if (v.y != 0) ay[k] += v.y;
    }
    return Cyc::from_parts(d.ctx, ax, ay);  // classes have volume 1
  };
  int T = std::max(int(w) + 1, 1);
  bool stable = false;
  for (; T <= cap; ++T)
    if (S_of(T + 1, w, true).is_zero()) {
      stable = true;
      break;
    }
  rep.truncation = {T, 0, 0, 0};
  if (!stable) {
    rep.note = "non-stabilizing truncation (cap reached)";
    return rep;
  }
  int T1 = 1;
  while (T1 < cap && !S_of(T1 + 1, 0, true).is_zero()) ++T1;
  Cyc S = S_of(T, w, false);
  Cyc S1 = S_of(T1, 0, false);
  if (S1.is_zero()) {
    rep.note = "degenerate normalization J(1) = 0";
    return rep;
  }
  CSPair pre = detail::f0_pair(d, E1, E0, 0);
  rep.J = Cyc::sqrt_p_power(d.ctx, -2 * w) *
          Cyc::from_parts(d.ctx, {{0, pre.x}}, {{0, pre.y}}) * S;
  rep.J1 = S1;
  rep.stabilized = true;
  return rep;
}

// Literal small-box evaluation of int f0(w n t) psi~(n) dn with no
// substitution, n-coordinates over p^{-T}/p^{mesh}; cross-checks the
// extracted form on shallow torus points.
inline Cyc jacquet_literal_gsp4(const WhittakerDatum& d, long E1, long E2, long C, int T,
                                int mesh) {
  int p = d.p;
  GroupElement w(p, symplectic_form4());
  GroupElement t = diag4(p, Padic::uniformizer_pow(p, int(E1)), Padic::uniformizer_pow(p, int(E2)),
                         Padic::uniformizer_pow(p, int(C - E2)),
                         Padic::uniformizer_pow(p, int(C - E1)));
  Quadrature q = Quadrature::ideal(p, -T, mesh);
  Cyc acc = Cyc::zero();
  for (auto& m1 : q.points)
    for (auto& m2 : q.points)
      for (auto& m3 : q.points)
        for (auto& m4 : q.points) {
          GroupElement n = root_elem(p, Root4::TwoAlphaBeta, m4) *
                           root_elem(p, Root4::AlphaBeta, m3) * root_elem(p, Root4::Beta, m2) *
                           root_elem(p, Root4::Alpha, m1);
          Cyc f = f0_eval<mpz_class>(d, (w * n * t).mat());
          Cyc character =
              psi(d.ctx, -(m1 * Padic(p, d.c1))) * psi(d.ctx, -(m2 * Padic(p, d.c2)));
          acc = acc + f * character;
        }
  mpq_class w4 = q.weight() * q.weight() * q.weight() * q.weight();
  return acc * w4;
}

inline Cyc jacquet_literal_gl2(const WhittakerDatum& d, long E0, long E1, int T, int mesh) {
  int p = d.p;
  GroupElement w = sl2_weyl(p);
  GroupElement t = diag2(p, Padic::uniformizer_pow(p, int(E0)), Padic::uniformizer_pow(p, int(E1)));
  Quadrature q = Quadrature::ideal(p, -T, mesh);
  Cyc acc = Cyc::zero();
  for (auto& x : q.points) {
    Cyc f = f0_eval<mpz_class>(d, (w * gl2_upper(p, x) * t).mat());
    acc = acc + f * psi(d.ctx, -(x * Padic(p, d.c1)));
  }
  return acc * q.weight();
}

}  // namespace paratwist
