#pragma once

// Iwasawa decomposition g = n t k by greedy right-multiplication with
// integral root operations and Weyl moves, pivoting on minimal valuation
// in the working row.  For GSp(4) the column operations come in the
// symplectic pairs dictated by the negative root groups, so k stays in
// GSp(4,O) with lambda a unit.  The public iwasawa() certifies each call
// by exact reconstruction; the Whittaker evaluator uses the same core
// without accumulating k.

#include <array>
#include <optional>
#include <stdexcept>

#include "fracmat.hpp"
#include "group.hpp"

namespace paratwist {

template <class Int>
struct ColMat {
  int n = 0;
  std::array<Int, 16> a{};
  std::array<Int, 4> d{};  // per-column denominators, > 0

  static ColMat from(const FracMat<Int>& m) {
    ColMat c;
    c.n = m.n;
    c.a = m.a;
    for (int j = 0; j < m.n; ++j) c.d[std::size_t(j)] = m.den;
    return c;
  }

  static ColMat identity(int n) { return from(FracMat<Int>::identity(n)); }

  Int& at(int i, int j) { return a[std::size_t(i * n + j)]; }
  const Int& at(int i, int j) const { return a[std::size_t(i * n + j)]; }

  int val(int i, int j, int p) const {
    using ops = int_ops<Int>;
    if (ops::is_zero(at(i, j))) return kValInfinity;
    return vp<Int>(at(i, j), p) - vp<Int>(d[std::size_t(j)], p);
  }

  // col_j += (num/den) * col_i
  void col_addmul(int j, int i, const Int& num, const Int& den) {
    using ops = int_ops<Int>;
    if (ops::is_zero(den)) throw std::logic_error("col_addmul: zero denominator");
    if (ops::is_zero(num)) return;
    Int s1 = ops::mul(den, d[std::size_t(i)]);
    Int s2 = ops::mul(num, d[std::size_t(j)]);
    for (int r = 0; r < n; ++r)
      at(r, j) = ops::add(ops::mul(s1, at(r, j)), ops::mul(s2, at(r, i)));
    d[std::size_t(j)] = ops::mul(d[std::size_t(j)], s1);
    strip(j);
  }

  void negate_col(int j) {
    using ops = int_ops<Int>;
    for (int r = 0; r < n; ++r) at(r, j) = ops::neg(at(r, j));
  }

  void swap_cols(int i, int j) {
    for (int r = 0; r < n; ++r) std::swap(at(r, i), at(r, j));
    std::swap(d[std::size_t(i)], d[std::size_t(j)]);
  }

  void strip(int j) {
    using ops = int_ops<Int>;
    Int g = d[std::size_t(j)];
    for (int r = 0; r < n && !ops::equal(g, Int(1)); ++r) g = ops::gcd(g, at(r, j));
    if (!ops::is_zero(g) && !ops::equal(g, Int(1))) {
      d[std::size_t(j)] = ops::divexact(d[std::size_t(j)], g);
      for (int r = 0; r < n; ++r) at(r, j) = ops::divexact(at(r, j), g);
    }
    if (ops::is_neg(d[std::size_t(j)])) {
      d[std::size_t(j)] = ops::neg(d[std::size_t(j)]);
      negate_col(j);
    }
  }

  FracMat<Int> to_fracmat() const {
    using ops = int_ops<Int>;
    FracMat<Int> m;
    m.n = n;
    Int den = Int(1);
    for (int j = 0; j < n; ++j) {
      Int g = ops::gcd(den, d[std::size_t(j)]);
      den = ops::mul(ops::divexact(den, g), d[std::size_t(j)]);
    }
    for (int j = 0; j < n; ++j) {
      Int s = ops::divexact(den, d[std::size_t(j)]);
      for (int r = 0; r < n; ++r) m.at(r, j) = ops::mul(at(r, j), s);
    }
    m.den = den;
    m.reduce_content();
    return m;
  }
};

// Torus valuations and the two psi-relevant superdiagonal ratios of the
// triangularized matrix.
template <class Int>
struct Triangular {
  int n = 0;
  std::array<int, 4> e{};      // e_i = v(t_i)
  Int n01_num{}, n01_den{};    // n_{12} = a(0,1)/a(1,1)
  Int n12_num{}, n12_den{};    // n_{23} = a(1,2)/a(2,2), size 4
};

// Right-multiplication Weyl moves, applied to g and (optionally) to the
// accumulating k-inverse.
template <class Int>
inline void apply_move(ColMat<Int>& m, int which) {
  switch (which) {
    case 0:  // t_0: (c0, c3) <- (c3, -c0)
      m.swap_cols(0, 3);
      m.negate_col(3);
      break;
    case 1:  // s: (c1, c2) <- (-c2, c1)
      m.swap_cols(1, 2);
      m.negate_col(1);
      break;
    case 2:  // w_alpha: (c0,c1,c2,c3) <- (-c1, c0, -c3, c2)
      m.swap_cols(0, 1);
      m.negate_col(0);
      m.swap_cols(2, 3);
      m.negate_col(2);
      break;
    case 3:  // 2x2 swap
      m.swap_cols(0, 1);
      break;
  }
}

struct singular_input : std::runtime_error {
  singular_input() : std::runtime_error("iwasawa: singular matrix") {}
};

// Core reduction to upper-triangular form.  All companion ops mirror the
// ops applied to m, so companion = E_1 ... E_r when it starts at identity.
template <class Int>
inline Triangular<Int> reduce_triangular(ColMat<Int>& m, int p, ColMat<Int>* companion) {
  using ops = int_ops<Int>;
  auto do_move = [&](int which) {
    apply_move(m, which);
    if (companion) apply_move(*companion, which);
  };
  auto do_addmul = [&](int j, int i, Int num, Int den) {
    m.col_addmul(j, i, num, den);
    if (companion) companion->col_addmul(j, i, num, den);
  };
  int n = m.n;

  // bottom row: bring a minimal-valuation entry to the last column;
  // ties resolve rightward so the move sequence terminates
  for (int guard = 0;; ++guard) {
    int best = -1, bestv = kValInfinity;
    for (int j = 0; j < n; ++j) {
      int v = m.val(n - 1, j, p);
      if (v <= bestv && v != kValInfinity) {
        bestv = v;
        best = j;
      }
    }
    if (best == -1) throw singular_input();
    if (best == n - 1) break;
    if (guard >= 8) throw std::logic_error("iwasawa: pivot move loop failed");
    if (n == 2)
      do_move(3);
    else
      do_move(best == 0 ? 0 : best == 1 ? 1 : 2);
  }

  if (n == 2) {
    // clear (1,0)
    if (!ops::is_zero(m.at(1, 0)))
      do_addmul(0, 1, ops::neg(ops::mul(m.at(1, 0), m.d[1])), ops::mul(m.at(1, 1), m.d[0]));
    Triangular<Int> t;
    t.n = 2;
    if (ops::is_zero(m.at(0, 0)) || ops::is_zero(m.at(1, 1))) throw singular_input();
    t.e[0] = m.val(0, 0, p);
    t.e[1] = m.val(1, 1, p);
    t.n01_num = m.at(0, 1);
    t.n01_den = m.at(1, 1);
    return t;
  }

  // clear (3,2) with x_{-alpha}(c): c0 += c*c1 and c2 -= c*c3
  if (!ops::is_zero(m.at(3, 2))) {
    Int num = ops::mul(m.at(3, 2), m.d[3]);
    Int den = ops::mul(m.at(3, 3), m.d[2]);
    do_addmul(2, 3, ops::neg(num), den);
    do_addmul(0, 1, num, den);
  }
  // clear (3,1) with x_{-(alpha+beta)}: c1 += u*c3 paired with c0 += u*c2
  if (!ops::is_zero(m.at(3, 1))) {
    Int num = ops::neg(ops::mul(m.at(3, 1), m.d[3]));
    Int den = ops::mul(m.at(3, 3), m.d[1]);
    do_addmul(1, 3, num, den);
    do_addmul(0, 2, num, den);
  }
  // clear (3,0) with x_{-(2alpha+beta)}: c0 += w*c3
  if (!ops::is_zero(m.at(3, 0)))
    do_addmul(0, 3, ops::neg(ops::mul(m.at(3, 0), m.d[3])), ops::mul(m.at(3, 3), m.d[0]));

  // (2,0) vanishes by the symplectic row pairing once row 3 is cleared
  if (!ops::is_zero(m.at(2, 0))) throw std::logic_error("iwasawa: (3,1) pairing violated");

  // row 2 pivot between columns 1 and 2
  if (m.val(2, 1, p) < m.val(2, 2, p)) do_move(1);
  if (ops::is_zero(m.at(2, 2))) throw singular_input();
  // clear (2,1) with x_{-beta}: c1 += y*c2
  if (!ops::is_zero(m.at(2, 1)))
    do_addmul(1, 2, ops::neg(ops::mul(m.at(2, 1), m.d[2])), ops::mul(m.at(2, 2), m.d[1]));

  Triangular<Int> t;
  t.n = 4;
  for (int i = 0; i < 4; ++i) {
    if (ops::is_zero(m.at(i, i))) throw singular_input();
    t.e[std::size_t(i)] = m.val(i, i, p);
  }
  if (t.e[0] + t.e[3] != t.e[1] + t.e[2])
    throw std::logic_error("iwasawa: torus not in the similitude group");
  t.n01_num = m.at(0, 1);
  t.n01_den = m.at(1, 1);
  t.n12_num = m.at(1, 2);
  t.n12_den = m.at(2, 2);
  return t;
}

struct IwasawaNTK {
  GroupElement n, t, k;  // g = n t k, t = diag of uniformizer powers
};

// Certified decomposition: throws if the exact reconstruction n t k = g
// or any factor constraint fails.
inline IwasawaNTK iwasawa(const GroupElement& g) {
  int p = g.prime();
  int n = g.size();
  ColMat<mpz_class> m = ColMat<mpz_class>::from(g.mat());
  ColMat<mpz_class> comp = ColMat<mpz_class>::identity(n);
  reduce_triangular(m, p, &comp);

  FracMat<mpz_class> tri = m.to_fracmat();
  GroupElement kinv(p, comp.to_fracmat());
  GroupElement k = kinv.inverse();

  // split tri = n_part * t_full, then fold the torus units into k
  std::vector<Padic> nent(std::size_t(n * n), Padic(p, 0));
  std::vector<Padic> uent(std::size_t(n * n), Padic(p, 0));
  std::vector<Padic> tent(std::size_t(n * n), Padic(p, 0));
  GroupElement trie(p, tri);
  for (int i = 0; i < n; ++i) {
    Padic tii = trie.entry(i, i);
    int e = tii.valuation();
    tent[std::size_t(i * n + i)] = Padic::uniformizer_pow(p, e);
    uent[std::size_t(i * n + i)] = tii.unit_part();
    for (int j = 0; j < n; ++j) nent[std::size_t(i * n + j)] = trie.entry(i, j) / trie.entry(j, j);
  }
  GroupElement npart(p, mat_from_padic(n, nent));
  GroupElement tpart(p, mat_from_padic(n, tent));
  GroupElement units(p, mat_from_padic(n, uent));
  GroupElement kfin = units * k;

  // certification
  if (npart * tpart * kfin != g) throw std::logic_error("iwasawa: reconstruction failed");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j < i && !npart.entry(i, j).is_zero()) throw std::logic_error("iwasawa: n not upper");
      if (j == i && npart.entry(i, j) != Padic(p, 1)) throw std::logic_error("iwasawa: n diag");
      if (!kfin.entry(i, j).is_integral()) throw std::logic_error("iwasawa: k not integral");
    }
  if (n == 4) {
    if (!kfin.similitude().is_unit()) throw std::logic_error("iwasawa: lambda(k) not a unit");
  } else if (!kfin.determinant().is_unit()) {
    throw std::logic_error("iwasawa: det(k) not a unit");
  }
  return IwasawaNTK{npart, tpart, kfin};
}

}  // namespace paratwist
