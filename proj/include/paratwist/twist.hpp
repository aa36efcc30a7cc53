#pragma once

// The twisting operators.
//   GL(2):  T_chi(v) = int_{O^x} chi(b) pi([1 b pi^-c ; . 1]) v db
//   GSp(4): v^chi    = int int int chi(ab) pi(U(a,b,z)) tau^c v dz da db,
//           T^Kl_chi = int_O pi(L(x)) v^chi dx + int_p pi(s L(y)) v^chi dy,
//           T_chi    = q int_O pi(shift(z pi^-N)) T^Kl dz
//                      + pi(t_N) int_O pi(shift(z pi^-N+1)) T^Kl dz,
// with N = max(n, 2c) resp. max(n+2c, 4c).  Quadrature levels default to
// the invariance levels of the integrands on level-n input; every level
// can be refined by one step to re-verify stability.

#include <random>

#include "characters.hpp"
#include "generators.hpp"
#include "smooth.hpp"

namespace paratwist {

struct TwistConfig {
  QuadChar chi;
  int n = 0;     // level of the input vector
  int size = 4;  // 2 or 4
  // quadrature levels; -1 means the default for level-n input
  int La = -1, Lb = -1, Lz = -1, Lx = -1, Ly = -1, Lz1 = -1, Lz2 = -1;
  bool merge = true;  // exact duplicate-translate merging in t_chi

  TwistConfig(QuadChar chi_, int n_, int size_ = 4) : chi(chi_), n(n_), size(size_) {}

  int c() const { return chi.conductor(); }
  int derived_N() const {
    return size == 2 ? std::max(n, 2 * c()) : std::max(n + 2 * c(), 4 * c());
  }

  int la() const { return La >= 0 ? La : std::max(2 * c(), 1); }
  int lb() const { return Lb >= 0 ? Lb : std::max(c(), 1); }
  int lz() const { return Lz >= 0 ? Lz : 0; }
  int lx() const { return Lx >= 0 ? Lx : 2 * c(); }
  int ly() const { return Ly >= 0 ? Ly : std::max(2 * c(), 1); }
  int lz1() const { return Lz1 >= 0 ? Lz1 : derived_N(); }
  int lz2() const { return Lz2 >= 0 ? Lz2 : std::max(derived_N() - 1, 0); }
  int lgl2() const { return Lb >= 0 ? Lb : std::max(c(), 1); }

  // One quadrature level refined by +1, for the stability re-check.
  TwistConfig refined(int which) const {
    TwistConfig r = *this;
    switch (which) {
      case 0: r.La = la() + 1; break;
      case 1: r.Lb = lb() + 1; break;
      case 2: r.Lz = lz() + 1; break;
      case 3: r.Lx = lx() + 1; break;
      case 4: r.Ly = ly() + 1; break;
      case 5: r.Lz1 = lz1() + 1; break;
      case 6: r.Lz2 = lz2() + 1; break;
    }
    return r;
  }
};

// GL(2) twist; for unramified chi this reduces to (1-q^{-1}) v.
inline SmoothVector twist_gl2(const SmoothVector& v, const TwistConfig& cfg) {
  int p = v.datum().p;
  int c = cfg.c(), L = cfg.lgl2();
  Padic pic = Padic::uniformizer_pow(p, -c);
  SmoothVector out(v.evaluator());
  mpq_class w = q_pow(p, -L);
  for (auto& b : unit_representatives(p, L)) {
    Padic bp(p, b.value());
    Cyc coeff(w * cfg.chi(bp));
    GroupElement u = gl2_upper(p, bp * pic);
    for (auto& t : v.terms()) out.add_term(t.coeff * coeff, u * t.g);
  }
  return out;
}

inline SmoothVector beta_op(const SmoothVector& v) {
  int p = v.datum().p;
  return v.translated(diag2(p, Padic(p, 1), Padic::uniformizer_pow(p, 1)));
}

inline SmoothVector beta_prime_op(const SmoothVector& v) { return v; }

inline SmoothVector eta_translate(const SmoothVector& v) {
  return v.translated(eta_elem(v.datum().p));
}

// v^chi of (4.1)-type: unipotent block times tau^c, weighted by chi(ab).
inline SmoothVector v_chi(const SmoothVector& v, const TwistConfig& cfg) {
  int p = v.datum().p;
  int c = cfg.c();
  int La = cfg.la(), Lb = cfg.lb(), Lz = cfg.lz();
  SmoothVector out(v.evaluator());
  GroupElement tc = tau_pow(p, c);
  Quadrature zq = Quadrature::ideal(p, -2 * c, Lz);
  mpq_class w = q_pow(p, -(La + Lb)) * zq.weight();
  for (auto& a : unit_representatives(p, La)) {
    Padic ap(p, a.value());
    int ca = cfg.chi(ap);
    for (auto& b : unit_representatives(p, Lb)) {
      Padic bp(p, b.value());
      Cyc coeff(w * (ca * cfg.chi(bp)));
      for (auto& z : zq.points) {
        GroupElement u = vchi_unipotent(p, ap, bp, z, c) * tc;
        for (auto& t : v.terms()) out.add_term(t.coeff * coeff, u * t.g);
      }
    }
  }
  return out;
}

// T^Kl_chi of (4.3)-type applied to a precomputed v^chi.
inline SmoothVector t_kl_from_vchi(const SmoothVector& vx, const TwistConfig& cfg) {
  int p = vx.datum().p;
  SmoothVector out(vx.evaluator());
  GroupElement s = weyl_s_elem(p);
  Quadrature xq = Quadrature::ideal(p, 0, cfg.lx());
  for (auto& x : xq.points) {
    GroupElement L = root_elem(p, Root4::MBeta, x);
    Cyc w(xq.weight());
    for (auto& t : vx.terms()) out.add_term(t.coeff * w, L * t.g);
  }
  Quadrature yq = Quadrature::ideal(p, 1, cfg.ly());
  for (auto& y : yq.points) {
    GroupElement sL = s * root_elem(p, Root4::MBeta, y);
    Cyc w(yq.weight());
    for (auto& t : vx.terms()) out.add_term(t.coeff * w, sL * t.g);
  }
  return out;
}

inline SmoothVector t_kl(const SmoothVector& v, const TwistConfig& cfg) {
  return t_kl_from_vchi(v_chi(v, cfg), cfg);
}

// T_chi of (4.5)-type as the literal composition: corner shifts of T^Kl
// at depths N and N-1, the second block translated by t_N.
inline SmoothVector t_chi(const SmoothVector& v, const TwistConfig& cfg) {
  int p = v.datum().p;
  int N = cfg.derived_N();
  SmoothVector tkl = t_kl(v, cfg);
  SmoothVector out(v.evaluator());
  GroupElement tN = t_n_elem(p, N);
  {
    Quadrature zq = Quadrature::ideal(p, 0, cfg.lz1());
    mpq_class w = mpq_class(p) * zq.weight();  // leading factor q
    Padic piN = Padic::uniformizer_pow(p, -N);
    for (auto& z : zq.points) {
      GroupElement sh = corner_shift(p, z * piN);
      Cyc cw(w);
      for (auto& t : tkl.terms()) out.add_term(t.coeff * cw, sh * t.g);
    }
  }
  {
    Quadrature zq = Quadrature::ideal(p, 0, cfg.lz2());
    Padic piN1 = Padic::uniformizer_pow(p, -N + 1);
    for (auto& z : zq.points) {
      GroupElement sh = tN * corner_shift(p, z * piN1);
      Cyc cw(zq.weight());
      for (auto& t : tkl.terms()) out.add_term(t.coeff * cw, sh * t.g);
    }
  }
  return cfg.merge ? out.merged_exact() : out;
}

// The explicit four-term expansion of q^{-2c} T_chi; must equal t_chi as
// a function on the group.
inline SmoothVector t_chi_expanded(const SmoothVector& v, const TwistConfig& cfg) {
  int p = v.datum().p;
  int c = cfg.c(), N = cfg.derived_N();
  int La = cfg.la(), Lb = cfg.lb(), Lz = cfg.lz();
  GroupElement tc = tau_pow(p, c);
  GroupElement s = weyl_s_elem(p);
  GroupElement tN = t_n_elem(p, N);
  SmoothVector out(v.evaluator());

  Quadrature xq = Quadrature::ideal(p, 0, cfg.lx());
  Quadrature yq = Quadrature::ideal(p, 1, cfg.ly());
  // The integrals run over z in O with matrix entry z pi^{-N} resp.
  // z pi^{-(N-1)}; parametrizing by w = z pi^{-N} costs the Jacobian
  // q^{-N}, so the leading q of the first block and the Jacobians give
  // every part the same factor q^{1-N}.
  Quadrature z1 = Quadrature::ideal(p, -N, Lz);
  Quadrature z2 = Quadrature::ideal(p, 1 - N, std::max(Lz, 1 - N));

  mpq_class base = q_pow(p, 2 * c) * q_pow(p, -(La + Lb)) * q_pow(p, 1 - N);
  struct Part {
    const Quadrature* outer;  // x or y block
    bool weyl;
    const Quadrature* zq;
    bool tn;
  };
  Part parts[4] = {
      {&xq, false, &z1, false},
      {&yq, true, &z1, false},
      {&xq, false, &z2, true},
      {&yq, true, &z2, true},
  };
  for (auto& part : parts) {
    mpq_class w0 = base * part.outer->weight() * part.zq->weight();
    for (auto& xy : part.outer->points) {
      GroupElement lead = part.weyl ? s * root_elem(p, Root4::MBeta, xy)
                                    : root_elem(p, Root4::MBeta, xy);
      if (part.tn) lead = tN * lead;
      for (auto& a : unit_representatives(p, La)) {
        Padic ap(p, a.value());
        int ca = cfg.chi(ap);
        for (auto& b : unit_representatives(p, Lb)) {
          Padic bp(p, b.value());
          Cyc coeff(w0 * (ca * cfg.chi(bp)));
          for (auto& z : part.zq->points) {
            GroupElement u = lead * vchi_unipotent(p, ap, bp, z, c) * tc;
            for (auto& t : v.terms()) out.add_term(t.coeff * coeff, u * t.g);
          }
        }
      }
    }
  }
  return out;
}

struct VanishingReport {
  bool invariant = false;  // under all probes (4.10)
  bool zero = false;       // T_chi(v) = 0 at the sample points
  bool consistent() const { return !invariant || zero; }
};

// Lemma-4.5-ii style check: if T_chi(v) is invariant under the probes
// [1 r1/pi r2/pi .; ...], then it vanishes.
inline VanishingReport vanishing_criterion_check(const SmoothVector& v, const TwistConfig& cfg,
                                                 const std::vector<GroupElement>& points) {
  if (cfg.c() <= 0) throw std::invalid_argument("vanishing check: ramified chi only");
  int p = v.datum().p;
  SmoothVector T = t_chi(v, cfg);
  VanishingReport rep;
  rep.invariant = true;
  rep.zero = true;
  std::vector<Cyc> base;
  base.reserve(points.size());
  for (auto& g : points) {
    base.push_back(T.eval(g));
    if (!base.back().is_zero()) rep.zero = false;
  }
  for (long r1 = 0; r1 < p && rep.invariant; ++r1)
    for (long r2 = 0; r2 < p && rep.invariant; ++r2) {
      if (r1 == 0 && r2 == 0) continue;
      GroupElement probe = vanishing_probe(p, Padic(p, r1), Padic(p, r2));
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (T.eval(points[i] * probe) != base[i]) {
          rep.invariant = false;
          break;
        }
      }
    }
  return rep;
}

// pi(k) v = scalar(k) v checked by evaluation at the given points.
template <class ScalarFn>
inline bool transforms_under(const SmoothVector& v, const std::vector<GroupElement>& ks,
                             const std::vector<GroupElement>& points, ScalarFn scalar) {
  std::vector<Cyc> base;
  base.reserve(points.size());
  for (auto& g : points) base.push_back(v.eval(g));
  for (auto& k : ks) {
    Cyc s = scalar(k);
    for (std::size_t i = 0; i < points.size(); ++i)
      if (v.eval(points[i] * k) != base[i] * s) return false;
  }
  return true;
}

inline bool invariant_under(const SmoothVector& v, const std::vector<GroupElement>& ks,
                            const std::vector<GroupElement>& points) {
  return transforms_under(v, ks, points, [](const GroupElement&) { return Cyc::one(); });
}

}  // namespace paratwist
