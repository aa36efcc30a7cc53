#pragma once

// Deterministic sample points for evaluation-based identity checks.
// Words stay shallow so that every psi argument met during evaluation of
// the twisted vectors remains within the configured cyclotomic depth.

#include <random>
#include <vector>

#include "generators.hpp"
#include "group.hpp"

namespace paratwist {

inline GroupElement sample_point(int p, int size, std::mt19937_64& rng, int depth = 1) {
  auto rint = [&](long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
  };
  auto runit = [&]() {
    for (;;) {
      long v = rint(-p, p);
      if (v % p != 0) return v;
    }
  };
  if (size == 2) {
    GroupElement g = group_identity(p, 2);
    int len = int(rint(0, 2));
    for (int i = 0; i < len; ++i) {
      switch (rint(0, 3)) {
        case 0: g = g * diag2(p, Padic(p, runit()), Padic(p, runit())); break;
        case 1:
          g = g * gl2_upper(p, Padic(p, rint(-4, 4)) * Padic::uniformizer_pow(p, int(rint(-depth, 1))));
          break;
        case 2: g = g * gl2_lower(p, Padic(p, rint(-4, 4))); break;
        default:
          g = g * diag2(p, Padic::uniformizer_pow(p, int(rint(-depth, depth))), Padic(p, 1));
      }
    }
    return g;
  }
  GroupElement g = group_identity(p, 4);
  int len = int(rint(0, 2));
  for (int i = 0; i < len; ++i) {
    switch (rint(0, 5)) {
      case 0: {
        long w = runit(), w1 = runit(), w2 = runit();
        g = g * diag4(p, Padic(p, w1 * w2 * w), Padic(p, w1 * w), Padic(p, w2 * w), Padic(p, w));
        break;
      }
      case 1: {
        Root4 roots[4] = {Root4::Alpha, Root4::Beta, Root4::AlphaBeta, Root4::TwoAlphaBeta};
        g = g * root_elem(p, roots[rint(0, 3)],
                          Padic(p, rint(-4, 4)) * Padic::uniformizer_pow(p, int(rint(-depth, 0))));
        break;
      }
      case 2: {
        Root4 roots[4] = {Root4::MAlpha, Root4::MBeta, Root4::MAlphaBeta, Root4::MTwoAlphaBeta};
        g = g * root_elem(p, roots[rint(0, 3)], Padic(p, rint(-4, 4)));
        break;
      }
      case 3: {
        int e1 = int(rint(0, depth)), e2 = int(rint(0, e1));
        g = g * diag4(p, Padic::uniformizer_pow(p, e1), Padic::uniformizer_pow(p, e2),
                      Padic::uniformizer_pow(p, -e2), Padic::uniformizer_pow(p, -e1));
        break;
      }
      case 4: g = g * weyl_s_elem(p); break;
      default: g = g * (rint(0, 1) ? eta_elem(p) : tau_elem(p)); break;
    }
  }
  return g;
}

inline std::vector<GroupElement> sample_points(int p, int size, int count, std::mt19937_64& rng,
                                               int depth = 1) {
  std::vector<GroupElement> pts;
  pts.reserve(std::size_t(count));
  pts.push_back(group_identity(p, size));  // the identity is always probed
  for (int i = 1; i < count; ++i) pts.push_back(sample_point(p, size, rng, depth));
  return pts;
}

}  // namespace paratwist
