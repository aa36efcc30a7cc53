#pragma once

// Explicit coset decompositions:
//   SL(2,O) = |_| [1 ; x 1] Gamma0(p^2c) |_| [ .1 ; -1. ][1 ; y 1] Gamma0(p^2c),
//     x in O/p^2c, y in p/p^2c,
//   K(p^N)  = |_| [1 ..z pi^-N ..] Kl(p^N) |_| t_N [1 ..z pi^-N+1 ..] Kl(p^N),
//     z in O/p^N resp. O/p^{N-1}; the second union is absent for N = 0.

#include <vector>

#include "group.hpp"

namespace paratwist {

inline GroupElement sl2_weyl(int p) {
  Padic z(p, 0), one(p, 1);
  return GroupElement(p, mat_from_padic(2, {z, one, -one, z}));
}

inline std::vector<GroupElement> sl2_coset_representatives(int p, int c) {
  if (c < 1) throw std::invalid_argument("sl2 cosets: c >= 1");
  std::vector<GroupElement> reps;
  long q2c = ipow(p, 2 * c);
  GroupElement w = sl2_weyl(p);
  for (long x = 0; x < q2c; ++x) reps.push_back(gl2_lower(p, Padic(p, x)));
  for (long y = 0; y < q2c / p; ++y)
    reps.push_back(w * gl2_lower(p, Padic(p, y * p)));
  return reps;
}

inline GroupElement corner_shift(int p, const Padic& w) {
  return root_elem(p, Root4::TwoAlphaBeta, w);
}

inline std::vector<GroupElement> paramodular_coset_representatives(int p, int N) {
  if (N < 1) return {group_identity(p, 4)};  // K(p^0) = Kl(p^0)
  std::vector<GroupElement> reps;
  Padic piN = Padic::uniformizer_pow(p, -N);
  Padic piN1 = Padic::uniformizer_pow(p, -N + 1);
  GroupElement tN = t_n_elem(p, N);
  for (long z = 0; z < ipow(p, N); ++z) reps.push_back(corner_shift(p, Padic(p, z) * piN));
  for (long z = 0; z < ipow(p, N - 1); ++z)
    reps.push_back(tN * corner_shift(p, Padic(p, z) * piN1));
  return reps;
}

}  // namespace paratwist
