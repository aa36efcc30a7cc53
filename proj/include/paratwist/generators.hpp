#pragma once

// Random words in the generator families of the congruence subgroups and
// of the transformation/invariance groups appearing in the proofs.
// Gamma0(p^N) is generated by its diagonal, upper-unipotent and lower
// p^N-congruence elements; Kl(p^N) by its lower congruence block, its
// (2,3)-avoiding upper unipotents and its Levi part; K(p^N) by coset
// representatives times Klingen elements.  Every sample is membership
// checked before it is returned.

#include <random>
#include <vector>

#include "cosets.hpp"
#include "group.hpp"

namespace paratwist {

class GeneratorSampler {
 public:
  GeneratorSampler(int p, SubgroupSpec spec, std::uint64_t seed)
      : p_(p), spec_(std::move(spec)), rng_(seed) {
    if (spec_.kind == SubgroupSpec::Paramodular)
      reps_ = paramodular_coset_representatives(p_, spec_.level);
  }

  GroupElement next() {
    GroupElement g = draw();
    if (!is_member(g, spec_))
      throw std::logic_error("generator sampler produced a non-member of " + spec_.name);
    return g;
  }

  std::vector<GroupElement> take(int count) {
    std::vector<GroupElement> out;
    out.reserve(std::size_t(count));
    for (int i = 0; i < count; ++i) out.push_back(next());
    return out;
  }

 private:
  long rint(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  long runit(long bound) {
    for (;;) {
      long v = rint(-bound, bound);
      if (v % p_ != 0) return v;
    }
  }

  Padic rpadic_integral(long bound) { return Padic(p_, rint(-bound, bound)); }

  GroupElement draw() {
    switch (spec_.kind) {
      case SubgroupSpec::Gamma0: return draw_gamma0();
      case SubgroupSpec::Klingen: return draw_klingen();
      case SubgroupSpec::Paramodular: return draw_paramodular();
      case SubgroupSpec::PrincipalPattern: return draw_pattern();
    }
    return group_identity(p_, spec_.size);
  }

  GroupElement draw_gamma0() {
    int n = spec_.level;
    GroupElement g = group_identity(p_, 2);
    int len = int(rint(0, 3));
    for (int i = 0; i < len; ++i) {
      switch (rint(0, 2)) {
        case 0: g = g * diag2(p_, Padic(p_, runit(p_ * p_)), Padic(p_, runit(p_ * p_))); break;
        case 1: g = g * gl2_upper(p_, rpadic_integral(2 * p_ * p_)); break;
        default:
          g = g * gl2_lower(p_, Padic::uniformizer_pow(p_, n) * rpadic_integral(p_ * p_));
      }
    }
    return g;
  }

  // Families of Kl(p^N): lower congruence block, upper block with
  // vanishing (2,3) entry, Levi [a; GL(2,O); det/a].
  GroupElement draw_klingen() {
    int n = spec_.level;
    GroupElement g = group_identity(p_, 4);
    int len = int(rint(0, 3));
    Padic piN = Padic::uniformizer_pow(p_, n);
    for (int i = 0; i < len; ++i) {
      switch (rint(0, 2)) {
        case 0:
          g = g * root_elem(p_, Root4::MAlpha, piN * rpadic_integral(p_)) *
              root_elem(p_, Root4::MAlphaBeta, piN * rpadic_integral(p_)) *
              root_elem(p_, Root4::MTwoAlphaBeta, piN * rpadic_integral(p_));
          break;
        case 1:
          g = g * root_elem(p_, Root4::Alpha, rpadic_integral(p_ * p_)) *
              root_elem(p_, Root4::AlphaBeta, rpadic_integral(p_ * p_)) *
              root_elem(p_, Root4::TwoAlphaBeta, rpadic_integral(p_ * p_));
          break;
        default: g = g * draw_levi();
      }
    }
    return g;
  }

  GroupElement draw_levi() {
    // inner 2x2 in GL(2,O) with unit determinant; outer d = det/a
    for (;;) {
      long a = runit(p_ * p_);
      long A = rint(-6, 6), B = rint(-6, 6), C = rint(-6, 6), D = rint(-6, 6);
      long det = A * D - B * C;
      if (det == 0 || det % p_ == 0) continue;
      Padic z(p_, 0);
      Padic pa(p_, a), pd = Padic(p_, det) / pa;
      return GroupElement(
          p_, mat_from_padic(4, {pa, z, z, z,                          //
                                 z, Padic(p_, A), Padic(p_, B), z,     //
                                 z, Padic(p_, C), Padic(p_, D), z,     //
                                 z, z, z, pd}));
    }
  }

  GroupElement draw_paramodular() {
    GroupElement rep = reps_[std::size_t(rint(0, long(reps_.size()) - 1))];
    SubgroupSpec kl = SubgroupSpec::klingen(spec_.level);
    GeneratorSampler inner(p_, kl, rng_());
    return rep * inner.next();
  }

  // Pattern groups are sampled from their visible one-parameter families;
  // the (4,1)-corner of products is corrected where the pattern fixes it
  // to zero.
  GroupElement draw_pattern() {
    // derive the ideal exponents from the stored pattern
    auto ideal = [&](int i, int j) {
      const EntrySpec& e = spec_.pattern[std::size_t(i * 4 + j)];
      return e.kind == EntrySpec::Ideal ? e.e : 0;
    };
    bool corner_zero = spec_.pattern[3 * 4 + 0].kind == EntrySpec::Zero;
    bool lower = spec_.pattern[1 * 4 + 0].kind != EntrySpec::Zero ||
                 spec_.pattern[3 * 4 + 1].kind != EntrySpec::Zero;
    bool diag_units = spec_.pattern[0].kind == EntrySpec::Ideal;

    if (!lower && diag_units) {
      // transformation group of v^chi: torus and five root families
      GroupElement g = group_identity(p_, 4);
      int len = int(rint(1, 3));
      for (int i = 0; i < len; ++i) {
        switch (rint(0, 5)) {
          case 0: {
            long w = runit(p_), w1 = runit(p_), w2 = runit(p_);
            g = g * diag4(p_, Padic(p_, w1 * w2 * w), Padic(p_, w1 * w), Padic(p_, w2 * w),
                          Padic(p_, w));
            break;
          }
          case 1:
            g = g * root_elem(p_, Root4::TwoAlphaBeta,
                              Padic::uniformizer_pow(p_, ideal(0, 3)) * rpadic_integral(p_ * p_));
            break;
          case 2: g = g * root_elem(p_, Root4::Alpha, rpadic_integral(p_ * p_)); break;
          case 3: g = g * root_elem(p_, Root4::AlphaBeta, rpadic_integral(p_ * p_)); break;
          case 4: g = g * root_elem(p_, Root4::Beta, rpadic_integral(p_ * p_)); break;
          default:
            g = g * root_elem(p_, Root4::MBeta,
                              Padic::uniformizer_pow(p_, ideal(2, 1)) * rpadic_integral(p_));
        }
      }
      return g;
    }

    // lower-unipotent patterns
    Padic s = Padic::uniformizer_pow(p_, ideal(1, 0)) * rpadic_integral(p_);
    Padic u = Padic::uniformizer_pow(p_, ideal(2, 0)) * rpadic_integral(p_);
    GroupElement g = root_elem(p_, Root4::MAlpha, s) * root_elem(p_, Root4::MAlphaBeta, u);
    if (corner_zero) {
      // x_{-alpha}(s) x_{-(a+b)}(u) has corner -su; cancel it
      g = g * root_elem(p_, Root4::MTwoAlphaBeta, s * u);
    } else {
      g = g * root_elem(p_, Root4::MTwoAlphaBeta,
                        Padic::uniformizer_pow(p_, ideal(3, 0)) * rpadic_integral(p_));
    }
    return g;
  }

  int p_ = 3;
  SubgroupSpec spec_;
  std::mt19937_64 rng_;
  std::vector<GroupElement> reps_;
};

}  // namespace paratwist
