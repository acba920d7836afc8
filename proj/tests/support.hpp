#pragma once

// Fixtures and random generators shared by the unit tests, the acceptance
// runner and the benchmark.

#include <random>
#include <string>
#include <vector>

#include "nvfix/document.hpp"

namespace nvfix::testing {

inline InputDocument fixture(const std::string &name) {
  return load_document(std::string(NVFIX_FIXTURE_DIR) + "/" + name + ".json");
}

inline const std::vector<std::string> &all_fixtures() {
  static const std::vector<std::string> names = {
      "klein",         "circle_degree3",          "circle_2valued",
      "torus_diag23",  "torus_negation",          "torus_3valued",
      "hantzsche_wendt_triple", "hantzsche_wendt_negation"};
  return names;
}

inline const std::vector<std::string> &lift_fixtures() {
  static const std::vector<std::string> names = {
      "klein",        "circle_degree3", "circle_2valued", "torus_diag23",
      "torus_negation", "torus_3valued", "hantzsche_wendt_triple"};
  return names;
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long uniform(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(gen_);
  }
  std::size_t index(std::size_t size) {
    return static_cast<std::size_t>(uniform(0, static_cast<long>(size) - 1));
  }
  std::mt19937_64 &engine() { return gen_; }

private:
  std::mt19937_64 gen_;
};

inline IntMatrix random_int_matrix(Rng &rng, std::size_t m, long bound) {
  IntMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a(i, j) = rng.uniform(-bound, bound);
  return a;
}

inline Integer det_i_minus(const IntMatrix &a) {
  return det(IntMatrix::identity(a.rows()) - a);
}

inline CrystGroup torus_group(std::size_t m) {
  std::vector<RatVector> basis(m, RatVector(m));
  std::vector<std::string> names;
  for (std::size_t k = 0; k < m; ++k) {
    basis[k][k] = 1;
    names.push_back("e" + std::to_string(k + 1));
  }
  return CrystGroup(m, basis, names, {});
}

// Single-valued torus map x ↦ A x.
inline NvMorphism torus_morphism(const IntMatrix &a) {
  const std::size_t m = a.rows();
  std::vector<PermutedTuple> images;
  for (std::size_t k = 0; k < m; ++k)
    images.push_back(
        {{AffineElement::pure_translation(to_rational(a.column(k)))}, {0}});
  return NvMorphism(torus_group(m), 1, images);
}

inline AffineLift torus_lift(const IntMatrix &a, RatVector translation) {
  return {{{to_rational(a), std::move(translation)}}};
}

inline RatVector random_translation(Rng &rng, std::size_t m, long den = 6) {
  RatVector v(m);
  for (auto &x : v)
    x = Rational(rng.uniform(0, den - 1), den);
  for (auto &x : v)
    x.canonicalize();
  return v;
}

inline AffineElement random_element(Rng &rng, const CrystGroup &g, long bound = 2) {
  IntVector t(g.dim());
  for (auto &x : t)
    x = rng.uniform(-bound, bound);
  return g.reconstruct({t, rng.index(g.holonomy_order())});
}

inline Permutation random_permutation(Rng &rng, std::size_t n) {
  Permutation p = identity_permutation(n);
  std::shuffle(p.begin(), p.end(), rng.engine());
  return p;
}

inline PermutedTuple random_tuple(Rng &rng, const CrystGroup &g, std::size_t n,
                                  long bound = 2) {
  PermutedTuple c;
  for (std::size_t k = 0; k < n; ++k)
    c.components.push_back(random_element(rng, g, bound));
  c.perm = random_permutation(rng, n);
  return c;
}

// Random word as a list of letters, exponents in [-2, 2] \ {0}.
inline Word random_word(Rng &rng, const CrystGroup &g, std::size_t length) {
  Word w;
  for (std::size_t k = 0; k < length; ++k) {
    long e = rng.uniform(1, 2) * (rng.uniform(0, 1) ? 1 : -1);
    w.push_back({rng.index(g.generator_count()), e});
  }
  return w;
}

// Single-valued map of the Klein bottle x ↦ diag(p, q) x + (d1, 0): needs
// q odd and 2 d1 ∈ Z, or p = 0 and q even.
inline NvMorphism klein_diagonal(long p, long q, Rational d1) {
  const auto doc = fixture("klein");
  const CrystGroup &g = doc.group;
  const RatMatrix D = RatMatrix::from_rows({{p, 0}, {0, q}});
  const RatVector d{d1, 0};
  auto image = [&](const AffineElement &gamma) {
    // f γ f⁻¹ restricted to the affine map f(x) = D x + d
    const RatMatrix lin = q % 2 != 0 ? gamma.linear : RatMatrix::identity(2);
    const RatVector v =
        subtract(add(D * gamma.translation, d), lin * d);
    return AffineElement{v, lin};
  };
  std::vector<PermutedTuple> images;
  for (std::size_t k = 0; k < g.generator_count(); ++k)
    images.push_back({{image(g.generator(k))}, {0}});
  return NvMorphism(g, 1, images);
}

inline AffineLift klein_diagonal_lift(long p, long q, Rational d1) {
  return {{{RatMatrix::from_rows({{p, 0}, {0, q}}), RatVector{d1, 0}}}};
}

// Hantzsche-Wendt map x ↦ k x for odd k.
inline NvMorphism hw_scaling(long k) {
  const auto doc = fixture("hantzsche_wendt_triple");
  const CrystGroup &g = doc.group;
  std::vector<PermutedTuple> images;
  for (std::size_t j = 0; j < g.generator_count(); ++j) {
    const AffineElement gamma = g.generator(j);
    images.push_back({{AffineElement{scale(gamma.translation, k), gamma.linear}}, {0}});
  }
  return NvMorphism(g, 1, images);
}

} // namespace nvfix::testing
