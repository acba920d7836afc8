#pragma once

// The induced morphism f_# = (φ_1, ..., φ_n; σ) : π → π^n ⋊ S_n.
//
// Branch indices are 0-based in this API; permutations are stored as
// images, perm[i] = σ(i). Input/output layers convert to 1-based.

#include <cstddef>
#include <vector>

#include "nvfix/crystal.hpp"

namespace nvfix {

using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
// (στ)(i) = σ(τ(i))
Permutation compose(const Permutation &s, const Permutation &t);
Permutation invert(const Permutation &s);
bool is_permutation(const Permutation &s);

/// (α_1, ..., α_n; σ) with
/// (α; σ)(β; τ) = (α_1 β_{σ⁻¹(1)}, ..., α_n β_{σ⁻¹(n)}; στ).
struct PermutedTuple {
  std::vector<AffineElement> components;
  Permutation perm;

  static PermutedTuple identity(std::size_t n, std::size_t dim);
  std::size_t size() const { return components.size(); }
  bool is_identity() const;

  friend bool operator==(const PermutedTuple &, const PermutedTuple &) = default;
};

PermutedTuple semidirect_mul(const PermutedTuple &x, const PermutedTuple &y);
PermutedTuple semidirect_inv(const PermutedTuple &x);
PermutedTuple semidirect_pow(const PermutedTuple &x, const Integer &exponent);

class NvMorphism {
public:
  NvMorphism() = default;
  // images[g] is the image of generator g (see CrystGroup::generator).
  NvMorphism(CrystGroup group, std::size_t n, std::vector<PermutedTuple> images);

  const CrystGroup &group() const { return group_; }
  std::size_t n() const { return n_; }
  const std::vector<PermutedTuple> &images() const { return images_; }

  PermutedTuple evaluate(const AffineElement &g) const;
  PermutedTuple evaluate(const Decomposition &d) const;
  PermutedTuple evaluate(const Word &w) const;

  // σ_g, φ_i(g)
  Permutation sigma(const AffineElement &g) const;
  Permutation sigma(const Decomposition &d) const;
  AffineElement phi(std::size_t i, const AffineElement &g) const;

  // σ of a lattice element given by Γ-coordinates
  Permutation lattice_sigma(const IntVector &coords) const;

private:
  CrystGroup group_;
  std::size_t n_ = 0;
  std::vector<PermutedTuple> images_;
};

ValidationReport validate_morphism(const NvMorphism &f);

/// A finite-index subgroup H of π: H ∩ Γ plus the cosets of π/Γ it meets.
struct SubgroupData {
  Lattice lattice_part;
  std::vector<std::size_t> rep_indices;
  // coset_witnesses[k] ∈ H lies in the coset of rep rep_indices[k]
  std::vector<AffineElement> coset_witnesses;

  // [π : H]
  Integer index_in(const CrystGroup &g) const;
};

SubgroupData sigma_kernel(const NvMorphism &f);
SubgroupData stabilizer(const NvMorphism &f, std::size_t i);

struct Orbit {
  std::vector<std::size_t> members; // sorted; members[0] is the representative
  Integer stabilizer_index;         // [π : S_i], equal to members.size()
};
std::vector<Orbit> orbit_partition(const NvMorphism &f);

/// The linear map sending each basis vector of `sub` to the translation
/// part of φ_i of that vector. Requires sub ⊆ S_i ∩ Γ and φ_i(sub) ⊆ R^m.
RatMatrix linearize(const NvMorphism &f, std::size_t i, const Lattice &sub);

/// Thrown by linearize when a precondition fails; carries the offending
/// basis vector.
class PreconditionError : public std::invalid_argument {
public:
  PreconditionError(const std::string &what, RatVector witness)
      : std::invalid_argument(what), witness(std::move(witness)) {}
  RatVector witness;
};

/// Change of lift f' = c·f: every image is conjugated by c.
NvMorphism conjugate(const NvMorphism &f, const PermutedTuple &c);

} // namespace nvfix
