#pragma once

// Reidemeister classes of f_# and the averaged Reidemeister trace.
//
// Classes are orbits of the action of π on π × {1..n}
//   γ · (α, i) = (γ α φ_i(γ⁻¹), σ_γ(i)).

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "nvfix/averaging.hpp"

namespace nvfix {

struct ReidClass {
  std::size_t branch = 0;
  std::size_t rep_index = 0;
  IntVector lattice_coords;

  friend bool operator==(const ReidClass &, const ReidClass &) = default;
  // Order: branch, holonomy rep, lattice coordinates.
  friend std::strong_ordering operator<=>(const ReidClass &a, const ReidClass &b);
};

class TraceVector {
public:
  void add(const ReidClass &c, const Integer &coefficient);
  const std::map<ReidClass, Integer> &terms() const { return terms_; }
  Integer coefficient_sum() const;
  std::size_t support_size() const { return terms_.size(); }
  friend bool operator==(const TraceVector &, const TraceVector &) = default;

private:
  std::map<ReidClass, Integer> terms_;
};

/// Precomputed data shared by all class computations for one morphism and
/// one invariant subgroup. Immutable after construction, so it may be used
/// from several threads at once.
class ReidemeisterContext {
public:
  ReidemeisterContext(const NvMorphism &f, InvariantData inv);

  const NvMorphism &morphism() const { return f_; }
  const InvariantData &invariant_data() const { return inv_; }

  // Γ / (I - A_h M_j) S in Γ-coordinates.
  const CokernelStructure &slice_cokernel(std::size_t j, std::size_t rep) const;
  // Smallest branch in the σ-orbit of i.
  std::size_t orbit_min(std::size_t i) const { return orbit_min_[i]; }

  // γ with σ_γ(i) = j and γ·(g, i) = (h, j), if any; the witness is verified.
  std::optional<AffineElement> same_class(const AffineElement &g, std::size_t i,
                                          const AffineElement &h,
                                          std::size_t j) const;
  ReidClass canonical_rep(const AffineElement &g, std::size_t i) const;
  // Normal form of the class of (g, i) under the stabilizer S_i only.
  ReidClass branch_local_rep(const AffineElement &g, std::size_t i) const;

  AffineElement element(const ReidClass &c) const;
  // γ · (g, i)
  std::pair<AffineElement, std::size_t> act(const AffineElement &gamma,
                                            const AffineElement &g,
                                            std::size_t i) const;

private:
  struct CoverRep {
    AffineElement element;
    AffineElement inverse;
    Permutation sigma;
    PermutedTuple image_of_inverse;
  };
  ReidClass minimize_in_branch(const AffineElement &x, std::size_t j) const;

  NvMorphism f_;
  InvariantData inv_;
  std::vector<CoverRep> cover_;
  std::vector<std::vector<CokernelStructure>> slices_;
  std::vector<std::size_t> orbit_min_;
};

CokernelStructure twisted_classes_cover(const NvMorphism &f,
                                        const InvariantData &inv, std::size_t i,
                                        const AffineElement &alpha);

// Canonical class of (β α, i), β given by Γ-coordinates.
ReidClass rhat_push(const ReidemeisterContext &ctx, std::size_t i,
                    const AffineElement &alpha, const IntVector &beta);

struct TraceOptions {
  Execution execution = Execution::parallel;
  // confirm every pushed class against its canonical representative with
  // an explicit same_class witness
  bool verify_witnesses = true;
};

TraceVector reidemeister_trace(const ReidemeisterContext &ctx,
                               const TraceOptions &options = {});
TraceVector reidemeister_trace(const NvMorphism &f);

struct TermMultiplicity {
  std::size_t branch;
  std::size_t cover_rep;
  Rational det;
  std::size_t coincidence_image; // |u_i(coin(τ_g φ_i, ι_i))|
};

struct PartitionReport {
  std::vector<Orbit> orbits;
  // Σ over orbit representatives ℓ of the branch-local traces, weight 1
  TraceVector by_orbit_representatives;
  // Σ over all i of the branch-local traces, weight 1/[π:S_i]
  TraceVector by_all_branches;
  std::vector<TermMultiplicity> multiplicities;
  bool consistent = false;
};
PartitionReport class_partition_report(const ReidemeisterContext &ctx);

/// Class map induced by the lift change f' = c·f: [(α, i)] ↦ [(α γ_{η(i)}⁻¹, η(i))],
/// canonicalized in the context of f'.
ReidClass transport_class(const ReidemeisterContext &from,
                          const ReidemeisterContext &to, const PermutedTuple &c,
                          const ReidClass &cls);

} // namespace nvfix
