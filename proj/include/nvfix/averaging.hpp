#pragma once

// Invariant subgroups S ⊆ Γ ∩ ker σ, the linearized split-lift matrices
// M_{i,α} = A_α M_i, and the determinant averages for L(f) and N(f).

#include <cstddef>
#include <optional>
#include <vector>

#include "nvfix/nvmorph.hpp"
#include "nvfix/parallel.hpp"

namespace nvfix {

struct InvariantData {
  Lattice S;
  Integer index_pi_S;
  Integer index_pi_gamma;
  Integer index_gamma_S;
  // M_i: linearization of φ_i on S
  std::vector<RatMatrix> base;
  // representatives α of π/Γ used in the sums; default: the holonomy reps
  std::vector<AffineElement> quotient_reps;
  // matrices[i][q] = A_{quotient_reps[q]} · M_i
  std::vector<std::vector<RatMatrix>> matrices;
  // Representatives of π/S: t·h for t in Γ/S and h a holonomy rep. The
  // identity comes first.
  std::vector<AffineElement> cover_reps;
  // Γ-coordinates of the Γ/S representatives
  std::vector<IntVector> lattice_reps;
};

/// S by lattice intersections: L = Γ ∩ ker σ, K_i = ker(L → π/Γ via φ_i),
/// S = ⋂_h A_h (L ∩ ⋂_i K_i). Verified before returning.
InvariantData invariant_subgroup(const NvMorphism &f);

/// S_r = ⟨α^{[π:Γ]} : α ∈ ker σ⟩, an alternative (smaller) choice.
Lattice power_subgroup(const NvMorphism &f);

/// Verifies that S is f-Γ-invariant and assembles the data. `quotient_reps`
/// optionally replaces the holonomy reps as representatives of π/Γ (one per
/// coset, in holonomy order). Throws InconsistencyError when a check fails.
InvariantData make_invariant_data(
    const NvMorphism &f, const Lattice &S,
    std::optional<std::vector<AffineElement>> quotient_reps = std::nullopt);

using MatrixTable = std::vector<std::vector<RatMatrix>>;
MatrixTable split_matrices(const NvMorphism &f, const InvariantData &inv);

struct DeterminantTerm {
  std::size_t branch;
  std::size_t quotient_rep;
  Rational det; // det(I - M_{i,α})
};
// Row-major over (branch, quotient rep).
std::vector<DeterminantTerm> determinant_table(const InvariantData &inv,
                                               Execution exec = Execution::parallel);

Integer lefschetz(const InvariantData &inv, Execution exec = Execution::parallel);
Integer nielsen(const InvariantData &inv, Execution exec = Execution::parallel);
Integer lefschetz(const NvMorphism &f);
Integer nielsen(const NvMorphism &f);

/// coin(τ_g φ_i, ι_i) = { γ ∈ S_i : g φ_i(γ) g⁻¹ = γ }, described per coset
/// of S in S_i.
struct CoincidenceGroup {
  // indices into InvariantData::cover_reps of the cosets meeting the group
  std::vector<std::size_t> cosets;
  // one element of the group in each such coset
  std::vector<AffineElement> witnesses;
  // generators of the part inside S (nonempty when the group is infinite)
  std::vector<RatVector> lattice_generators;

  // |u_i(coin)|, the image in S_i/S
  std::size_t image_size() const { return cosets.size(); }
  bool trivial() const {
    return cosets.size() == 1 && lattice_generators.empty();
  }
};
CoincidenceGroup coincidence_subgroup(const NvMorphism &f,
                                      const InvariantData &inv, std::size_t i,
                                      const AffineElement &g);

struct EqualityViolation {
  std::size_t branch;
  std::size_t cover_rep;
  std::size_t image_size;
  bool infinite;
};
struct NielsenEqualityReport {
  Integer lower_bound;
  bool equality = true;
  std::size_t essential_terms = 0;
  std::vector<EqualityViolation> violations;
};
NielsenEqualityReport nielsen_equality_report(const NvMorphism &f,
                                              const InvariantData &inv);

} // namespace nvfix
