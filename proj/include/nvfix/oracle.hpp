#pragma once

// Geometric cross-check: fixed points of an explicit affine lift, found by
// exact enumeration over deck transformations, grouped into Nielsen classes.

#include <cstddef>
#include <string>
#include <vector>

#include "nvfix/trace.hpp"

namespace nvfix {

/// x ↦ linear x + translation (linear may be singular).
struct AffineMap {
  RatMatrix linear;
  RatVector translation;

  RatVector apply(const RatVector &x) const { return add(linear * x, translation); }
  friend bool operator==(const AffineMap &, const AffineMap &) = default;
};

struct AffineLift {
  std::vector<AffineMap> branches;
  std::size_t size() const { return branches.size(); }
};

struct DistinctnessViolation {
  RatVector point;
  std::size_t first;
  std::size_t second;
};

struct LiftReport {
  std::vector<std::string> equivariance_failures;
  std::vector<DistinctnessViolation> distinctness_violations;
  bool equivariant() const { return equivariance_failures.empty(); }
};

/// Checks f_i(γx) = φ_i(γ) f_{σ_γ⁻¹(i)}(x) exactly on every generator, and
/// samples pairwise distinctness of the branches modulo π on a grid with
/// `grid` points per lattice direction.
LiftReport verify_lift(const NvMorphism &f, const AffineLift &lift,
                       std::size_t grid = 6);

struct FixedPointRecord {
  RatVector point; // in the half-open box spanned by the lattice basis
  AffineElement deck;
  std::size_t branch;
  int index; // sign det(I - A_deck⁻¹ A_branch)

  // α = deck⁻¹, so that α f_branch(point) = point
  AffineElement label() const { return invert(deck); }
};

struct EnumerationOptions {
  Execution execution = Execution::parallel;
  // widen every deck-translation interval by this factor (>= 1)
  unsigned bound_scale = 1;
  // refuse to test more candidate deck elements than this
  std::size_t max_candidates = 5'000'000;
};

/// One record per fixed point of the n-valued map on the manifold.
/// Throws DegenerateFixedSet when some candidate equation has a
/// positive-dimensional solution set.
std::vector<FixedPointRecord>
enumerate_fixed_points(const AffineLift &lift, const NvMorphism &f,
                       const EnumerationOptions &options = {});

struct OracleResult {
  std::vector<FixedPointRecord> records;
  // Nielsen class of each record, as an index into `classes`
  std::vector<std::size_t> class_of_record;
  std::vector<ReidClass> classes;
  std::vector<Integer> class_index;
  Integer lefschetz;
  Integer nielsen;
  TraceVector trace;
};

/// L, N and RT from the enumerated fixed points; classes are formed with
/// same_class and cross-checked against canonical_rep.
OracleResult oracle_invariants(const AffineLift &lift,
                               const ReidemeisterContext &ctx,
                               const EnumerationOptions &options = {});

struct FiberCount {
  std::size_t record;
  std::size_t geometric;  // fixed lifts of α f_i over the point in the S-cover
  std::size_t algebraic;  // |u_i(coin(τ_α φ_i, ι_i))|
};

/// Per fixed point, compares the number of fixed lifts in the S-cover with
/// the coincidence-subgroup prediction. Throws InconsistencyError on a
/// mismatch.
std::vector<FiberCount> fiber_counts(const AffineLift &lift, const NvMorphism &f,
                                     const InvariantData &inv,
                                     const std::vector<FixedPointRecord> &records);

/// Lift for the morphism conjugate(f, c): branch k is γ_k ∘ f_{η⁻¹(k)}.
AffineLift conjugate_lift(const AffineLift &lift, const PermutedTuple &c);

} // namespace nvfix
