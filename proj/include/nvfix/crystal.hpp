#pragma once

// Crystallographic groups pi ⊂ R^m ⋊ GL_m(Q), presented by a translation
// lattice Γ and one affine representative per coset of π/Γ.

#include <cstddef>
#include <string>
#include <vector>

#include "nvfix/exact.hpp"

namespace nvfix {

/// x ↦ linear * x + translation, linear invertible.
struct AffineElement {
  RatVector translation;
  RatMatrix linear;

  static AffineElement identity(std::size_t dim);
  static AffineElement pure_translation(RatVector t);

  std::size_t dim() const { return translation.size(); }
  bool is_identity() const;
  bool is_translation() const;
  RatVector apply(const RatVector &x) const;

  friend bool operator==(const AffineElement &, const AffineElement &) = default;
};

// (v, A)(w, B) = (v + A w, A B)
AffineElement compose(const AffineElement &g, const AffineElement &h);
AffineElement invert(const AffineElement &g);
AffineElement power(const AffineElement &g, long exponent);

struct HolonomyRep {
  std::string name;
  AffineElement element;
};

/// g = t · h_rep with t = coords · (lattice basis).
struct Decomposition {
  IntVector lattice_coords;
  std::size_t rep_index = 0;
};

/// One letter of a word over the generators: generator index (lattice basis
/// elements first, then the non-identity holonomy reps) and an exponent.
struct Letter {
  std::size_t generator;
  long exponent;
  friend bool operator==(const Letter &, const Letter &) = default;
};
using Word = std::vector<Letter>;

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

class CrystGroup {
public:
  CrystGroup() = default;
  // The identity coset representative is implicit and gets index 0; `reps`
  // lists the remaining cosets. Basis vectors are taken in the given order
  // (they define the lattice generators and coordinates).
  CrystGroup(std::size_t dim, std::vector<RatVector> lattice_basis,
             std::vector<std::string> lattice_names,
             std::vector<HolonomyRep> reps);

  std::size_t dim() const { return dim_; }
  const Lattice &lattice() const { return lattice_; }
  const std::vector<RatVector> &lattice_basis() const { return basis_; }
  // Rows are the lattice basis vectors, in generator order.
  const RatMatrix &basis_matrix() const { return basis_matrix_; }
  // index 0 is the identity
  const std::vector<HolonomyRep> &reps() const { return reps_; }
  std::size_t holonomy_order() const { return reps_.size(); }

  std::size_t generator_count() const { return dim_ + reps_.size() - 1; }
  std::string generator_name(std::size_t g) const;
  AffineElement generator(std::size_t g) const;
  // Generator index of holonomy rep r (r >= 1).
  std::size_t rep_generator(std::size_t r) const { return dim_ + r - 1; }
  std::size_t find_generator(const std::string &name) const;

  // Γ-coordinates of a translation vector, if it lies in Γ.
  std::optional<IntVector> lattice_coords(const RatVector &t) const;
  RatVector lattice_vector(const IntVector &coords) const;
  // Γ-coordinate matrix of a linear map restricted to Γ: for column
  // vectors c of Γ-coordinates, A(B^T c) = B^T (result * c).
  RatMatrix in_lattice_coords(const RatMatrix &a) const;

  // Index of the rep whose linear part equals `linear`, or reps().size().
  std::size_t rep_for_linear(const RatMatrix &linear) const;

  Decomposition decompose(const AffineElement &g) const;
  AffineElement reconstruct(const Decomposition &d) const;
  bool contains(const AffineElement &g) const;

  AffineElement evaluate(const Word &w) const;
  std::string format_word(const Word &w) const;
  // Word t_1^c_1 ... t_m^c_m for a lattice element.
  Word lattice_word(const IntVector &coords) const;

private:
  std::size_t dim_ = 0;
  std::vector<RatVector> basis_;
  std::vector<std::string> names_;
  RatMatrix basis_matrix_;
  RatMatrix basis_inverse_;
  Lattice lattice_;
  std::vector<HolonomyRep> reps_;
};

ValidationReport validate_group(const CrystGroup &g);

/// Words equal to the identity that present π on the chosen generators:
/// lattice commutators, conjugation by holonomy reps, and rep products.
std::vector<Word> relators(const CrystGroup &g);

/// Multiplication table of π/Γ on rep indices, with lattice corrections:
/// rep[a] * rep[b] = correction[a][b] · rep[product[a][b]].
struct QuotientTable {
  std::vector<std::vector<std::size_t>> product;
  std::vector<std::vector<IntVector>> correction;
  std::vector<std::size_t> inverse;

  std::size_t order() const { return product.size(); }
};
QuotientTable quotient_table(const CrystGroup &g);

} // namespace nvfix
