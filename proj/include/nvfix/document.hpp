#pragma once

// JSON input documents and result serialization.

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "nvfix/oracle.hpp"

namespace nvfix {

using Json = nlohmann::json;

struct DocumentOptions {
  unsigned bound_scale = 1;
  std::size_t max_candidates = 5'000'000;
  std::size_t distinctness_grid = 6;
  bool verify_witnesses = true;
};

struct InputDocument {
  CrystGroup group;
  std::size_t n = 1;
  // images in generator order; empty when the morphism block is missing
  std::vector<PermutedTuple> images;
  std::optional<AffineLift> lift;
  DocumentOptions options;

  NvMorphism morphism() const { return NvMorphism(group, n, images); }
};

/// Throws ParseError on malformed input (including shape errors).
InputDocument parse_document(const Json &doc);
InputDocument load_document(const std::string &path);

/// Parses "a^2*b^-1" style words; "1" is the empty word.
Word parse_word(const CrystGroup &g, const std::string &text);

Json rational_json(const Rational &q);
Json integer_json(const Integer &z);
Json vector_json(const RatVector &v);
Json int_vector_json(const IntVector &v);
Json matrix_json(const RatMatrix &m);
Json element_json(const CrystGroup &g, const AffineElement &e);

// {branch, holonomy_rep, lattice_coords, coefficient}, 1-based branches,
// sorted canonically
Json trace_json(const CrystGroup &g, const TraceVector &t);

struct AlgebraicResult {
  InvariantData inv;
  Integer lefschetz;
  Integer nielsen;
  std::optional<TraceVector> trace;
};

enum class Invariant { lefschetz, nielsen, trace, all };
Invariant parse_invariant(const std::string &name);

AlgebraicResult compute_algebraic(const NvMorphism &f, Invariant which,
                                  const DocumentOptions &options,
                                  Execution exec = Execution::parallel);
Json algebraic_json(const NvMorphism &f, const AlgebraicResult &r,
                    Invariant which);

Json oracle_json(const NvMorphism &f, const OracleResult &r,
                 const LiftReport &lift_report);

} // namespace nvfix
