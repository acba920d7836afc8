#pragma once

#include <stdexcept>
#include <string>

namespace nvfix {

// Shape mismatch between vectors, matrices, lattices or tuples.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An affine element that does not lie in the crystallographic group.
class NotMember : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// User-supplied data violating a structural invariant (group, morphism, lift).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A checked identity failed during computation: non-integral averages,
// fiber-count mismatches, verification of a constructed subgroup.
class InconsistencyError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The affine lift has a positive-dimensional fixed set.
class DegenerateFixedSet : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input document.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace nvfix
