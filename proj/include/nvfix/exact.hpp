#pragma once

// Exact rational linear algebra and integer lattice algorithms.
//
// Everything here is a pure function on immutable values. Integers and
// rationals are GMP-backed (mpz_class / mpq_class). Arithmetic results are
// canonical; Rational(p, q) built from two integers is not until
// canonicalize() is called.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "nvfix/errors.hpp"

namespace nvfix {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational &q);
std::string format_integer(const Integer &z);

bool is_integral(const Rational &q);
Integer floor_div(const Integer &a, const Integer &b);
// Non-negative remainder for b > 0.
Integer mod_floor(const Integer &a, const Integer &b);
int sign(const Rational &q);

template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
      throw DimensionError("matrix data size does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>> &rows) {
    if (rows.empty())
      return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw DimensionError("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j)
        m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_,
                          data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      c[i] = (*this)(i, j);
    return c;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto &x : data_)
      if (x != 0)
        return false;
    return true;
  }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols_ != b.rows_)
      throw DimensionError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T &aik = a(i, k);
        if (aik == 0)
          continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix &a, const std::vector<T> &v) {
    if (a.cols_ != v.size())
      throw DimensionError("matrix-vector shape mismatch");
    std::vector<T> r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        r[i] += a(i, j) * v[j];
    return r;
  }

  // Row vector times matrix.
  friend std::vector<T> operator*(const std::vector<T> &v, const Matrix &a) {
    if (a.rows_ != v.size())
      throw DimensionError("vector-matrix shape mismatch");
    std::vector<T> r(a.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        r[j] += v[i] * a(i, j);
    return r;
  }

  friend Matrix operator+(const Matrix &a, const Matrix &b) {
    check_same(a, b);
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k)
      c.data_[k] += b.data_[k];
    return c;
  }

  friend Matrix operator-(const Matrix &a, const Matrix &b) {
    check_same(a, b);
    Matrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k)
      c.data_[k] -= b.data_[k];
    return c;
  }

  Matrix scaled(const T &s) const {
    Matrix c = *this;
    for (auto &x : c.data_)
      x *= s;
    return c;
  }

private:
  static void check_same(const Matrix &a, const Matrix &b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw DimensionError("matrix sum shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

RatMatrix to_rational(const IntMatrix &m);
RatVector to_rational(const IntVector &v);
// Throws std::domain_error if some entry is not an integer.
IntMatrix to_integer(const RatMatrix &m);
IntVector to_integer(const RatVector &v);
std::optional<IntVector> try_integer(const RatVector &v);

RatVector add(const RatVector &a, const RatVector &b);
RatVector subtract(const RatVector &a, const RatVector &b);
RatVector negate(const RatVector &a);
RatVector scale(const RatVector &a, const Rational &s);
bool is_zero(const RatVector &v);

Rational det(const RatMatrix &m);
Integer det(const IntMatrix &m);
std::size_t rank(const RatMatrix &m);
std::optional<RatMatrix> inverse(const RatMatrix &m);

/// Row-style Hermite normal form: U*M = H with U unimodular, H upper
/// echelon, pivots positive, entries above each pivot reduced into
/// [0, pivot). Zero rows of H are at the bottom.
struct HermiteForm {
  IntMatrix H;
  IntMatrix U;
  std::size_t rank = 0;
};
HermiteForm hnf(const IntMatrix &m);

/// Smith normal form: U*M*V = diag(d_1, d_2, ...) with d_1 | d_2 | ...,
/// d_k >= 0, and U, V unimodular. Zero factors (rank deficiency) trail.
struct SmithForm {
  std::vector<Integer> factors; // length min(rows, cols)
  IntMatrix U;
  IntMatrix V;
};
SmithForm snf(const IntMatrix &m);

/// A full-rank lattice in Q^m, stored through a canonical basis so that
/// equal lattices compare equal. Basis vectors are the rows of basis().
class Lattice {
public:
  Lattice() = default;
  // Lattice generated by the given vectors; throws DimensionError if they
  // do not span a full-rank lattice of the given dimension.
  Lattice(std::size_t dim, const std::vector<RatVector> &generators);

  static Lattice standard(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const RatMatrix &basis() const { return basis_; }
  std::vector<RatVector> basis_vectors() const;

  // Integer coordinates c with c * basis() == v, if v is in the lattice.
  std::optional<IntVector> coordinates(const RatVector &v) const;
  bool contains(const RatVector &v) const {
    return coordinates(v).has_value();
  }
  bool contains(const Lattice &sub) const;
  // [*this : sub], requires sub to be a sublattice.
  Integer index_of(const Lattice &sub) const;
  // |det basis|, the covolume.
  Rational covolume() const;

  Lattice scaled(const Rational &s) const;
  // Image under an invertible linear map (column-vector convention A*v).
  Lattice transformed(const RatMatrix &a) const;
  Lattice dual() const;

  friend bool operator==(const Lattice &a, const Lattice &b) {
    return a.dim_ == b.dim_ && a.basis_ == b.basis_;
  }

private:
  std::size_t dim_ = 0;
  RatMatrix basis_;
  RatMatrix inverse_;
};

Lattice lattice_sum(const Lattice &a, const Lattice &b);
Lattice lattice_intersect(const Lattice &a, const Lattice &b);

/// The set { t in L : A t = b }: empty, or point + integer span of
/// directions (directions may be rank deficient, possibly empty).
struct AffineLatticeSolution {
  bool empty = true;
  RatVector point;
  std::vector<RatVector> directions;

  bool single_point() const { return !empty && directions.empty(); }
};
AffineLatticeSolution solve_affine_lattice(const RatMatrix &a,
                                           const RatVector &b,
                                           const Lattice &lattice);

/// target / span(images); invariant factors with 0 meaning an infinite
/// cyclic summand. Classes are normalized in Smith coordinates
/// y = x * V with x the target-lattice coordinates.
struct CokernelStructure {
  std::vector<Integer> invariant_factors; // length = target dimension
  IntMatrix V;
  IntMatrix V_inverse;

  bool finite() const;
  // Product of the invariant factors; only meaningful when finite().
  Integer order() const;
  // Reduced Smith coordinates of a target-coordinate vector.
  IntVector normal_form(const IntVector &target_coords) const;
  // Target coordinates of the canonical representative of its class.
  IntVector canonical(const IntVector &target_coords) const;
  // Target coordinates of one representative per class, in lexicographic
  // order of their Smith coordinates. Throws std::logic_error if infinite.
  std::vector<IntVector> representatives() const;
};
CokernelStructure cokernel(std::span<const RatVector> images,
                           const Lattice &target);
// Same, from an integer coordinate matrix whose rows span the relations.
CokernelStructure cokernel_of_relations(const IntMatrix &relations,
                                        std::size_t dim);

int compare(const IntVector &a, const IntVector &b);

} // namespace nvfix
