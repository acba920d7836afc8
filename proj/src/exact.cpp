#include "nvfix/exact.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace nvfix {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string &x) {
    auto b = x.find_first_not_of(" \t");
    auto e = x.find_last_not_of(" \t");
    x = b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty())
    throw std::invalid_argument("empty rational");
  if (s.front() == '+')
    s.erase(0, 1);
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto valid = [](const std::string &x, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < x.size() && x[i] == '-')
      ++i;
    if (i == x.size())
      return false;
    for (; i < x.size(); ++i)
      if (x[i] < '0' || x[i] > '9')
        return false;
    return true;
  };
  if (!valid(num, true) || !valid(den, false))
    throw std::invalid_argument("malformed rational '" + std::string(text) +
                                "'");
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0)
    throw std::invalid_argument("zero denominator in '" + std::string(text) +
                                "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational &q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str(10);
}
std::string format_integer(const Integer &z) { return z.get_str(10); }

bool is_integral(const Rational &q) { return q.get_den() == 1; }

Integer floor_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer mod_floor(const Integer &a, const Integer &b) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

int sign(const Rational &q) { return sgn(q); }

RatMatrix to_rational(const IntMatrix &m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = Rational(m(i, j));
  return r;
}

RatVector to_rational(const IntVector &v) {
  RatVector r;
  r.reserve(v.size());
  for (const auto &x : v)
    r.emplace_back(x);
  return r;
}

IntMatrix to_integer(const RatMatrix &m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!is_integral(m(i, j)))
        throw std::domain_error("matrix entry is not an integer");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

std::optional<IntVector> try_integer(const RatVector &v) {
  IntVector r;
  r.reserve(v.size());
  for (const auto &x : v) {
    if (!is_integral(x))
      return std::nullopt;
    r.push_back(x.get_num());
  }
  return r;
}

IntVector to_integer(const RatVector &v) {
  auto r = try_integer(v);
  if (!r)
    throw std::domain_error("vector entry is not an integer");
  return *r;
}

RatVector add(const RatVector &a, const RatVector &b) {
  if (a.size() != b.size())
    throw DimensionError("vector sum length mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] + b[i];
  return r;
}

RatVector subtract(const RatVector &a, const RatVector &b) {
  if (a.size() != b.size())
    throw DimensionError("vector difference length mismatch");
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] - b[i];
  return r;
}

RatVector negate(const RatVector &a) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = -a[i];
  return r;
}

RatVector scale(const RatVector &a, const Rational &s) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] * s;
  return r;
}

bool is_zero(const RatVector &v) {
  return std::all_of(v.begin(), v.end(), [](const Rational &x) { return x == 0; });
}

int compare(const IntVector &a, const IntVector &b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0)
      return c < 0 ? -1 : 1;
  }
  if (a.size() == b.size())
    return 0;
  return a.size() < b.size() ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Gaussian elimination

namespace {

// Reduces m in place to row echelon form; returns (rank, sign of the row
// permutation, pivot product) where the product is over the first `rank`
// pivots.
struct Elimination {
  std::size_t rank = 0;
  int swaps_sign = 1;
  Rational pivot_product = 1;
};

Elimination eliminate(RatMatrix &m) {
  Elimination e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0)
      ++p;
    if (p == m.rows())
      continue;
    if (p != row) {
      for (std::size_t j = 0; j < m.cols(); ++j)
        std::swap(m(p, j), m(row, j));
      e.swaps_sign = -e.swaps_sign;
    }
    const Rational pivot = m(row, col);
    e.pivot_product *= pivot;
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      if (m(i, col) == 0)
        continue;
      const Rational f = m(i, col) / pivot;
      for (std::size_t j = col; j < m.cols(); ++j)
        m(i, j) -= f * m(row, j);
    }
    ++row;
  }
  e.rank = row;
  return e;
}

} // namespace

Rational det(const RatMatrix &m) {
  if (!m.square())
    throw DimensionError("determinant of a non-square matrix");
  if (m.rows() == 0)
    return 1;
  RatMatrix w = m;
  auto e = eliminate(w);
  if (e.rank < m.rows())
    return 0;
  return e.swaps_sign * e.pivot_product;
}

Integer det(const IntMatrix &m) {
  Rational d = det(to_rational(m));
  return d.get_num();
}

std::size_t rank(const RatMatrix &m) {
  RatMatrix w = m;
  return eliminate(w).rank;
}

std::optional<RatMatrix> inverse(const RatMatrix &m) {
  if (!m.square())
    throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a(p, col) == 0)
      ++p;
    if (p == n)
      return std::nullopt;
    if (p != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(col, j));
        std::swap(inv(p, j), inv(col, j));
      }
    const Rational pivot = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= pivot;
      inv(col, j) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0)
        continue;
      const Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Integer normal forms

namespace {

void swap_rows(IntMatrix &m, std::size_t a, std::size_t b) {
  if (a == b)
    return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix &m, std::size_t a, std::size_t b) {
  if (a == b)
    return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    std::swap(m(i, a), m(i, b));
}

// row_dst -= q * row_src
void row_axpy(IntMatrix &m, std::size_t dst, std::size_t src, const Integer &q) {
  if (q == 0)
    return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    m(dst, j) -= q * m(src, j);
}

void col_axpy(IntMatrix &m, std::size_t dst, std::size_t src, const Integer &q) {
  if (q == 0)
    return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    m(i, dst) -= q * m(i, src);
}

void negate_row(IntMatrix &m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    m(r, j) = -m(r, j);
}

// Replace rows (r, s) by (x*r + y*s, u*r + v*s) where x*v - y*u = 1.
void row_combine(IntMatrix &m, std::size_t r, std::size_t s, const Integer &x,
                 const Integer &y, const Integer &u, const Integer &v) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    Integer a = m(r, j), b = m(s, j);
    m(r, j) = x * a + y * b;
    m(s, j) = u * a + v * b;
  }
}

} // namespace

HermiteForm hnf(const IntMatrix &m) {
  HermiteForm out{m, IntMatrix::identity(m.rows()), 0};
  IntMatrix &H = out.H;
  IntMatrix &U = out.U;
  std::size_t row = 0;
  for (std::size_t col = 0; col < H.cols() && row < H.rows(); ++col) {
    for (std::size_t i = row + 1; i < H.rows(); ++i) {
      if (H(i, col) == 0)
        continue;
      if (H(row, col) == 0) {
        swap_rows(H, row, i);
        swap_rows(U, row, i);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                 H(row, col).get_mpz_t(), H(i, col).get_mpz_t());
      Integer u = -H(i, col) / g;
      Integer v = H(row, col) / g;
      row_combine(H, row, i, s, t, u, v);
      row_combine(U, row, i, s, t, u, v);
    }
    if (H(row, col) == 0)
      continue;
    if (H(row, col) < 0) {
      negate_row(H, row);
      negate_row(U, row);
    }
    for (std::size_t i = 0; i < row; ++i) {
      Integer q = floor_div(H(i, col), H(row, col));
      row_axpy(H, i, row, q);
      row_axpy(U, i, row, q);
    }
    ++row;
  }
  out.rank = row;
  return out;
}

SmithForm snf(const IntMatrix &m) {
  IntMatrix D = m;
  IntMatrix U = IntMatrix::identity(m.rows());
  IntMatrix V = IntMatrix::identity(m.cols());
  const std::size_t r = m.rows(), c = m.cols();
  const std::size_t n = std::min(r, c);

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // Smallest non-zero entry of the trailing block becomes the pivot.
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (D(i, j) != 0 &&
              (pi == r ||
               mpz_cmpabs(D(i, j).get_mpz_t(), D(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
      if (pi == r)
        break;
      swap_rows(D, t, pi);
      swap_rows(U, t, pi);
      swap_cols(D, t, pj);
      swap_cols(V, t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (D(i, t) == 0)
          continue;
        Integer q = floor_div(D(i, t), D(t, t));
        row_axpy(D, i, t, q);
        row_axpy(U, i, t, q);
        if (D(i, t) != 0)
          clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (D(t, j) == 0)
          continue;
        Integer q = floor_div(D(t, j), D(t, t));
        col_axpy(D, j, t, q);
        col_axpy(V, j, t, q);
        if (D(t, j) != 0)
          clean = false;
      }
      if (!clean)
        continue;

      // Divisibility: fold an offending row into the pivot row.
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (mod_floor(D(i, j), Integer(abs(D(t, t)))) != 0) {
            bad = i;
            break;
          }
      if (bad == r)
        break;
      row_axpy(D, t, bad, Integer(-1));
      row_axpy(U, t, bad, Integer(-1));
    }
    if (D(t, t) < 0) {
      negate_row(D, t);
      negate_row(U, t);
    }
  }

  SmithForm out;
  out.factors.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    out.factors[k] = D(k, k);
  out.U = std::move(U);
  out.V = std::move(V);
  return out;
}

// ---------------------------------------------------------------------------
// Lattices

namespace {

Integer lcm_of(const Integer &a, const Integer &b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer common_denominator(const std::vector<RatVector> &vs) {
  Integer d = 1;
  for (const auto &v : vs)
    for (const auto &x : v)
      d = lcm_of(d, Integer(x.get_den()));
  return d;
}

} // namespace

Lattice::Lattice(std::size_t dim, const std::vector<RatVector> &generators)
    : dim_(dim) {
  for (const auto &g : generators)
    if (g.size() != dim)
      throw DimensionError("lattice generator has wrong dimension");
  // The least D with D*L integral is the lcm of generator denominators, so
  // HNF(D*L)/D depends on the lattice only.
  const Integer den = common_denominator(generators);
  IntMatrix g(generators.size(), dim);
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Rational x = generators[i][j] * den;
      g(i, j) = x.get_num();
    }
  auto h = hnf(g);
  if (h.rank != dim)
    throw DimensionError("lattice generators do not span full rank");
  basis_ = RatMatrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      basis_(i, j) = Rational(h.H(i, j), den);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      basis_(i, j).canonicalize();
  inverse_ = *nvfix::inverse(basis_);
}

Lattice Lattice::standard(std::size_t dim) {
  std::vector<RatVector> e(dim, RatVector(dim));
  for (std::size_t i = 0; i < dim; ++i)
    e[i][i] = 1;
  return Lattice(dim, e);
}

std::vector<RatVector> Lattice::basis_vectors() const {
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < dim_; ++i)
    out.push_back(basis_.row(i));
  return out;
}

std::optional<IntVector> Lattice::coordinates(const RatVector &v) const {
  if (v.size() != dim_)
    throw DimensionError("lattice membership: dimension mismatch");
  return try_integer(v * inverse_);
}

bool Lattice::contains(const Lattice &sub) const {
  if (sub.dim_ != dim_)
    throw DimensionError("lattice containment: dimension mismatch");
  for (std::size_t i = 0; i < dim_; ++i)
    if (!contains(sub.basis_.row(i)))
      return false;
  return true;
}

Integer Lattice::index_of(const Lattice &sub) const {
  if (!contains(sub))
    throw std::invalid_argument("index_of: not a sublattice");
  Rational q = abs(det(sub.basis_) / det(basis_));
  return q.get_num();
}

Rational Lattice::covolume() const { return abs(det(basis_)); }

Lattice Lattice::scaled(const Rational &s) const {
  if (s == 0)
    throw std::invalid_argument("lattice scaled by zero");
  std::vector<RatVector> g;
  for (std::size_t i = 0; i < dim_; ++i)
    g.push_back(scale(basis_.row(i), s));
  return Lattice(dim_, g);
}

Lattice Lattice::transformed(const RatMatrix &a) const {
  if (!a.square() || a.rows() != dim_)
    throw DimensionError("lattice transform: dimension mismatch");
  std::vector<RatVector> g;
  for (std::size_t i = 0; i < dim_; ++i)
    g.push_back(a * basis_.row(i));
  return Lattice(dim_, g);
}

Lattice Lattice::dual() const {
  RatMatrix d = inverse_.transposed();
  std::vector<RatVector> g;
  for (std::size_t i = 0; i < dim_; ++i)
    g.push_back(d.row(i));
  return Lattice(dim_, g);
}

Lattice lattice_sum(const Lattice &a, const Lattice &b) {
  if (a.dim() != b.dim())
    throw DimensionError("lattice sum: dimension mismatch");
  auto g = a.basis_vectors();
  auto h = b.basis_vectors();
  g.insert(g.end(), h.begin(), h.end());
  return Lattice(a.dim(), g);
}

Lattice lattice_intersect(const Lattice &a, const Lattice &b) {
  if (a.dim() != b.dim())
    throw DimensionError("lattice intersection: dimension mismatch");
  // (A* + B*)* = A ∩ B
  return lattice_sum(a.dual(), b.dual()).dual();
}

// ---------------------------------------------------------------------------

AffineLatticeSolution solve_affine_lattice(const RatMatrix &a,
                                           const RatVector &b,
                                           const Lattice &lattice) {
  const std::size_t m = lattice.dim();
  if (a.cols() != m || b.size() != a.rows())
    throw DimensionError("solve_affine_lattice: dimension mismatch");
  // t = z * B  =>  (A B^T) z = b, cleared to integers row by row.
  RatMatrix c = a * lattice.basis().transposed();
  const std::size_t k = c.rows();
  IntMatrix ci(k, m);
  IntVector bi(k);
  for (std::size_t i = 0; i < k; ++i) {
    Integer den = b[i].get_den();
    for (std::size_t j = 0; j < m; ++j)
      den = lcm_of(den, Integer(c(i, j).get_den()));
    for (std::size_t j = 0; j < m; ++j)
      ci(i, j) = Rational(c(i, j) * den).get_num();
    bi[i] = Rational(b[i] * den).get_num();
  }
  auto s = snf(ci);
  IntVector ub = s.U * bi;
  IntVector w(m);
  std::size_t rank = 0;
  while (rank < s.factors.size() && s.factors[rank] != 0)
    ++rank;
  AffineLatticeSolution out;
  for (std::size_t i = 0; i < k; ++i) {
    if (i < rank) {
      if (mod_floor(ub[i], s.factors[i]) != 0)
        return out;
      w[i] = ub[i] / s.factors[i];
    } else if (ub[i] != 0) {
      return out;
    }
  }
  out.empty = false;
  IntVector z = s.V * w;
  out.point = to_rational(z) * lattice.basis();
  for (std::size_t j = rank; j < m; ++j)
    out.directions.push_back(to_rational(s.V.column(j)) * lattice.basis());
  return out;
}

// ---------------------------------------------------------------------------

bool CokernelStructure::finite() const {
  return std::none_of(invariant_factors.begin(), invariant_factors.end(),
                      [](const Integer &d) { return d == 0; });
}

Integer CokernelStructure::order() const {
  Integer p = 1;
  for (const auto &d : invariant_factors)
    p *= d;
  return p;
}

IntVector CokernelStructure::normal_form(const IntVector &target_coords) const {
  IntVector y = target_coords * V;
  for (std::size_t k = 0; k < y.size(); ++k)
    if (invariant_factors[k] != 0)
      y[k] = mod_floor(y[k], invariant_factors[k]);
  return y;
}

IntVector CokernelStructure::canonical(const IntVector &target_coords) const {
  return normal_form(target_coords) * V_inverse;
}

std::vector<IntVector> CokernelStructure::representatives() const {
  if (!finite())
    throw std::logic_error("cokernel is infinite; no finite enumerator");
  const std::size_t m = invariant_factors.size();
  std::vector<IntVector> out;
  IntVector y(m);
  while (true) {
    out.push_back(y * V_inverse);
    bool carry = true;
    for (std::size_t k = m; carry && k > 0;) {
      --k;
      y[k] += 1;
      if (y[k] < invariant_factors[k])
        carry = false;
      else
        y[k] = 0;
    }
    if (carry)
      break;
  }
  return out;
}

CokernelStructure cokernel_of_relations(const IntMatrix &relations,
                                        std::size_t dim) {
  CokernelStructure out;
  if (relations.rows() == 0) {
    out.invariant_factors.assign(dim, Integer(0));
    out.V = IntMatrix::identity(dim);
    out.V_inverse = out.V;
    return out;
  }
  if (relations.cols() != dim)
    throw DimensionError("cokernel: relation width mismatch");
  auto s = snf(relations);
  out.invariant_factors = s.factors;
  out.invariant_factors.resize(dim, Integer(0));
  out.V = s.V;
  out.V_inverse = to_integer(*inverse(to_rational(s.V)));
  return out;
}

CokernelStructure cokernel(std::span<const RatVector> images,
                           const Lattice &target) {
  IntMatrix rel(images.size(), target.dim());
  for (std::size_t i = 0; i < images.size(); ++i) {
    auto c = target.coordinates(images[i]);
    if (!c)
      throw std::invalid_argument("cokernel: image vector not in target");
    for (std::size_t j = 0; j < target.dim(); ++j)
      rel(i, j) = (*c)[j];
  }
  return cokernel_of_relations(rel, target.dim());
}

} // namespace nvfix
