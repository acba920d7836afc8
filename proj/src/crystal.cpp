#include "nvfix/crystal.hpp"

#include <sstream>

namespace nvfix {

AffineElement AffineElement::identity(std::size_t dim) {
  return {RatVector(dim), RatMatrix::identity(dim)};
}

AffineElement AffineElement::pure_translation(RatVector t) {
  const std::size_t n = t.size();
  return {std::move(t), RatMatrix::identity(n)};
}

bool AffineElement::is_identity() const {
  return is_translation() && is_zero(translation);
}

bool AffineElement::is_translation() const {
  return linear == RatMatrix::identity(translation.size());
}

RatVector AffineElement::apply(const RatVector &x) const {
  return add(linear * x, translation);
}

AffineElement compose(const AffineElement &g, const AffineElement &h) {
  if (g.dim() != h.dim())
    throw DimensionError("compose: dimension mismatch");
  return {add(g.translation, g.linear * h.translation), g.linear * h.linear};
}

AffineElement invert(const AffineElement &g) {
  auto inv = inverse(g.linear);
  if (!inv)
    throw std::domain_error("invert: singular linear part");
  return {negate(*inv * g.translation), *inv};
}

AffineElement power(const AffineElement &g, long exponent) {
  AffineElement base = exponent < 0 ? invert(g) : g;
  unsigned long e = exponent < 0 ? -static_cast<unsigned long>(exponent)
                                 : static_cast<unsigned long>(exponent);
  AffineElement acc = AffineElement::identity(g.dim());
  while (e > 0) {
    if (e & 1UL)
      acc = compose(acc, base);
    e >>= 1;
    if (e > 0)
      base = compose(base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------

CrystGroup::CrystGroup(std::size_t dim, std::vector<RatVector> lattice_basis,
                       std::vector<std::string> lattice_names,
                       std::vector<HolonomyRep> reps)
    : dim_(dim), basis_(std::move(lattice_basis)),
      names_(std::move(lattice_names)) {
  if (basis_.size() != dim_)
    throw DimensionError("lattice basis must have exactly dim vectors");
  if (names_.empty())
    for (std::size_t i = 0; i < dim_; ++i)
      names_.push_back("t" + std::to_string(i + 1));
  if (names_.size() != dim_)
    throw DimensionError("one name per lattice basis vector");
  basis_matrix_ = RatMatrix(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (basis_[i].size() != dim_)
      throw DimensionError("lattice basis vector has wrong dimension");
    for (std::size_t j = 0; j < dim_; ++j)
      basis_matrix_(i, j) = basis_[i][j];
  }
  auto inv = inverse(basis_matrix_);
  if (!inv)
    throw ValidationError("lattice basis is not linearly independent");
  basis_inverse_ = *inv;
  lattice_ = Lattice(dim_, basis_);

  reps_.push_back({"1", AffineElement::identity(dim_)});
  for (auto &r : reps) {
    if (r.element.dim() != dim_ || r.element.linear.rows() != dim_ ||
        !r.element.linear.square())
      throw DimensionError("holonomy rep '" + r.name + "' has wrong dimension");
    reps_.push_back(std::move(r));
  }
}

std::string CrystGroup::generator_name(std::size_t g) const {
  if (g < dim_)
    return names_[g];
  return reps_.at(g - dim_ + 1).name;
}

AffineElement CrystGroup::generator(std::size_t g) const {
  if (g < dim_)
    return AffineElement::pure_translation(basis_[g]);
  return reps_.at(g - dim_ + 1).element;
}

std::size_t CrystGroup::find_generator(const std::string &name) const {
  for (std::size_t g = 0; g < generator_count(); ++g)
    if (generator_name(g) == name)
      return g;
  return generator_count();
}

std::optional<IntVector> CrystGroup::lattice_coords(const RatVector &t) const {
  if (t.size() != dim_)
    throw DimensionError("lattice_coords: dimension mismatch");
  return try_integer(t * basis_inverse_);
}

RatVector CrystGroup::lattice_vector(const IntVector &coords) const {
  return to_rational(coords) * basis_matrix_;
}

RatMatrix CrystGroup::in_lattice_coords(const RatMatrix &a) const {
  // Column convention: v = B^T c, so c' = (B^T)^{-1} A B^T c.
  return basis_inverse_.transposed() * a * basis_matrix_.transposed();
}

std::size_t CrystGroup::rep_for_linear(const RatMatrix &linear) const {
  for (std::size_t r = 0; r < reps_.size(); ++r)
    if (reps_[r].element.linear == linear)
      return r;
  return reps_.size();
}

Decomposition CrystGroup::decompose(const AffineElement &g) const {
  if (g.dim() != dim_)
    throw DimensionError("decompose: dimension mismatch");
  const std::size_t r = rep_for_linear(g.linear);
  if (r == reps_.size())
    throw NotMember("linear part matches no holonomy representative");
  auto coords =
      lattice_coords(subtract(g.translation, reps_[r].element.translation));
  if (!coords)
    throw NotMember("translation offset is not in the lattice");
  return {std::move(*coords), r};
}

AffineElement CrystGroup::reconstruct(const Decomposition &d) const {
  return compose(AffineElement::pure_translation(lattice_vector(d.lattice_coords)),
                 reps_.at(d.rep_index).element);
}

bool CrystGroup::contains(const AffineElement &g) const {
  try {
    decompose(g);
    return true;
  } catch (const NotMember &) {
    return false;
  }
}

AffineElement CrystGroup::evaluate(const Word &w) const {
  AffineElement acc = AffineElement::identity(dim_);
  for (const auto &l : w)
    acc = compose(acc, power(generator(l.generator), l.exponent));
  return acc;
}

std::string CrystGroup::format_word(const Word &w) const {
  if (w.empty())
    return "1";
  std::ostringstream os;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k)
      os << '*';
    os << generator_name(w[k].generator);
    if (w[k].exponent != 1)
      os << '^' << w[k].exponent;
  }
  return os.str();
}

Word CrystGroup::lattice_word(const IntVector &coords) const {
  Word w;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0) {
      if (!coords[i].fits_slong_p())
        throw std::overflow_error("lattice coordinate too large for a word");
      w.push_back({i, coords[i].get_si()});
    }
  return w;
}

// ---------------------------------------------------------------------------

ValidationReport validate_group(const CrystGroup &g) {
  ValidationReport rep;
  const auto &reps = g.reps();
  if (reps.empty() || !reps[0].element.is_identity())
    rep.problems.push_back("first holonomy representative must be the identity");
  for (std::size_t a = 0; a < reps.size(); ++a) {
    const auto &h = reps[a].element;
    if (det(h.linear) == 0) {
      rep.problems.push_back("holonomy rep '" + reps[a].name +
                             "' has a singular linear part");
      continue;
    }
    for (std::size_t b = a + 1; b < reps.size(); ++b)
      if (reps[b].element.linear == h.linear)
        rep.problems.push_back("holonomy clash: reps '" + reps[a].name +
                               "' and '" + reps[b].name +
                               "' share a linear part");
    // A_h Γ = Γ  ⇔  A_h in Γ-coordinates is integral with det ±1
    RatMatrix c = g.in_lattice_coords(h.linear);
    bool integral = true;
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j)
        integral = integral && is_integral(c(i, j));
    if (!integral || abs(det(c)) != 1)
      rep.problems.push_back("normality: linear part of '" + reps[a].name +
                             "' does not preserve the lattice");
  }
  if (!rep.ok())
    return rep;
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      if (!g.contains(compose(reps[a].element, reps[b].element)))
        rep.problems.push_back("closure: product of '" + reps[a].name +
                               "' and '" + reps[b].name +
                               "' is not lattice times a rep");
  return rep;
}

std::vector<Word> relators(const CrystGroup &g) {
  const std::size_t m = g.dim();
  std::vector<Word> out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      out.push_back({{i, 1}, {j, 1}, {i, -1}, {j, -1}});

  const auto &reps = g.reps();
  for (std::size_t r = 1; r < reps.size(); ++r) {
    const std::size_t hg = g.rep_generator(r);
    for (std::size_t i = 0; i < m; ++i) {
      auto image = g.lattice_coords(reps[r].element.linear * g.lattice_basis()[i]);
      if (!image)
        throw ValidationError("relators: group is not normal in its lattice");
      Word w{{hg, 1}, {i, 1}, {hg, -1}};
      for (auto l : g.lattice_word(*image)) {
        l.exponent = -l.exponent;
        w.push_back(l);
      }
      // h a h^-1 = t  written as  h a h^-1 t^-1 (t commutes, order irrelevant)
      out.push_back(std::move(w));
    }
  }
  for (std::size_t a = 1; a < reps.size(); ++a)
    for (std::size_t b = 1; b < reps.size(); ++b) {
      auto d = g.decompose(compose(reps[a].element, reps[b].element));
      // h_a h_b = t h_c  ⇒  h_a h_b h_c^-1 t^-1 = 1
      Word w{{g.rep_generator(a), 1}, {g.rep_generator(b), 1}};
      if (d.rep_index != 0)
        w.push_back({g.rep_generator(d.rep_index), -1});
      for (auto l : g.lattice_word(d.lattice_coords)) {
        l.exponent = -l.exponent;
        w.push_back(l);
      }
      out.push_back(std::move(w));
    }
  return out;
}

QuotientTable quotient_table(const CrystGroup &g) {
  const auto &reps = g.reps();
  const std::size_t k = reps.size();
  QuotientTable t;
  t.product.assign(k, std::vector<std::size_t>(k));
  t.correction.assign(k, std::vector<IntVector>(k));
  t.inverse.assign(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      Decomposition d;
      try {
        d = g.decompose(compose(reps[a].element, reps[b].element));
      } catch (const NotMember &) {
        throw ValidationError("quotient_table: closure failure for '" +
                              reps[a].name + "' * '" + reps[b].name + "'");
      }
      t.product[a][b] = d.rep_index;
      t.correction[a][b] = std::move(d.lattice_coords);
      if (d.rep_index == 0)
        t.inverse[a] = b;
    }
  for (std::size_t a = 0; a < k; ++a)
    if (t.inverse[a] == k)
      throw ValidationError("quotient_table: rep '" + reps[a].name +
                            "' has no inverse coset");
  return t;
}

} // namespace nvfix
