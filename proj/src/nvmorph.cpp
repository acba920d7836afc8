#include "nvfix/nvmorph.hpp"

#include <algorithm>
#include <numeric>

#include "nvfix/schreier.hpp"

namespace nvfix {

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

Permutation compose(const Permutation &s, const Permutation &t) {
  if (s.size() != t.size())
    throw DimensionError("permutation size mismatch");
  Permutation r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    r[i] = s[t[i]];
  return r;
}

Permutation invert(const Permutation &s) {
  Permutation r(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    r[s[i]] = i;
  return r;
}

bool is_permutation(const Permutation &s) {
  std::vector<bool> seen(s.size(), false);
  for (auto x : s) {
    if (x >= s.size() || seen[x])
      return false;
    seen[x] = true;
  }
  return true;
}

namespace {

Permutation permutation_power(const Permutation &p, const Integer &e) {
  const std::size_t n = p.size();
  Permutation r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (r[i] != n)
      continue;
    std::vector<std::size_t> cycle{i};
    for (std::size_t j = p[i]; j != i; j = p[j])
      cycle.push_back(j);
    const Integer len = static_cast<unsigned long>(cycle.size());
    const unsigned long shift = mod_floor(e, len).get_ui();
    for (std::size_t k = 0; k < cycle.size(); ++k)
      r[cycle[k]] = cycle[(k + shift) % cycle.size()];
  }
  return r;
}

Lattice ambient_lattice(const CrystGroup &g, const Lattice &coord_lattice) {
  std::vector<RatVector> vs;
  for (const auto &row : coord_lattice.basis_vectors())
    vs.push_back(row * g.basis_matrix());
  return Lattice(g.dim(), vs);
}

} // namespace

// ---------------------------------------------------------------------------

PermutedTuple PermutedTuple::identity(std::size_t n, std::size_t dim) {
  return {std::vector<AffineElement>(n, AffineElement::identity(dim)),
          identity_permutation(n)};
}

bool PermutedTuple::is_identity() const {
  if (perm != identity_permutation(perm.size()))
    return false;
  return std::all_of(components.begin(), components.end(),
                     [](const AffineElement &a) { return a.is_identity(); });
}

PermutedTuple semidirect_mul(const PermutedTuple &x, const PermutedTuple &y) {
  const std::size_t n = x.size();
  if (y.size() != n || x.perm.size() != n || y.perm.size() != n)
    throw DimensionError("semidirect product: tuple size mismatch");
  const Permutation xinv = invert(x.perm);
  PermutedTuple r;
  r.components.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    r.components.push_back(compose(x.components[i], y.components[xinv[i]]));
  r.perm = compose(x.perm, y.perm);
  return r;
}

PermutedTuple semidirect_inv(const PermutedTuple &x) {
  // (α;σ)^{-1} = (β;σ^{-1}) with β_j = α_{σ(j)}^{-1}
  const std::size_t n = x.size();
  PermutedTuple r;
  r.components.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    r.components.push_back(invert(x.components[x.perm[j]]));
  r.perm = invert(x.perm);
  return r;
}

PermutedTuple semidirect_pow(const PermutedTuple &x, const Integer &exponent) {
  const std::size_t dim = x.components.empty() ? 0 : x.components[0].dim();
  PermutedTuple base = exponent < 0 ? semidirect_inv(x) : x;
  Integer e = abs(exponent);
  PermutedTuple acc = PermutedTuple::identity(x.size(), dim);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t()))
      acc = semidirect_mul(acc, base);
    e >>= 1;
    if (e > 0)
      base = semidirect_mul(base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------

NvMorphism::NvMorphism(CrystGroup group, std::size_t n,
                       std::vector<PermutedTuple> images)
    : group_(std::move(group)), n_(n), images_(std::move(images)) {
  if (n_ == 0)
    throw DimensionError("an n-valued morphism needs n >= 1");
  if (images_.size() != group_.generator_count())
    throw DimensionError("one image per generator is required");
  for (std::size_t g = 0; g < images_.size(); ++g) {
    const auto &t = images_[g];
    if (t.components.size() != n_ || t.perm.size() != n_)
      throw DimensionError("image of '" + group_.generator_name(g) +
                           "' has the wrong number of components");
    if (!is_permutation(t.perm))
      throw ValidationError("image of '" + group_.generator_name(g) +
                            "' has an invalid permutation");
    for (const auto &c : t.components)
      if (c.dim() != group_.dim() || c.linear.rows() != group_.dim())
        throw DimensionError("image of '" + group_.generator_name(g) +
                             "' has a component of the wrong dimension");
  }
}

PermutedTuple NvMorphism::evaluate(const Decomposition &d) const {
  PermutedTuple acc = PermutedTuple::identity(n_, group_.dim());
  for (std::size_t k = 0; k < d.lattice_coords.size(); ++k)
    if (d.lattice_coords[k] != 0)
      acc = semidirect_mul(acc, semidirect_pow(images_[k], d.lattice_coords[k]));
  if (d.rep_index != 0)
    acc = semidirect_mul(acc, images_[group_.rep_generator(d.rep_index)]);
  return acc;
}

PermutedTuple NvMorphism::evaluate(const AffineElement &g) const {
  return evaluate(group_.decompose(g));
}

PermutedTuple NvMorphism::evaluate(const Word &w) const {
  PermutedTuple acc = PermutedTuple::identity(n_, group_.dim());
  for (const auto &l : w)
    acc = semidirect_mul(acc, semidirect_pow(images_.at(l.generator),
                                             Integer(l.exponent)));
  return acc;
}

Permutation NvMorphism::lattice_sigma(const IntVector &coords) const {
  Permutation p = identity_permutation(n_);
  for (std::size_t k = 0; k < coords.size(); ++k)
    if (coords[k] != 0)
      p = compose(p, permutation_power(images_[k].perm, coords[k]));
  return p;
}

Permutation NvMorphism::sigma(const Decomposition &d) const {
  Permutation p = lattice_sigma(d.lattice_coords);
  if (d.rep_index != 0)
    p = compose(p, images_[group_.rep_generator(d.rep_index)].perm);
  return p;
}

Permutation NvMorphism::sigma(const AffineElement &g) const {
  return sigma(group_.decompose(g));
}

AffineElement NvMorphism::phi(std::size_t i, const AffineElement &g) const {
  return evaluate(g).components.at(i);
}

// ---------------------------------------------------------------------------

ValidationReport validate_morphism(const NvMorphism &f) {
  ValidationReport rep = validate_group(f.group());
  if (!rep.ok())
    return rep;
  const auto &g = f.group();
  for (std::size_t k = 0; k < f.images().size(); ++k)
    for (std::size_t i = 0; i < f.n(); ++i)
      if (!g.contains(f.images()[k].components[i]))
        rep.problems.push_back("component " + std::to_string(i + 1) +
                               " of the image of '" + g.generator_name(k) +
                               "' is not in the group");
  if (!rep.ok())
    return rep;
  for (const auto &r : relators(g))
    if (!f.evaluate(r).is_identity())
      rep.problems.push_back("relator " + g.format_word(r) +
                             " does not map to the identity");
  return rep;
}

Integer SubgroupData::index_in(const CrystGroup &g) const {
  const Integer lattice_index = g.lattice().index_of(lattice_part);
  const Integer holo = static_cast<unsigned long>(g.holonomy_order());
  const Integer meets = static_cast<unsigned long>(rep_indices.size());
  return lattice_index * holo / meets;
}

SubgroupData sigma_kernel(const NvMorphism &f) {
  const auto &g = f.group();
  const std::size_t m = g.dim();
  auto orbit = lattice_orbit(m, identity_permutation(f.n()),
                             [&](const Permutation &p, std::size_t k) {
                               return compose(p, f.images()[k].perm);
                             });
  SubgroupData out{ambient_lattice(g, orbit.stabilizer_lattice(m)), {}, {}};
  for (std::size_t r = 0; r < g.reps().size(); ++r) {
    const Permutation target =
        invert(r == 0 ? identity_permutation(f.n())
                      : f.images()[g.rep_generator(r)].perm);
    auto it = std::find(orbit.states.begin(), orbit.states.end(), target);
    if (it == orbit.states.end())
      continue;
    const auto q = static_cast<std::size_t>(it - orbit.states.begin());
    out.rep_indices.push_back(r);
    out.coset_witnesses.push_back(g.reconstruct({orbit.transversal[q], r}));
  }
  return out;
}

SubgroupData stabilizer(const NvMorphism &f, std::size_t i) {
  if (i >= f.n())
    throw DimensionError("stabilizer: branch index out of range");
  const auto &g = f.group();
  const std::size_t m = g.dim();
  auto orbit = lattice_orbit(m, i, [&](std::size_t j, std::size_t k) {
    return f.images()[k].perm[j];
  });
  SubgroupData out{ambient_lattice(g, orbit.stabilizer_lattice(m)), {}, {}};
  for (std::size_t r = 0; r < g.reps().size(); ++r) {
    const std::size_t j = r == 0 ? i : f.images()[g.rep_generator(r)].perm[i];
    auto it = std::find(orbit.states.begin(), orbit.states.end(), j);
    if (it == orbit.states.end())
      continue;
    IntVector t = orbit.transversal[it - orbit.states.begin()];
    for (auto &x : t)
      x = -x;
    out.rep_indices.push_back(r);
    out.coset_witnesses.push_back(g.reconstruct({std::move(t), r}));
  }
  return out;
}

std::vector<Orbit> orbit_partition(const NvMorphism &f) {
  const std::size_t n = f.n();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto &img : f.images())
    for (std::size_t i = 0; i < n; ++i) {
      auto a = find(i), b = find(img.perm[i]);
      if (a != b)
        parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<Orbit> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (find(i) != i)
      continue;
    Orbit o;
    for (std::size_t j = 0; j < n; ++j)
      if (find(j) == i)
        o.members.push_back(j);
    o.stabilizer_index = stabilizer(f, i).index_in(f.group());
    if (o.stabilizer_index != static_cast<unsigned long>(o.members.size()))
      throw InconsistencyError("orbit-stabilizer mismatch for branch " +
                               std::to_string(i + 1));
    out.push_back(std::move(o));
  }
  return out;
}

RatMatrix linearize(const NvMorphism &f, std::size_t i, const Lattice &sub) {
  const auto &g = f.group();
  const std::size_t m = g.dim();
  if (sub.dim() != m)
    throw DimensionError("linearize: lattice dimension mismatch");
  if (i >= f.n())
    throw DimensionError("linearize: branch index out of range");
  RatMatrix bt = sub.basis().transposed();
  RatMatrix wt(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    RatVector lambda = sub.basis().row(k);
    auto coords = g.lattice_coords(lambda);
    if (!coords)
      throw PreconditionError("linearize: basis vector not in the lattice",
                              lambda);
    const Decomposition d{*coords, 0};
    if (f.sigma(d)[i] != i)
      throw PreconditionError("linearize: basis vector outside the stabilizer",
                              lambda);
    const AffineElement img = f.evaluate(d).components[i];
    if (!img.is_translation())
      throw PreconditionError(
          "linearize: image of basis vector is not a pure translation", lambda);
    for (std::size_t r = 0; r < m; ++r)
      wt(r, k) = img.translation[r];
  }
  return wt * *inverse(bt);
}

NvMorphism conjugate(const NvMorphism &f, const PermutedTuple &c) {
  if (c.size() != f.n() || !is_permutation(c.perm))
    throw DimensionError("conjugate: tuple does not match the morphism");
  for (const auto &x : c.components)
    if (!f.group().contains(x))
      throw ValidationError("conjugate: component not in the group");
  const PermutedTuple cinv = semidirect_inv(c);
  std::vector<PermutedTuple> images;
  for (const auto &img : f.images())
    images.push_back(semidirect_mul(semidirect_mul(c, img), cinv));
  return NvMorphism(f.group(), f.n(), std::move(images));
}

} // namespace nvfix
