#include "nvfix/averaging.hpp"

#include <omp.h>

#include "nvfix/schreier.hpp"

namespace nvfix {

namespace {

Lattice lattice_in_basis(const Lattice &coord_lattice, const RatMatrix &basis) {
  std::vector<RatVector> vs;
  for (const auto &row : coord_lattice.basis_vectors())
    vs.push_back(row * basis);
  return Lattice(basis.rows(), vs);
}

Integer to_integer_checked(const Rational &q, const char *what) {
  if (!is_integral(q))
    throw InconsistencyError(std::string(what) + " is not an integer: " +
                             format_rational(q));
  return q.get_num();
}

} // namespace

InvariantData invariant_subgroup(const NvMorphism &f) {
  const auto &g = f.group();
  const std::size_t m = g.dim();
  const Lattice L = sigma_kernel(f).lattice_part;
  const auto table = quotient_table(g);

  Lattice reduced = L;
  for (std::size_t i = 0; i < f.n(); ++i) {
    // φ_i is a homomorphism on ker σ; record the π/Γ class of each basis image
    std::vector<std::size_t> cls(m);
    for (std::size_t k = 0; k < m; ++k) {
      const auto coords = g.lattice_coords(L.basis().row(k));
      cls[k] = g.decompose(f.evaluate(Decomposition{*coords, 0}).components[i])
                   .rep_index;
    }
    auto orbit = lattice_orbit(m, std::size_t{0}, [&](std::size_t r, std::size_t k) {
      return table.product[r][cls[k]];
    });
    reduced = lattice_intersect(
        reduced, lattice_in_basis(orbit.stabilizer_lattice(m), L.basis()));
  }
  Lattice S = reduced;
  for (const auto &h : g.reps())
    S = lattice_intersect(S, reduced.transformed(h.element.linear));
  return make_invariant_data(f, S);
}

Lattice power_subgroup(const NvMorphism &f) {
  const auto &g = f.group();
  const auto ker = sigma_kernel(f);
  const long k = static_cast<long>(g.holonomy_order());
  std::vector<RatVector> gens;
  for (std::size_t q = 0; q < ker.rep_indices.size(); ++q) {
    const AffineElement &w = ker.coset_witnesses[q];
    gens.push_back(power(w, k).translation);
    // k-th powers of (s + t0)h differ from w^k by N_h s, N_h = Σ A_h^j
    RatMatrix nh(g.dim(), g.dim());
    RatMatrix aj = RatMatrix::identity(g.dim());
    for (long j = 0; j < k; ++j) {
      nh = nh + aj;
      aj = aj * w.linear;
    }
    for (const auto &s : ker.lattice_part.basis_vectors())
      gens.push_back(nh * s);
  }
  return Lattice(g.dim(), gens);
}

InvariantData make_invariant_data(
    const NvMorphism &f, const Lattice &S,
    std::optional<std::vector<AffineElement>> quotient_reps) {
  const auto &g = f.group();
  const std::size_t m = g.dim();
  if (S.dim() != m)
    throw DimensionError("invariant subgroup: dimension mismatch");
  if (!g.lattice().contains(S))
    throw InconsistencyError("invariant subgroup is not contained in the lattice");
  for (const auto &h : g.reps())
    if (!(S.transformed(h.element.linear) == S))
      throw InconsistencyError("invariant subgroup is not normal: rep '" +
                               h.name + "' moves it");

  InvariantData inv{S, 0, 0, 0, {}, {}, {}, {}, {}};
  const auto ident = identity_permutation(f.n());
  for (const auto &s : S.basis_vectors()) {
    const Decomposition d{*g.lattice_coords(s), 0};
    const auto img = f.evaluate(d);
    if (img.perm != ident)
      throw InconsistencyError("invariant subgroup is not inside ker sigma");
    for (const auto &c : img.components)
      if (!c.is_translation() || !g.lattice().contains(c.translation))
        throw InconsistencyError(
            "invariant subgroup is not mapped into the lattice");
  }
  for (std::size_t i = 0; i < f.n(); ++i) {
    try {
      inv.base.push_back(linearize(f, i, S));
    } catch (const PreconditionError &e) {
      throw InconsistencyError(e.what());
    }
  }

  if (quotient_reps) {
    if (quotient_reps->size() != g.holonomy_order())
      throw DimensionError("one quotient representative per holonomy coset");
    for (std::size_t q = 0; q < quotient_reps->size(); ++q)
      if (g.decompose((*quotient_reps)[q]).rep_index != q)
        throw std::invalid_argument(
            "quotient representative lies in the wrong coset");
    inv.quotient_reps = std::move(*quotient_reps);
  } else {
    for (const auto &h : g.reps())
      inv.quotient_reps.push_back(h.element);
  }

  inv.matrices = split_matrices(f, inv);
  inv.index_gamma_S = g.lattice().index_of(S);
  inv.index_pi_gamma = static_cast<unsigned long>(g.holonomy_order());
  inv.index_pi_S = inv.index_gamma_S * inv.index_pi_gamma;

  IntMatrix rel(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto c = *g.lattice_coords(S.basis().row(k));
    for (std::size_t j = 0; j < m; ++j)
      rel(k, j) = c[j];
  }
  inv.lattice_reps = cokernel_of_relations(rel, m).representatives();
  for (std::size_t r = 0; r < g.reps().size(); ++r)
    for (const auto &t : inv.lattice_reps)
      inv.cover_reps.push_back(g.reconstruct({t, r}));
  return inv;
}

MatrixTable split_matrices(const NvMorphism &f, const InvariantData &inv) {
  MatrixTable out(f.n());
  for (std::size_t i = 0; i < f.n(); ++i)
    for (const auto &a : inv.quotient_reps)
      out[i].push_back(a.linear * inv.base.at(i));
  return out;
}

std::vector<DeterminantTerm> determinant_table(const InvariantData &inv,
                                               Execution exec) {
  const std::size_t n = inv.matrices.size();
  const std::size_t k = inv.quotient_reps.size();
  std::vector<DeterminantTerm> out(n * k);
  const long cells = static_cast<long>(n * k);
  auto cell = [&](long c) {
    const std::size_t i = static_cast<std::size_t>(c) / k;
    const std::size_t q = static_cast<std::size_t>(c) % k;
    const auto &M = inv.matrices[i][q];
    out[c] = {i, q, det(RatMatrix::identity(M.rows()) - M)};
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (long c = 0; c < cells; ++c)
      cell(c);
  } else {
    for (long c = 0; c < cells; ++c)
      cell(c);
  }
  return out;
}

Integer lefschetz(const InvariantData &inv, Execution exec) {
  Rational sum = 0;
  for (const auto &t : determinant_table(inv, exec))
    sum += t.det;
  return to_integer_checked(sum / Rational(inv.index_pi_gamma),
                            "averaged Lefschetz number");
}

Integer nielsen(const InvariantData &inv, Execution exec) {
  Rational sum = 0;
  for (const auto &t : determinant_table(inv, exec))
    sum += abs(t.det);
  return to_integer_checked(sum / Rational(inv.index_pi_gamma),
                            "averaged Nielsen number");
}

Integer lefschetz(const NvMorphism &f) { return lefschetz(invariant_subgroup(f)); }
Integer nielsen(const NvMorphism &f) { return nielsen(invariant_subgroup(f)); }

CoincidenceGroup coincidence_subgroup(const NvMorphism &f,
                                      const InvariantData &inv, std::size_t i,
                                      const AffineElement &g) {
  if (i >= f.n())
    throw DimensionError("coincidence_subgroup: branch index out of range");
  const std::size_t m = f.group().dim();
  const RatMatrix A =
      RatMatrix::identity(m) - g.linear * inv.base.at(i);
  const AffineElement ginv = invert(g);
  CoincidenceGroup out;
  for (std::size_t idx = 0; idx < inv.cover_reps.size(); ++idx) {
    const AffineElement &c = inv.cover_reps[idx];
    const auto img = f.evaluate(c);
    if (img.perm[i] != i)
      continue;
    // γ = s·c:  g φ_i(γ) g⁻¹ = (A_g M_i s)·(g y g⁻¹) with y = φ_i(c)
    const AffineElement z = compose(compose(g, img.components[i]), ginv);
    if (z.linear != c.linear)
      continue;
    auto sol = solve_affine_lattice(A, subtract(z.translation, c.translation),
                                    inv.S);
    if (sol.empty)
      continue;
    AffineElement w = compose(AffineElement::pure_translation(sol.point), c);
    if (!(compose(compose(g, f.phi(i, w)), ginv) == w))
      throw InconsistencyError("coincidence witness fails its equation");
    out.cosets.push_back(idx);
    out.witnesses.push_back(std::move(w));
    if (out.lattice_generators.empty())
      out.lattice_generators = std::move(sol.directions);
  }
  return out;
}

NielsenEqualityReport nielsen_equality_report(const NvMorphism &f,
                                              const InvariantData &inv) {
  NielsenEqualityReport rep;
  rep.lower_bound = nielsen(inv);
  const std::size_t m = f.group().dim();
  for (std::size_t i = 0; i < f.n(); ++i)
    for (std::size_t idx = 0; idx < inv.cover_reps.size(); ++idx) {
      const auto &g = inv.cover_reps[idx];
      if (det(RatMatrix::identity(m) - g.linear * inv.base[i]) == 0)
        continue;
      ++rep.essential_terms;
      const auto coin = coincidence_subgroup(f, inv, i, g);
      if (!coin.trivial()) {
        rep.equality = false;
        rep.violations.push_back(
            {i, idx, coin.image_size(), !coin.lattice_generators.empty()});
      }
    }
  return rep;
}

} // namespace nvfix
