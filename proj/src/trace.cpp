#include "nvfix/trace.hpp"

#include <exception>

namespace nvfix {

std::strong_ordering operator<=>(const ReidClass &a, const ReidClass &b) {
  if (auto c = a.branch <=> b.branch; c != 0)
    return c;
  if (auto c = a.rep_index <=> b.rep_index; c != 0)
    return c;
  const int c = compare(a.lattice_coords, b.lattice_coords);
  return c < 0 ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
}

void TraceVector::add(const ReidClass &c, const Integer &coefficient) {
  if (coefficient == 0)
    return;
  auto [it, inserted] = terms_.try_emplace(c, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0)
      terms_.erase(it);
  }
}

Integer TraceVector::coefficient_sum() const {
  Integer s = 0;
  for (const auto &[c, k] : terms_)
    s += k;
  return s;
}

// ---------------------------------------------------------------------------

namespace {

IntMatrix twisted_relations(const CrystGroup &g, const Lattice &S,
                            const RatMatrix &twist) {
  const std::size_t m = g.dim();
  IntMatrix rel(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    const RatVector s = S.basis().row(k);
    const auto c = g.lattice_coords(subtract(s, twist * s));
    if (!c)
      throw InconsistencyError("twisted image of S leaves the lattice");
    for (std::size_t j = 0; j < m; ++j)
      rel(k, j) = (*c)[j];
  }
  return rel;
}

struct ClassKey {
  std::size_t rep;
  IntVector normal;
  bool operator<(const ClassKey &o) const {
    if (rep != o.rep)
      return rep < o.rep;
    return compare(normal, o.normal) < 0;
  }
};

} // namespace

CokernelStructure twisted_classes_cover(const NvMorphism &f,
                                        const InvariantData &inv, std::size_t i,
                                        const AffineElement &alpha) {
  const RatMatrix twist = alpha.linear * inv.base.at(i);
  return cokernel_of_relations(twisted_relations(f.group(), inv.S, twist),
                               f.group().dim());
}

ReidemeisterContext::ReidemeisterContext(const NvMorphism &f, InvariantData inv)
    : f_(f), inv_(std::move(inv)) {
  for (const auto &c : inv_.cover_reps) {
    AffineElement ci = invert(c);
    cover_.push_back({c, ci, f_.sigma(c), f_.evaluate(ci)});
  }
  const auto &g = f_.group();
  slices_.resize(f_.n());
  for (std::size_t j = 0; j < f_.n(); ++j)
    for (const auto &h : g.reps())
      slices_[j].push_back(cokernel_of_relations(
          twisted_relations(g, inv_.S, h.element.linear * inv_.base.at(j)),
          g.dim()));
  orbit_min_.assign(f_.n(), 0);
  for (const auto &o : orbit_partition(f_))
    for (auto j : o.members)
      orbit_min_[j] = o.members.front();
}

const CokernelStructure &
ReidemeisterContext::slice_cokernel(std::size_t j, std::size_t rep) const {
  return slices_.at(j).at(rep);
}

AffineElement ReidemeisterContext::element(const ReidClass &c) const {
  return f_.group().reconstruct({c.lattice_coords, c.rep_index});
}

std::pair<AffineElement, std::size_t>
ReidemeisterContext::act(const AffineElement &gamma, const AffineElement &g,
                         std::size_t i) const {
  const auto img = f_.evaluate(invert(gamma));
  const auto sg = f_.sigma(gamma);
  return {compose(compose(gamma, g), img.components.at(i)), sg[i]};
}

std::optional<AffineElement>
ReidemeisterContext::same_class(const AffineElement &g, std::size_t i,
                                const AffineElement &h, std::size_t j) const {
  const std::size_t m = f_.group().dim();
  for (const auto &c : cover_) {
    if (c.sigma[i] != j)
      continue;
    // γ = s·c acts as x ↦ x + (I - A_x M_j) s with x = c·(g, i)
    const AffineElement x =
        compose(compose(c.element, g), c.image_of_inverse.components[i]);
    if (x.linear != h.linear)
      continue;
    const RatMatrix A = RatMatrix::identity(m) - x.linear * inv_.base[j];
    auto sol = solve_affine_lattice(A, subtract(h.translation, x.translation),
                                    inv_.S);
    if (sol.empty)
      continue;
    AffineElement gamma =
        compose(AffineElement::pure_translation(sol.point), c.element);
    if (act(gamma, g, i) != std::pair<AffineElement, std::size_t>{h, j})
      throw InconsistencyError("same_class witness fails verification");
    return gamma;
  }
  return std::nullopt;
}

ReidClass ReidemeisterContext::minimize_in_branch(const AffineElement &x,
                                                  std::size_t j) const {
  const auto &g = f_.group();
  std::optional<ClassKey> best;
  IntVector best_coords;
  for (const auto &c : cover_) {
    if (c.sigma[j] != j)
      continue;
    const AffineElement y =
        compose(compose(c.element, x), c.image_of_inverse.components[j]);
    const auto d = g.decompose(y);
    const auto &cok = slices_[j][d.rep_index];
    ClassKey key{d.rep_index, cok.normal_form(d.lattice_coords)};
    if (!best || key < *best) {
      best_coords = cok.canonical(d.lattice_coords);
      best = std::move(key);
    }
  }
  return {j, best->rep, std::move(best_coords)};
}

ReidClass ReidemeisterContext::canonical_rep(const AffineElement &g,
                                             std::size_t i) const {
  const std::size_t j0 = orbit_min_.at(i);
  for (const auto &c : cover_)
    if (c.sigma[i] == j0)
      return minimize_in_branch(
          compose(compose(c.element, g), c.image_of_inverse.components[i]), j0);
  throw InconsistencyError("no coset moves a branch to its orbit minimum");
}

ReidClass ReidemeisterContext::branch_local_rep(const AffineElement &g,
                                                std::size_t i) const {
  return minimize_in_branch(g, i);
}

ReidClass rhat_push(const ReidemeisterContext &ctx, std::size_t i,
                    const AffineElement &alpha, const IntVector &beta) {
  const auto &g = ctx.morphism().group();
  return ctx.canonical_rep(
      compose(AffineElement::pure_translation(g.lattice_vector(beta)), alpha), i);
}

// ---------------------------------------------------------------------------

namespace {

struct CellResult {
  int sign = 0;
  Rational det;
  std::vector<ReidClass> classes;
};

// Cover classes of one (i, α) cell pushed to R[f_#] by `push`.
template <class Push>
CellResult compute_cell(const ReidemeisterContext &ctx, std::size_t i,
                        std::size_t q, Push push) {
  const auto &f = ctx.morphism();
  const auto &inv = ctx.invariant_data();
  const auto &g = f.group();
  const auto &M = inv.matrices[i][q];
  CellResult cell;
  cell.det = det(RatMatrix::identity(M.rows()) - M);
  cell.sign = sign(cell.det);
  if (cell.sign == 0)
    return cell;
  const AffineElement &alpha = inv.quotient_reps[q];
  const auto cok = twisted_classes_cover(f, inv, i, alpha);
  const auto reps = cok.representatives();
  const Rational expected = Rational(inv.index_gamma_S) * abs(cell.det);
  if (Rational(static_cast<unsigned long>(reps.size())) != expected)
    throw InconsistencyError("cover class count differs from [Gamma:S]|det|");
  for (const auto &beta : reps)
    cell.classes.push_back(push(
        compose(AffineElement::pure_translation(g.lattice_vector(beta)), alpha),
        i));
  return cell;
}

template <class Push>
std::vector<CellResult> compute_cells(const ReidemeisterContext &ctx,
                                      Execution exec, Push push) {
  const std::size_t n = ctx.morphism().n();
  const std::size_t k = ctx.invariant_data().quotient_reps.size();
  std::vector<CellResult> cells(n * k);
  std::vector<std::exception_ptr> errors(n * k);
  const long count = static_cast<long>(n * k);
  auto run = [&](long c) {
    try {
      cells[c] = compute_cell(ctx, static_cast<std::size_t>(c) / k,
                              static_cast<std::size_t>(c) % k, push);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (long c = 0; c < count; ++c)
      run(c);
  } else {
    for (long c = 0; c < count; ++c)
      run(c);
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  return cells;
}

TraceVector divide_exactly(const TraceVector &raw, const Integer &d) {
  TraceVector out;
  for (const auto &[c, k] : raw.terms()) {
    if (mod_floor(k, d) != 0)
      throw InconsistencyError("trace coefficient " + format_integer(k) +
                               " is not divisible by [pi:S] = " +
                               format_integer(d));
    out.add(c, k / d);
  }
  return out;
}

} // namespace

TraceVector reidemeister_trace(const ReidemeisterContext &ctx,
                               const TraceOptions &options) {
  const auto &inv = ctx.invariant_data();
  auto push = [&](const AffineElement &raw, std::size_t i) {
    ReidClass cls = ctx.canonical_rep(raw, i);
    if (options.verify_witnesses &&
        !ctx.same_class(raw, i, ctx.element(cls), cls.branch))
      throw InconsistencyError("pushed class is not equivalent to its "
                               "canonical representative");
    return cls;
  };
  const auto cells = compute_cells(ctx, options.execution, push);

  TraceVector raw;
  for (const auto &cell : cells) {
    const Integer total =
        Integer(cell.sign) * static_cast<unsigned long>(cell.classes.size());
    if (Rational(total) != Rational(inv.index_gamma_S) * cell.det)
      throw InconsistencyError("cover Lefschetz number differs from "
                               "[Gamma:S] det(I - M)");
    for (const auto &c : cell.classes)
      raw.add(c, cell.sign);
  }
  TraceVector rt = divide_exactly(raw, inv.index_pi_S);
  if (rt.coefficient_sum() != lefschetz(inv, options.execution))
    throw InconsistencyError("trace coefficients do not sum to L(f)");
  if (Integer(static_cast<unsigned long>(rt.support_size())) !=
      nielsen(inv, options.execution))
    throw InconsistencyError("trace support size differs from N(f)");
  return rt;
}

TraceVector reidemeister_trace(const NvMorphism &f) {
  return reidemeister_trace(ReidemeisterContext(f, invariant_subgroup(f)));
}

PartitionReport class_partition_report(const ReidemeisterContext &ctx) {
  const auto &f = ctx.morphism();
  const auto &inv = ctx.invariant_data();
  PartitionReport rep;
  rep.orbits = orbit_partition(f);

  auto local = [&](const AffineElement &raw, std::size_t i) {
    return ctx.branch_local_rep(raw, i);
  };
  const auto cells = compute_cells(ctx, Execution::serial, local);
  const std::size_t k = inv.quotient_reps.size();

  // branch-local trace of i, with coefficients scaled by [S_i:S]
  std::vector<std::map<ReidClass, Integer>> local_raw(f.n());
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (const auto &cls : cells[c].classes)
      local_raw[c / k][cls] += cells[c].sign;

  std::map<ReidClass, Rational> orbit_sum, all_sum;
  for (const auto &o : rep.orbits)
    for (auto i : o.members) {
      // [S_i:S] = [π:S] / [π:S_i]
      const Rational s_index = Rational(inv.index_pi_S) / Rational(o.stabilizer_index);
      for (const auto &[cls, coeff] : local_raw[i]) {
        const Rational t = Rational(coeff) / s_index;
        const ReidClass global = ctx.canonical_rep(ctx.element(cls), i);
        if (i == o.members.front())
          orbit_sum[global] += t;
        all_sum[global] += t / Rational(o.stabilizer_index);
      }
    }
  rep.consistent = true;
  auto collect = [&](const std::map<ReidClass, Rational> &m, TraceVector &out) {
    for (const auto &[cls, q] : m) {
      if (!is_integral(q)) {
        rep.consistent = false;
        continue;
      }
      out.add(cls, q.get_num());
    }
  };
  collect(orbit_sum, rep.by_orbit_representatives);
  collect(all_sum, rep.by_all_branches);
  rep.consistent = rep.consistent &&
                   rep.by_orbit_representatives == rep.by_all_branches;

  const std::size_t m = f.group().dim();
  for (std::size_t i = 0; i < f.n(); ++i)
    for (std::size_t idx = 0; idx < inv.cover_reps.size(); ++idx) {
      const auto &g = inv.cover_reps[idx];
      const Rational d = det(RatMatrix::identity(m) - g.linear * inv.base[i]);
      if (d == 0)
        continue;
      rep.multiplicities.push_back(
          {i, idx, d, coincidence_subgroup(f, inv, i, g).image_size()});
    }
  return rep;
}

ReidClass transport_class(const ReidemeisterContext &from,
                          const ReidemeisterContext &to, const PermutedTuple &c,
                          const ReidClass &cls) {
  const std::size_t k = c.perm.at(cls.branch);
  return to.canonical_rep(compose(from.element(cls), invert(c.components[k])), k);
}

} // namespace nvfix
