#include "nvfix/oracle.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <optional>

namespace nvfix {

namespace {

void check_shapes(const NvMorphism &f, const AffineLift &lift) {
  const std::size_t m = f.group().dim();
  if (lift.size() != f.n())
    throw DimensionError("lift has " + std::to_string(lift.size()) +
                         " branches, morphism has n = " + std::to_string(f.n()));
  for (const auto &b : lift.branches)
    if (b.linear.rows() != m || b.linear.cols() != m || b.translation.size() != m)
      throw DimensionError("lift branch has the wrong dimension");
}

AffineMap after(const AffineElement &g, const AffineMap &b) {
  return {g.linear * b.linear, add(g.linear * b.translation, g.translation)};
}

AffineMap before(const AffineMap &b, const AffineElement &g) {
  return {b.linear * g.linear, add(b.linear * g.translation, b.translation)};
}

int compare(const RatVector &a, const RatVector &b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k])
      return -1;
    if (b[k] < a[k])
      return 1;
  }
  return 0;
}

struct VecLess {
  bool operator()(const RatVector &a, const RatVector &b) const {
    return compare(a, b) < 0;
  }
};

RatVector fractional(RatVector y) {
  for (auto &x : y) {
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    x -= fl;
  }
  return y;
}

Integer ceil_of(const Rational &q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer floor_of(const Rational &q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

struct Candidate {
  std::size_t branch;
  std::size_t rep;
  IntVector t;
};

} // namespace

LiftReport verify_lift(const NvMorphism &f, const AffineLift &lift,
                       std::size_t grid) {
  check_shapes(f, lift);
  const auto &g = f.group();
  const std::size_t m = g.dim();
  LiftReport rep;
  for (std::size_t gen = 0; gen < g.generator_count(); ++gen) {
    const AffineElement gamma = g.generator(gen);
    const auto &img = f.images()[gen];
    const auto sinv = invert(img.perm);
    for (std::size_t k = 0; k < f.n(); ++k)
      if (!(before(lift.branches[k], gamma) ==
            after(img.components[k], lift.branches[sinv[k]])))
        rep.equivariance_failures.push_back(
            "branch " + std::to_string(k + 1) + " is not equivariant under '" +
            g.generator_name(gen) + "'");
  }

  if (grid == 0 || f.n() < 2)
    return rep;
  const RatMatrix bt = g.basis_matrix().transposed();
  std::vector<std::size_t> digits(m, 0);
  while (true) {
    RatVector y(m);
    for (std::size_t r = 0; r < m; ++r)
      y[r] = Rational(static_cast<long>(digits[r]), static_cast<long>(grid));
    const RatVector x = bt * y;
    for (std::size_t a = 0; a < f.n(); ++a)
      for (std::size_t b = a + 1; b < f.n(); ++b) {
        const RatVector fa = lift.branches[a].apply(x);
        const RatVector fb = lift.branches[b].apply(x);
        for (const auto &h : g.reps())
          if (g.lattice().contains(subtract(fa, h.element.apply(fb)))) {
            rep.distinctness_violations.push_back({x, a, b});
            break;
          }
      }
    std::size_t r = 0;
    while (r < m && ++digits[r] == grid)
      digits[r++] = 0;
    if (r == m)
      break;
  }
  return rep;
}

std::vector<FixedPointRecord>
enumerate_fixed_points(const AffineLift &lift, const NvMorphism &f,
                       const EnumerationOptions &options) {
  check_shapes(f, lift);
  const auto &g = f.group();
  const std::size_t m = g.dim();
  const RatMatrix bt = g.basis_matrix().transposed();
  const RatMatrix btinv = *inverse(bt);
  const auto &reps = g.reps();
  const Integer scale = options.bound_scale < 1 ? 1u : options.bound_scale;

  // Deck translations t (Γ-coords) for which f_i(x) = t·h x can have a
  // solution x = B^T y, y ∈ [0,1)^m:
  //   t = B^{-T}(A_i - A_h)B^T y + B^{-T}(c_i - v_h).
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < f.n(); ++i)
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const auto &h = reps[r].element;
      const RatMatrix P = btinv * (lift.branches[i].linear - h.linear) * bt;
      const RatVector w =
          btinv * subtract(lift.branches[i].translation, h.translation);
      IntVector lo(m), hi(m);
      Integer count = 1;
      for (std::size_t k = 0; k < m; ++k) {
        Rational a = w[k], b = w[k];
        for (std::size_t j = 0; j < m; ++j) {
          if (sgn(P(k, j)) < 0)
            a += P(k, j);
          else
            b += P(k, j);
        }
        lo[k] = ceil_of(a);
        hi[k] = floor_of(b);
        const Integer width = hi[k] - lo[k] + 1;
        lo[k] -= (scale - 1) * width;
        hi[k] += (scale - 1) * width;
        count *= hi[k] - lo[k] + 1;
      }
      if (sgn(count) <= 0)
        continue;
      if (count + candidates.size() > options.max_candidates)
        throw ValidationError("deck translation bound exceeds the candidate "
                              "limit; the lift is too expansive");
      IntVector t = lo;
      while (true) {
        candidates.push_back({i, r, t});
        std::size_t k = 0;
        while (k < m && ++t[k] > hi[k]) {
          t[k] = lo[k];
          ++k;
        }
        if (k == m)
          break;
      }
    }

  const std::size_t cells = f.n() * reps.size();
  std::vector<RatMatrix> kernel(cells);
  std::vector<std::optional<RatMatrix>> kernel_inv(cells);
  std::vector<int> index_sign(cells);
  for (std::size_t i = 0; i < f.n(); ++i)
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const auto &A = reps[r].element.linear;
      const auto &L = lift.branches[i].linear;
      kernel[i * reps.size() + r] = L - A;
      kernel_inv[i * reps.size() + r] = inverse(L - A);
      index_sign[i * reps.size() + r] =
          sign(det(RatMatrix::identity(m) - *inverse(A) * L));
    }

  std::vector<std::optional<FixedPointRecord>> found(candidates.size());
  std::vector<std::exception_ptr> errors(candidates.size());
  auto solve = [&](long c) {
    try {
      const auto &cand = candidates[c];
      const std::size_t cell = cand.branch * reps.size() + cand.rep;
      const AffineElement deck = g.reconstruct({cand.t, cand.rep});
      const RatVector rhs =
          subtract(deck.translation, lift.branches[cand.branch].translation);
      if (!kernel_inv[cell]) {
        RatMatrix aug(m, m + 1);
        for (std::size_t a = 0; a < m; ++a) {
          for (std::size_t b = 0; b < m; ++b)
            aug(a, b) = kernel[cell](a, b);
          aug(a, m) = rhs[a];
        }
        if (rank(aug) == rank(kernel[cell]))
          throw DegenerateFixedSet(
              "branch " + std::to_string(cand.branch + 1) +
              " has a positive-dimensional fixed set for a deck element in the "
              "coset of '" + reps[cand.rep].name + "'");
        return;
      }
      RatVector x = *kernel_inv[cell] * rhs;
      const RatVector y = btinv * x;
      for (const auto &v : y)
        if (sgn(v) < 0 || v >= 1)
          return;
      found[c] = FixedPointRecord{std::move(x), deck, cand.branch,
                                  index_sign[cell]};
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  const long total = static_cast<long>(candidates.size());
  if (options.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 64) num_threads(worker_count())
    for (long c = 0; c < total; ++c)
      solve(c);
  } else {
    for (long c = 0; c < total; ++c)
      solve(c);
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  // keep one record per π-orbit of points
  std::map<RatVector, FixedPointRecord, VecLess> chosen;
  for (auto &rec : found) {
    if (!rec)
      continue;
    if (!(rec->deck.apply(rec->point) ==
          lift.branches[rec->branch].apply(rec->point)))
      throw InconsistencyError("fixed point fails its defining equation");
    std::optional<RatVector> key;
    for (const auto &h : reps) {
      RatVector y = fractional(btinv * h.element.apply(rec->point));
      if (!key || compare(y, *key) < 0)
        key = std::move(y);
    }
    auto it = chosen.find(*key);
    if (it == chosen.end())
      chosen.emplace(std::move(*key), std::move(*rec));
    else if (compare(btinv * rec->point, btinv * it->second.point) < 0)
      it->second = std::move(*rec);
  }
  std::vector<FixedPointRecord> out;
  for (auto &[k, rec] : chosen)
    out.push_back(std::move(rec));
  return out;
}

OracleResult oracle_invariants(const AffineLift &lift,
                               const ReidemeisterContext &ctx,
                               const EnumerationOptions &options) {
  OracleResult res;
  res.records = enumerate_fixed_points(lift, ctx.morphism(), options);
  std::vector<AffineElement> labels;
  for (const auto &r : res.records)
    labels.push_back(r.label());

  std::vector<std::size_t> leaders;
  for (std::size_t r = 0; r < res.records.size(); ++r) {
    std::size_t cls = leaders.size();
    for (std::size_t l = 0; l < leaders.size(); ++l) {
      const auto &lead = res.records[leaders[l]];
      if (ctx.same_class(labels[r], res.records[r].branch, labels[leaders[l]],
                         lead.branch)) {
        cls = l;
        break;
      }
    }
    if (cls == leaders.size()) {
      leaders.push_back(r);
      res.classes.push_back(ctx.canonical_rep(labels[r], res.records[r].branch));
      res.class_index.push_back(0);
    }
    res.class_of_record.push_back(cls);
    res.class_index[cls] += res.records[r].index;
  }

  for (std::size_t r = 0; r < res.records.size(); ++r)
    if (!(ctx.canonical_rep(labels[r], res.records[r].branch) ==
          res.classes[res.class_of_record[r]]))
      throw InconsistencyError("canonical representative disagrees with "
                               "same_class grouping");
  for (std::size_t a = 0; a < res.classes.size(); ++a)
    for (std::size_t b = a + 1; b < res.classes.size(); ++b)
      if (res.classes[a] == res.classes[b])
        throw InconsistencyError("distinct Nielsen classes share a canonical "
                                 "representative");

  res.lefschetz = 0;
  res.nielsen = 0;
  for (std::size_t c = 0; c < res.classes.size(); ++c) {
    res.lefschetz += res.class_index[c];
    if (res.class_index[c] != 0)
      ++res.nielsen;
    res.trace.add(res.classes[c], res.class_index[c]);
  }
  return res;
}

std::vector<FiberCount> fiber_counts(const AffineLift &lift, const NvMorphism &f,
                                     const InvariantData &inv,
                                     const std::vector<FixedPointRecord> &records) {
  check_shapes(f, lift);
  const std::size_t m = f.group().dim();
  std::vector<FiberCount> out;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto &rec = records[r];
    const AffineElement alpha = rec.label();
    const AffineMap &fi = lift.branches[rec.branch];
    // s ∈ S with α f_i(y + s) = y + s, for each lift y = c·x of the point
    const RatMatrix A = RatMatrix::identity(m) - alpha.linear * fi.linear;
    std::size_t geometric = 0;
    for (const auto &c : inv.cover_reps) {
      const RatVector y = c.apply(rec.point);
      const RatVector rhs = subtract(alpha.apply(fi.apply(y)), y);
      const auto sol = solve_affine_lattice(A, rhs, inv.S);
      if (sol.empty)
        continue;
      if (!sol.directions.empty())
        throw DegenerateFixedSet("fixed lifts in the S-cover are not isolated");
      ++geometric;
    }
    const auto coin = coincidence_subgroup(f, inv, rec.branch, alpha);
    FiberCount fc{r, geometric, coin.image_size()};
    if (fc.geometric != fc.algebraic)
      throw InconsistencyError("fiber count " + std::to_string(fc.geometric) +
                               " differs from |u_i(coin)| = " +
                               std::to_string(fc.algebraic) + " at fixed point " +
                               std::to_string(r + 1));
    out.push_back(fc);
  }
  return out;
}

AffineLift conjugate_lift(const AffineLift &lift, const PermutedTuple &c) {
  if (c.size() != lift.size())
    throw DimensionError("conjugate_lift: tuple size mismatch");
  const auto inv = invert(c.perm);
  AffineLift out;
  for (std::size_t k = 0; k < lift.size(); ++k)
    out.branches.push_back(after(c.components[k], lift.branches[inv[k]]));
  return out;
}

} // namespace nvfix
