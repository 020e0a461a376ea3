#include "omega/oes.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace omega::oes {

namespace {

std::vector<Int> other_generators(const NumericalSemigroup& S, int i) {
  std::vector<Int> rest;
  const auto& gens = S.generators();
  rest.reserve(gens.size() - 1);
  for (int t = 0; t < static_cast<int>(gens.size()); ++t) {
    if (t != i) rest.push_back(gens[static_cast<std::size_t>(t)]);
  }
  return rest;
}

struct ModelBuilder {
  explicit ModelBuilder(const OmegaProblem& prob)
      : prob(prob), p(prob.semigroup.embedding_dimension()) {}

  const OmegaProblem& prob;
  int p;
  ilp::IntegerProgram ip;

  void add_core(ilp::Sense sense) {
    ip.num_vars = 2 * p;
    ip.sense = sense;
    ip.objective.assign(static_cast<std::size_t>(2 * p), 0);
    for (int i = 0; i < p; ++i) ip.objective[static_cast<std::size_t>(i)] = 1;
    ip.lower.assign(static_cast<std::size_t>(2 * p), 0);
    ip.upper.resize(static_cast<std::size_t>(2 * p));
    for (int i = 0; i < p; ++i) {
      ip.upper[static_cast<std::size_t>(i)] =
          i == prob.j ? 0 : prob.box[static_cast<std::size_t>(i)];
      ip.upper[static_cast<std::size_t>(p + i)] =
          prob.y_upper[static_cast<std::size_t>(i)];
    }
    // sum x_i n_i - sum y_i n_i = n_j
    ilp::LinearConstraint eq;
    eq.coeffs.assign(static_cast<std::size_t>(2 * p), 0);
    for (int i = 0; i < p; ++i) {
      Int n = prob.semigroup.generator(static_cast<std::size_t>(i));
      eq.coeffs[static_cast<std::size_t>(i)] = n;
      eq.coeffs[static_cast<std::size_t>(p + i)] = -n;
    }
    eq.rel = ilp::Relation::Eq;
    eq.rhs = prob.semigroup.generator(static_cast<std::size_t>(prob.j));
    ip.constraints.push_back(std::move(eq));
    if (prob.apery_cuts) {
      ilp::LinearConstraint lo, hi;
      lo.coeffs.assign(static_cast<std::size_t>(2 * p), 0);
      for (int i = 0; i < p; ++i) {
        lo.coeffs[static_cast<std::size_t>(p + i)] =
            prob.semigroup.generator(static_cast<std::size_t>(i));
      }
      hi = lo;
      lo.rel = ilp::Relation::Ge;
      lo.rhs = prob.cut_lo;
      hi.rel = ilp::Relation::Le;
      hi.rhs = prob.cut_hi;
      ip.constraints.push_back(std::move(lo));
      ip.constraints.push_back(std::move(hi));
    }
  }

  // Big-M exclusion block for one previously found minimal element:
  // x_i <= z_i (xbar_i - 1) + M_i (1 - z_i), sum_i z_i >= 1.
  void add_exclusion(const FactorizationVector& xbar) {
    const int zbase = ip.num_vars;
    ip.num_vars += p;
    ip.objective.resize(static_cast<std::size_t>(ip.num_vars), 0);
    ip.lower.resize(static_cast<std::size_t>(ip.num_vars), 0);
    ip.upper.resize(static_cast<std::size_t>(ip.num_vars), 1);
    for (auto& c : ip.constraints) {
      c.coeffs.resize(static_cast<std::size_t>(ip.num_vars), 0);
    }
    ilp::LinearConstraint atleast;
    atleast.coeffs.assign(static_cast<std::size_t>(ip.num_vars), 0);
    for (int i = 0; i < p; ++i) {
      Int m = prob.big_m[static_cast<std::size_t>(i)];
      ilp::LinearConstraint c;
      c.coeffs.assign(static_cast<std::size_t>(ip.num_vars), 0);
      c.coeffs[static_cast<std::size_t>(i)] = 1;
      c.coeffs[static_cast<std::size_t>(zbase + i)] = m - xbar[static_cast<std::size_t>(i)] + 1;
      c.rel = ilp::Relation::Le;
      c.rhs = m;
      ip.constraints.push_back(std::move(c));
      atleast.coeffs[static_cast<std::size_t>(zbase + i)] = 1;
    }
    atleast.rel = ilp::Relation::Ge;
    atleast.rhs = 1;
    ip.constraints.push_back(std::move(atleast));
  }
};

}  // namespace

Int upper_bound(const NumericalSemigroup& S, int i, int k) {
  const int p = S.embedding_dimension();
  if (i < 0 || k < 0 || i >= p || k >= p || i == k) {
    throw std::out_of_range("upper_bound: invalid generator indices");
  }
  const Int ni = S.generator(static_cast<std::size_t>(i));
  const Int nk = S.generator(static_cast<std::size_t>(k));
  Submonoid others(other_generators(S, i));
  for (Int x = 1; x <= nk; ++x) {
    if (others.contains(checked_mul(ni, x) - nk)) return x;
  }
  // x = nk always works: ni*nk - nk = nk*(ni - 1) is a multiple of nk.
  throw std::logic_error("upper_bound: no witness found below n_k");
}

OmegaProblem build_problem(const NumericalSemigroup& S, int j,
                           const OmegaOptions& options) {
  const int p = S.embedding_dimension();
  if (j < 0 || j >= p) {
    throw std::out_of_range("generator index out of range");
  }
  OmegaProblem prob{S};
  prob.j = j;
  prob.bound_mode = options.bound_mode;
  prob.apery_cuts = options.apery_cuts;
  prob.box.assign(static_cast<std::size_t>(p), 0);
  if (options.bound_mode == BoundMode::Tight) {
    for (int i = 0; i < p; ++i) {
      if (i != j) prob.box[static_cast<std::size_t>(i)] = upper_bound(S, i, j);
    }
  } else {
    Int cap = 0;
    for (int t = 0; t < p; ++t) {
      for (int k = 0; k < p; ++k) {
        if (t != k) cap = std::max(cap, upper_bound(S, t, k));
      }
    }
    for (int i = 0; i < p; ++i) {
      if (i != j) prob.box[static_cast<std::size_t>(i)] = cap;
    }
  }
  prob.big_m.resize(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    prob.big_m[static_cast<std::size_t>(i)] =
        prob.box[static_cast<std::size_t>(i)] + options.big_m_slack;
  }
  // Implied bounds for y from the equality row and the x box.
  Int total = 0;
  for (int i = 0; i < p; ++i) {
    total = checked_add(total, checked_mul(prob.box[static_cast<std::size_t>(i)],
                                           S.generator(static_cast<std::size_t>(i))));
  }
  total -= S.generator(static_cast<std::size_t>(j));
  prob.y_upper.resize(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    prob.y_upper[static_cast<std::size_t>(i)] =
        total / S.generator(static_cast<std::size_t>(i));
  }
  if (options.apery_cuts) {
    prob.cut_lo = S.multiplicity();
    Int hi = 0;
    for (Int n : S.generators()) hi = std::max(hi, S.apery(n).max_entry());
    prob.cut_hi = hi;
  }
  if (options.time_limit) {
    prob.deadline = std::chrono::steady_clock::now() + *options.time_limit;
  }
  return prob;
}

ilp::SolveOutcome relaxation(const OmegaProblem& prob) {
  ModelBuilder mb(prob);
  mb.add_core(ilp::Sense::Maximize);
  ilp::SolveOutcome out = ilp::solve(mb.ip, prob.deadline);
  if (out.status == ilp::SolveStatus::Infeasible) {
    throw InternalInfeasible("relaxation infeasible: bound derivation bug");
  }
  return out;
}

FactorizationVector ecker_kouada(const OmegaProblem& prob,
                                 const FactorizationVector& x_star) {
  const int p = prob.semigroup.embedding_dimension();
  if (static_cast<int>(x_star.dimension()) != p) {
    throw SemigroupError(ErrorCode::DimensionMismatch,
                         "x_star dimension mismatch");
  }
  ModelBuilder mb(prob);
  mb.add_core(ilp::Sense::Minimize);
  for (int i = 0; i < p; ++i) {
    mb.ip.upper[static_cast<std::size_t>(i)] =
        std::min(mb.ip.upper[static_cast<std::size_t>(i)],
                 x_star[static_cast<std::size_t>(i)]);
  }
  ilp::SolveOutcome out = ilp::solve(mb.ip, prob.deadline);
  if (out.status == ilp::SolveStatus::Infeasible) {
    throw InfeasibleInput("x_star is not feasible for the relaxed region");
  }
  return x_part(out, p);
}

ilp::SolveOutcome nemhauser_wolsey(
    const OmegaProblem& prob,
    const std::vector<FactorizationVector>& excluded) {
  if (excluded.empty()) {
    throw InfeasibleInput("exclusion list must be non-empty");
  }
  ModelBuilder mb(prob);
  mb.add_core(ilp::Sense::Maximize);
  for (const FactorizationVector& xbar : excluded) {
    mb.add_exclusion(xbar);
  }
  mb.ip.kinds.assign(static_cast<std::size_t>(mb.ip.num_vars),
                     ilp::VarKind::Integer);
  for (int v = 2 * mb.p; v < mb.ip.num_vars; ++v) {
    mb.ip.kinds[static_cast<std::size_t>(v)] = ilp::VarKind::Binary;
  }
  return ilp::solve(mb.ip, prob.deadline);
}

FactorizationVector x_part(const ilp::SolveOutcome& outcome, int p) {
  return FactorizationVector(std::vector<Int>(
      outcome.witness.begin(), outcome.witness.begin() + p));
}

OmegaResult omega_j(const NumericalSemigroup& S, int j,
                    const OmegaOptions& options) {
  OmegaProblem prob = build_problem(S, j, options);
  const int p = S.embedding_dimension();
  OmegaResult res;
  res.generator = S.generator(static_cast<std::size_t>(j));

  ilp::SolveOutcome relax = relaxation(prob);
  FactorizationVector x = x_part(relax, p);
  Int u = 0;
  Int v = relax.value;
  for (int l = 1;; ++l) {
    IterationRecord rec;
    rec.index = l;
    rec.point = x;
    FactorizationVector ek = ecker_kouada(prob, x);
    ++res.ek_solves;
    rec.ek_minimal = ek;
    u = std::max(u, ek.length());
    res.minimals_found.push_back(ek);

    ilp::SolveOutcome nw = nemhauser_wolsey(prob, res.minimals_found);
    ++res.nw_solves;
    res.iterations = l;
    if (nw.status == ilp::SolveStatus::Infeasible) {
      rec.lower_u = u;
      rec.upper_v = u;
      res.trace.push_back(std::move(rec));
      break;
    }
    v = std::min(v, nw.value);
    rec.nw_point = x_part(nw, p);
    rec.lower_u = u;
    rec.upper_v = v;
    res.trace.push_back(std::move(rec));
    if (nw.value <= u) break;
    x = *res.trace.back().nw_point;
  }
  res.omega = u;
  const auto longest = std::max_element(
      res.minimals_found.begin(), res.minimals_found.end(),
      [](const FactorizationVector& a, const FactorizationVector& b) {
        return a.length() < b.length();
      });
  res.witness = *longest;
  return res;
}

std::pair<Int, std::vector<OmegaResult>> omega(const NumericalSemigroup& S,
                                               const OmegaOptions& options) {
  const int p = S.embedding_dimension();
  std::vector<OmegaResult> results(static_cast<std::size_t>(p));
  if (options.jobs > 1) {
    std::vector<std::future<OmegaResult>> futs;
    futs.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
      futs.push_back(std::async(std::launch::async, [&S, j, &options] {
        return omega_j(S, j, options);
      }));
    }
    for (int j = 0; j < p; ++j) {
      results[static_cast<std::size_t>(j)] = futs[static_cast<std::size_t>(j)].get();
    }
  } else {
    for (int j = 0; j < p; ++j) {
      results[static_cast<std::size_t>(j)] = omega_j(S, j, options);
    }
  }
  Int best = 0;
  for (const OmegaResult& r : results) best = std::max(best, r.omega);
  return {best, std::move(results)};
}

}  // namespace omega::oes
