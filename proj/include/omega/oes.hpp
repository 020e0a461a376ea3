#pragma once

#include <chrono>
#include <optional>
#include <utility>
#include <vector>

#include "omega/ilp.hpp"
#include "omega/semigroup.hpp"

namespace omega::oes {

enum class BoundMode { Tight, Loose };

struct OmegaOptions {
  BoundMode bound_mode = BoundMode::Tight;
  bool apery_cuts = false;
  Int big_m_slack = 0;  // M_i = box[i] + slack; any slack >= 0 is valid
  int jobs = 1;
  std::optional<std::chrono::milliseconds> time_limit;
};

/// Bounded formulation of the efficient-set problem for one generator:
/// x ranges over the box with x_j = 0, y over derived finite bounds, and the
/// knapsack row sum x_i n_i - sum y_i n_i = n_j ties them together.
struct OmegaProblem {
  NumericalSemigroup semigroup;
  int j = 0;
  BoundMode bound_mode = BoundMode::Tight;
  std::vector<Int> box;      // per-variable upper bound for x; box[j] = 0
  std::vector<Int> big_m;    // big-M per variable, >= box
  std::vector<Int> y_upper;  // derived finite upper bounds for y
  bool apery_cuts = false;
  Int cut_lo = 0;  // sum n_i y_i >= cut_lo when cuts are on
  Int cut_hi = 0;  // sum n_i y_i <= cut_hi when cuts are on
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct IterationRecord {
  int index = 0;                      // l, starting at 1
  FactorizationVector point;          // x^l (relaxation or previous NW point)
  FactorizationVector ek_minimal;     // hat x^l
  std::optional<FactorizationVector> nw_point;  // bar x^l, nullopt = infeasible
  Int lower_u = 0;  // after the iteration
  Int upper_v = 0;  // after the iteration
};

struct OmegaResult {
  Int generator = 0;
  Int omega = 0;
  FactorizationVector witness;
  std::vector<FactorizationVector> minimals_found;
  int iterations = 0;
  int ek_solves = 0;
  int nw_solves = 0;
  std::vector<IterationRecord> trace;
};

class InfeasibleInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signals a bound-derivation bug: the relaxation must always be feasible.
class InternalInfeasible : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// ub_{ik}: least x_i >= 1 with n_i x_i - n_k representable in the submonoid
/// generated by the other generators. Always <= n_k.
Int upper_bound(const NumericalSemigroup& S, int i, int k);

OmegaProblem build_problem(const NumericalSemigroup& S, int j,
                           const OmegaOptions& options = {});

/// Relaxation R_j: max sum x_i over the bounded region, minimality dropped.
ilp::SolveOutcome relaxation(const OmegaProblem& prob);

/// Ecker-Kouada step: the minimum-length feasible point in the down-set of
/// x_star; a globally minimal element dominating x_star.
FactorizationVector ecker_kouada(const OmegaProblem& prob,
                                 const FactorizationVector& x_star);

/// Nemhauser-Wolsey step: max sum x_i over feasible points not
/// component-wise >= any excluded point (big-M / binary encoding).
ilp::SolveOutcome nemhauser_wolsey(
    const OmegaProblem& prob,
    const std::vector<FactorizationVector>& excluded);

/// The x coordinates of an ILP witness for one of the models above.
FactorizationVector x_part(const ilp::SolveOutcome& outcome, int p);

OmegaResult omega_j(const NumericalSemigroup& S, int j,
                    const OmegaOptions& options = {});

/// omega(S) with per-generator results, ordered by generator index.
std::pair<Int, std::vector<OmegaResult>> omega(
    const NumericalSemigroup& S, const OmegaOptions& options = {});

}  // namespace omega::oes
