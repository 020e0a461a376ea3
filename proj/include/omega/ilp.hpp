#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omega/semigroup.hpp"

namespace omega::ilp {

enum class Sense { Maximize, Minimize };
enum class Relation { Eq, Le, Ge };
enum class VarKind { Integer, Binary };

struct LinearConstraint {
  std::vector<Int> coeffs;  // length = num_vars
  Relation rel = Relation::Eq;
  Int rhs = 0;
};

/// Marks an absent upper bound; solve() rejects it.
inline constexpr Int kUnbounded = std::numeric_limits<Int>::max();

struct IntegerProgram {
  int num_vars = 0;
  std::vector<Int> objective;
  Sense sense = Sense::Maximize;
  std::vector<LinearConstraint> constraints;
  std::vector<Int> lower;  // inclusive
  std::vector<Int> upper;  // inclusive, finite
  std::vector<VarKind> kinds;  // optional; empty means all Integer
};

enum class SolveStatus { Optimal, Infeasible };

struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  Int value = 0;
  std::vector<Int> witness;
};

enum class ModelErrorCode { UnboundedVariable, ModelMalformed };

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ModelErrorCode code() const { return code_; }

 private:
  ModelErrorCode code_;
};

class SolveTimeout : public std::runtime_error {
 public:
  SolveTimeout() : std::runtime_error("solve deadline exceeded") {}
};

/// Exact depth-first branch and bound over the bounded integer box.
/// Branches in model order; value order is descending when maximizing and
/// ascending when minimizing. Among equal-objective optima the
/// lexicographically smallest witness is returned. All arithmetic is exact.
SolveOutcome solve(const IntegerProgram& ip,
                   std::optional<std::chrono::steady_clock::time_point>
                       deadline = std::nullopt);

}  // namespace omega::ilp
