#include "omega/oracle.hpp"

#include <algorithm>
#include <cassert>

#include "omega/oes.hpp"

namespace omega::oracle {

std::vector<FactorizationVector> pareto_filter(
    const std::vector<FactorizationVector>& points) {
  std::vector<FactorizationVector> uniq;
  for (const FactorizationVector& p : points) {
    if (!points.empty() && p.dimension() != points.front().dimension()) {
      throw SemigroupError(ErrorCode::DimensionMismatch,
                           "mixed dimensions in pareto_filter input");
    }
    if (std::find(uniq.begin(), uniq.end(), p) == uniq.end()) {
      uniq.push_back(p);
    }
  }
  std::vector<FactorizationVector> out;
  for (const FactorizationVector& p : uniq) {
    bool dominated = false;
    for (const FactorizationVector& q : uniq) {
      if (q != p && q.leq(p)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(p);
  }
  return out;
}

namespace {

std::vector<FactorizationVector> enumerate_minimals(
    const NumericalSemigroup& S, int j, const std::vector<Int>& box) {
  const int p = S.embedding_dimension();
  const Int nj = S.generator(static_cast<std::size_t>(j));
  std::vector<FactorizationVector> feasible;
  FactorizationVector x(std::vector<Int>(static_cast<std::size_t>(p), 0));
  // odometer over the box, x_j pinned to 0
  while (true) {
    Int val = S.evaluate(x);
    if (S.contains(val - nj)) feasible.push_back(x);
    int i = 0;
    for (; i < p; ++i) {
      if (i == j) continue;
      if (x.coords[static_cast<std::size_t>(i)] <
          box[static_cast<std::size_t>(i)]) {
        ++x.coords[static_cast<std::size_t>(i)];
        break;
      }
      x.coords[static_cast<std::size_t>(i)] = 0;
    }
    if (i == p) break;
  }
  std::vector<FactorizationVector> out;
  out.push_back(FactorizationVector::unit(static_cast<std::size_t>(p),
                                          static_cast<std::size_t>(j)));
  for (FactorizationVector& m : pareto_filter(feasible)) {
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::vector<FactorizationVector> minimals_of_Z(const NumericalSemigroup& S,
                                               int j, bool paranoid) {
  const int p = S.embedding_dimension();
  std::vector<Int> box(static_cast<std::size_t>(p), 0);
  for (int i = 0; i < p; ++i) {
    if (i != j) box[static_cast<std::size_t>(i)] = oes::upper_bound(S, i, j);
  }
  std::vector<FactorizationVector> out = enumerate_minimals(S, j, box);
  if (paranoid) {
    std::vector<Int> wide = box;
    for (int i = 0; i < p; ++i) {
      if (i != j) wide[static_cast<std::size_t>(i)] += 2;
    }
    std::vector<FactorizationVector> check = enumerate_minimals(S, j, wide);
    auto key = [](const FactorizationVector& a, const FactorizationVector& b) {
      return a.coords < b.coords;
    };
    std::vector<FactorizationVector> a = out, b = check;
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    assert(a == b && "enlarged box changed the minimal set");
  }
  return out;
}

Int omega_bruteforce(const NumericalSemigroup& S, int j) {
  Int best = 0;
  for (const FactorizationVector& m : minimals_of_Z(S, j)) {
    best = std::max(best, m.length());
  }
  return best;
}

std::vector<Int> gaps_direct(const NumericalSemigroup& S) {
  const Int limit = checked_mul(S.generators().front(), S.generators().back());
  std::vector<char> in(static_cast<std::size_t>(limit) + 1, 0);
  in[0] = 1;
  for (Int s = 1; s <= limit; ++s) {
    for (Int g : S.generators()) {
      if (s >= g && in[static_cast<std::size_t>(s - g)]) {
        in[static_cast<std::size_t>(s)] = 1;
        break;
      }
    }
  }
  std::vector<Int> gaps;
  for (Int s = 0; s <= limit; ++s) {
    if (!in[static_cast<std::size_t>(s)]) gaps.push_back(s);
  }
  return gaps;
}

}  // namespace omega::oracle
