#pragma once

#include <vector>

#include "omega/semigroup.hpp"

namespace omega::oracle {

/// Keeps exactly the points that are not component-wise >= another distinct
/// point. Duplicates are removed first; output order follows first
/// appearance in the input.
std::vector<FactorizationVector> pareto_filter(
    const std::vector<FactorizationVector>& points);

/// Brute-force Minimals Z(n_j + S): e_j together with the Pareto-minimal
/// points of the bounded box { x : x_j = 0, x_i <= ub_{i,j},
/// evaluate(x) - n_j in S }. With `paranoid` the box is enlarged by 2 per
/// coordinate and the result is asserted unchanged.
std::vector<FactorizationVector> minimals_of_Z(const NumericalSemigroup& S,
                                               int j, bool paranoid = false);

/// Max length over minimals_of_Z.
Int omega_bruteforce(const NumericalSemigroup& S, int j);

/// All gaps of S (non-negative integers not in S), by direct sieve up to
/// n_1 * n_p.
std::vector<Int> gaps_direct(const NumericalSemigroup& S);

}  // namespace omega::oracle
