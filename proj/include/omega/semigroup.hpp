#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace omega {

using Int = std::int64_t;

enum class ErrorCode {
  EmptyInput,
  ContainsOneOrZero,
  SingleGenerator,
  GcdNotOne,
  NotMinimalSystem,
  NotAMember,
  DimensionMismatch,
};

class SemigroupError : public std::runtime_error {
 public:
  SemigroupError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);

/// A point x in N^p; |x| = sum of coordinates.
struct FactorizationVector {
  std::vector<Int> coords;

  FactorizationVector() = default;
  explicit FactorizationVector(std::vector<Int> c) : coords(std::move(c)) {}

  Int length() const;
  std::size_t dimension() const { return coords.size(); }
  Int operator[](std::size_t i) const { return coords[i]; }

  bool operator==(const FactorizationVector&) const = default;
  /// Component-wise order: true iff this[i] <= other[i] for all i.
  bool leq(const FactorizationVector& other) const;

  static FactorizationVector unit(std::size_t p, std::size_t j);
  std::string to_string() const;
};

/// Least element of S in each residue class modulo `modulus`.
struct AperyTable {
  Int modulus = 0;
  std::vector<Int> entries;  // entries[r] = min{s in S : s == r (mod modulus)}

  Int max_entry() const;
};

/// Submonoid of N generated by an arbitrary non-empty set of positive
/// integers (gcd may exceed 1). Membership reduces to the numerical
/// semigroup generated by the gcd-divided generators.
class Submonoid {
 public:
  explicit Submonoid(std::vector<Int> gens);
  bool contains(Int s) const;
  Int gcd() const { return gcd_; }

 private:
  Int gcd_ = 1;
  bool everything_ = false;  // divided generators contain 1
  Int mod_ = 0;              // least divided generator
  std::vector<Int> apery_;   // Apery table of the divided semigroup
};

/// Numerical semigroup given by its minimal generating system
/// n_1 < n_2 < ... < n_p. Immutable; cheap to copy; the Apery cache is
/// shared and populated with compute-once semantics.
class NumericalSemigroup {
 public:
  /// Sorts, deduplicates and validates. Throws SemigroupError on any
  /// violated invariant (gcd != 1, redundant generator, ...).
  explicit NumericalSemigroup(std::vector<Int> gens);

  const std::vector<Int>& generators() const { return state_->gens; }
  int embedding_dimension() const { return static_cast<int>(state_->gens.size()); }
  Int generator(std::size_t i) const { return state_->gens[i]; }

  Int multiplicity() const { return state_->gens.front(); }
  Int frobenius() const;
  Int genus() const;
  bool contains(Int s) const;

  /// Apery table with respect to n; requires n in S. Cached.
  const AperyTable& apery(Int n) const;

  /// Factorization homomorphism: sum of x_i * n_i.
  Int evaluate(const FactorizationVector& x) const;

  std::string to_string() const;

 private:
  struct State {
    std::vector<Int> gens;
    mutable std::mutex mu;
    mutable std::map<Int, AperyTable> apery_cache;
  };
  const AperyTable& base_table() const;
  std::shared_ptr<State> state_;
};

/// Apery table of the semigroup generated by `gens` (gcd must be 1, every
/// generator >= 1) with respect to `n`: single-source shortest paths on the
/// residue graph Z_n with arcs r -> (r + g) mod n of weight g.
std::vector<Int> apery_by_dijkstra(const std::vector<Int>& gens, Int n);

}  // namespace omega
