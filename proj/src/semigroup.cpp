#include "omega/semigroup.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace omega {

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in addition");
  }
  return r;
}

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in multiplication");
  }
  return r;
}

Int FactorizationVector::length() const {
  Int s = 0;
  for (Int c : coords) s = checked_add(s, c);
  return s;
}

bool FactorizationVector::leq(const FactorizationVector& other) const {
  if (coords.size() != other.coords.size()) {
    throw SemigroupError(ErrorCode::DimensionMismatch,
                         "comparing vectors of different dimension");
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] > other.coords[i]) return false;
  }
  return true;
}

FactorizationVector FactorizationVector::unit(std::size_t p, std::size_t j) {
  std::vector<Int> c(p, 0);
  c.at(j) = 1;
  return FactorizationVector(std::move(c));
}

std::string FactorizationVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) os << ',';
    os << coords[i];
  }
  os << ')';
  return os.str();
}

Int AperyTable::max_entry() const {
  return *std::max_element(entries.begin(), entries.end());
}

std::vector<Int> apery_by_dijkstra(const std::vector<Int>& gens, Int n) {
  const Int kInf = std::numeric_limits<Int>::max();
  std::vector<Int> dist(static_cast<std::size_t>(n), kInf);
  dist[0] = 0;
  using Node = std::pair<Int, Int>;  // (distance, residue)
  std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
  pq.emplace(0, 0);
  while (!pq.empty()) {
    auto [d, r] = pq.top();
    pq.pop();
    if (d != dist[static_cast<std::size_t>(r)]) continue;
    for (Int g : gens) {
      Int nd = checked_add(d, g);
      Int nr = (r + g) % n;
      if (nd < dist[static_cast<std::size_t>(nr)]) {
        dist[static_cast<std::size_t>(nr)] = nd;
        pq.emplace(nd, nr);
      }
    }
  }
  return dist;
}

Submonoid::Submonoid(std::vector<Int> gens) {
  if (gens.empty()) {
    throw SemigroupError(ErrorCode::EmptyInput, "submonoid needs a generator");
  }
  for (Int g : gens) {
    if (g < 1) {
      throw SemigroupError(ErrorCode::ContainsOneOrZero,
                           "submonoid generators must be positive");
    }
  }
  gcd_ = 0;
  for (Int g : gens) gcd_ = std::gcd(gcd_, g);
  for (Int& g : gens) g /= gcd_;
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  if (gens.front() == 1) {
    everything_ = true;
    return;
  }
  mod_ = gens.front();
  apery_ = apery_by_dijkstra(gens, mod_);
}

bool Submonoid::contains(Int s) const {
  if (s < 0) return false;
  if (s % gcd_ != 0) return false;
  s /= gcd_;
  if (everything_) return true;
  return s >= apery_[static_cast<std::size_t>(s % mod_)];
}

NumericalSemigroup::NumericalSemigroup(std::vector<Int> gens)
    : state_(std::make_shared<State>()) {
  if (gens.empty()) {
    throw SemigroupError(ErrorCode::EmptyInput, "empty generator list");
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  if (gens.front() < 2) {
    throw SemigroupError(ErrorCode::ContainsOneOrZero,
                         "generators must be >= 2");
  }
  if (gens.size() < 2) {
    throw SemigroupError(ErrorCode::SingleGenerator,
                         "at least two generators are required");
  }
  Int g = 0;
  for (Int x : gens) g = std::gcd(g, x);
  if (g != 1) {
    throw SemigroupError(ErrorCode::GcdNotOne,
                         "gcd of the generators is " + std::to_string(g) +
                             ", not 1");
  }
  // Minimality: no generator lies in the submonoid spanned by the others.
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<Int> rest;
    rest.reserve(gens.size() - 1);
    for (std::size_t t = 0; t < gens.size(); ++t) {
      if (t != i) rest.push_back(gens[t]);
    }
    if (Submonoid(rest).contains(gens[i])) {
      throw SemigroupError(ErrorCode::NotMinimalSystem,
                           "generator " + std::to_string(gens[i]) +
                               " is redundant");
    }
  }
  state_->gens = std::move(gens);
}

const AperyTable& NumericalSemigroup::base_table() const {
  const Int n1 = state_->gens.front();
  std::lock_guard<std::mutex> lock(state_->mu);
  auto it = state_->apery_cache.find(n1);
  if (it == state_->apery_cache.end()) {
    AperyTable t;
    t.modulus = n1;
    t.entries = apery_by_dijkstra(state_->gens, n1);
    it = state_->apery_cache.emplace(n1, std::move(t)).first;
  }
  return it->second;
}

bool NumericalSemigroup::contains(Int s) const {
  if (s < 0) return false;
  if (s == 0) return true;
  const AperyTable& t = base_table();
  return s >= t.entries[static_cast<std::size_t>(s % t.modulus)];
}

const AperyTable& NumericalSemigroup::apery(Int n) const {
  if (n <= 0 || !contains(n)) {
    throw SemigroupError(ErrorCode::NotAMember,
                         std::to_string(n) + " is not in the semigroup");
  }
  std::lock_guard<std::mutex> lock(state_->mu);
  auto it = state_->apery_cache.find(n);
  if (it == state_->apery_cache.end()) {
    AperyTable t;
    t.modulus = n;
    t.entries = apery_by_dijkstra(state_->gens, n);
    it = state_->apery_cache.emplace(n, std::move(t)).first;
  }
  return it->second;
}

Int NumericalSemigroup::frobenius() const {
  const AperyTable& t = base_table();
  return t.max_entry() - t.modulus;
}

Int NumericalSemigroup::genus() const {
  const AperyTable& t = base_table();
  Int g = 0;
  for (Int r = 0; r < t.modulus; ++r) {
    g += (t.entries[static_cast<std::size_t>(r)] - r) / t.modulus;
  }
  return g;
}

Int NumericalSemigroup::evaluate(const FactorizationVector& x) const {
  if (x.dimension() != state_->gens.size()) {
    throw SemigroupError(ErrorCode::DimensionMismatch,
                         "vector dimension does not match embedding dimension");
  }
  Int s = 0;
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    s = checked_add(s, checked_mul(x[i], state_->gens[i]));
  }
  return s;
}

std::string NumericalSemigroup::to_string() const {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < state_->gens.size(); ++i) {
    if (i) os << ',';
    os << state_->gens[i];
  }
  os << '>';
  return os.str();
}

}  // namespace omega
