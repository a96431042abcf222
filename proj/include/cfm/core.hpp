#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfm {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Sorted, duplicate-free list of edge ids.
using EdgeSet = std::vector<EdgeId>;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Malformed or invalid input (bad ids, broken invariants, unparsable files).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query that is well-formed but not answerable in the current state.
class QueryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Work would exceed a caller-supplied size budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double estimate)
      : std::runtime_error(what + " (estimated size " + std::to_string(estimate) + ")"),
        estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// Sort and deduplicate in place, returning the canonical set.
EdgeSet make_edge_set(std::vector<EdgeId> ids);

/// True iff sorted `a` is a subset of sorted `b`.
template <typename T>
bool sorted_subset(const std::vector<T>& a, const std::vector<T>& b) {
  auto ib = b.begin();
  for (const T& x : a) {
    while (ib != b.end() && *ib < x) ++ib;
    if (ib == b.end() || *ib != x) return false;
    ++ib;
  }
  return true;
}

/// Binomial coefficient as a double (0 when k < 0 or k > n).
double binom(long long n, long long k);

/// Binomial coefficient with overflow saturation to UINT64_MAX.
std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k);

/// Calls f(subset) for every k-subset of `items` in lexicographic order of positions.
template <typename T, typename F>
void for_each_subset(const std::vector<T>& items, std::size_t k, F&& f) {
  const std::size_t n = items.size();
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::vector<T> cur(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) cur[i] = items[idx[i]];
    f(static_cast<const std::vector<T>&>(cur));
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// FNV-style hash for id vectors, usable with unordered containers.
struct IdVectorHash {
  template <typename T>
  std::size_t operator()(const std::vector<T>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace cfm
