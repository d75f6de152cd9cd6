#include "f2bp/q_tensors.hpp"

#include "f2bp/common.hpp"

#include <numeric>

namespace f2bp {
namespace {

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

IndexCounts counts_of(std::span<const int> indices) {
  IndexCounts c{};
  for (int i : indices) {
    if (i < 0 || i > 5) throw ConfigError("Q tensor index out of range [0, 5]");
    ++c[i];
  }
  return c;
}

// Appends every nondecreasing tuple of length n over {first..5}.
void sorted_tuples(int n, int first, std::vector<int>& prefix,
                   std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == n) {
    out.push_back(prefix);
    return;
  }
  for (int i = first; i < 6; ++i) {
    prefix.push_back(i);
    sorted_tuples(n, i, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

Rational QTensorSet::simplex_moment(int m1, int m2, int m3) {
  // (m+3)! with m <= kMaxOrder fits easily; the ratio is reduced on construction.
  return Rational(factorial(m1) * factorial(m2) * factorial(m3), factorial(m1 + m2 + m3 + 3));
}

std::int64_t QTensorSet::multiplicity(const IndexCounts& counts) {
  const int n = std::accumulate(counts.begin(), counts.end(), 0);
  std::int64_t m = factorial(n);
  for (int c : counts) m /= factorial(c);
  return m;
}

QTensorSet::QTensorSet(int max_order) : max_order_(max_order) {
  if (max_order < 0 || max_order > kMaxOrder) {
    throw ConfigError("Q tensor order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  }
  ranks_.resize(max_order + 1);
  for (int n = 0; n <= max_order; ++n) {
    std::vector<std::vector<int>> tuples;
    std::vector<int> prefix;
    sorted_tuples(n, 0, prefix, tuples);
    for (auto& t : tuples) ranks_[n].emplace(t, entry(counts_of(t)));
  }
}

Rational QTensorSet::entry(const IndexCounts& c) const {
  return simplex_moment(c[0], c[1], c[2]) * simplex_moment(c[3], c[4], c[5]);
}

Rational QTensorSet::entry(std::span<const int> indices) const { return entry(counts_of(indices)); }

double QTensorSet::value(const IndexCounts& c) const {
  const Rational q = entry(c);
  return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

QTensorSet compute_q_tensors(int max_order) { return QTensorSet(max_order); }

}  // namespace f2bp
