#pragma once

#include <boost/rational.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace f2bp {

using Rational = boost::rational<std::int64_t>;

/// Exponent counts (m1..m6) of a monomial in the six barycentric weights of a
/// simplex pair. Counts 0-2 belong to the body-1 simplex, 3-5 to body 2.
using IndexCounts = std::array<int, 6>;

/// Moments of barycentric monomials over the product of two unit simplices.
///
/// Rank n holds the fully symmetric tensor Q_{i1..in}, i in {0..5}. Only one
/// entry per index multiset is stored, keyed by the sorted index tuple. A
/// contraction over all 6^n index tuples visits each stored entry
/// n! / (m1! ... m6!) times; callers apply that multiplicity themselves.
///
///   Q(m) = [m1! m2! m3! / (m1+m2+m3+3)!] * [m4! m5! m6! / (m4+m5+m6+3)!]
class QTensorSet {
 public:
  /// Factorial-overflow guard: every entry stays exact in 64-bit rationals.
  static constexpr int kMaxOrder = 12;

  explicit QTensorSet(int max_order);

  int max_order() const { return max_order_; }

  /// Entry for an arbitrary (unsorted) index tuple over {0..5}.
  Rational entry(std::span<const int> indices) const;
  Rational entry(const IndexCounts& counts) const;
  double value(const IndexCounts& counts) const;

  /// Stored entries of rank n, keyed by the nondecreasing index tuple.
  const std::map<std::vector<int>, Rational>& rank(int n) const { return ranks_.at(n); }

  /// Single-simplex factor m1! m2! m3! / (m1+m2+m3+3)!; Q is the product of
  /// this factor for each simplex of the pair.
  static Rational simplex_moment(int m1, int m2, int m3);

  /// Number of index tuples that map to the same stored entry.
  static std::int64_t multiplicity(const IndexCounts& counts);

 private:
  int max_order_;
  std::vector<std::map<std::vector<int>, Rational>> ranks_;
};

/// Builds every rank 0..max_order. Throws ConfigError outside [0, kMaxOrder].
QTensorSet compute_q_tensors(int max_order);

}  // namespace f2bp
