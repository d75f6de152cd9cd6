#pragma once

// Expansion of 1/|X + y| in powers of the pair displacement y, and the
// moment tables used to integrate it over a simplex pair.

#include "f2bp/common.hpp"

#include <array>
#include <vector>

namespace f2bp::detail {

/// Monomials x^i y^j z^k of total degree <= max_degree, ordered by degree.
class Monomials3 {
 public:
  explicit Monomials3(int max_degree);

  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  /// Number of monomials with degree < n.
  static int count_below(int n) { return n * (n + 1) * (n + 2) / 6; }

  const std::array<int, 3>& exps(int idx) const { return exps_[idx]; }
  int degree(int idx) const { return exps_[idx][0] + exps_[idx][1] + exps_[idx][2]; }
  /// -1 when the degree exceeds max_degree or an exponent is negative.
  int index(int i, int j, int k) const;
  int index(const std::array<int, 3>& e) const { return index(e[0], e[1], e[2]); }

 private:
  int max_degree_;
  std::vector<std::array<int, 3>> exps_;
  std::vector<int> lookup_;
};

/// Dense coefficients over a Monomials3 basis.
using Poly3 = std::vector<double>;

/// Product truncated at the basis degree.
Poly3 multiply(const Monomials3& basis, const Poly3& a, const Poly3& b);

/// Coefficient of eps^k / r^(2k+1) in 1/sqrt(r^2 + eps): (-1)^k (2k-1)!! / (2^k k!).
double inverse_sqrt_coefficient(int k);

/// Taylor coefficients c_alpha of 1/|X + y| = sum_alpha c_alpha y^alpha, for
/// |alpha| <= basis.max_degree(), built by the grouping rule
///   T_n(y) = sum_{k} c_k C(k, n-k) 2^(2k-n) r^-(2k+1) (X.y)^(2k-n) |y|^(2(n-k)).
Poly3 taylor_coefficients(const Monomials3& basis, const Vec3& x);

/// Moments int_{unit simplex} (sum_i sigma_i u_i)^beta dsigma, |beta| <= basis degree,
/// where u_i are the columns of `corners`.
Poly3 simplex_moments(const Monomials3& basis, const Mat3& corners);

/// Precomputed index tables for the per-pair convolutions.
struct ConvolutionTables {
  struct Term {
    int left;
    int right;
    double weight;
  };
  /// Y_alpha = sum C(alpha, beta) mu_beta nu_(alpha-beta), |alpha| <= order.
  /// Terms of output alpha are pair_moments[pair_start[alpha] .. pair_start[alpha+1]).
  std::vector<Term> pair_moments;
  std::vector<int> pair_start;
  /// Z_(gamma, psi) = sum C(gamma, beta) mu_(beta + e_psi) nu_(gamma-beta),
  /// |gamma| <= order - 1, grouped by output 3 * gamma_index + psi.
  std::vector<Term> attitude_moments;
  std::vector<int> attitude_start;
  int n_pair = 0;      ///< number of alpha entries
  int n_attitude = 0;  ///< number of gamma entries

  ConvolutionTables(const Monomials3& basis, int order);
};

}  // namespace f2bp::detail
