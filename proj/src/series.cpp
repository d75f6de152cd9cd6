#include "series.hpp"

#include "f2bp/q_tensors.hpp"

#include <cmath>

namespace f2bp::detail {
namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

Monomials3::Monomials3(int max_degree) : max_degree_(max_degree) {
  const int d1 = max_degree + 1;
  lookup_.assign(static_cast<std::size_t>(d1) * d1 * d1, -1);
  for (int n = 0; n <= max_degree; ++n) {
    for (int i = n; i >= 0; --i) {
      for (int j = n - i; j >= 0; --j) {
        const int k = n - i - j;
        lookup_[(i * d1 + j) * d1 + k] = static_cast<int>(exps_.size());
        exps_.push_back({i, j, k});
      }
    }
  }
}

int Monomials3::index(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i + j + k > max_degree_) return -1;
  const int d1 = max_degree_ + 1;
  return lookup_[(i * d1 + j) * d1 + k];
}

Poly3 multiply(const Monomials3& basis, const Poly3& a, const Poly3& b) {
  Poly3 out(basis.size(), 0.0);
  for (int ia = 0; ia < basis.size(); ++ia) {
    if (a[ia] == 0.0) continue;
    const auto& ea = basis.exps(ia);
    for (int ib = 0; ib < basis.size(); ++ib) {
      if (b[ib] == 0.0) continue;
      const auto& eb = basis.exps(ib);
      const int idx = basis.index(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]);
      if (idx >= 0) out[idx] += a[ia] * b[ib];
    }
  }
  return out;
}

double inverse_sqrt_coefficient(int k) {
  // binomial(-1/2, k), built up term by term.
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c *= -(2.0 * i - 1.0) / (2.0 * i);
  return c;
}

Poly3 taylor_coefficients(const Monomials3& basis, const Vec3& x) {
  const int dmax = basis.max_degree();
  const double r2 = x.squaredNorm();
  const double r = std::sqrt(r2);

  Poly3 linear(basis.size(), 0.0);
  linear[basis.index(1, 0, 0)] = x.x();
  linear[basis.index(0, 1, 0)] = x.y();
  linear[basis.index(0, 0, 1)] = x.z();
  Poly3 square(basis.size(), 0.0);
  if (dmax >= 2) {
    square[basis.index(2, 0, 0)] = 1.0;
    square[basis.index(0, 2, 0)] = 1.0;
    square[basis.index(0, 0, 2)] = 1.0;
  }

  Poly3 one(basis.size(), 0.0);
  one[0] = 1.0;
  std::vector<Poly3> lin_pow{one};
  for (int p = 1; p <= dmax; ++p) lin_pow.push_back(multiply(basis, lin_pow.back(), linear));
  std::vector<Poly3> sq_pow{one};
  for (int j = 1; 2 * j <= dmax; ++j) sq_pow.push_back(multiply(basis, sq_pow.back(), square));

  Poly3 out(basis.size(), 0.0);
  for (int n = 0; n <= dmax; ++n) {
    for (int k = (n + 1) / 2; k <= n; ++k) {
      const int j = n - k;
      const int p = 2 * k - n;
      const double scale = inverse_sqrt_coefficient(k) * binomial(k, j) * std::ldexp(1.0, p) /
                           std::pow(r, 2 * k + 1);
      const Poly3& lp = lin_pow[p];
      const Poly3& sj = sq_pow[j];
      // Only the degree-p and degree-2j blocks are populated.
      for (int ia = Monomials3::count_below(p); ia < Monomials3::count_below(p + 1); ++ia) {
        if (lp[ia] == 0.0) continue;
        const auto& ea = basis.exps(ia);
        for (int ib = Monomials3::count_below(2 * j); ib < Monomials3::count_below(2 * j + 1);
             ++ib) {
          if (sj[ib] == 0.0) continue;
          const auto& eb = basis.exps(ib);
          out[basis.index(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])] +=
              scale * lp[ia] * sj[ib];
        }
      }
    }
  }
  return out;
}

Poly3 simplex_moments(const Monomials3& basis, const Mat3& corners) {
  const int n = basis.size();
  // Single-simplex Q factors for every barycentric monomial.
  static thread_local std::vector<double> unit_moments;
  static thread_local int unit_degree = -1;
  if (unit_degree != basis.max_degree()) {
    unit_moments.resize(n);
    for (int m = 0; m < n; ++m) {
      const auto& e = basis.exps(m);
      const Rational q = QTensorSet::simplex_moment(e[0], e[1], e[2]);
      unit_moments[m] = static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
    }
    unit_degree = basis.max_degree();
  }

  // Row beta of `poly` is (sum_i sigma_i u_i)^beta as a polynomial in sigma;
  // only its degree-|beta| block is ever nonzero.
  static thread_local std::vector<double> poly;
  poly.assign(static_cast<std::size_t>(n) * n, 0.0);
  poly[0] = 1.0;
  Poly3 out(n, 0.0);
  out[0] = unit_moments[0];
  for (int b = 1; b < n; ++b) {
    const auto& e = basis.exps(b);
    const int c = e[0] > 0 ? 0 : (e[1] > 0 ? 1 : 2);
    std::array<int, 3> prev = e;
    --prev[c];
    const double* src = &poly[static_cast<std::size_t>(basis.index(prev)) * n];
    double* dst = &poly[static_cast<std::size_t>(b) * n];
    const int deg = basis.degree(b) - 1;
    for (int m = Monomials3::count_below(deg); m < Monomials3::count_below(deg + 1); ++m) {
      if (src[m] == 0.0) continue;
      const auto& em = basis.exps(m);
      dst[basis.index(em[0] + 1, em[1], em[2])] += src[m] * corners(c, 0);
      dst[basis.index(em[0], em[1] + 1, em[2])] += src[m] * corners(c, 1);
      dst[basis.index(em[0], em[1], em[2] + 1)] += src[m] * corners(c, 2);
    }
    double mu = 0.0;
    for (int m = Monomials3::count_below(deg + 1); m < Monomials3::count_below(deg + 2); ++m) {
      mu += dst[m] * unit_moments[m];
    }
    out[b] = mu;
  }
  return out;
}

ConvolutionTables::ConvolutionTables(const Monomials3& basis, int order)
    : n_pair(Monomials3::count_below(order + 1)), n_attitude(Monomials3::count_below(order)) {
  for (int a = 0; a < n_pair; ++a) {
    pair_start.push_back(static_cast<int>(pair_moments.size()));
    const auto& ea = basis.exps(a);
    for (int i = 0; i <= ea[0]; ++i) {
      for (int j = 0; j <= ea[1]; ++j) {
        for (int k = 0; k <= ea[2]; ++k) {
          const double w = binomial(ea[0], i) * binomial(ea[1], j) * binomial(ea[2], k);
          pair_moments.push_back(
              {basis.index(i, j, k), basis.index(ea[0] - i, ea[1] - j, ea[2] - k), w});
        }
      }
    }
  }
  pair_start.push_back(static_cast<int>(pair_moments.size()));
  for (int g = 0; g < n_attitude; ++g) {
    const auto& eg = basis.exps(g);
    for (int psi = 0; psi < 3; ++psi) {
      attitude_start.push_back(static_cast<int>(attitude_moments.size()));
      for (int i = 0; i <= eg[0]; ++i) {
        for (int j = 0; j <= eg[1]; ++j) {
          for (int k = 0; k <= eg[2]; ++k) {
            std::array<int, 3> up{i, j, k};
            ++up[psi];
            const double w = binomial(eg[0], i) * binomial(eg[1], j) * binomial(eg[2], k);
            attitude_moments.push_back({basis.index(up),
                                        basis.index(eg[0] - i, eg[1] - j, eg[2] - k), w});
          }
        }
      }
    }
  }
  attitude_start.push_back(static_cast<int>(attitude_moments.size()));
}

}  // namespace f2bp::detail
