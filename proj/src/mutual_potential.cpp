#include "f2bp/mutual_potential.hpp"

#include "series.hpp"

#include <tbb/blocked_range.h>
#include <tbb/combinable.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

namespace f2bp {

using detail::Monomials3;
using detail::Poly3;

PairGeometry assemble_pair_geometry(const Vec3& X, const Mat3& R, const Mat3& a_corners,
                                    const Mat3& b_corners) {
  PairGeometry g;
  g.r = X.norm();
  if (!(g.r > 0.0)) throw SingularConfigurationError("zero separation between body centroids");
  g.v.leftCols<3>() = R * a_corners;
  g.v.rightCols<3>() = -b_corners;
  g.w = g.v.transpose() * X;
  g.rmat = g.v.transpose() * g.v;
  return g;
}

namespace {

using Poly6 = std::map<IndexCounts, double>;

Poly6 multiply6(const Poly6& a, const Poly6& b) {
  Poly6 out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      IndexCounts e;
      for (int i = 0; i < 6; ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

// sum over all index tuples of Q_{i1..in} times the tensor product encoded by
// `poly`; expanding into monomials applies the multinomial multiplicities.
double contract(const Poly6& poly, const QTensorSet& q) {
  double s = 0.0;
  for (const auto& [e, c] : poly) s += c * q.value(e);
  return s;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

std::vector<double> series_terms(const PairGeometry& g, const QTensorSet& q, int order) {
  if (order > q.max_order()) throw ConfigError("series order exceeds the Q tensor set");
  Poly6 lin;
  Poly6 quad;
  for (int i = 0; i < 6; ++i) {
    IndexCounts e{};
    ++e[i];
    lin[e] += g.w(i);
    for (int j = i; j < 6; ++j) {
      IndexCounts ee{};
      ++ee[i];
      ++ee[j];
      quad[ee] += (i == j ? 1.0 : 2.0) * g.rmat(i, j);
    }
  }
  const Poly6 one{{IndexCounts{}, 1.0}};
  std::vector<Poly6> lin_pow{one};
  std::vector<Poly6> quad_pow{one};
  for (int p = 1; p <= order; ++p) lin_pow.push_back(multiply6(lin_pow.back(), lin));
  for (int j = 1; 2 * j <= order; ++j) quad_pow.push_back(multiply6(quad_pow.back(), quad));

  std::vector<double> terms(order + 1, 0.0);
  for (int n = 0; n <= order; ++n) {
    for (int k = (n + 1) / 2; k <= n; ++k) {
      const int j = n - k;
      const int p = 2 * k - n;
      const double scale = detail::inverse_sqrt_coefficient(k) * binomial(k, j) *
                           std::ldexp(1.0, p) / std::pow(g.r, 2 * k + 1);
      terms[n] += scale * contract(multiply6(lin_pow[p], quad_pow[j]), q);
    }
  }
  return terms;
}

Vec3 moment(const Mat3& dUdR, const Mat3& R) {
  return R.col(0).cross(dUdR.col(0)) + R.col(1).cross(dUdR.col(1)) +
         R.col(2).cross(dUdR.col(2));
}

struct MutualGravity::Tables {
  Monomials3 taylor_basis;
  Monomials3 moment_basis;
  detail::ConvolutionTables conv;
  // Index of alpha + e_phi in the Taylor basis, and the factor alpha_phi + 1.
  std::vector<std::array<int, 3>> raise_index;
  std::vector<std::array<double, 3>> raise_factor;

  std::vector<Mat3> a_corners;
  std::vector<double> a_weight;  // rho_a T_a
  std::vector<Poly3> b_moments;  // moments of the negated body-2 corners
  std::vector<double> b_weight;

  Tables(const PolyhedralBody& b1, const PolyhedralBody& b2, int order)
      : taylor_basis(order + 1), moment_basis(order), conv(moment_basis, order) {
    for (int a = 0; a < conv.n_pair; ++a) {
      const auto& e = taylor_basis.exps(a);
      std::array<int, 3> idx{};
      std::array<double, 3> fac{};
      for (int phi = 0; phi < 3; ++phi) {
        auto up = e;
        ++up[phi];
        idx[phi] = taylor_basis.index(up);
        fac[phi] = static_cast<double>(up[phi]);
      }
      raise_index.push_back(idx);
      raise_factor.push_back(fac);
    }
    for (const auto& s : b1.simplices) {
      a_corners.push_back(s.vertices);
      a_weight.push_back(s.density * s.jacobian);
    }
    for (const auto& s : b2.simplices) {
      b_moments.push_back(detail::simplex_moments(moment_basis, -s.vertices));
      b_weight.push_back(s.density * s.jacobian);
    }
  }
};

namespace {

struct RowSum {
  double U = 0.0;
  Vec3 gX = Vec3::Zero();
  Mat3 K = Mat3::Zero();

  RowSum& operator+=(const RowSum& o) {
    U += o.U;
    gX += o.gX;
    K += o.K;
    return *this;
  }
};

// Per-call state shared by all rows: Taylor coefficients, their X-gradient
// shifts, and the rotated body-1 moments.
struct CallState {
  Poly3 taylor;
  std::array<std::vector<double>, 3> raised;  // c_(alpha+e_phi) (alpha_phi+1)
  std::vector<Poly3> a_moments;
};

void accumulate_pair(const detail::ConvolutionTables& conv, const Poly3& mu, const Poly3& nu,
                     double weight, std::vector<double>& y, std::vector<double>& z) {
  const auto* terms = conv.pair_moments.data();
  for (int o = 0; o < conv.n_pair; ++o) {
    double acc = 0.0;
    for (int k = conv.pair_start[o]; k < conv.pair_start[o + 1]; ++k) {
      acc += terms[k].weight * mu[terms[k].left] * nu[terms[k].right];
    }
    y[o] += weight * acc;
  }
  terms = conv.attitude_moments.data();
  for (int o = 0; o < 3 * conv.n_attitude; ++o) {
    double acc = 0.0;
    for (int k = conv.attitude_start[o]; k < conv.attitude_start[o + 1]; ++k) {
      acc += terms[k].weight * mu[terms[k].left] * nu[terms[k].right];
    }
    z[o] += weight * acc;
  }
}

RowSum contract_row(const detail::ConvolutionTables& conv, const CallState& cs,
                    const std::vector<double>& y, const std::vector<double>& z) {
  RowSum s;
  for (int a = 0; a < conv.n_pair; ++a) {
    s.U += cs.taylor[a] * y[a];
    for (int phi = 0; phi < 3; ++phi) s.gX[phi] += cs.raised[phi][a] * y[a];
  }
  for (int g = 0; g < conv.n_attitude; ++g) {
    for (int phi = 0; phi < 3; ++phi) {
      for (int psi = 0; psi < 3; ++psi) s.K(phi, psi) += cs.raised[phi][g] * z[3 * g + psi];
    }
  }
  return s;
}

}  // namespace

MutualGravity::MutualGravity(PolyhedralBody body1, PolyhedralBody body2, double G,
                             const QTensorSet& q, int order, EvalOptions options)
    : body1_(std::move(body1)), body2_(std::move(body2)), G_(G), order_(order),
      options_(std::move(options)) {
  if (order < 0 || order > q.max_order()) {
    throw ConfigError("series order " + std::to_string(order) +
                      " is outside the precomputed Q tensor range");
  }
  if (body1_.simplices.empty() || body2_.simplices.empty()) {
    throw ConfigError("both bodies need at least one simplex");
  }
  set_options(options_);
  tables_ = std::make_shared<const Tables>(body1_, body2_, order_);
}

MutualGravity::MutualGravity(const MutualGravity& other)
    : body1_(other.body1_), body2_(other.body2_), G_(other.G_), order_(other.order_),
      options_(other.options_), tables_(other.tables_) {}

MutualGravity::~MutualGravity() = default;

void MutualGravity::set_options(EvalOptions options) {
  if (!options.row_order.empty()) {
    std::vector<int> sorted = options.row_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(body2_.simplices.size());
    std::iota(expected.begin(), expected.end(), 0);
    if (sorted != expected) throw ConfigError("row_order must be a permutation of body-2 simplices");
  }
  if (options.threads < 0) throw ConfigError("thread count must be >= 0");
  options_ = std::move(options);
}

void MutualGravity::reset_counters() const {
  evaluations_ = 0;
  warnings_ = 0;
}

GravityGradients MutualGravity::evaluate(const Vec3& X, const Mat3& R) const {
  const double r = X.norm();
  if (!(r > 0.0)) throw SingularConfigurationError("zero separation between body centroids");
  const Tables& t = *tables_;
  const auto& conv = t.conv;

  CallState cs;
  cs.taylor = detail::taylor_coefficients(t.taylor_basis, X);
  for (int phi = 0; phi < 3; ++phi) {
    cs.raised[phi].resize(conv.n_pair);
    for (int a = 0; a < conv.n_pair; ++a) {
      cs.raised[phi][a] = cs.taylor[t.raise_index[a][phi]] * t.raise_factor[a][phi];
    }
  }
  cs.a_moments.reserve(t.a_corners.size());
  for (const auto& c : t.a_corners) cs.a_moments.push_back(detail::simplex_moments(t.moment_basis, R * c));

  const std::size_t n_rows = t.b_moments.size();
  auto row = [&](std::size_t b) {
    std::vector<double> y(conv.n_pair, 0.0);
    std::vector<double> z(3 * conv.n_attitude, 0.0);
    for (std::size_t a = 0; a < cs.a_moments.size(); ++a) {
      accumulate_pair(conv, cs.a_moments[a], t.b_moments[b], t.a_weight[a] * t.b_weight[b], y, z);
    }
    return contract_row(conv, cs, y, z);
  };
  auto row_at = [&](std::size_t i) {
    return options_.row_order.empty() ? i : static_cast<std::size_t>(options_.row_order[i]);
  };

  RowSum total;
  // More workers than cores only adds scheduling noise.
  const int cores = tbb::info::default_concurrency();
  const int workers = options_.threads == 0 ? cores : std::min(options_.threads, cores);
  const bool parallel = workers > 1 && n_rows > 1;
  if (options_.reduction == Reduction::Deterministic) {
    std::vector<RowSum> slots(n_rows);
    if (parallel) {
      tbb::task_arena arena(workers);
      arena.execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n_rows),
                          [&](const tbb::blocked_range<std::size_t>& range) {
                            for (std::size_t i = range.begin(); i != range.end(); ++i) {
                              const std::size_t b = row_at(i);
                              slots[b] = row(b);
                            }
                          });
      });
    } else {
      for (std::size_t i = 0; i < n_rows; ++i) {
        const std::size_t b = row_at(i);
        slots[b] = row(b);
      }
    }
    for (const auto& s : slots) total += s;
  } else if (parallel) {
    tbb::combinable<RowSum> partial;
    tbb::task_arena arena(workers);
    arena.execute([&] {
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n_rows),
                        [&](const tbb::blocked_range<std::size_t>& range) {
                          for (std::size_t i = range.begin(); i != range.end(); ++i) {
                            partial.local() += row(row_at(i));
                          }
                        });
    });
    partial.combine_each([&](const RowSum& s) { total += s; });
  } else {
    for (std::size_t i = 0; i < n_rows; ++i) total += row(row_at(i));
  }

  GravityGradients out;
  out.U = -G_ * total.U;
  out.dUdX = -G_ * total.gX;
  out.dUdR = -G_ * total.K * R;
  out.M = moment(out.dUdR, R);
  out.outside_convergence_region = r < convergence_radius();
  ++evaluations_;
  if (out.outside_convergence_region) ++warnings_;
  return out;
}

PairTerms MutualGravity::pair_terms(std::size_t a, std::size_t b, const Vec3& X,
                                    const Mat3& R) const {
  const Tables& t = *tables_;
  if (a >= t.a_corners.size() || b >= t.b_moments.size()) throw ConfigError("simplex index out of range");
  if (!(X.norm() > 0.0)) throw SingularConfigurationError("zero separation between body centroids");
  const auto& conv = t.conv;
  const Poly3 taylor = detail::taylor_coefficients(t.taylor_basis, X);
  const Poly3 mu = detail::simplex_moments(t.moment_basis, R * t.a_corners[a]);
  std::vector<double> y(conv.n_pair, 0.0);
  std::vector<double> z(3 * conv.n_attitude, 0.0);
  accumulate_pair(conv, mu, t.b_moments[b], 1.0, y, z);

  PairTerms out;
  out.U.assign(order_ + 1, 0.0);
  out.dUdX.assign(order_ + 1, Vec3::Zero());
  std::vector<Mat3> k(order_ + 1, Mat3::Zero());
  for (int i = 0; i < conv.n_pair; ++i) {
    const int n = t.taylor_basis.degree(i);
    out.U[n] += taylor[i] * y[i];
    for (int phi = 0; phi < 3; ++phi) {
      const double raised = taylor[t.raise_index[i][phi]] * t.raise_factor[i][phi];
      out.dUdX[n][phi] += raised * y[i];
      if (i < conv.n_attitude) {
        for (int psi = 0; psi < 3; ++psi) k[n + 1](phi, psi) += raised * z[3 * i + psi];
      }
    }
  }
  for (const auto& km : k) out.dUdR.push_back(km * R);
  return out;
}

void MutualGravity::write_pair_csv(std::ostream& out, const Vec3& X, const Mat3& R) const {
  const Tables& t = *tables_;
  const auto old_precision = out.precision(17);
  out << "a,b,weight,U,dUdX_x,dUdX_y,dUdX_z";
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out << ",dUdR_" << i << j;
  }
  out << '\n';
  for (std::size_t b = 0; b < t.b_moments.size(); ++b) {
    for (std::size_t a = 0; a < t.a_corners.size(); ++a) {
      const PairTerms p = pair_terms(a, b, X, R);
      const double w = -G_ * t.a_weight[a] * t.b_weight[b];
      double u = 0.0;
      Vec3 gx = Vec3::Zero();
      Mat3 gr = Mat3::Zero();
      for (int n = 0; n <= order_; ++n) {
        u += p.U[n];
        gx += p.dUdX[n];
        gr += p.dUdR[n];
      }
      out << a << ',' << b << ',' << t.a_weight[a] * t.b_weight[b] << ',' << w * u;
      for (int i = 0; i < 3; ++i) out << ',' << w * gx[i];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) out << ',' << w * gr(i, j);
      }
      out << '\n';
    }
  }
  out.precision(old_precision);
}

double potential(const Vec3& X, const Mat3& R, const PolyhedralBody& body1,
                 const PolyhedralBody& body2, double G, const QTensorSet& q, int order) {
  return MutualGravity(body1, body2, G, q, order).evaluate(X, R).U;
}

Vec3 force_gradient(const Vec3& X, const Mat3& R, const PolyhedralBody& body1,
                    const PolyhedralBody& body2, double G, const QTensorSet& q, int order) {
  return MutualGravity(body1, body2, G, q, order).evaluate(X, R).dUdX;
}

Mat3 attitude_gradient(const Vec3& X, const Mat3& R, const PolyhedralBody& body1,
                       const PolyhedralBody& body2, double G, const QTensorSet& q, int order) {
  return MutualGravity(body1, body2, G, q, order).evaluate(X, R).dUdR;
}

}  // namespace f2bp
