#pragma once

// Transfer operators on the coset variable x = |U_12|^2 in [0, 1]: the
// reduced kernel of K_0, its spectrum, the crossover ratio of operator
// powers, the small-gap semigroup limit and the Gaussian (Mehler) kernel of
// the first correlation function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "rbmlab/core/errors.hpp"
#include "rbmlab/core/expm.hpp"
#include "rbmlab/core/quadrature.hpp"
#include "rbmlab/core/special.hpp"

namespace rbmlab {

/// Energy-dependent constants of the saddle-point analysis.
struct DerivedConstants {
  double E = 0.0;
  double rho = 0.0;     // semicircle density
  double a_plus = 0.0;  // sqrt(1 - E^2/4)
  double t_star = 0.0;  // (a_+ - a_-)^2 = 4 a_+^2 = 4 pi^2 rho^2
  double c_plus = 0.0;  // 1 + a_+^{-2}
  std::complex<double> g_plus;

  [[nodiscard]] double alpha_plus(double w) const {
    return std::sqrt(0.5 * c_plus) * std::sqrt(1.0 + c_plus / (2.0 * w * w));
  }
};

[[nodiscard]] inline DerivedConstants derived_constants(double e) {
  require(std::fabs(e) < 2.0, "derived constants: need |E| < 2");
  DerivedConstants k;
  k.E = e;
  const double root = std::sqrt(4.0 - e * e);
  k.rho = root / (2.0 * std::numbers::pi);
  k.a_plus = 0.5 * root;
  k.t_star = 4.0 * k.a_plus * k.a_plus;
  k.c_plus = 1.0 + 1.0 / (k.a_plus * k.a_plus);
  k.g_plus = {-0.5 * e, 0.5 * root};
  return k;
}

/// Phase-averaged kernel of K_0 restricted to functions of x = |U_12|^2:
/// a exp(-a (x1 + x2 - 2 x1 x2)) I0(2a sqrt(x1 x2 (1-x1)(1-x2))), a = t* W^2.
///
/// The exponent is evaluated in the cancellation-free form
/// -a (sqrt(x1 (1-x2)) - sqrt(x2 (1-x1)))^2 paired with the scaled I0.
[[nodiscard]] inline double reduced_kernel(double t_star, double w, double x1, double x2) {
  x1 = std::clamp(x1, 0.0, 1.0);
  x2 = std::clamp(x2, 0.0, 1.0);
  const double a = t_star * w * w;
  const double b = 2.0 * a * std::sqrt(x1 * x2 * (1.0 - x1) * (1.0 - x2));
  const double diff = std::sqrt(x1 * (1.0 - x2)) - std::sqrt(x2 * (1.0 - x1));
  return a * std::exp(-a * diff * diff) * special::bessel_i0e(b);
}

/// Discretized operator on [0, 1], either on Gauss-Legendre nodes
/// (symmetrized Nystrom matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j)) or in the
/// orthonormal shifted-Legendre basis.
struct CosetOperator {
  enum class Basis { kNystrom, kLegendre };
  Basis basis = Basis::kLegendre;
  QuadratureRule rule;  // Nystrom only
  Eigen::MatrixXd matrix;

  [[nodiscard]] Eigen::Index size() const noexcept { return matrix.rows(); }
};

[[nodiscard]] inline CosetOperator k0_nystrom(double t_star, double w, std::size_t nodes) {
  require(nodes >= 2, "k0_nystrom: need at least two nodes");
  CosetOperator op;
  op.basis = CosetOperator::Basis::kNystrom;
  op.rule = gauss_legendre(nodes, 0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(nodes);
  op.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const double v = std::sqrt(op.rule.weights[ui] * op.rule.weights[uj]) *
                       reduced_kernel(t_star, w, op.rule.nodes[ui], op.rule.nodes[uj]);
      op.matrix(i, j) = v;
      op.matrix(j, i) = v;
    }
  }
  return op;
}

/// Closed-form eigenvalues of K_0 on Legendre polynomials,
/// lambda_j = a e^{-a/2} i_j(a/2) with the modified spherical Bessel i_j.
/// lambda_0 = 1 - e^{-a}.
[[nodiscard]] inline std::vector<double> legendre_k0_eigenvalues(double t_star, double w,
                                                                 std::size_t count) {
  const double a = t_star * w * w;
  require(a > 0.0, "legendre_k0_eigenvalues: t* W^2 must be positive");
  auto out = special::scaled_spherical_i(count, 0.5 * a);
  for (auto& v : out) v *= a;
  return out;
}

[[nodiscard]] inline CosetOperator k0_legendre(double t_star, double w, std::size_t size) {
  CosetOperator op;
  op.basis = CosetOperator::Basis::kLegendre;
  const auto lam = legendre_k0_eigenvalues(t_star, w, size);
  op.matrix = Eigen::Map<const Eigen::VectorXd>(lam.data(), static_cast<Eigen::Index>(size))
                  .asDiagonal();
  return op;
}

/// Multiplication by nu = 1 - 2x in the orthonormal shifted-Legendre basis.
[[nodiscard]] inline Eigen::MatrixXd legendre_nu(std::size_t size) {
  const auto n = static_cast<Eigen::Index>(size);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    const double c = special::legendre_nu_coupling(static_cast<int>(j));
    m(j, j + 1) = c;
    m(j + 1, j) = c;
  }
  return m;
}

struct K0Spectrum {
  std::vector<double> values;  // descending
  std::size_t nodes = 0;
  /// Largest change of the leading eigenvalues when the node count is doubled.
  double doubling_delta = 0.0;
};

namespace detail {

inline std::vector<double> descending_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver failed");
  std::vector<double> v(solver.eigenvalues().data(),
                        solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace detail

/// Nystrom eigenvalues of K_0 on `nodes` Gauss-Legendre points of [0, 1].
///
/// The computation is repeated with twice the nodes; the largest change of
/// the first 16 eigenvalues is returned as doubling_delta. With a tolerance
/// given, a larger delta raises ConvergenceError.
[[nodiscard]] inline K0Spectrum k0_spectrum(double t_star, double w, std::size_t nodes,
                                            double tolerance = 0.0) {
  require(nodes >= 8, "k0_spectrum: need at least 8 nodes");
  K0Spectrum out;
  out.nodes = nodes;
  out.values = detail::descending_eigenvalues(k0_nystrom(t_star, w, nodes).matrix);
  const auto fine = detail::descending_eigenvalues(k0_nystrom(t_star, w, 2 * nodes).matrix);
  const std::size_t lead = std::min<std::size_t>(16, nodes);
  for (std::size_t j = 0; j < lead; ++j)
    out.doubling_delta = std::max(out.doubling_delta, std::fabs(out.values[j] - fine[j]));
  if (tolerance > 0.0 && out.doubling_delta > tolerance)
    throw ConvergenceError("k0_spectrum: J=" + std::to_string(nodes) + " and J=" +
                           std::to_string(2 * nodes) + " differ by " +
                           std::to_string(out.doubling_delta));
  return out;
}

enum class PhaseForm {
  /// K_xi = F K_0 F with F = exp(-i pi xi nu / n).
  kExact,
  /// K_xi = K_0 - (2 pi i xi / n) nu.
  kFirstOrder,
};

struct TransferOptions {
  CosetOperator::Basis basis = CosetOperator::Basis::kLegendre;
  std::size_t size = 64;  // basis size or node count
  PhaseForm phase = PhaseForm::kExact;
  /// Recompute with twice the basis and report the difference.
  bool check_doubling = true;
};

struct TransferResult {
  std::complex<double> value;
  std::size_t size = 0;
  double doubling_delta = 0.0;
};

namespace detail {

inline Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, std::uint64_t exponent) {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  bool first = true;
  while (exponent > 0) {
    if (exponent & 1u) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = (result * base).eval();
      }
    }
    exponent >>= 1u;
    if (exponent > 0) base = (base * base).eval();
  }
  return result;
}

inline std::complex<double> transfer_ratio_once(std::uint64_t n, double w, double e, double xi,
                                                const TransferOptions& opt, std::size_t size) {
  const auto k = derived_constants(e);
  const double theta = std::numbers::pi * xi / static_cast<double>(n);
  const auto J = static_cast<Eigen::Index>(size);
  const std::complex<double> I(0.0, 1.0);

  // Normalized K_0 and the test vector f0 in the chosen representation, plus
  // the multiplication operator nu (diagonal for Nystrom).
  Eigen::MatrixXd k0;
  Eigen::VectorXd f0;
  Eigen::MatrixXd nu;
  double lambda0 = 0.0;
  if (opt.basis == CosetOperator::Basis::kLegendre) {
    const auto lam = legendre_k0_eigenvalues(k.t_star, w, size);
    lambda0 = lam[0];
    k0 = Eigen::MatrixXd::Zero(J, J);
    for (Eigen::Index j = 0; j < J; ++j) k0(j, j) = lam[static_cast<std::size_t>(j)] / lambda0;
    f0 = Eigen::VectorXd::Unit(J, 0);
    nu = legendre_nu(size);
  } else {
    auto op = k0_nystrom(k.t_star, w, size);
    lambda0 = 1.0 - std::exp(-k.t_star * w * w);
    k0 = op.matrix / lambda0;
    f0.resize(J);
    nu = Eigen::MatrixXd::Zero(J, J);
    for (Eigen::Index i = 0; i < J; ++i) {
      f0(i) = std::sqrt(op.rule.weights[static_cast<std::size_t>(i)]);
      nu(i, i) = 1.0 - 2.0 * op.rule.nodes[static_cast<std::size_t>(i)];
    }
  }

  Eigen::MatrixXcd kxi;
  Eigen::VectorXcd left = f0.cast<std::complex<double>>();
  if (opt.phase == PhaseForm::kExact) {
    // F = exp(-i theta nu) via the spectral decomposition of nu.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(nu);
    const Eigen::VectorXcd ph = (-I * theta * es.eigenvalues().cast<std::complex<double>>())
                                    .array()
                                    .exp()
                                    .matrix();
    const Eigen::MatrixXcd u = es.eigenvectors().cast<std::complex<double>>();
    const Eigen::MatrixXcd f = u * ph.asDiagonal() * u.transpose();
    kxi = f * k0.cast<std::complex<double>>() * f;
    left = f * left;
  } else {
    kxi = k0.cast<std::complex<double>>() -
          (2.0 * I * theta) * nu.cast<std::complex<double>>() / lambda0;
  }
  const Eigen::MatrixXcd pxi = matrix_power(kxi, n - 1);
  const std::complex<double> num = left.transpose() * pxi * left;
  double den = 1.0;
  if (opt.basis == CosetOperator::Basis::kNystrom) {
    den = f0.dot(matrix_power(k0.cast<std::complex<double>>(), n - 1).real() * f0);
  }
  return num / den;
}

}  // namespace detail

/// Crossover ratio (K_xi^{n-1} F f0, F f0) / (K_0^{n-1} f0, f0) at energy E.
///
/// The phase F = exp(-i pi xi nu / n) is split symmetrically between the
/// operator and the two end points, so that K_xi^{n-1} together with the end
/// factors carries the full phase exp(-2 pi i xi nu) over n sites. Both
/// operators are normalized by lambda_0 before powering, so the power never
/// overflows. The default representation is the closed-form Legendre
/// spectrum with the tridiagonal nu.
[[nodiscard]] inline TransferResult transfer_ratio(std::uint64_t n, double w, double e, double xi,
                                                   const TransferOptions& opt = {}) {
  require(n >= 2, "transfer_ratio: need n >= 2");
  require(w > 0.0, "transfer_ratio: W must be positive");
  require(opt.size >= 4, "transfer_ratio: basis too small");
  TransferResult out;
  out.size = opt.size;
  if (xi == 0.0) {
    out.value = 1.0;
    return out;
  }
  out.value = detail::transfer_ratio_once(n, w, e, xi, opt, opt.size);
  if (opt.check_doubling) {
    const auto fine = detail::transfer_ratio_once(n, w, e, xi, opt, 2 * opt.size);
    out.doubling_delta = std::abs(fine - out.value);
  }
  return out;
}

/// (exp(-C Delta_U - 2 pi i xi nu) f0, f0) in the shifted-Legendre basis,
/// with Delta_U = diag(j (j+1)).
[[nodiscard]] inline std::complex<double> intermediate_limit(double c, double xi,
                                                             std::size_t size = 64) {
  require(c >= 0.0, "intermediate_limit: C must be nonnegative");
  require(size >= 2, "intermediate_limit: basis too small");
  if (xi == 0.0) return 1.0;
  const auto J = static_cast<Eigen::Index>(size);
  Eigen::MatrixXcd gen = (-2.0 * std::numbers::pi * xi * std::complex<double>(0.0, 1.0)) *
                         legendre_nu(size).cast<std::complex<double>>();
  for (Eigen::Index j = 0; j < J; ++j) gen(j, j) -= c * static_cast<double>(j * (j + 1));
  return expm_pade13(gen)(0, 0);
}

struct MehlerSpectrum {
  std::vector<double> values;  // descending
  double half_width = 0.0;
  /// Ground-state profile exp(-alpha W L^2) at the domain edge.
  double boundary_mass = 0.0;
  bool truncation_warning = false;
};

/// Default half-width 12/sqrt(W) max(1, c^{-1/2}).
[[nodiscard]] inline double mehler_default_half_width(double w, double c) {
  return 12.0 / std::sqrt(w) * std::max(1.0, 1.0 / std::sqrt(c));
}

/// Predicted ratio lambda_{j+1}/lambda_j = (1 + 2 alpha/W + c/W^2)^{-1},
/// alpha = sqrt(c/2) sqrt(1 + c/(2W^2)).
[[nodiscard]] inline double mehler_predicted_ratio(double w, double c) {
  const double alpha = std::sqrt(0.5 * c) * std::sqrt(1.0 + c / (2.0 * w * w));
  return 1.0 / (1.0 + 2.0 * alpha / w + c / (w * w));
}

/// Nystrom eigenvalues of (W / sqrt(2 pi)) exp(-W^2 (x-y)^2 / 2 - c (x^2+y^2) / 2)
/// on [-L, L] with a Gauss-Legendre grid.
[[nodiscard]] inline MehlerSpectrum mehler_spectrum(double w, double c, double half_width,
                                                    std::size_t nodes) {
  require(w > 0.0 && c > 0.0, "mehler_spectrum: W and c must be positive");
  require(half_width > 0.0, "mehler_spectrum: L must be positive");
  require(nodes >= 8, "mehler_spectrum: need at least 8 nodes");
  const auto rule = gauss_legendre(nodes, -half_width, half_width);
  const auto n = static_cast<Eigen::Index>(nodes);
  const double pref = w / std::sqrt(2.0 * std::numbers::pi);
  auto kernel = [&](double x, double y) {
    const double d = x - y;
    return pref * std::exp(-0.5 * w * w * d * d - 0.5 * c * (x * x + y * y));
  };
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const double v = std::sqrt(rule.weights[ui] * rule.weights[uj]) *
                       kernel(rule.nodes[ui], rule.nodes[uj]);
      m(i, j) = v;
      m(j, i) = v;
    }
  MehlerSpectrum out;
  out.values = detail::descending_eigenvalues(m);
  out.half_width = half_width;
  const double alpha = std::sqrt(0.5 * c) * std::sqrt(1.0 + c / (2.0 * w * w));
  out.boundary_mass = std::exp(-alpha * w * half_width * half_width);
  out.truncation_warning = out.boundary_mass > 1e-12;
  return out;
}

}  // namespace rbmlab
