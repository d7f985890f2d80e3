#include "poly_roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qpcocycle/errors.hpp"

namespace qpc::detail {

namespace {

using Cd = std::complex<double>;

// One multiplicity-aware Newton step: w <- w - m P / P'.  Quadratic near a
// root of multiplicity m; plain Newton (m = 1) only converges linearly there.
Cd newton_step(const std::vector<Cd>& coeffs, Cd w, int multiplicity) {
  Cd p, dp;
  horner2(coeffs, w, p, dp);
  if (std::abs(dp) == 0.0) return w;
  return w - static_cast<double>(multiplicity) * p / dp;
}

Cd polish(const std::vector<Cd>& coeffs, Cd w, int multiplicity, int iterations) {
  Cd best = w;
  Cd p, dp;
  horner2(coeffs, best, p, dp);
  double best_abs = std::abs(p);
  Cd current = w;
  for (int it = 0; it < iterations; ++it) {
    current = newton_step(coeffs, current, multiplicity);
    horner2(coeffs, current, p, dp);
    const double val = std::abs(p);
    if (val < best_abs) {
      best_abs = val;
      best = current;
    }
  }
  return best;
}

}  // namespace

void horner2(const std::vector<Cd>& coeffs, Cd w, Cd& value, Cd& derivative) {
  value = Cd(0.0, 0.0);
  derivative = Cd(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    derivative = derivative * w + value;
    value = value * w + *it;
  }
}

PolyRoots polynomial_roots(const std::vector<Cd>& coeffs, double cluster_radius) {
  PolyRoots out;

  // Deflate exact zeros at both ends.  The low end contributes the w = 0 root;
  // the high end merely lowers the degree.
  std::size_t lo = 0, hi = coeffs.size();
  while (lo < hi && coeffs[lo] == Cd(0.0, 0.0)) ++lo;
  while (hi > lo && coeffs[hi - 1] == Cd(0.0, 0.0)) --hi;
  if (lo == hi) throw DegenerateInputError("polynomial_roots: all coefficients vanish");

  std::vector<Cd> p(coeffs.begin() + static_cast<std::ptrdiff_t>(lo),
                    coeffs.begin() + static_cast<std::ptrdiff_t>(hi));
  out.zero_multiplicity = static_cast<int>(lo);
  out.leading = p.back();
  const int degree = static_cast<int>(p.size()) - 1;
  out.deflated_degree = degree;
  if (degree == 0) return out;

  // Monic companion matrix; Eigen balances internally before the QR sweep.
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -p[static_cast<std::size_t>(i)] / p.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericError("polynomial_roots: eigenvalue iteration failed to converge");

  std::vector<Cd> raw(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) {
    raw[static_cast<std::size_t>(i)] = polish(p, solver.eigenvalues()(i), 1, 4);
  }

  // Greedy transitive clustering: eigenvalues of a multiplicity-m root spread
  // on a circle of radius ~eps^{1/m}, so their arithmetic mean recovers the
  // root to far better accuracy than any single eigenvalue.
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    used[i] = true;
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      for (std::size_t j = 0; j < raw.size(); ++j) {
        if (used[j]) continue;
        const double scale = std::max({1.0, std::abs(raw[cluster[c]]), std::abs(raw[j])});
        if (std::abs(raw[cluster[c]] - raw[j]) <= cluster_radius * scale) {
          cluster.push_back(j);
          used[j] = true;
        }
      }
    }
    Cd mean(0.0, 0.0);
    for (std::size_t idx : cluster) mean += raw[idx];
    mean /= static_cast<double>(cluster.size());
    const int mult = static_cast<int>(cluster.size());
    out.roots.push_back(mult == 1 ? mean : polish(p, mean, mult, 3));
    out.multiplicities.push_back(mult);
  }
  return out;
}

}  // namespace qpc::detail
