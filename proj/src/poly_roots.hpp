#pragma once
//
// Internal helper: roots of a complex polynomial P(w) = sum_j a_j w^j via the
// balanced companion matrix (Eigen eigenvalues), followed by Newton polishing
// and multiplicity clustering.  Shared by potential statistics (derivative
// series) and the zero analysis (Laurent series in w = e^{2 pi i z}); not part
// of the public interface.

#include <complex>
#include <vector>

namespace qpc::detail {

struct PolyRoots {
  // Nonzero roots of the deflated polynomial, one entry per distinct root.
  std::vector<std::complex<double>> roots;
  std::vector<int> multiplicities;
  int zero_multiplicity = 0;             // multiplicity of the root w = 0
  std::complex<double> leading{0.0, 0.0};  // coefficient of the highest power kept
  int deflated_degree = 0;               // sum of multiplicities above
};

// Coefficients in ascending order.  Structural zero coefficients at both ends
// are stripped exactly; an all-zero input throws DegenerateInputError.
// cluster_radius groups eigenvalues into multiple roots; each cluster is
// re-polished with multiplicity-aware Newton steps.
PolyRoots polynomial_roots(const std::vector<std::complex<double>>& coeffs,
                           double cluster_radius = 1e-7);

// Horner evaluation of P and P' at w.
void horner2(const std::vector<std::complex<double>>& coeffs, std::complex<double> w,
             std::complex<double>& value, std::complex<double>& derivative);

}  // namespace qpc::detail
