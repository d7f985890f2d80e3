#include "qpcocycle/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "poly_roots.hpp"

namespace qpc {

namespace {

// Golden-section maximization of fn over [a, b]; used as the single local
// refinement pass after a dense grid scan.
template <class Fn>
double golden_max(Fn&& fn, double a, double b, int iterations = 48) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    }
  }
  return std::max(f1, f2);
}

double wrap01(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

}  // namespace

FourierPotential::FourierPotential(int degree, std::vector<Complex> coeffs, double strip_height)
    : degree_(degree), coeffs_(std::move(coeffs)), strip_height_(strip_height) {
  if (degree_ < 0) throw ContractError("FourierPotential: degree must be non-negative");
  if (coeffs_.size() != static_cast<std::size_t>(2 * degree_ + 1))
    throw ContractError("FourierPotential: coefficient vector must have size 2*degree + 1");
  if (!(strip_height_ > 0.0) || !(strip_height_ < 1.0))
    throw ContractError("FourierPotential: strip height must lie in (0, 1)");
  // Trim structurally zero outer coefficients so degree() is the true degree.
  while (degree_ > 0 && coeffs_.front() == Complex(0.0, 0.0) && coeffs_.back() == Complex(0.0, 0.0)) {
    coeffs_.erase(coeffs_.begin());
    coeffs_.pop_back();
    --degree_;
  }
}

FourierPotential FourierPotential::preset(std::string_view name) {
  if (name == "amo") {
    return FourierPotential(1, {Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(1.0, 0.0)}, 0.5);
  }
  if (name == "bichromatic") {
    return FourierPotential(2,
                            {Complex(0.5, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0),
                             Complex(1.0, 0.0), Complex(0.5, 0.0)},
                            0.5);
  }
  throw ContractError("FourierPotential::preset: unknown preset '" + std::string(name) +
                      "' (expected 'amo' or 'bichromatic')");
}

FourierPotential FourierPotential::from_triples(
    const std::vector<std::tuple<int, double, double>>& triples, double strip_height) {
  int d = 0;
  for (const auto& [k, re, im] : triples) d = std::max(d, std::abs(k));
  std::vector<Complex> coeffs(static_cast<std::size_t>(2 * d + 1), Complex(0.0, 0.0));
  std::vector<bool> seen(coeffs.size(), false);
  for (const auto& [k, re, im] : triples) {
    const std::size_t idx = static_cast<std::size_t>(k + d);
    if (seen[idx])
      throw ContractError("FourierPotential::from_triples: duplicate coefficient for k = " +
                          std::to_string(k));
    seen[idx] = true;
    coeffs[idx] = Complex(re, im);
  }
  return FourierPotential(d, std::move(coeffs), strip_height);
}

Complex FourierPotential::coeff(int k) const {
  if (k < -degree_ || k > degree_) return Complex(0.0, 0.0);
  return coeffs_[static_cast<std::size_t>(k + degree_)];
}

bool FourierPotential::real_analytic(double tol) const {
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return true;
  for (int k = 0; k <= degree_; ++k) {
    if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol * scale) return false;
  }
  return true;
}

bool FourierPotential::is_constant() const {
  for (int k = 1; k <= degree_; ++k) {
    if (coeff(k) != Complex(0.0, 0.0) || coeff(-k) != Complex(0.0, 0.0)) return false;
  }
  return true;
}

Complex FourierPotential::eval(Complex z) const {
  if (std::abs(z.imag()) > strip_height_ + 1e-12)
    throw StripDomainError("FourierPotential::eval: |Im z| = " + std::to_string(std::abs(z.imag())) +
                           " exceeds strip height " + std::to_string(strip_height_));
  const Complex w = std::exp(Complex(0.0, 2.0 * M_PI) * z);
  // Two Horner passes: positive powers in w, negative powers in 1/w.
  Complex pos(0.0, 0.0);
  for (int k = degree_; k >= 1; --k) pos = (pos + coeff(k)) * w;
  Complex neg(0.0, 0.0);
  if (degree_ > 0) {
    const Complex v = 1.0 / w;
    for (int k = degree_; k >= 1; --k) neg = (neg + coeff(-k)) * v;
  }
  return coeff(0) + pos + neg;
}

double FourierPotential::eval_real(double x) const {
  // Real-analytic fast path: f(x) = c_0 + 2 sum_k Re(c_k e^{2 pi i k x}).
  double sum = coeff(0).real();
  const double c = std::cos(2.0 * M_PI * x), s = std::sin(2.0 * M_PI * x);
  double ck = 1.0, sk = 0.0;  // cos/sin of 2 pi k x, built by recurrence
  for (int k = 1; k <= degree_; ++k) {
    const double cn = ck * c - sk * s;
    const double sn = sk * c + ck * s;
    ck = cn;
    sk = sn;
    sum += 2.0 * (coeff(k).real() * ck - coeff(k).imag() * sk);
  }
  return sum;
}

FourierPotential FourierPotential::derivative() const {
  std::vector<Complex> d(coeffs_.size());
  for (int k = -degree_; k <= degree_; ++k) {
    d[static_cast<std::size_t>(k + degree_)] = Complex(0.0, 2.0 * M_PI * k) * coeff(k);
  }
  return FourierPotential(degree_, std::move(d), strip_height_);
}

FourierPotential FourierPotential::shifted(Complex mu) const {
  std::vector<Complex> c = coeffs_;
  c[static_cast<std::size_t>(degree_)] -= mu;
  return FourierPotential(degree_, std::move(c), strip_height_);
}

FourierPotential FourierPotential::negated() const {
  std::vector<Complex> c = coeffs_;
  for (auto& v : c) v = -v;
  return FourierPotential(degree_, std::move(c), strip_height_);
}

double FourierPotential::coeff_bound(double height) const {
  double sum = 0.0;
  for (int k = -degree_; k <= degree_; ++k) {
    sum += std::abs(coeff(k)) * std::exp(2.0 * M_PI * std::abs(k) * height);
  }
  return sum;
}

double sup_norm_at(const FourierPotential& p, double height) {
  if (std::abs(height) > p.strip_height() + 1e-12)
    throw ContractError("sup_norm_at: requested height exceeds the analyticity strip");
  const int grid = 4096;
  double best = 0.0;
  double best_x = 0.0, best_y = height;
  for (double sign : {1.0, -1.0}) {
    const double y = sign * height;
    for (int i = 0; i < grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      const double v = std::abs(p.eval(Complex(x, y)));
      if (v > best) {
        best = v;
        best_x = x;
        best_y = y;
      }
    }
    if (height == 0.0) break;  // both lines coincide
  }
  const double dx = 1.0 / grid;
  const double y = best_y;
  const double refined =
      golden_max([&](double x) { return std::abs(p.eval(Complex(x, y))); }, best_x - dx, best_x + dx);
  return std::max(best, refined);
}

PotentialStats stats(const FourierPotential& p, double probe_height) {
  PotentialStats out;
  out.probe_height = probe_height;
  out.sup_norm = sup_norm_at(p, probe_height);
  if (!p.real_analytic())
    throw ContractError("stats: torus extrema and critical values require a real-analytic potential");

  if (p.is_constant()) {
    // f' vanishes identically; every point is critical and the only value is c_0.
    out.min_torus = out.max_torus = p.coeff(0).real();
    out.critical_values = {p.coeff(0).real()};
    return out;
  }

  // Critical points: real roots of the derivative series.  In the Laurent
  // variable w = e^{2 pi i x} these are the modulus-one roots of the
  // polynomial w^d f'(w).
  const FourierPotential fp = p.derivative();
  std::vector<Complex> poly(static_cast<std::size_t>(2 * fp.degree() + 1));
  for (int k = -fp.degree(); k <= fp.degree(); ++k)
    poly[static_cast<std::size_t>(k + fp.degree())] = fp.coeff(k);
  const detail::PolyRoots roots = detail::polynomial_roots(poly);

  const FourierPotential fpp = fp.derivative();
  for (std::size_t i = 0; i < roots.roots.size(); ++i) {
    const Complex w = roots.roots[i];
    if (std::abs(std::abs(w) - 1.0) > 1e-8) continue;  // off-axis critical point
    double x = wrap01(std::arg(w) / (2.0 * M_PI));
    // Newton polish on the real line; f' is real there.
    for (int it = 0; it < 3; ++it) {
      const double d1 = fp.eval_real(x);
      const double d2 = fpp.eval_real(x);
      if (d2 == 0.0) break;
      x = wrap01(x - d1 / d2);
    }
    out.critical_points.push_back(x);
  }
  std::sort(out.critical_points.begin(), out.critical_points.end());

  if (out.critical_points.empty())
    throw NumericError("stats: no real critical points found for a non-constant potential");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : out.critical_points) {
    const double v = p.eval_real(x);
    if (v < lo) lo = v;
    if (v > hi) hi = v;
    out.critical_values.push_back(v);
  }
  std::sort(out.critical_values.begin(), out.critical_values.end());
  const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  out.critical_values.erase(std::unique(out.critical_values.begin(), out.critical_values.end(),
                                        [&](double a, double b) { return std::abs(a - b) <= 1e-9 * scale; }),
                            out.critical_values.end());
  out.min_torus = lo;
  out.max_torus = hi;

  // Safety net: a coarse grid must not beat the critical-point extrema.
  for (int i = 0; i < 1024; ++i) {
    const double v = p.eval_real(static_cast<double>(i) / 1024);
    if (v < out.min_torus - 1e-9 * scale || v > out.max_torus + 1e-9 * scale)
      throw NumericError("stats: grid value escapes the critical-point extrema; root isolation failed");
  }
  return out;
}

Interval admissible_energy_interval(const FourierPotential& p, double lambda) {
  if (lambda == 0.0)
    throw ContractError("admissible_energy_interval: lambda must be nonzero (mu = E/lambda units)");
  const PotentialStats s = stats(p);
  return Interval{s.min_torus - 2.0 / std::abs(lambda), s.max_torus + 2.0 / std::abs(lambda)};
}

}  // namespace qpc
