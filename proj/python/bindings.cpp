//
// Python bindings for the main library operations.  Reports cross the
// boundary as plain dicts so the Python side stays schema-free; the heavy
// numeric types stay in C++.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpcocycle/asymptotics.hpp"
#include "qpcocycle/cocycle.hpp"
#include "qpcocycle/jensen.hpp"
#include "qpcocycle/potential.hpp"
#include "qpcocycle/version.hpp"
#include "qpcocycle/zero_analysis.hpp"

namespace py = pybind11;
using namespace qpc;

namespace {

py::dict le_dict(const LyapunovEstimate& est) {
  py::dict d;
  d["value"] = est.value;
  d["l_n"] = est.l_n;
  d["l_2n"] = est.l_2n;
  d["n"] = est.n;
  d["phases"] = est.phases;
  d["spread"] = est.spread;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "quasi-periodic Schrodinger cocycle toolkit";
  m.attr("__version__") = version();

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);
  py::register_exception<StripDomainError>(m, "StripDomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_RuntimeError);

  py::class_<FourierPotential>(m, "Potential")
      .def_static("preset", &FourierPotential::preset, py::arg("name"))
      .def_static(
          "from_coeffs",
          [](const std::vector<std::tuple<int, double, double>>& triples, double h) {
            return FourierPotential::from_triples(triples, h);
          },
          py::arg("triples"), py::arg("h"))
      .def_property_readonly("degree", &FourierPotential::degree)
      .def_property_readonly("strip_height", &FourierPotential::strip_height)
      .def("coeff", &FourierPotential::coeff, py::arg("k"))
      .def("real_analytic", &FourierPotential::real_analytic, py::arg("tol") = 1e-13)
      .def("__call__", [](const FourierPotential& p, Complex z) { return p.eval(z); })
      .def("derivative", &FourierPotential::derivative)
      .def("__repr__", [](const FourierPotential& p) {
        return "<Potential degree=" + std::to_string(p.degree()) +
               " h=" + std::to_string(p.strip_height()) + ">";
      });

  m.def("golden_mean", &golden_mean);

  m.def(
      "lyapunov",
      [](const FourierPotential& p, double alpha, double lambda, double energy, double y, long n,
         int phases) {
        const CocycleSpec spec(alpha, lambda, energy, p, y);
        return le_dict(lyapunov_exponent(spec, n, phases));
      },
      py::arg("potential"), py::arg("alpha"), py::arg("lam"), py::arg("energy"),
      py::arg("y") = 0.0, py::arg("n") = 10000, py::arg("phases") = 256);

  m.def(
      "acceleration",
      [](const FourierPotential& p, double alpha, double lambda, double energy, double y, double t,
         long n, int phases) {
        const CocycleSpec spec(alpha, lambda, energy, p, 0.0);
        const AccelerationEstimate est = acceleration(spec, y, t, n, phases);
        py::dict d;
        d["raw"] = est.raw;
        d["quantized"] = est.quantized;
        d["residual"] = est.residual;
        d["suspicious"] = est.suspicious;
        return d;
      },
      py::arg("potential"), py::arg("alpha"), py::arg("lam"), py::arg("energy"), py::arg("y"),
      py::arg("t") = 5e-3, py::arg("n") = 10000, py::arg("phases") = 256);

  m.def(
      "jensen",
      [](const FourierPotential& p, Complex mu, double y) { return jensen_integral(p, mu, y); },
      py::arg("potential"), py::arg("mu"), py::arg("y") = 0.0);

  m.def(
      "two_omega",
      [](const FourierPotential& p, double mu, double y) {
        return acceleration_functional(p, mu, y).two_omega;
      },
      py::arg("potential"), py::arg("mu"), py::arg("y"));

  m.def(
      "zeros",
      [](const FourierPotential& p, Complex mu) {
        const ZeroSet zs = laurent_roots(p, mu);
        std::vector<std::pair<Complex, int>> out;
        for (const Zero& z : zs.zeros()) out.emplace_back(z.z, z.multiplicity);
        return out;
      },
      py::arg("potential"), py::arg("mu"));

  m.def(
      "envelope_constants",
      [](const FourierPotential& p, double rho) {
        const EnvelopeConstants c = envelope_constants(p, rho);
        py::dict d;
        d["rho"] = c.rho;
        d["n"] = c.n;
        d["lambda0"] = c.lambda0;
        d["k1"] = c.k1;
        d["beta_hat"] = c.beta_hat;
        d["c"] = c.big_c;
        return d;
      },
      py::arg("potential"), py::arg("rho"));

  m.def(
      "verify_asymptotics",
      [](const FourierPotential& p, double alpha, double lambda, double energy, double rho, long n,
         int phases, bool pipeline) {
        const EnvelopeConstants c = envelope_constants(p, rho);
        CertificateOptions opt;
        opt.n = n;
        opt.phases = phases;
        opt.run_pipeline = pipeline;
        const AsymptoticsCertificate cert = verify_asymptotics(p, alpha, lambda, energy, c, opt);
        py::dict d;
        d["predicted"] = cert.predicted;
        d["measured"] = cert.measured;
        d["residual"] = cert.residual;
        d["bound"] = cert.bound;
        d["spread"] = cert.spread;
        d["status"] = std::string(to_string(cert.status));
        if (pipeline) {
          py::dict pd;
          pd["y_star"] = cert.pipeline.height.y_star;
          pd["min_modulus"] = cert.pipeline.height.min_modulus;
          pd["dominated"] = cert.pipeline.splitting.dominated;
          pd["factorization_gap"] = cert.pipeline.factorization_gap;
          pd["two_omega"] = cert.pipeline.two_omega_height;
          pd["all_ok"] = cert.pipeline.all_ok;
          d["pipeline"] = pd;
        }
        return d;
      },
      py::arg("potential"), py::arg("alpha"), py::arg("lam"), py::arg("energy"), py::arg("rho"),
      py::arg("n") = 10000, py::arg("phases") = 256, py::arg("pipeline") = false);
}
