#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ewr/bounds.hpp"
#include "ewr/cli.hpp"
#include "ewr/dataset.hpp"
#include "ewr/ensemble.hpp"
#include "ewr/figure1.hpp"
#include "ewr/model.hpp"
#include "ewr/nonlin.hpp"
#include "ewr/property_suite.hpp"
#include "ewr/prox.hpp"
#include "ewr/report.hpp"
#include "ewr/unroll.hpp"

namespace py = pybind11;
using namespace ewr;

namespace {

template <class F>
CVector map_complex(const CVector& z, F f) {
  CVector out(z.size());
  for (Index i = 0; i < z.size(); ++i) out(i) = f(z(i));
  return out;
}

UnrollConfig make_config(const std::vector<double>& taus, double delta,
                         const std::string& nonlinearity, double lambda, const std::string& init,
                         double c_out, bool strict) {
  UnrollConfig cfg;
  cfg.taus = taus;
  cfg.nl = nonlinearity_variant(nonlinearity, delta);
  cfg.reg = lambda > 0.0 ? Regularizer::l1(lambda) : Regularizer::none();
  cfg.init = parse_init_mode(init);
  cfg.clip = ClipRadius(c_out);
  cfg.strict_assumption1 = strict;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_ewr, m) {
  m.doc() = "Unrolled proximal-gradient exit-wave reconstruction and its generalization bounds";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<AssumptionViolation>(m, "AssumptionViolation", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<MeasurementEnsemble>(m, "MeasurementEnsemble")
      .def(py::init([](const CMatrix& w) { return MeasurementEnsemble::from_rows(w); }), py::arg("weights"),
           "K x N weight matrix, one focal weighting per row")
      .def_property_readonly("signal_size", &MeasurementEnsemble::signal_size)
      .def_property_readonly("num_focal", &MeasurementEnsemble::num_focal)
      .def_property_readonly("rows", &MeasurementEnsemble::rows)
      .def_property_readonly("weights", &MeasurementEnsemble::weights)
      .def_property_readonly("operator_norm", &MeasurementEnsemble::operator_norm)
      .def("apply", py::overload_cast<const CMatrix&>(&MeasurementEnsemble::apply, py::const_))
      .def("apply_adjoint", py::overload_cast<const CMatrix&>(&MeasurementEnsemble::apply_adjoint, py::const_))
      .def("composed_norm", &MeasurementEnsemble::composed_norm)
      .def("dense", &MeasurementEnsemble::dense)
      .def("power_iteration_norm", [](const MeasurementEnsemble& e, int max_iters, double tol) {
        PowerIterationOptions o;
        o.max_iters = max_iters;
        o.tol = tol;
        const auto r = power_iteration_norm(e, o);
        return py::make_tuple(r.value, r.iterations, r.converged);
      }, py::arg("max_iters") = 200, py::arg("tol") = 1e-10);

  m.def("random_unitary", [](std::uint64_t seed, Index n) {
    Rng rng(seed);
    return random_unitary(rng, n).matrix();
  }, py::arg("seed"), py::arg("n"));

  m.def("phi", [](const CVector& z, double d) {
    PseudoHuber h(d);
    RVector out(z.size());
    for (Index i = 0; i < z.size(); ++i) out(i) = h.phi(z(i));
    return out;
  }, py::arg("z"), py::arg("delta"));
  m.def("phi_prime", [](const CVector& z, double d) {
    PseudoHuber h(d);
    return map_complex(z, [&](cplx v) { return h.phi_prime(v); });
  }, py::arg("z"), py::arg("delta"));
  m.def("prox_f", [](const CVector& z, double d) {
    PseudoHuber h(d);
    return map_complex(z, [&](cplx v) { return h.prox(v); });
  }, py::arg("z"), py::arg("delta"));
  m.def("prox_fconj", [](const CVector& z, double d) {
    PseudoHuber h(d);
    return map_complex(z, [&](cplx v) { return h.prox_conjugate(v); });
  }, py::arg("z"), py::arg("delta"));
  m.def("prox_l1", [](const CVector& z, double t) { return prox_reg(Regularizer::l1(1.0), t, z); },
        py::arg("z"), py::arg("t"));

  m.def("synthesize", &synthesize, py::arg("ensemble"), py::arg("psi"));
  m.def("transform_gamma", &transform_gamma, py::arg("g_tilde"), py::arg("delta"));
  m.def("data_term", [](const MeasurementEnsemble& e, const CVector& psi, const RVector& g, double d) {
    return data_term(e, psi, g, Nonlinearity::pseudo_huber(d));
  }, py::arg("ensemble"), py::arg("psi"), py::arg("g"), py::arg("delta"));
  m.def("data_gradient", [](const MeasurementEnsemble& e, const CMatrix& phi, const CVector& z, const RVector& g,
                            double d) { return data_gradient(e, phi, z, g, Nonlinearity::pseudo_huber(d)); },
        py::arg("ensemble"), py::arg("phi"), py::arg("z"), py::arg("g"), py::arg("delta"));

  m.def("max_step", py::overload_cast<const MeasurementEnsemble&>(&max_step));
  m.def("unroll", [](const MeasurementEnsemble& e, const CMatrix& phi, const RMatrix& g,
                     const std::vector<double>& taus, double delta, const std::string& nonlinearity, double lambda,
                     const std::string& init, bool strict) {
    return unroll(e, phi, g, make_config(taus, delta, nonlinearity, lambda, init, 1.0, strict));
  }, py::arg("ensemble"), py::arg("phi"), py::arg("g"), py::arg("taus"), py::arg("delta") = 0.1,
        py::arg("nonlinearity") = "pseudo_huber", py::arg("lam") = 0.0, py::arg("init") = "fixed",
        py::arg("strict") = true);
  m.def("network_output", [](const MeasurementEnsemble& e, const CMatrix& psi, const CMatrix& phi, const RMatrix& g,
                             const std::vector<double>& taus, double delta, double c_out) {
    return network_output(e, psi, phi, g, make_config(taus, delta, "pseudo_huber", 0.0, "fixed", c_out, true));
  }, py::arg("ensemble"), py::arg("psi"), py::arg("phi"), py::arg("g"), py::arg("taus"), py::arg("delta") = 0.1,
        py::arg("c_out") = 1.0);
  m.def("pga_reconstruct", [](const MeasurementEnsemble& e, const RVector& g, const CMatrix& phi, double tau,
                              double delta, int iters, const std::string& init) {
    PgaOptions o;
    o.tau = tau;
    o.nl = Nonlinearity::pseudo_huber(delta);
    o.max_iters = iters;
    o.init = parse_init_mode(init);
    const PgaResult r = pga_reconstruct(e, g, phi, o);
    return py::make_tuple(r.psi, r.objective);
  }, py::arg("ensemble"), py::arg("g"), py::arg("phi"), py::arg("tau"), py::arg("delta") = 0.1,
        py::arg("iters") = 500, py::arg("init") = "spectral");

  m.def("_bound_constants_json", [](Index n, Index k, Index m_, double delta, double norm_a, double g_inf,
                                    const std::vector<double>& taus, double c_in, double c_out, double alpha,
                                    const std::string& nonlinearity, bool strict) {
    BoundInputs in;
    in.n = n;
    in.k = k;
    in.m = m_;
    in.delta = delta;
    in.norm_a = norm_a;
    in.g_inf = g_inf;
    in.taus = taus;
    in.c_in = c_in;
    in.c_out = c_out;
    in.alpha = alpha;
    in.nonlinearity = nonlinearity_variant(nonlinearity, delta).kind();
    return to_json(bound_constants(in, strict)).dump();
  });

  m.def("_figure1_json", [](Index l_max, int grid, int refine, int inner, std::uint64_t g_seed, bool general_u2) {
    Figure1Options o;
    o.l_max = l_max;
    o.grid = grid;
    o.refine = refine;
    o.inner = inner;
    o.general_u2 = general_u2;
    const auto e = MeasurementEnsemble::make({CVector::Ones(2)});
    return to_json(figure1(e, figure1_measurement(g_seed), o)).dump();
  });

  m.def("_property_suite_json", [](std::uint64_t seed, long trials, const std::vector<std::string>& only,
                                   const std::vector<std::string>& skip) {
    SuiteOptions o;
    o.seed = seed;
    o.trials = trials;
    o.only = only;
    o.skip = skip;
    return to_json(property_suite(o)).dump();
  });

  m.def("generate_dataset", [](Index n, Index k, Index m_, Index s, double delta, std::uint64_t seed,
                               const std::string& weights) {
    DatasetParams p;
    p.n = n;
    p.k = k;
    p.m = m_;
    p.s = s;
    p.delta = delta;
    p.weights = parse_weight_kind(weights);
    const Dataset d = generate_dataset(p, seed);
    py::dict out;
    out["weights"] = d.weights;
    out["phi0"] = d.phi0;
    out["z"] = d.z;
    out["psi"] = d.psi;
    out["g"] = d.g;
    return out;
  }, py::arg("n") = 16, py::arg("k") = 3, py::arg("m") = 8, py::arg("s") = 2, py::arg("delta") = 0.1,
        py::arg("seed") = 1, py::arg("weights") = "defocus");

  m.def("cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int rc = cli_main(args, out, err);
    return py::make_tuple(rc, out.str(), err.str());
  }, py::arg("args"), "Run the command-line tool in-process; returns (exit code, stdout, stderr).");
}
