#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "causalab/boundary.hpp"
#include "causalab/fock.hpp"
#include "causalab/lieb_liniger.hpp"
#include "causalab/relcompare.hpp"
#include "causalab/run.hpp"
#include "causalab/spreading.hpp"

namespace py = pybind11;

namespace {

namespace bd = causalab::boundary;
namespace sp = causalab::spreading;
namespace rc = causalab::relcompare;
namespace fk = causalab::fock;
namespace ll = causalab::lieb_liniger;

bd::BoundarySpec make_bc(const std::string& bc, double L, double sigma0,
                         double sigmaL, double theta) {
  if (bc == "dirichlet") return {bd::Dirichlet{}, L};
  if (bc == "neumann") return {bd::Robin{0.0, 0.0}, L};
  if (bc == "robin") return {bd::Robin{sigma0, sigmaL}, L};
  if (bc == "twisted") return {bd::Twisted{theta}, L};
  throw causalab::ValidationError("unknown bc '" + bc + "'");
}

py::dict spectrum_py(const std::string& bc, double L, int modes, int grid_n,
                     double sigma0, double sigmaL, double theta) {
  const auto spec = make_bc(bc, L, sigma0, sigmaL, theta);
  const bool twisted = bc == "twisted";
  bd::GridSpec grid{L, grid_n,
                    twisted ? bd::GridKind::Periodic : bd::GridKind::Closed,
                    twisted ? theta : 0.0, 0.0};
  const auto result = bd::solve_spectrum(spec, grid, modes);
  std::vector<double> energies, momenta;
  std::vector<int> nodes;
  for (const auto& m : result.modes) {
    energies.push_back(m.energy);
    momenta.push_back(m.momentum);
    nodes.push_back(m.node_count);
  }
  py::dict out;
  out["energies"] = energies;
  out["node_counts"] = nodes;
  out["momenta"] = momenta;
  return out;
}

py::dict lemma2_py(double width1, double width2, int d, double tau, double delta,
                   double m0, double c) {
  const auto rep = rc::verify_lemma2(rc::TestFunction::gaussian(width1, d),
                                     rc::TestFunction::gaussian(width2, d), tau,
                                     delta, {m0, c});
  py::dict out;
  out["delta"] = rep.delta;
  out["epsilon"] = rep.epsilon;
  out["tau"] = rep.tau;
  out["delta_C"] = rep.delta_c;
  out["lhs"] = rep.lhs;
  out["rhs"] = rep.rhs;
  out["margin"] = rep.margin;
  out["pass"] = rep.pass;
  return out;
}

py::dict convergence_py(double width, int d, double tau, double m0,
                        const std::vector<double>& cs) {
  const auto f = rc::TestFunction::gaussian(width, d);
  const auto scan = rc::convergence_scan(f, f, tau, cs, m0);
  std::vector<double> xs, ys;
  for (const auto& pt : scan.points) {
    xs.push_back(pt.c);
    ys.push_back(pt.delta_c);
  }
  py::dict out;
  out["c"] = xs;
  out["delta_C"] = ys;
  out["slope"] = scan.slope;
  return out;
}

py::dict solve_ll_py(double gamma, int n_nodes) {
  const auto sol = ll::solve_ll(gamma, n_nodes);
  py::dict out;
  out["gamma"] = sol.gamma;
  out["alpha"] = sol.alpha;
  out["f_gamma"] = sol.f_gamma;
  out["residual_max"] = sol.residual_max;
  out["nodes"] = sol.nodes;
  out["g"] = sol.g;
  return out;
}

double tail_probability_py(double t, double radius, double halfwidth, double box,
                           int grid_n, double mass) {
  bd::GridSpec grid{box, grid_n, bd::GridKind::Periodic, 0.0, -box / 2.0};
  const auto psi = sp::bump_state(grid, 0.0, halfwidth);
  return sp::tail_probability(psi, t, radius, mass);
}

py::dict run_command_py(const std::string& command, const std::string& params_json,
                        std::uint64_t seed, int jobs) {
  causalab::run::RunConfig cfg;
  cfg.command = command;
  cfg.params = nlohmann::json::parse(params_json);
  cfg.seed = seed;
  cfg.jobs = jobs;
  const auto outcome = causalab::run::execute(cfg);
  py::dict out;
  out["summary"] = outcome.summary.dump();
  out["csv"] = causalab::run::csv_body(outcome.table);
  out["property_failures"] = outcome.property_failures;
  return out;
}

double two_point_ratio_py(double width, int d, double m0, double c, int cutoff) {
  const rc::DispersionParams p{m0, c};
  const auto basis = fk::ModeBasis::build({rc::TestFunction::gaussian(width, d)}, p);
  fk::TruncatedFock fock{basis.n_modes(), cutoff};
  const auto rel =
      fk::two_point_vacuum(fock, basis, 0, 0, fk::FieldWeighting::Relativistic);
  const auto nr =
      fk::two_point_vacuum(fock, basis, 0, 0, fk::FieldWeighting::Nonrelativistic);
  return rel.real() / nr.real();
}

}  // namespace

PYBIND11_MODULE(_causalab, m) {
  m.doc() = "Boundary-confined spectra, instantaneous spreading, and "
            "relativistic-vs-nonrelativistic comparisons";

  py::register_exception<causalab::ValidationError>(m, "ValidationError");
  py::register_exception<causalab::NumericalError>(m, "NumericalError");
  py::register_exception<causalab::PropertyError>(m, "PropertyError");

  m.def("solve_spectrum", &spectrum_py, py::arg("bc"), py::arg("L") = 1.0,
        py::arg("modes") = 5, py::arg("grid_n") = 2048, py::arg("sigma0") = 0.0,
        py::arg("sigmaL") = 0.0, py::arg("theta") = 0.0);
  m.def("momentum_spectrum_twisted", &bd::momentum_spectrum_twisted,
        py::arg("theta"), py::arg("L"), py::arg("n_modes"));

  m.def(
      "omega_c",
      [](double k, double m0, double c) { return rc::omega_c(k, {m0, c}); },
      py::arg("k"), py::arg("m0") = 1.0, py::arg("c") = 1.0);
  m.def(
      "kernel_pair",
      [](double k, double m0, double c) {
        const auto kp = rc::kernel_pair(k, {m0, c});
        return std::make_pair(kp.nonrelativistic, kp.relativistic);
      },
      py::arg("k"), py::arg("m0") = 1.0, py::arg("c") = 1.0);
  m.def(
      "beta",
      [](double k, double tau, double m0, double c) {
        return rc::beta(k, tau, {m0, c});
      },
      py::arg("k"), py::arg("tau"), py::arg("m0") = 1.0, py::arg("c") = 1.0);
  m.def(
      "epsilon_for_delta",
      [](double width, int d, double delta, double m0, double c) {
        return rc::epsilon_for_delta(rc::TestFunction::gaussian(width, d), delta,
                                     {m0, c});
      },
      py::arg("width"), py::arg("d"), py::arg("delta"), py::arg("m0") = 1.0,
      py::arg("c") = 1.0);
  m.def("verify_lemma2", &lemma2_py, py::arg("width1") = 1.0,
        py::arg("width2") = 1.0, py::arg("d") = 3, py::arg("tau") = 0.0,
        py::arg("delta") = 0.5, py::arg("m0") = 1.0, py::arg("c") = 10.0);
  m.def("convergence_scan", &convergence_py, py::arg("width") = 1.0,
        py::arg("d") = 3, py::arg("tau") = 0.0, py::arg("m0") = 1.0,
        py::arg("c_list") = std::vector<double>{10.0, 100.0, 1000.0, 10000.0});

  m.def("solve_ll", &solve_ll_py, py::arg("gamma"), py::arg("n_nodes") = 256);
  m.def("energy_density", &ll::energy_density, py::arg("lam"), py::arg("rho"),
        py::arg("n_nodes") = 256);
  m.def("scaling_residual", &ll::scaling_residual, py::arg("lam"), py::arg("rho1"),
        py::arg("rho2"), py::arg("n_nodes") = 256);

  m.def(
      "weyl_relation_residual",
      [](double p, double q, int cutoff) {
        return fk::weyl_relation_residual(p, q, cutoff);
      },
      py::arg("p"), py::arg("q"), py::arg("cutoff"));
  m.def(
      "ladder_commutator_defect",
      [](int cutoff) {
        const auto c = fk::ladder_commutator(cutoff);
        double worst = 0.0;
        for (int i = 0; i < cutoff; ++i)
          worst = std::max(worst, std::abs(c(i, i) - 1.0));
        return worst;
      },
      py::arg("cutoff"));
  m.def("two_point_ratio", &two_point_ratio_py, py::arg("width") = 1.0,
        py::arg("d") = 3, py::arg("m0") = 1.0, py::arg("c") = 1000.0,
        py::arg("cutoff") = 4);

  m.def("tail_probability", &tail_probability_py, py::arg("t"),
        py::arg("radius") = 2.0, py::arg("halfwidth") = 1.0, py::arg("box") = 16.0,
        py::arg("grid_n") = 1 << 18, py::arg("mass") = 1.0);

  m.def("run_command", &run_command_py, py::arg("command"),
        py::arg("params_json") = "{}", py::arg("seed") = 0, py::arg("jobs") = 1);

  m.attr("__version__") = "0.1.0";
}
