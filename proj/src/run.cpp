#include "causalab/run.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "causalab/boundary.hpp"
#include "causalab/fock.hpp"
#include "causalab/lieb_liniger.hpp"
#include "causalab/plot.hpp"
#include "causalab/relcompare.hpp"
#include "causalab/spreading.hpp"

namespace causalab::run {

namespace bd = causalab::boundary;
namespace sp = causalab::spreading;
namespace rc = causalab::relcompare;
namespace fk = causalab::fock;
namespace ll = causalab::lieb_liniger;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// parameter access
// ---------------------------------------------------------------------------

double get_num(const json& p, const std::string& key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number())
    throw ValidationError("config: '" + key + "' must be a number");
  return p[key].get<double>();
}

int get_int(const json& p, const std::string& key, int fallback) {
  const double v = get_num(p, key, double(fallback));
  if (v != std::floor(v))
    throw ValidationError("config: '" + key + "' must be an integer");
  return int(v);
}

std::string get_str(const json& p, const std::string& key,
                    const std::string& fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_string())
    throw ValidationError("config: '" + key + "' must be a string");
  return p[key].get<std::string>();
}

std::vector<double> get_list(const json& p, const std::string& key,
                             std::vector<double> fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_array())
    throw ValidationError("config: '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : p[key]) {
    if (!v.is_number())
      throw ValidationError("config: '" + key + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

template <typename F>
void parallel_for(int n, int jobs, F&& body) {
  jobs = std::max(1, std::min({jobs, n, 64}));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// shared builders
// ---------------------------------------------------------------------------

bd::BoundarySpec boundary_from(const json& p) {
  const std::string bc = get_str(p, "bc", "dirichlet");
  const double L = get_num(p, "L", 1.0);
  if (bc == "dirichlet") return {bd::Dirichlet{}, L};
  if (bc == "neumann") return {bd::Robin{0.0, 0.0}, L};
  if (bc == "robin")
    return {bd::Robin{get_num(p, "sigma0", 1.0), get_num(p, "sigmaL", 1.0)}, L};
  if (bc == "twisted") return {bd::Twisted{get_num(p, "theta", 0.0)}, L};
  throw ValidationError("config: unknown bc '" + bc + "'");
}

bd::GridSpec grid_for(const bd::BoundarySpec& bc, int n) {
  if (std::holds_alternative<bd::Twisted>(bc.kind)) {
    return {bc.length, n, bd::GridKind::Periodic,
            std::get<bd::Twisted>(bc.kind).theta, 0.0};
  }
  return {bc.length, n, bd::GridKind::Closed, 0.0, 0.0};
}

bd::GridSpec free_box(double box, int n) {
  return {box, n, bd::GridKind::Periodic, 0.0, -box / 2.0};
}

bd::WaveFunction mixture(const bd::Spectrum& spec, const std::vector<int>& modes,
                         const std::vector<std::complex<double>>& coeffs) {
  bd::WaveFunction psi{spec.grid, Eigen::VectorXcd::Zero(spec.grid.n)};
  for (size_t i = 0; i < modes.size(); ++i)
    psi.values += coeffs[i] * spec.modes[modes[i]].samples;
  return psi.normalized();
}

// ---------------------------------------------------------------------------
// command implementations
// ---------------------------------------------------------------------------

RunOutcome cmd_spectrum(const RunConfig& cfg) {
  const auto bc = boundary_from(cfg.params);
  const int modes = get_int(cfg.params, "modes", 5);
  const int n = get_int(cfg.params, "grid_n", 2048);
  const auto spec = bd::solve_spectrum(bc, grid_for(bc, n), modes);
  RunOutcome out;
  out.table.columns = {"index", "energy", "node_count", "momentum"};
  json energies = json::array();
  for (const auto& m : spec.modes) {
    out.table.rows.push_back(
        {double(m.index), m.energy, double(m.node_count), m.momentum});
    energies.push_back(m.energy);
  }
  out.summary = {{"bc", bc.describe()}, {"energies", energies}};
  return out;
}

RunOutcome cmd_twisted_momentum(const RunConfig& cfg) {
  const double theta = get_num(cfg.params, "theta", 0.0);
  const double L = get_num(cfg.params, "L", 1.0);
  const int modes = get_int(cfg.params, "modes", 5);
  const auto ks = bd::momentum_spectrum_twisted(theta, L, modes);
  RunOutcome out;
  out.table.columns = {"index", "k", "energy"};
  for (int i = 0; i < modes; ++i)
    out.table.rows.push_back({double(i), ks[i], ks[i] * ks[i]});
  out.summary = {{"theta", theta}, {"L", L}};
  return out;
}

RunOutcome cmd_defect(const RunConfig& cfg) {
  const std::string mode = get_str(cfg.params, "mode", "dirichlet-pairs");
  const int n = get_int(cfg.params, "grid_n", 8193);
  const int pairs = get_int(cfg.params, "pairs", 10);
  const int n_modes = get_int(cfg.params, "modes", 5);
  RunOutcome out;
  out.table.columns = {"pair", "re_defect", "im_defect", "re_boundary",
                       "im_boundary", "abs_error"};
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> dist(0.0, 1.0);

  if (mode == "demo") {
    const double L = get_num(cfg.params, "L", 1.0);
    bd::GridSpec g{L, n, bd::GridKind::Closed, 0.0, 0.0};
    bd::WaveFunction phi{g, Eigen::VectorXcd::Constant(n, 1.0 / std::sqrt(L))};
    bd::WaveFunction psi{g, Eigen::VectorXcd(n)};
    for (int j = 0; j < n; ++j)
      psi.values[j] =
          std::exp(std::complex<double>(0, M_PI * g.point(j) / L)) / std::sqrt(L);
    const auto d = bd::momentum_symmetry_defect(phi, psi);
    const auto b = bd::boundary_term(phi, psi);
    out.table.rows.push_back(
        {0.0, d.real(), d.imag(), b.real(), b.imag(), std::abs(d - b)});
    out.summary = {{"max_abs_error", std::abs(d - b)}};
    return out;
  }

  if (mode != "dirichlet-pairs" && mode != "robin-pairs")
    throw ValidationError(
        "config: defect mode must be demo, dirichlet-pairs or robin-pairs");
  bd::BoundarySpec bc{bd::Dirichlet{}, get_num(cfg.params, "L", 1.0)};
  if (mode == "robin-pairs")
    bc.kind = bd::Robin{get_num(cfg.params, "sigma0", 1.0),
                        get_num(cfg.params, "sigmaL", 1.0)};
  const auto spec = bd::solve_spectrum(bc, grid_for(bc, n), n_modes);
  double worst = 0.0;
  for (int trial = 0; trial < pairs; ++trial) {
    std::vector<int> idx(n_modes);
    std::vector<std::complex<double>> c1(n_modes), c2(n_modes);
    for (int i = 0; i < n_modes; ++i) {
      idx[i] = i;
      c1[i] = {dist(rng), dist(rng)};
      c2[i] = {dist(rng), dist(rng)};
    }
    const auto phi = mixture(spec, idx, c1);
    const auto psi = mixture(spec, idx, c2);
    const auto d = bd::momentum_symmetry_defect(phi, psi);
    const auto b = bd::boundary_term(phi, psi);
    const double err = std::abs(d - b);
    worst = std::max(worst, err);
    out.table.rows.push_back(
        {double(trial), d.real(), d.imag(), b.real(), b.imag(), err});
  }
  out.summary = {{"max_abs_error", worst}, {"pairs", pairs}};
  return out;
}

RunOutcome cmd_current(const RunConfig& cfg) {
  const auto bc = boundary_from(cfg.params);
  const int n = get_int(cfg.params, "grid_n", 4096);
  const int index = get_int(cfg.params, "mode_index", 0);
  const int stride = std::max(1, get_int(cfg.params, "stride", n / 64));
  const auto spec = bd::solve_spectrum(bc, grid_for(bc, n), index + 1);
  bd::WaveFunction psi{spec.grid, spec.modes[index].samples};
  const auto rep = bd::flux_report(bc, psi);
  const Eigen::VectorXd j = bd::current_profile(psi);
  RunOutcome out;
  out.table.columns = {"x", "j"};
  for (int i = 0; i < n; i += stride)
    out.table.rows.push_back({spec.grid.point(i), j[i]});
  out.summary = {
      {"j0", rep.j0},
      {"jL", rep.jL},
      {"classification",
       rep.classification == bd::FluxClass::Isolated ? "isolated" : "throughflow"}};
  return out;
}

RunOutcome cmd_evolve(const RunConfig& cfg) {
  const std::string kind = get_str(cfg.params, "evolution", "free");
  const auto times = get_list(cfg.params, "times", {0.0, 0.25, 0.5, 0.75, 1.0});
  RunOutcome out;
  out.table.columns = {"t", "norm", "diagnostic"};
  if (kind == "free") {
    const double box = get_num(cfg.params, "box", 16.0);
    const int n = get_int(cfg.params, "grid_n", 16384);
    const double mass = get_num(cfg.params, "mass", 1.0);
    const std::string state = get_str(cfg.params, "state", "bump");
    const auto g = free_box(box, n);
    bd::WaveFunction psi0 =
        (state == "gaussian")
            ? sp::gaussian_state(g, get_num(cfg.params, "center", 0.0),
                                 get_num(cfg.params, "width", 1.0),
                                 get_num(cfg.params, "k0", 0.0))
            : sp::bump_state(g, get_num(cfg.params, "center", 0.0),
                             get_num(cfg.params, "halfwidth", 1.0));
    for (double t : times) {
      const auto ev = sp::evolve_free_line(psi0, t, mass);
      out.table.rows.push_back({t, ev.state.norm(), ev.aliasing_bound});
    }
  } else if (kind == "bounded") {
    const auto bc = boundary_from(cfg.params);
    const int n = get_int(cfg.params, "grid_n", 2048);
    const int n_modes = get_int(cfg.params, "modes", 6);
    const auto spec = bd::solve_spectrum(bc, grid_for(bc, n), n_modes);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<int> idx(n_modes);
    std::vector<std::complex<double>> coeffs(n_modes);
    for (int i = 0; i < n_modes; ++i) {
      idx[i] = i;
      coeffs[i] = {dist(rng), dist(rng)};
    }
    const auto psi0 = mixture(spec, idx, coeffs);
    const auto d = bd::decompose(psi0, spec);
    for (double t : times) {
      const auto psi_t = sp::evolve_bounded(d, t);
      out.table.rows.push_back({t, psi_t.norm(), d.capture});
    }
  } else {
    throw ValidationError("config: evolution must be 'free' or 'bounded'");
  }
  double worst = 0.0;
  for (const auto& row : out.table.rows) worst = std::max(worst, std::abs(row[1] - 1.0));
  out.summary = {{"max_norm_drift", worst}, {"evolution", kind}};
  return out;
}

RunOutcome cmd_tail(const RunConfig& cfg) {
  const double box = get_num(cfg.params, "box", 16.0);
  const int n = get_int(cfg.params, "grid_n", 1 << 18);
  const double halfwidth = get_num(cfg.params, "halfwidth", 1.0);
  const double radius = get_num(cfg.params, "radius", 2.0);
  const double mass = get_num(cfg.params, "mass", 1.0);
  const auto times = get_list(cfg.params, "times", {0.0, 0.01, 0.02, 0.05});
  const auto psi0 = sp::bump_state(free_box(box, n), 0.0, halfwidth);
  RunOutcome out;
  out.table.columns = {"t", "tail", "resolved"};
  int unresolved = 0;
  for (double t : times) {
    const auto probe = sp::tail_probe(psi0, t, radius, mass);
    if (!probe.resolved && t > 0) ++unresolved;
    out.table.rows.push_back({t, probe.value, probe.resolved ? 1.0 : 0.0});
  }
  bool monotone = true;
  for (size_t i = 1; i < out.table.rows.size(); ++i)
    if (out.table.rows[i][1] <= out.table.rows[i - 1][1] &&
        out.table.rows[i][0] > 0)
      monotone = false;
  out.summary = {{"unresolved", unresolved}, {"monotone", monotone}};
  out.property_failures = unresolved;
  return out;
}

struct DichotomyConfig {
  std::string name;
  bool expect_confined;
  std::function<sp::ProbabilityRecord(void)> runner;
};

std::vector<DichotomyConfig> builtin_dichotomy_corpus();

RunOutcome cmd_dichotomy(const RunConfig& cfg) {
  RunOutcome out;
  out.table.columns = {"config", "confined", "expected_confined", "zero_fraction",
                       "min_positive"};
  json verdicts = json::array();
  const double tol = get_num(cfg.params, "tol", 1e-10);

  auto corpus = builtin_dichotomy_corpus();
  std::vector<sp::ProbabilityRecord> records(corpus.size());
  parallel_for(int(corpus.size()), cfg.jobs,
               [&](int i) { records[i] = corpus[i].runner(); });

  int errors = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto verdict = sp::classify_dichotomy(records[i], tol);
    const bool confined = verdict.branch == sp::Branch::Confined;
    // confined configurations must sit below tol everywhere; spreading ones
    // must clear tol at every t > 0 sample
    bool strict_ok;
    double min_positive = 1.0;
    if (corpus[i].expect_confined) {
      strict_ok = confined;
      min_positive = 0.0;
    } else {
      strict_ok = !confined;
      for (size_t j = 1; j < records[i].values.size(); ++j) {
        min_positive = std::min(min_positive, records[i].values[j]);
        if (records[i].values[j] <= tol) strict_ok = false;
      }
    }
    if (!strict_ok) ++errors;
    out.table.rows.push_back({double(i), confined ? 1.0 : 0.0,
                              corpus[i].expect_confined ? 1.0 : 0.0,
                              verdict.zero_fraction, min_positive});
    verdicts.push_back({{"config", corpus[i].name},
                        {"branch", confined ? "Confined" : "Spreading"},
                        {"zero_fraction", verdict.zero_fraction},
                        {"strict_ok", strict_ok},
                        {"evidence", verdict.support_evidence}});
  }
  out.summary = {{"classification_errors", errors}, {"verdicts", verdicts}};
  out.property_failures = errors;
  return out;
}

RunOutcome cmd_fock_check(const RunConfig& cfg) {
  const auto cutoffs = get_list(cfg.params, "cutoffs", {4.0, 8.0, 16.0});
  const double m0 = get_num(cfg.params, "m0", 1.0);
  const double c = get_num(cfg.params, "c", 10.0);
  const double width = get_num(cfg.params, "width", 1.0);
  const int d = get_int(cfg.params, "d", 3);
  const rc::DispersionParams params{m0, c};
  const auto basis = fk::ModeBasis::build({rc::TestFunction::gaussian(width, d)},
                                          params);
  RunOutcome out;
  out.table.columns = {"D", "commutator_defect", "gemm_defect", "vacuum_residual",
                       "number_comm_norm"};
  for (double dc : cutoffs) {
    const int D = int(dc);
    const auto ladder = fk::build_ladder(D);
    const Eigen::MatrixXd exact = fk::ladder_commutator(D);
    double structural = 0.0;
    for (int m = 0; m < D; ++m)
      structural = std::max(structural, std::abs(exact(m, m) - 1.0));
    const Eigen::MatrixXd gemm =
        ladder.a * ladder.adag - ladder.adag * ladder.a;
    const double gemm_defect = (gemm - exact).cwiseAbs().maxCoeff();

    fk::TruncatedFock fock{basis.n_modes(), D};
    const double vac = fk::vacuum_annihilation_check(fock, basis);
    const auto h = fk::mode_hamiltonian(
        fock, basis.mode_energies(fk::FieldWeighting::Nonrelativistic));
    const auto nop = fk::number_operator(fock);
    const double comm = (h * nop - nop * h).cwiseAbs().maxCoeff();
    out.table.rows.push_back({double(D), structural, gemm_defect, vac, comm});
  }
  out.summary = {{"modes", basis.n_modes()}};
  return out;
}

RunOutcome cmd_weyl_residual(const RunConfig& cfg) {
  const auto cutoffs = get_list(cfg.params, "cutoffs", {8.0, 16.0, 32.0});
  const double amplitude = get_num(cfg.params, "amplitude", 0.5);
  RunOutcome out;
  out.table.columns = {"D", "residual"};
  for (double dc : cutoffs) {
    out.table.rows.push_back(
        {dc, fk::weyl_relation_residual(amplitude, amplitude, int(dc))});
  }
  bool decreasing = true;
  for (size_t i = 1; i < out.table.rows.size(); ++i)
    if (out.table.rows[i][1] >= out.table.rows[i - 1][1]) decreasing = false;
  out.summary = {{"strictly_decreasing", decreasing}, {"amplitude", amplitude}};
  if (!decreasing) out.property_failures = 1;
  return out;
}

RunOutcome cmd_kernels(const RunConfig& cfg) {
  const double m0 = get_num(cfg.params, "m0", 1.0);
  const double c = get_num(cfg.params, "c", 10.0);
  const double tau = get_num(cfg.params, "tau", 0.0);
  const double k_max = get_num(cfg.params, "k_max", 5.0);
  const int count = get_int(cfg.params, "count", 101);
  const rc::DispersionParams p{m0, c};
  RunOutcome out;
  out.table.columns = {"k", "omega", "K_nr", "K_r", "gap", "beta_re", "beta_im"};
  for (int i = 0; i < count; ++i) {
    const double k = k_max * i / double(count - 1);
    const auto kp = rc::kernel_pair(k, p);
    const auto b = rc::beta(k, tau, p);
    out.table.rows.push_back({k, rc::omega_c(k, p), kp.nonrelativistic,
                              kp.relativistic, rc::kernel_gap(k, p), b.real(),
                              b.imag()});
  }
  out.summary = {{"m0", m0}, {"c", c}, {"tau", tau}};
  return out;
}

RunOutcome cmd_lemma2(const RunConfig& cfg) {
  const double m0 = get_num(cfg.params, "m0", 1.0);
  const double c = get_num(cfg.params, "c", 10.0);
  const double delta = get_num(cfg.params, "delta", 0.5);
  const double tau = get_num(cfg.params, "tau", 0.0);
  const int d = get_int(cfg.params, "d", 3);
  const auto f1 = rc::TestFunction::gaussian(get_num(cfg.params, "width1", 1.0), d);
  const auto f2 = rc::TestFunction::gaussian(get_num(cfg.params, "width2", 1.0), d);
  const auto rep = rc::verify_lemma2(f1, f2, tau, delta, {m0, c});
  const auto ineq = rc::proof_inequalities({m0, c}, delta, tau);
  RunOutcome out;
  out.table.columns = {"delta", "c",   "tau",    "epsilon", "delta_C",
                       "lhs",   "rhs", "margin", "pass"};
  out.table.rows.push_back({rep.delta, c, rep.tau, rep.epsilon, rep.delta_c, rep.lhs,
                            rep.rhs, rep.margin, rep.pass ? 1.0 : 0.0});
  out.summary = {{"pass", rep.pass},
                 {"margin", rep.margin},
                 {"pointwise_inequalities_hold", ineq.all_hold()}};
  if (!rep.pass || !ineq.all_hold()) out.property_failures = 1;
  return out;
}

RunOutcome cmd_lemma2_sweep(const RunConfig& cfg) {
  const double m0 = get_num(cfg.params, "m0", 1.0);
  const int d = get_int(cfg.params, "d", 3);
  const double width = get_num(cfg.params, "width", 1.0);
  std::vector<double> deltas = get_list(cfg.params, "deltas", {});
  if (deltas.empty())
    for (int i = 1; i <= 10; ++i) deltas.push_back(0.1 * i);
  const auto cs = get_list(cfg.params, "cs", {5.0, 10.0, 50.0});
  const auto taus = get_list(cfg.params, "taus", {0.0, 0.01});
  const auto f = rc::TestFunction::gaussian(width, d);

  struct Cell {
    double delta, c, tau;
  };
  std::vector<Cell> cells;
  for (double delta : deltas)
    for (double c : cs)
      for (double tau : taus) cells.push_back({delta, c, tau});

  std::vector<rc::Lemma2Report> reports(cells.size());
  std::vector<bool> pointwise(cells.size());
  parallel_for(int(cells.size()), cfg.jobs, [&](int i) {
    reports[i] = rc::verify_lemma2(f, f, cells[i].tau, cells[i].delta,
                                   {m0, cells[i].c});
    pointwise[i] =
        rc::proof_inequalities({m0, cells[i].c}, cells[i].delta, cells[i].tau)
            .all_hold();
  });

  RunOutcome out;
  out.table.columns = {"delta", "c",   "tau",    "epsilon", "delta_C",
                       "lhs",   "rhs", "margin", "pass",    "pointwise_ok"};
  int failures = 0;
  for (size_t i = 0; i < cells.size(); ++i) {
    const auto& r = reports[i];
    if (!r.pass || !pointwise[i]) ++failures;
    out.table.rows.push_back({r.delta, cells[i].c, r.tau, r.epsilon, r.delta_c,
                              r.lhs, r.rhs, r.margin, r.pass ? 1.0 : 0.0,
                              pointwise[i] ? 1.0 : 0.0});
  }
  out.summary = {{"cells", cells.size()},
                 {"failures", failures},
                 {"all_pass", failures == 0}};
  out.property_failures = failures;
  return out;
}

RunOutcome cmd_converge(const RunConfig& cfg) {
  const double m0 = get_num(cfg.params, "m0", 1.0);
  const double tau = get_num(cfg.params, "tau", 0.0);
  const int d = get_int(cfg.params, "d", 3);
  const double width = get_num(cfg.params, "width", 1.0);
  const auto cs = get_list(cfg.params, "cs", {10.0, 100.0, 1000.0, 10000.0});
  const auto f = rc::TestFunction::gaussian(width, d);
  const auto scan = rc::convergence_scan(f, f, tau, cs, m0);
  RunOutcome out;
  out.table.columns = {"c", "delta_C"};
  for (const auto& pt : scan.points) out.table.rows.push_back({pt.c, pt.delta_c});
  bool decreasing = true;
  for (size_t i = 1; i < scan.points.size(); ++i)
    if (scan.points[i].delta_c >= scan.points[i - 1].delta_c) decreasing = false;
  const bool slope_ok = scan.slope > -2.1 && scan.slope < -1.9;
  out.summary = {{"slope", scan.slope},
                 {"strictly_decreasing", decreasing},
                 {"slope_in_range", slope_ok}};
  if (!slope_ok || !decreasing) out.property_failures = 1;
  return out;
}

RunOutcome cmd_lieb_liniger(const RunConfig& cfg) {
  const auto gammas = get_list(cfg.params, "gammas", {0.1, 1.0, 10.0, 100.0, 1000.0});
  const int n_nodes = get_int(cfg.params, "n_nodes", 256);
  RunOutcome out;
  out.table.columns = {"gamma", "alpha", "f_gamma", "residual_max"};
  std::vector<ll::LLSolution> sols(gammas.size());
  parallel_for(int(gammas.size()), cfg.jobs,
               [&](int i) { sols[i] = ll::solve_ll(gammas[i], n_nodes); });
  for (const auto& s : sols)
    out.table.rows.push_back({s.gamma, s.alpha, s.f_gamma, s.residual_max});
  const double tonks = M_PI * M_PI / 3.0;
  out.summary = {{"tonks_ratio_last", sols.back().f_gamma / tonks},
                 {"n_nodes", n_nodes}};
  return out;
}

RunOutcome cmd_ll_scaling(const RunConfig& cfg) {
  const double lambda = get_num(cfg.params, "lambda", 1.0);
  const double rho1 = get_num(cfg.params, "rho1", 1.0);
  const double rho2 = get_num(cfg.params, "rho2", 2.0);
  const int n_nodes = get_int(cfg.params, "n_nodes", 256);
  const double res = ll::scaling_residual(lambda, rho1, rho2, n_nodes);
  RunOutcome out;
  out.table.columns = {"lambda", "rho1", "rho2", "residual"};
  out.table.rows.push_back({lambda, rho1, rho2, res});
  out.summary = {{"residual", res}, {"pass", res < 1e-9}};
  if (res >= 1e-9) out.property_failures = 1;
  return out;
}

// ---------------------------------------------------------------------------
// builtin dichotomy corpus (criterion-6 suite)
// ---------------------------------------------------------------------------

std::vector<double> time_grid(double t_max, int samples = 64) {
  std::vector<double> t;
  for (int i = 0; i < samples; ++i) t.push_back(t_max * i / double(samples - 1));
  return t;
}

sp::ProbabilityRecord bounded_record(const bd::BoundarySpec& bc, int grid_n,
                                     const std::vector<int>& modes,
                                     const std::vector<std::complex<double>>& coeffs,
                                     sp::Region region, double t_max) {
  const int max_mode = *std::max_element(modes.begin(), modes.end());
  const auto spec = bd::solve_spectrum(bc, grid_for(bc, grid_n), max_mode + 1);
  const auto psi0 = mixture(spec, modes, coeffs);
  const auto d = bd::decompose(psi0, spec);
  sp::LocalizationOperator op{sp::LocalizationOperator::Kind::ProjectorMultiplication,
                              region};
  op.complement = true;
  return sp::p_A_series(psi0, sp::BoundedEvolution{d}, op, time_grid(t_max));
}

sp::ProbabilityRecord free_record(const bd::WaveFunction& psi0, sp::Region region,
                                  double t_max) {
  sp::LocalizationOperator op{sp::LocalizationOperator::Kind::ProjectorMultiplication,
                              region};
  op.complement = true;
  return sp::p_A_series(psi0, sp::FreeLine{1.0}, op, time_grid(t_max));
}

std::vector<DichotomyConfig> builtin_dichotomy_corpus() {
  using C = std::complex<double>;
  std::vector<DichotomyConfig> corpus;
  const double pi = M_PI;
  auto add = [&](std::string name, bool confined,
                 std::function<sp::ProbabilityRecord(void)> fn) {
    corpus.push_back({std::move(name), confined, std::move(fn)});
  };

  // confined group: V is the whole bounded domain
  add("dirichlet ground, V = box", true, [=] {
    return bounded_record({bd::Dirichlet{}, pi}, 1024, {0}, {C(1, 0)}, {0.0, pi}, 5.0);
  });
  add("dirichlet two-mode, V = box", true, [=] {
    return bounded_record({bd::Dirichlet{}, pi}, 1024, {0, 1}, {C(1, 0), C(1, 0)},
                          {0.0, pi}, 5.0);
  });
  add("dirichlet five-mode, V = box", true, [=] {
    return bounded_record({bd::Dirichlet{}, pi}, 1024, {0, 1, 2, 3, 4},
                          {C(1, 0), C(1, 0), C(0, 1), C(1, 0), C(0.5, 0.5)},
                          {0.0, pi}, 5.0);
  });
  add("dirichlet L=2 sparse modes, V = box", true, [=] {
    return bounded_record({bd::Dirichlet{}, 2.0}, 1024, {0, 2}, {C(1, 0), C(0, 1)},
                          {0.0, 2.0}, 5.0);
  });
  add("neumann two-mode, V = box", true, [=] {
    return bounded_record({bd::Robin{0.0, 0.0}, 1.0}, 1024, {0, 1},
                          {C(1, 0), C(1, 0)}, {0.0, 1.0}, 5.0);
  });
  add("robin(1,1) two-mode, V = box", true, [=] {
    return bounded_record({bd::Robin{1.0, 1.0}, 1.0}, 1024, {0, 1},
                          {C(1, 0), C(0.3, 0.7)}, {0.0, 1.0}, 5.0);
  });
  add("attractive robin bound states, V = box", true, [=] {
    return bounded_record({bd::Robin{-1.0, -1.0}, 10.0}, 1024, {0, 1},
                          {C(1, 0), C(1, 0)}, {0.0, 10.0}, 5.0);
  });
  add("twisted theta=0 two-mode, V = box", true, [=] {
    return bounded_record({bd::Twisted{0.0}, 1.0}, 1024, {0, 1}, {C(1, 0), C(1, 0)},
                          {0.0, 1.0}, 5.0);
  });
  add("twisted theta=pi/2 three-mode, V = box", true, [=] {
    return bounded_record({bd::Twisted{pi / 2}, 1.0}, 1024, {0, 1, 2},
                          {C(1, 0), C(1, 0), C(0, 1)}, {0.0, 1.0}, 5.0);
  });
  add("dirichlet odd modes, V = box", true, [=] {
    return bounded_record({bd::Dirichlet{}, pi}, 1024, {1, 3}, {C(1, 0), C(1, 0)},
                          {0.0, pi}, 5.0);
  });

  // spreading group: free lines with bounded V, bounded boxes with partial V
  add("free bump, V = [-2,2]", false, [=] {
    return free_record(sp::bump_state(free_box(16.0, 1 << 14), 0.0, 1.0),
                       {-2.0, 2.0}, 4.0);
  });
  add("free narrow bump, V = [-1.5,1.5]", false, [=] {
    return free_record(sp::bump_state(free_box(16.0, 1 << 14), 0.0, 0.5),
                       {-1.5, 1.5}, 4.0);
  });
  add("free gaussian, V = [-2,2]", false, [=] {
    return free_record(sp::gaussian_state(free_box(32.0, 1 << 14), 0.0, 1.0),
                       {-2.0, 2.0}, 4.0);
  });
  add("free narrow gaussian, V = [-1.5,1.5]", false, [=] {
    return free_record(sp::gaussian_state(free_box(32.0, 1 << 14), 0.0, 0.5),
                       {-1.5, 1.5}, 4.0);
  });
  add("free boosted gaussian, V = [-4,4]", false, [=] {
    return free_record(sp::gaussian_state(free_box(32.0, 1 << 14), 0.0, 1.0, 2.0),
                       {-4.0, 4.0}, 4.0);
  });
  add("dirichlet two-mode, V = half box", false, [=] {
    return bounded_record({bd::Dirichlet{}, pi}, 1024, {0, 1}, {C(1, 0), C(1, 0)},
                          {0.0, pi / 2}, 5.0);
  });
  add("dirichlet four-mode, V = [0.4, 2.0]", false, [=] {
    return bounded_record({bd::Dirichlet{}, pi}, 1024, {0, 1, 2, 3},
                          {C(1, 0), C(1, 0), C(1, 0), C(1, 0)}, {0.4, 2.0}, 5.0);
  });
  add("robin(1,1) two-mode, V = half box", false, [=] {
    return bounded_record({bd::Robin{1.0, 1.0}, 1.0}, 1024, {0, 1},
                          {C(1, 0), C(1, 0)}, {0.0, 0.5}, 5.0);
  });
  add("twisted theta=pi/2 two-mode, V = half box", false, [=] {
    return bounded_record({bd::Twisted{pi / 2}, 1.0}, 1024, {0, 1},
                          {C(1, 0), C(1, 0)}, {0.0, 0.5}, 5.0);
  });
  add("neumann modes 0 and 2, V = [0.25, 0.75]", false, [=] {
    return bounded_record({bd::Robin{0.0, 0.0}, 1.0}, 1024, {0, 2},
                          {C(1, 0), C(1, 0)}, {0.25, 0.75}, 5.0);
  });
  return corpus;
}

}  // namespace

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  const auto cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
    throw ValidationError("unknown command '" + command + "'");
  if (!params.is_object())
    throw ValidationError("config: parameters must be a JSON object");
  if (jobs < 1) throw ValidationError("config: jobs must be >= 1");
  if (!plot_kind.empty() && plot_kind != "line" && plot_kind != "loglog" &&
      plot_kind != "heatmap")
    throw ValidationError("config: plot kind must be line, loglog or heatmap");
}

void ResultTable::validate() const {
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ValidationError("ResultTable: ragged row");
    for (double v : row)
      if (!std::isfinite(v)) throw ValidationError("ResultTable: non-finite cell");
  }
}

RunOutcome execute(const RunConfig& config) {
  config.validate();
  RunOutcome out;
  if (config.command == "spectrum") out = cmd_spectrum(config);
  else if (config.command == "twisted-momentum") out = cmd_twisted_momentum(config);
  else if (config.command == "defect") out = cmd_defect(config);
  else if (config.command == "current") out = cmd_current(config);
  else if (config.command == "evolve") out = cmd_evolve(config);
  else if (config.command == "tail") out = cmd_tail(config);
  else if (config.command == "dichotomy") out = cmd_dichotomy(config);
  else if (config.command == "fock-check") out = cmd_fock_check(config);
  else if (config.command == "weyl-residual") out = cmd_weyl_residual(config);
  else if (config.command == "kernels") out = cmd_kernels(config);
  else if (config.command == "lemma2") out = cmd_lemma2(config);
  else if (config.command == "lemma2-sweep") out = cmd_lemma2_sweep(config);
  else if (config.command == "converge") out = cmd_converge(config);
  else if (config.command == "lieb-liniger") out = cmd_lieb_liniger(config);
  else if (config.command == "ll-scaling") out = cmd_ll_scaling(config);
  else throw ValidationError("unknown command '" + config.command + "'");
  out.table.validate();
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_body(const ResultTable& table) {
  std::string out;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    out += table.columns[i];
    out += (i + 1 < table.columns.size()) ? "," : "\n";
  }
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out += format_double(row[i]);
      out += (i + 1 < row.size()) ? "," : "\n";
    }
  }
  return out;
}

std::string csv_text(const ResultTable& table) {
  std::string out;
  for (const auto& [key, value] : table.metadata)
    out += "# " + key + " = " + value + "\n";
  return out + csv_body(table);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file " + path);
  f << text;
}

std::uint64_t config_hash(const RunConfig& config) {
  const std::string canonical = config.command + "|" + config.params.dump() + "|" +
                                std::to_string(config.seed);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::string> known_commands() {
  return {"spectrum", "twisted-momentum", "defect",        "current",
          "evolve",   "tail",             "dichotomy",     "fock-check",
          "weyl-residual", "kernels",     "lemma2",        "lemma2-sweep",
          "converge", "lieb-liniger",     "ll-scaling"};
}

int run_cli(int argc, char** argv) {
  auto fail = [](const std::string& msg, int code) {
    std::fprintf(stderr, "causalab: %s\n", msg.c_str());
    return code;
  };
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::string cmds;
    for (const auto& c : known_commands()) cmds += "  " + c + "\n";
    std::printf(
        "usage: causalab <command> --config <file.json> [--out DIR] [--jobs N] "
        "[--plot line|loglog|heatmap]\ncommands:\n%s",
        cmds.c_str());
    return args.empty() ? 2 : 0;
  }

  RunConfig config;
  config.command = args[0];
  std::string config_path;
  for (size_t i = 1; i < args.size(); ++i) {
    auto need_value = [&](const char* flag) {
      if (i + 1 >= args.size())
        throw ValidationError(std::string(flag) + " requires a value");
      return args[++i];
    };
    try {
      if (args[i] == "--config") config_path = need_value("--config");
      else if (args[i] == "--out") config.output_dir = need_value("--out");
      else if (args[i] == "--jobs") config.jobs = std::stoi(need_value("--jobs"));
      else if (args[i] == "--plot") config.plot_kind = need_value("--plot");
      else return fail("unknown argument " + args[i], 2);
    } catch (const std::exception& e) {
      return fail(e.what(), 2);
    }
  }

  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ValidationError("cannot read config file " + config_path);
      json doc = json::parse(f, nullptr, true, true);
      if (!doc.is_object()) throw ValidationError("config root must be an object");
      if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
      if (doc.contains("output_dir") && config.output_dir == ".")
        config.output_dir = doc["output_dir"].get<std::string>();
      doc.erase("seed");
      doc.erase("output_dir");
      config.params = doc;
    } else {
      config.params = json::object();
    }
    config.validate();

    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome outcome = execute(config);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
        1000.0;

    char hash_text[32];
    std::snprintf(hash_text, sizeof(hash_text), "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    const auto now = std::chrono::system_clock::now();
    const std::time_t now_t = std::chrono::system_clock::to_time_t(now);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now_t));

    // run-to-run variation is confined to the timestamp line; timings live in
    // summary.json
    outcome.table.metadata = {
        {"command", config.command},
        {"config", config.params.dump()},
        {"config_hash", hash_text},
        {"seed", std::to_string(config.seed)},
        {"version", kVersion},
        {"generated_at", stamp},
    };

    std::filesystem::create_directories(config.output_dir);
    const std::string base = config.output_dir + "/" + config.command;
    write_file(base + ".csv", csv_text(outcome.table));
    json summary = {{"command", config.command},
                    {"config_hash", hash_text},
                    {"seed", config.seed},
                    {"values", outcome.summary},
                    {"timings", {{"total_ms", ms}}}};
    write_file(config.output_dir + "/summary.json", summary.dump(2) + "\n");
    if (!config.plot_kind.empty())
      plot::write_plot(outcome.table, config.plot_kind, base + ".svg");

    if (outcome.property_failures > 0)
      return fail(std::to_string(outcome.property_failures) +
                      " property assertion(s) failed; see " +
                      config.output_dir + "/summary.json",
                  4);
    return 0;
  } catch (const PropertyError& e) {
    return fail(e.what(), 4);
  } catch (const NumericalError& e) {
    return fail(e.what(), 3);
  } catch (const ValidationError& e) {
    return fail(e.what(), 2);
  } catch (const json::exception& e) {
    return fail(std::string("config parse error: ") + e.what(), 2);
  } catch (const std::exception& e) {
    return fail(e.what(), 2);
  }
}

}  // namespace causalab::run
