// psflab command-line front end: every identity check as a reproducible,
// machine-readable run (JSON lines by default, CSV on request).

#include <atomic>
#include <chrono>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "psflab/diffeo.hpp"
#include "psflab/engine.hpp"
#include "psflab/kernel_pairs.hpp"
#include "psflab/report.hpp"
#include "psflab/schwartz.hpp"
#include "psflab/version.hpp"
#include "psflab/weak.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

using psflab::report::RunReport;
using Params = std::vector<std::pair<std::string, double>>;

struct Common {
  bool json = true;
  std::string format = "json";
  double tol = 1e-12;
  int max_shell = 400;
  std::uint64_t seed = 0;
  bool quiet = false;
  int threads = 0;
  bool timing = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "emit JSON lines (default)");
  sub->add_option("--format", c.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--tol", c.tol, "target absolute truncation tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-shell", c.max_shell, "largest lattice shell")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", c.seed, "seed for sampled evaluation points");
  sub->add_flag("--quiet", c.quiet, "suppress progress notes on stderr");
  sub->add_option("--threads", c.threads,
                  "worker threads (default: PSFLAB_THREADS or hardware)");
  sub->add_flag("--timing", c.timing,
                "record wall_time_ms (off by default to keep output byte-stable)");
}

psflab::lattice::TruncationBudget budget_of(const Common& c) {
  psflab::lattice::TruncationBudget b;
  b.max_shell = c.max_shell;
  b.target_abs_tol = c.tol;
  return b;
}

int resolve_threads(const Common& c) {
  if (c.threads > 0) return c.threads;
  if (const char* env = std::getenv("PSFLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw != 0 ? static_cast<int>(hw) : 1;
}

struct Job {
  std::function<RunReport()> run;
};

// Fixed pool over the job list; lines are emitted in submission order.
int emit_reports(const Common& c, const std::vector<Job>& jobs) {
  const int nthreads =
      std::max(1, std::min(resolve_threads(c), static_cast<int>(jobs.size())));
  if (!c.quiet)
    std::cerr << "psflab: " << jobs.size() << " configuration(s) on " << nthreads
              << " thread(s)\n";
  std::vector<std::string> lines(jobs.size());
  std::vector<char> ok(jobs.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> internal{false};
  std::mutex err_mtx;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        RunReport rep = jobs[i].run();
        if (c.timing) {
          const auto t1 = std::chrono::steady_clock::now();
          rep.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        lines[i] = c.format == "csv" ? rep.csv_line() : rep.json_line();
        ok[i] = rep.passed ? 1 : 0;
      } catch (const std::exception& e) {
        internal.store(true);
        const std::lock_guard<std::mutex> lock(err_mtx);
        std::cerr << "psflab: error: " << e.what() << "\n";
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (internal.load()) return 3;
  if (c.format == "csv") std::cout << RunReport::csv_header() << "\n";
  bool all = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::cout << lines[i] << "\n";
    all = all && ok[i] != 0;
  }
  return all ? 0 : 2;
}

std::vector<std::vector<double>> sample_points(int dim, int count,
                                               std::uint64_t seed) {
  std::vector<std::vector<double>> pts;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      x[static_cast<std::size_t>(j)] = -kPi + 2.0 * kPi * u;
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

// --x flag handling: empty means the origin; otherwise it must match --dim
std::vector<double> point_or_origin(const std::vector<double>& x, int dim,
                                    const char* what) {
  if (x.empty()) return std::vector<double>(static_cast<std::size_t>(dim), 0.0);
  if (static_cast<int>(x.size()) != dim)
    throw CLI::ValidationError(std::string(what) + " needs exactly --dim values");
  return x;
}

void append_point(Params& p, const char* stem, const std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    p.emplace_back(stem + std::to_string(i), x[i]);
}

psflab::schwartz::TestFunction build_gaussian(int dim, double width,
                                              const std::vector<double>& shift,
                                              const std::vector<double>& mod) {
  const auto h = point_or_origin(shift, dim, "--shift");
  const auto m = point_or_origin(mod, dim, "--mod");
  return psflab::schwartz::shift_modulate(psflab::schwartz::gaussian(width, dim), h, m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice-summation identity verifier"};
  app.require_subcommand(1);

  // theta
  Common c_theta;
  int theta_dim = 1;
  std::vector<double> theta_t{1.0};
  auto* s_theta = app.add_subcommand("theta", "Gaussian comb at the self-dual scale");
  s_theta->add_option("--dim", theta_dim, "lattice dimension")->check(CLI::Range(1, 3));
  s_theta->add_option("--t", theta_t, "scale parameter grid (t > 0)");
  add_common(s_theta, c_theta);

  // heat
  Common c_heat;
  int heat_dim = 1;
  std::vector<double> heat_t{1.0};
  std::vector<double> heat_x;
  int heat_rx = 0;
  auto* s_heat = app.add_subcommand("heat", "Gaussian kernel pair at a point");
  s_heat->add_option("--dim", heat_dim)->check(CLI::Range(1, 3));
  s_heat->add_option("--t", heat_t, "diffusion time grid (t > 0)");
  s_heat->add_option("--x", heat_x, "evaluation point (--dim values)");
  s_heat->add_option("--random-x", heat_rx, "additional seeded sample points")
      ->check(CLI::NonNegativeNumber);
  add_common(s_heat, c_heat);

  // poisson
  Common c_poi;
  int poi_dim = 1;
  std::vector<double> poi_t{1.0};
  std::vector<double> poi_x;
  int poi_rx = 0;
  auto* s_poi = app.add_subcommand("poisson", "Cauchy kernel pair at a point");
  s_poi->add_option("--dim", poi_dim)->check(CLI::Range(1, 3));
  s_poi->add_option("--t", poi_t, "halfspace height grid (t > 0)");
  s_poi->add_option("--x", poi_x, "evaluation point (--dim values)");
  s_poi->add_option("--random-x", poi_rx, "additional seeded sample points")
      ->check(CLI::NonNegativeNumber);
  add_common(s_poi, c_poi);

  // corollary35
  Common c_cor;
  int cor_terms = 10000;
  auto* s_cor = app.add_subcommand("corollary35",
                                   "closed form of the reciprocal-quadratic series");
  s_cor->add_option("--terms", cor_terms, "partial-sum length")
      ->check(CLI::PositiveNumber);
  add_common(s_cor, c_cor);

  // bessel
  Common c_bes;
  int bes_dim = 1;
  std::vector<double> bes_alpha{-4.0};
  std::vector<double> bes_x;
  auto* s_bes = app.add_subcommand("bessel", "Bessel-potential kernel pair (pointwise)");
  s_bes->add_option("--dim", bes_dim)->check(CLI::Range(1, 3));
  s_bes->add_option("--alpha", bes_alpha, "order grid (alpha < -dim)");
  s_bes->add_option("--x", bes_x, "evaluation point (--dim values)");
  add_common(s_bes, c_bes);

  // psf
  Common c_psf;
  int psf_dim = 1;
  double psf_width = 1.0;
  std::vector<double> psf_shift, psf_mod, psf_x;
  int psf_rx = 0;
  auto* s_psf = app.add_subcommand("psf", "classical summation formula for a Gaussian");
  s_psf->add_option("--dim", psf_dim)->check(CLI::Range(1, 3));
  s_psf->add_option("--width", psf_width, "Gaussian width a")->check(CLI::PositiveNumber);
  s_psf->add_option("--shift", psf_shift, "Gaussian centre (--dim values)");
  s_psf->add_option("--mod", psf_mod, "modulation wavevector (--dim values)");
  s_psf->add_option("--x", psf_x, "evaluation point (--dim values)");
  s_psf->add_option("--random-x", psf_rx, "additional seeded sample points")
      ->check(CLI::NonNegativeNumber);
  add_common(s_psf, c_psf);

  // symbol
  Common c_sym;
  int sym_dim = 1;
  double sym_width = 1.0;
  std::vector<double> sym_shift, sym_mod, sym_x;
  auto* s_sym = app.add_subcommand("symbol", "Gaussian-symbol operator comb at a point");
  s_sym->add_option("--dim", sym_dim)->check(CLI::Range(1, 3));
  s_sym->add_option("--width", sym_width, "symbol width a")->check(CLI::PositiveNumber);
  s_sym->add_option("--shift", sym_shift, "symbol centre (--dim values)");
  s_sym->add_option("--mod", sym_mod, "symbol modulation (--dim values)");
  s_sym->add_option("--x", sym_x, "evaluation point (--dim values)");
  add_common(s_sym, c_sym);

  // weak
  Common c_wk;
  int wk_dim = 1;
  double wk_width = 1.0;
  std::vector<double> wk_shift, wk_mod;
  int wk_ntrunc = 8;
  auto* s_wk = app.add_subcommand("weak", "exponential comb vs delta comb, paired");
  s_wk->add_option("--dim", wk_dim)->check(CLI::Range(1, 3));
  s_wk->add_option("--width", wk_width)->check(CLI::PositiveNumber);
  s_wk->add_option("--shift", wk_shift, "test-function centre (--dim values)");
  s_wk->add_option("--mod", wk_mod, "test-function modulation (--dim values)");
  s_wk->add_option("--ntrunc", wk_ntrunc, "frequency truncation radius")
      ->check(CLI::NonNegativeNumber);
  add_common(s_wk, c_wk);

  // lp-report
  Common c_lp;
  int lp_dim = 1;
  int lp_jmax = 8;
  int lp_grid = 1024;
  auto* s_lp = app.add_subcommand("lp-report", "dyadic-piece growth ratios");
  s_lp->add_option("--dim", lp_dim)->check(CLI::Range(1, 2));
  s_lp->add_option("--jmax", lp_jmax, "highest dyadic level")->check(CLI::Range(2, 12));
  s_lp->add_option("--grid", lp_grid, "sample grid points per period")
      ->check(CLI::Range(16, 65536));
  add_common(s_lp, c_lp);

  // diffeo
  Common c_dif;
  std::string dif_psi = "sin";
  std::string dif_g = "one";
  double dif_width = 1.0;
  double dif_eps = 1e-2;
  int dif_ntrunc = 16;
  auto* s_dif = app.add_subcommand("diffeo", "warped comb for a 1-D diffeomorphism");
  s_dif->add_option("--psi", dif_psi, "map: identity | sin | sin2")
      ->check(CLI::IsMember({"identity", "sin", "sin2"}));
  s_dif->add_option("--g", dif_g, "multiplier: one | bump")
      ->check(CLI::IsMember({"one", "bump"}));
  s_dif->add_option("--width", dif_width)->check(CLI::PositiveNumber);
  s_dif->add_option("--eps", dif_eps, "Abel regularization scale")
      ->check(CLI::PositiveNumber);
  s_dif->add_option("--ntrunc", dif_ntrunc, "frequency truncation radius")
      ->check(CLI::Range(1, 64));
  add_common(s_dif, c_dif);

  // affine
  Common c_aff;
  std::string aff_map = "identity";
  int aff_dim = 1;
  double aff_width = 1.0;
  std::vector<double> aff_b, aff_shift, aff_mod;
  auto* s_aff = app.add_subcommand("affine", "warped comb for an affine map");
  s_aff->add_option("--map", aff_map, "matrix: identity | diag2 | rot30")
      ->check(CLI::IsMember({"identity", "diag2", "rot30"}));
  s_aff->add_option("--dim", aff_dim)->check(CLI::Range(1, 3));
  s_aff->add_option("--b", aff_b, "offset (--dim values)");
  s_aff->add_option("--width", aff_width)->check(CLI::PositiveNumber);
  s_aff->add_option("--shift", aff_shift, "test-function centre (--dim values)");
  s_aff->add_option("--mod", aff_mod, "test-function modulation (--dim values)");
  add_common(s_aff, c_aff);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (s_theta->parsed()) {
      std::vector<Job> jobs;
      for (double t : theta_t) {
        if (!(t > 0.0)) throw CLI::ValidationError("--t values must be > 0");
        Params p{{"dim", static_cast<double>(theta_dim)}, {"t", t}, {"tol", c_theta.tol}};
        const auto b = budget_of(c_theta);
        const int dim = theta_dim;
        jobs.push_back({[=] {
          return RunReport::from("theta_transform", p,
                                 psflab::engine::theta_transform_check(t, dim, b));
        }});
      }
      return emit_reports(c_theta, jobs);
    }

    if (s_heat->parsed() || s_poi->parsed()) {
      const bool heat = s_heat->parsed();
      const Common& c = heat ? c_heat : c_poi;
      const int dim = heat ? heat_dim : poi_dim;
      const auto& ts = heat ? heat_t : poi_t;
      const auto& xflag = heat ? heat_x : poi_x;
      const int rx = heat ? heat_rx : poi_rx;
      std::vector<std::vector<double>> pts{point_or_origin(xflag, dim, "--x")};
      for (auto& extra : sample_points(dim, rx, c.seed)) pts.push_back(std::move(extra));
      std::vector<Job> jobs;
      for (double t : ts) {
        if (!(t > 0.0)) throw CLI::ValidationError("--t values must be > 0");
        for (const auto& x : pts) {
          Params p{{"dim", static_cast<double>(dim)}, {"t", t}, {"tol", c.tol}};
          append_point(p, "x", x);
          const auto b = budget_of(c);
          jobs.push_back({[=] {
            const auto pair = heat ? psflab::pairs::heat_pair(t, dim)
                                   : psflab::pairs::poisson_pair(t, dim);
            return RunReport::from(heat ? "heat_comb" : "poisson_comb", p,
                                   psflab::engine::evaluate_identity(*pair, x, b));
          }});
        }
      }
      return emit_reports(c, jobs);
    }

    if (s_cor->parsed()) {
      Params p{{"terms", static_cast<double>(cor_terms)}, {"tol", c_cor.tol}};
      const int terms = cor_terms;
      std::vector<Job> jobs;
      jobs.push_back({[=] {
        return RunReport::from("corollary35", p,
                               psflab::engine::corollary_3_5_check(terms));
      }});
      return emit_reports(c_cor, jobs);
    }

    if (s_bes->parsed()) {
      const auto x = point_or_origin(bes_x, bes_dim, "--x");
      std::vector<Job> jobs;
      for (double alpha : bes_alpha) {
        if (!(alpha < -static_cast<double>(bes_dim)))
          throw CLI::ValidationError(
              "--alpha must be < -dim for the pointwise check");
        Params p{{"dim", static_cast<double>(bes_dim)},
                 {"alpha", alpha},
                 {"tol", c_bes.tol}};
        append_point(p, "x", x);
        const auto b = budget_of(c_bes);
        const int dim = bes_dim;
        jobs.push_back({[=] {
          const auto pair = psflab::pairs::bessel_pair(alpha, dim);
          return RunReport::from("bessel_comb", p,
                                 psflab::engine::evaluate_identity(*pair, x, b));
        }});
      }
      return emit_reports(c_bes, jobs);
    }

    if (s_psf->parsed()) {
      const auto f = build_gaussian(psf_dim, psf_width, psf_shift, psf_mod);
      std::vector<std::vector<double>> pts{point_or_origin(psf_x, psf_dim, "--x")};
      for (auto& extra : sample_points(psf_dim, psf_rx, c_psf.seed))
        pts.push_back(std::move(extra));
      std::vector<Job> jobs;
      for (const auto& x : pts) {
        Params p{{"dim", static_cast<double>(psf_dim)},
                 {"width", psf_width},
                 {"tol", c_psf.tol}};
        append_point(p, "shift", point_or_origin(psf_shift, psf_dim, "--shift"));
        append_point(p, "mod", point_or_origin(psf_mod, psf_dim, "--mod"));
        append_point(p, "x", x);
        const auto b = budget_of(c_psf);
        jobs.push_back({[=] {
          return RunReport::from("classical_psf", p,
                                 psflab::engine::classical_psf(f, x, b));
        }});
      }
      return emit_reports(c_psf, jobs);
    }

    if (s_sym->parsed()) {
      const auto tau = build_gaussian(sym_dim, sym_width, sym_shift, sym_mod);
      const auto x = point_or_origin(sym_x, sym_dim, "--x");
      Params p{{"dim", static_cast<double>(sym_dim)},
               {"width", sym_width},
               {"tol", c_sym.tol}};
      append_point(p, "shift", point_or_origin(sym_shift, sym_dim, "--shift"));
      append_point(p, "mod", point_or_origin(sym_mod, sym_dim, "--mod"));
      append_point(p, "x", x);
      const auto b = budget_of(c_sym);
      std::vector<Job> jobs;
      jobs.push_back({[=] {
        const auto pair = psflab::pairs::symbol_pair(tau);
        return RunReport::from("symbol_comb", p,
                               psflab::engine::evaluate_identity(*pair, x, b));
      }});
      return emit_reports(c_sym, jobs);
    }

    if (s_wk->parsed()) {
      const auto f = build_gaussian(wk_dim, wk_width, wk_shift, wk_mod);
      Params p{{"dim", static_cast<double>(wk_dim)},
               {"width", wk_width},
               {"ntrunc", static_cast<double>(wk_ntrunc)},
               {"tol", c_wk.tol}};
      append_point(p, "shift", point_or_origin(wk_shift, wk_dim, "--shift"));
      append_point(p, "mod", point_or_origin(wk_mod, wk_dim, "--mod"));
      const auto b = budget_of(c_wk);
      const int ntrunc = wk_ntrunc;
      std::vector<Job> jobs;
      jobs.push_back({[=] {
        const auto lhs = psflab::weak::pair_exp_comb(f, ntrunc);
        const auto rhs = psflab::weak::pair_dirac_comb(f, b);
        psflab::engine::DualEvaluation ev;
        ev.lhs_value = lhs.value;
        ev.rhs_value = rhs.value;
        ev.lhs_tail = lhs.tail_estimate;
        ev.rhs_tail = rhs.tail_estimate;
        ev.discrepancy = std::abs(lhs.value - rhs.value);
        ev.shells_lhs = lhs.truncation_level;
        ev.shells_rhs = rhs.truncation_level;
        ev.chosen_side = psflab::engine::Side::spatial;
        ev.slack = psflab::engine::engine_slack(std::abs(lhs.value), std::abs(rhs.value));
        ev.budget_exhausted = rhs.tail_estimate > b.target_abs_tol;
        ev.passed = !ev.budget_exhausted &&
                    ev.discrepancy <= ev.lhs_tail + ev.rhs_tail + ev.slack;
        return RunReport::from("weak_comb", p, ev);
      }});
      return emit_reports(c_wk, jobs);
    }

    if (s_lp->parsed()) {
      if (!c_lp.quiet)
        std::cerr << "psflab: dyadic scan dim " << lp_dim << ", levels 0.." << lp_jmax
                  << "\n";
      const auto rep = psflab::weak::csn_report(lp_jmax, lp_dim, lp_grid);
      if (c_lp.format == "csv") {
        std::cout << "identity,dim,grid_per_dim,level,sup_modulus,scale_ratio\n";
        for (const auto& lvl : rep.levels) {
          std::cout << "lp_level," << rep.dim << ',' << rep.grid_per_dim << ','
                    << lvl.level << ',';
          const nlohmann::ordered_json a = lvl.sup_modulus;
          const nlohmann::ordered_json r = lvl.scale_ratio;
          std::cout << a.dump() << ',' << r.dump() << "\n";
        }
      } else {
        for (const auto& lvl : rep.levels) {
          nlohmann::ordered_json j;
          j["identity"] = "lp_level";
          j["dim"] = rep.dim;
          j["grid_per_dim"] = rep.grid_per_dim;
          j["level"] = lvl.level;
          j["sup_modulus"] = lvl.sup_modulus;
          j["scale_ratio"] = lvl.scale_ratio;
          std::cout << j.dump() << "\n";
        }
        nlohmann::ordered_json j;
        j["identity"] = "lp_report";
        j["dim"] = rep.dim;
        j["grid_per_dim"] = rep.grid_per_dim;
        j["max_ratio"] = rep.max_ratio;
        j["engine_version"] = psflab::kEngineVersion;
        std::cout << j.dump() << "\n";
      }
      return 0;
    }

    if (s_dif->parsed()) {
      const double check_tol = s_dif->count("--tol") != 0 ? c_dif.tol : 1e-6;
      const auto f = psflab::schwartz::gaussian(dif_width, 1);
      const int psi_id = dif_psi == "identity" ? 0 : dif_psi == "sin" ? 1 : 2;
      const int g_id = dif_g == "one" ? 0 : 1;
      Params p{{"psi", static_cast<double>(psi_id)},
               {"g", static_cast<double>(g_id)},
               {"width", dif_width},
               {"eps", dif_eps},
               {"ntrunc", static_cast<double>(dif_ntrunc)},
               {"tol", check_tol}};
      const auto b = budget_of(c_dif);
      const double eps = dif_eps;
      const int ntrunc = dif_ntrunc;
      std::vector<Job> jobs;
      jobs.push_back({[=] {
        const auto d =
            psi_id == 0
                ? psflab::diffeo::Diffeo1D::make([](double x) { return x; },
                                                 [](double) { return 1.0; }, 1.0, 1.0,
                                                 "identity")
            : psi_id == 1
                ? psflab::diffeo::Diffeo1D::make(
                      [](double x) { return x + 0.1 * std::sin(x); },
                      [](double x) { return 1.0 + 0.1 * std::cos(x); }, 0.9, 1.1, "sin")
                : psflab::diffeo::Diffeo1D::make(
                      [](double x) { return 2.0 * x + 0.2 * std::sin(x); },
                      [](double x) { return 2.0 + 0.2 * std::cos(x); }, 1.8, 2.2,
                      "sin2");
        const auto g = g_id == 0 ? psflab::diffeo::Multiplier::one()
                                 : psflab::diffeo::Multiplier::gaussian_bump(1.0, 0.5,
                                                                             0.3, 1.0);
        return RunReport::from(
            "warped_comb", p,
            psflab::diffeo::warped_comb_check(d, g, f, check_tol, eps, ntrunc, b));
      }});
      return emit_reports(c_dif, jobs);
    }

    if (s_aff->parsed()) {
      if (aff_map == "rot30" && aff_dim != 2)
        throw CLI::ValidationError("--map rot30 requires --dim 2");
      const int n = aff_dim;
      std::vector<double> amat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                               0.0);
      if (aff_map == "rot30") {
        const double c30 = std::cos(kPi / 6.0);
        const double s30 = std::sin(kPi / 6.0);
        amat = {c30, -s30, s30, c30};
      } else {
        const double diag = aff_map == "diag2" ? 2.0 : 1.0;
        for (int i = 0; i < n; ++i)
          amat[static_cast<std::size_t>(i * n + i)] = diag;
      }
      const auto bvec = point_or_origin(aff_b, n, "--b");
      const auto f = build_gaussian(n, aff_width, aff_shift, aff_mod);
      Params p{{"dim", static_cast<double>(n)}, {"width", aff_width}, {"tol", c_aff.tol}};
      for (std::size_t i = 0; i < amat.size(); ++i)
        p.emplace_back("a" + std::to_string(i), amat[i]);
      append_point(p, "b", bvec);
      const auto b = budget_of(c_aff);
      const std::string map_name = aff_map;
      std::vector<Job> jobs;
      jobs.push_back({[=] {
        const auto m = psflab::diffeo::AffineMap::make(n, amat, bvec, map_name);
        return RunReport::from("affine_comb", p,
                               psflab::diffeo::affine_comb_check(m, f, b));
      }});
      return emit_reports(c_aff, jobs);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "psflab: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "psflab: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "psflab: error: " << e.what() << "\n";
    return 3;
  }

  std::cerr << "psflab: no subcommand executed\n";
  return 1;
}
