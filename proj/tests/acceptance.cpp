// Acceptance gate: one line per criterion, nonzero exit if any fails.
//
// Criteria 1-3 run the eight benchmark cells at desk scale: 2000 paths of
// 2^18 steps, checkpoints 2^8..2^18, log-log fit over [2^12, 2^18], index
// offset k0 = 0.  The offset is an anti-fluctuation device for full-length
// runs (2^20 steps, fit from 2^13); keeping k0 = 10^4 at desk scale would
// leave the whole fit window inside the start-up transient, which is what
// the offset exists to avoid, so the desk runs drop it.  The slope bands
// below are the full-scale reference rates with widened tolerances.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <kwopt/harness.hpp>
#include <kwopt/kiefer_wolfowitz.hpp>
#include <kwopt/noise.hpp>
#include <kwopt/objective.hpp>
#include <kwopt/ode.hpp>
#include <kwopt/schedules.hpp>

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSeed = 1729;
int g_failures = 0;

void report(int criterion, bool ok, const char* title) {
  std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", criterion, title);
  if (!ok) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// ---- criteria 1-3: desk-scale slope reproduction --------------------------

struct Cell {
  const char* name;
  kwopt::NoiseModel model;
  kwopt::PairingMode pairing;
  double theta0;
  double band_center;
  double band_tol;
  bool r2_required;  // R^2 >= 0.98 is enforced for the i.i.d. cells only
};

struct CellResult {
  kwopt::RegressionFit fit;
  double seconds = 0.0;
  std::uint64_t diverged = 0;
};

CellResult run_cell(const Cell& cell) {
  kwopt::RunConfig cfg;
  cfg.noise = cell.model;
  cfg.pairing = cell.pairing;
  cfg.scheme = kwopt::DecreasingGain{1.0, 1.0, 0.2, 0};
  cfg.divisor = kwopt::DivisorConvention::c;
  cfg.theta0 = cell.theta0;
  cfg.n_paths = 2000;
  for (int p = 8; p <= 18; ++p) cfg.checkpoints.push_back(std::uint64_t{1} << p);
  cfg.fit_lo = 1 << 12;
  cfg.fit_hi = 1 << 18;
  cfg.master_seed = kSeed;

  const auto t0 = clock_type::now();
  const kwopt::ErrorCurve curve = kwopt::run_experiment(cfg);
  CellResult res;
  res.fit = kwopt::fit_loglog(curve, cfg.fit_lo, cfg.fit_hi);
  res.seconds = seconds_since(t0);
  res.diverged = curve.diverged;
  return res;
}

// ---- criterion 5 helper ---------------------------------------------------

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe sample_mean_se(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// ---- criterion 9 helper ---------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in.good()) return "<missing " + p.string() + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool cli_run(const fs::path& dir, const std::string& preset, unsigned workers) {
  fs::create_directories(dir);
  std::ostringstream cmd;
  cmd << "cd " << dir << " && " << KWOPT_CLI_BIN << " run --preset " << preset
      << " --set n_paths=50 --set checkpoints=[256,512,1024,2048,4096]"
      << " --set fit=[512,4096] --workers " << workers << " > /dev/null 2>&1";
  return std::system(cmd.str().c_str()) == 0;
}

}  // namespace

int main() {
  const kwopt::NoiseModel normal = kwopt::NoiseModel::normal();
  const kwopt::NoiseModel uniform = kwopt::NoiseModel::uniform01();
  const kwopt::NoiseModel beta = kwopt::NoiseModel::beta22();
  const kwopt::NoiseModel ar1 = kwopt::NoiseModel::ar1_process(0.75);

  // ---- 1 & 2: slope reproduction ------------------------------------------
  const Cell cells[] = {
      {"normal/independent", normal, kwopt::PairingMode::independent, -0.1, -0.299, 0.06, true},
      {"normal/identical", normal, kwopt::PairingMode::identical, -0.1, -0.459, 0.06, true},
      {"uniform/independent", uniform, kwopt::PairingMode::independent, 1.0, -0.14, 0.05, true},
      {"uniform/identical", uniform, kwopt::PairingMode::identical, 1.0, -0.14, 0.05, true},
      {"beta/independent", beta, kwopt::PairingMode::independent, 1.0, -0.374, 0.06, true},
      {"beta/identical", beta, kwopt::PairingMode::identical, 1.0, -0.393, 0.06, true},
      {"ar1/consecutive", ar1, kwopt::PairingMode::consecutive, 0.0, -0.333, 0.07, false},
      {"ar1/identical", ar1, kwopt::PairingMode::identical, 0.0, -0.487, 0.07, false},
  };

  CellResult results[8];
  bool iid_ok = true, ar_ok = true;
  std::string detail;
  for (int i = 0; i < 8; ++i) {
    const Cell& cell = cells[i];
    results[i] = run_cell(cell);
    const CellResult& r = results[i];
    const bool in_band = std::fabs(r.fit.slope - cell.band_center) <= cell.band_tol;
    const bool r2_ok = !cell.r2_required || r.fit.r_squared >= 0.98;
    const bool time_ok = r.seconds < 600.0;
    const bool ok = in_band && r2_ok && time_ok;
    (i < 6 ? iid_ok : ar_ok) &= ok;
    char line[256];
    std::snprintf(line, sizeof line,
                  "        %-20s slope %+.4f (band %+.3f +- %.2f)  r2 %.4f  %5.1fs%s\n",
                  cell.name, r.fit.slope, cell.band_center, cell.band_tol,
                  r.fit.r_squared, r.seconds, ok ? "" : "  <-- out");
    detail += line;
  }
  report(1, iid_ok, "i.i.d. noise slope reproduction, desk scale");
  report(2, ar_ok, "AR(1) noise slope reproduction, desk scale");
  std::fputs(detail.c_str(), stdout);

  // ---- 3: no fitted slope may undershoot the guarantee band ----------------
  bool rates_ok = true;
  double shallowest = -1e9;
  for (const CellResult& r : results) {
    shallowest = std::max(shallowest, r.fit.slope);
    rates_ok &= r.fit.slope <= -0.12;
  }
  report(3, rates_ok, "every fitted rate at least as fast as the guarantee minus tolerance");
  std::printf("        shallowest slope %+.4f (required <= -0.12)\n", shallowest);

  // ---- 4: optimum solver reproduces the reference values quickly -----------
  struct Star {
    const char* name;
    kwopt::NoiseModel model;
    double expected;
  };
  const Star stars[] = {{"normal", normal, -0.19569},
                        {"uniform", uniform, 0.0},
                        {"beta", beta, 0.13962},
                        {"ar1", ar1, -0.13144}};
  bool stars_ok = true;
  for (const Star& s : stars) {
    const kwopt::ClosedForm cf = kwopt::closed_form_for(s.model);
    double solved = 0.0;
    double best_ms = 1e9;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = clock_type::now();
      solved = kwopt::solve_theta_star(cf.g, -3.0, 3.0);
      best_ms = std::min(best_ms, seconds_since(t0) * 1e3);
    }
    const bool match = std::fabs(solved - s.expected) < 5e-6;
    const bool fast = best_ms < 1.0;
    stars_ok &= match && fast;
    std::printf("        theta*[%-7s] = %+.6f (expect %+.5f)  %.3f ms%s\n", s.name, solved,
                s.expected, best_ms, match && fast ? "" : "  <-- out");
  }
  report(4, stars_ok, "optimum locations to 5 decimals, under 1 ms each");

  // ---- 5: gradient estimator is unbiased for the smoothed difference -------
  const kwopt::Objective obj = kwopt::make_benchmark_objective();
  bool unbiased_ok = true;
  int combo = 0;
  double worst_z = 0.0;
  for (const Star& s : stars) {
    const kwopt::ClosedForm cf = kwopt::closed_form_for(s.model);
    for (const double theta : {-0.5, 0.0, 0.5}) {
      for (const double c : {0.1, 0.01}) {
        kwopt::NoiseStream stream(s.model, kwopt::derive_path_seed(kSeed, combo++));
        std::vector<double> draws(100000);
        const double th[1] = {theta};
        for (double& d : draws) {
          const kwopt::NoisePair pair[1] = {stream.next_pair(kwopt::PairingMode::identical)};
          d = kwopt::h_estimate(obj, th, pair, c, kwopt::DivisorConvention::two_c)[0];
        }
        const MeanSe ms = sample_mean_se(draws);
        const double target = (cf.u(theta + c) - cf.u(theta - c)) / (2.0 * c);
        const double z = std::fabs(ms.mean - target) / ms.se;
        worst_z = std::max(worst_z, z);
        unbiased_ok &= z < 4.0;
      }
    }
  }
  report(5, unbiased_ok, "finite-difference estimator unbiased at 10^5 draws (4 SE)");
  std::printf("        24 model/theta/c combinations, worst |z| = %.2f\n", worst_z);

  // ---- 6: common random numbers shrink the estimator variance --------------
  {
    const double theta_star = kwopt::closed_form_for(normal).theta_star;
    const double th[1] = {theta_star + 0.1};
    const double c = 0.05;
    double var[2] = {0.0, 0.0};
    const kwopt::PairingMode modes[2] = {kwopt::PairingMode::identical,
                                         kwopt::PairingMode::independent};
    for (int m = 0; m < 2; ++m) {
      kwopt::NoiseStream stream(normal, kwopt::derive_path_seed(kSeed, 100 + m));
      std::vector<double> draws(100000);
      for (double& d : draws) {
        const kwopt::NoisePair pair[1] = {stream.next_pair(modes[m])};
        d = kwopt::h_estimate(obj, th, pair, c, kwopt::DivisorConvention::two_c)[0];
      }
      const MeanSe ms = sample_mean_se(draws);
      var[m] = ms.se * ms.se * static_cast<double>(draws.size());
    }
    const bool crn_ok = var[0] < var[1];
    report(6, crn_ok, "identical pairing beats independent pairing on variance");
    std::printf("        var[identical] %.4f  var[independent] %.4f\n", var[0], var[1]);
  }

  // ---- 7: fixed-gain plateau scales like the a^(2/5) prediction -------------
  {
    kwopt::RunConfig base;
    base.noise = normal;
    base.pairing = kwopt::PairingMode::independent;
    base.divisor = kwopt::DivisorConvention::c;
    base.theta0 = -0.1;
    base.n_paths = 500;
    base.checkpoints = {1};
    base.master_seed = kSeed;
    const double gains[] = {1e-2, 1e-3};
    const auto t0 = clock_type::now();
    const auto pts = kwopt::plateau_study(base, gains);
    const double secs = seconds_since(t0);
    const double ratio = pts[0].plateau_error / pts[1].plateau_error;
    const bool plateau_ok = ratio >= 1.7 && ratio <= 3.3 && secs < 600.0;
    report(7, plateau_ok, "fixed-gain plateau ratio near 10^(2/5) ~ 2.51");
    std::printf("        e(a=1e-2) %.4f over %" PRIu64 " steps, e(a=1e-3) %.4f over %" PRIu64
                " steps, ratio %.3f, %.1fs\n",
                pts[0].plateau_error, pts[0].n_steps, pts[1].plateau_error, pts[1].n_steps,
                ratio, secs);
  }

  // ---- 8: mean-field ODE reference ------------------------------------------
  {
    const auto decay = [](double y) { return -2.0 * y; };
    const auto dec = kwopt::integrate(decay, kwopt::OdeVariant::decreasing, 1.0, 1.0,
                                      std::exp(1.0), 1.0, 1e-9);
    const double dec_err = std::fabs(dec.values.back()[0] - std::exp(-2.0));
    const auto fix =
        kwopt::integrate(decay, kwopt::OdeVariant::fixed, 1.0, 0.0, 1.0, 1.0, 1e-9);
    const double fix_err = std::fabs(fix.values.back()[0] - std::exp(-2.0));

    const auto stab = kwopt::estimate_stability(decay, kwopt::OdeVariant::decreasing, 1.0,
                                                1.0, 100.0, 1.0);
    const double alpha_rel = std::fabs(stab.alpha_hat - 2.0) / 2.0;

    const kwopt::ClosedForm cf = kwopt::closed_form_for(normal);
    const auto field = [&cf](double y) { return -cf.g(y); };
    const auto mean_field = kwopt::estimate_stability(
        field, kwopt::OdeVariant::decreasing, 1.0, 1.0, 200.0, -0.1);

    const bool ode_ok =
        dec_err < 1e-6 && fix_err < 1e-6 && alpha_rel < 0.01 && mean_field.alpha_hat >= 0.2;
    report(8, ode_ok, "ODE integration and stability exponents");
    std::printf("        closed-form errors %.2e / %.2e, alpha_hat %.4f (expect 2 +- 1%%), "
                "mean-field alpha_hat %.3f (>= 0.2)\n",
                dec_err, fix_err, stab.alpha_hat, mean_field.alpha_hat);
  }

  // ---- 9: byte-identical outputs regardless of worker count -----------------
  {
    const fs::path root = "acceptance_scratch";
    fs::remove_all(root);
    bool det_ok = true;
    const struct {
      const char* preset;
      unsigned w1, w2;
    } combos[] = {{"table2-ar1-consecutive", 1, 8}, {"fixed-normal-1e-3", 2, 5}};
    for (const auto& cb : combos) {
      const fs::path d1 = root / (std::string(cb.preset) + "-a");
      const fs::path d2 = root / (std::string(cb.preset) + "-b");
      det_ok &= cli_run(d1, cb.preset, cb.w1);
      det_ok &= cli_run(d2, cb.preset, cb.w2);
      const std::string curve = std::string(cb.preset) + ".curve.csv";
      det_ok &= slurp(d1 / curve) == slurp(d2 / curve);
      det_ok &= slurp(d1 / "summary.csv") == slurp(d2 / "summary.csv");
    }
    report(9, det_ok, "preset outputs byte-identical across worker counts");
    std::printf("        table2-ar1-consecutive (1 vs 8 workers), fixed-normal-1e-3 (2 vs 5)\n");
  }

  // ---- 10: empirical regularity of the difference function ------------------
  {
    const double thetas[] = {-0.5, -0.1, 0.3};
    const double cs[] = {0.2, 0.05, 0.01};
    kwopt::NoiseStream stream(normal, kwopt::derive_path_seed(kSeed, 200));
    std::vector<double> xs(100000);
    for (double& x : xs) x = stream.next_value();

    double c_hat = 0.0;
    for (const double c : cs) {
      for (const double t1 : thetas) {
        for (const double t2 : thetas) {
          if (t1 == t2) continue;
          double sum = 0.0;
          for (const double x : xs) {
            const double d1 = kwopt::benchmark_j(t1 + c, x) - kwopt::benchmark_j(t1 - c, x);
            const double d2 = kwopt::benchmark_j(t2 + c, x) - kwopt::benchmark_j(t2 - c, x);
            sum += std::fabs(d1 - d2);
          }
          const double bound = std::fabs(t1 - t2) + c * c;
          c_hat = std::max(c_hat, sum / static_cast<double>(xs.size()) / bound);
        }
      }
    }
    const bool lip_ok = c_hat <= 50.0;
    report(10, lip_ok, "difference-function regularity constant within bound");
    std::printf("        C_hat = %.3f (required <= 50)\n", c_hat);
  }

  std::printf("\nacceptance: %d/10 passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
