#include "kwopt/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "kwopt/objective.hpp"
#include "kwopt/ode.hpp"

namespace kwopt {

namespace {

unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

// Run body(p) for p in [0, n) on `workers` threads.  Work is handed out by an
// atomic counter; callers must write results into per-path slots so that the
// final reduction can happen in path order regardless of scheduling.
void for_each_path(std::uint64_t n, unsigned workers,
                   const std::function<void(std::uint64_t)>& body) {
  if (workers <= 1 || n <= 1) {
    for (std::uint64_t p = 0; p < n; ++p) body(p);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t p = next.fetch_add(1);
      if (p >= n || failed.load()) return;
      try {
        body(p);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(workers, n));
  pool.reserve(count);
  for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ConfigReport check_noise(const NoiseModel& m) {
  switch (m.variant) {
    case NoiseVariant::iid_normal:
      if (!(m.sd > 0.0)) return {false, "noise: sd must be > 0"};
      break;
    case NoiseVariant::ar1:
      if (!(std::abs(m.kappa) < 1.0)) return {false, "noise: |kappa| must be < 1"};
      if (!(m.innovation_sd > 0.0)) return {false, "noise: innovation_sd must be > 0"};
      break;
    default:
      break;
  }
  return {};
}

}  // namespace

ConfigReport validate(const RunConfig& cfg) {
  if (cfg.objective != "benchmark") {
    return {false, "objective: only \"benchmark\" is available"};
  }
  if (const auto r = check_noise(cfg.noise); !r.ok) return r;
  if (cfg.noise.variant == NoiseVariant::ar1 && cfg.pairing == PairingMode::independent) {
    return {false, "pairing: independent draws are undefined for the ar1 model"};
  }
  if (const auto* dec = std::get_if<DecreasingGain>(&cfg.scheme)) {
    if (const auto r = validate(*dec); !r.ok) return {false, "scheme: " + r.violation};
  } else {
    const auto& fix = std::get<FixedGain>(cfg.scheme);
    if (const auto r = validate(fix); !r.ok) return {false, "scheme: " + r.violation};
  }
  if (!std::isfinite(cfg.theta0)) {
    return {false, "theta0 must be finite"};
  }
  if (cfg.n_paths == 0) {
    return {false, "n_paths must be >= 1"};
  }
  if (cfg.checkpoints.empty()) {
    return {false, "checkpoints must be non-empty"};
  }
  for (std::size_t i = 0; i + 1 < cfg.checkpoints.size(); ++i) {
    if (cfg.checkpoints[i] >= cfg.checkpoints[i + 1]) {
      return {false, "checkpoints must be strictly increasing"};
    }
  }
  if (cfg.fit_hi != 0 || cfg.fit_lo != 0) {
    if (cfg.fit_lo < 1) return {false, "fit window must start at k >= 1"};
    if (!(cfg.fit_lo < cfg.fit_hi)) return {false, "fit window must satisfy lo < hi"};
  }
  if (!cfg.master_seed.has_value()) {
    return {false, "master_seed is required"};
  }
  return {};
}

ErrorCurve run_experiment(const RunConfig& cfg, unsigned workers) {
  if (const auto r = validate(cfg); !r.ok) {
    throw std::invalid_argument("run_experiment: " + r.violation);
  }
  const ClosedForm cf = closed_form_for(cfg.noise);
  const Objective obj = make_benchmark_objective();
  const std::uint64_t n_steps = cfg.checkpoints.back();
  const std::uint64_t n_cp = cfg.checkpoints.size();
  const std::uint64_t seed = *cfg.master_seed;

  StepSpec spec;
  spec.gain = cfg.scheme;
  spec.divisor = cfg.divisor;
  spec.direction = obj.direction;

  ScheduleTable table;
  const ScheduleTable* table_ptr = nullptr;
  if (const auto* dec = std::get_if<DecreasingGain>(&cfg.scheme)) {
    table = ScheduleTable::build(*dec, n_steps);
    table_ptr = &table;
  }

  // Per-path slots, reduced in path order below: bit-identical output for any
  // worker count.
  std::vector<double> errors(cfg.n_paths * n_cp);
  std::vector<std::uint8_t> diverged(cfg.n_paths, 0);
  const double theta0[] = {cfg.theta0};

  for_each_path(cfg.n_paths, resolve_workers(workers), [&](std::uint64_t p) {
    NoiseStream stream(cfg.noise, derive_path_seed(seed, p));
    const PathResult res = run(obj, spec, stream, cfg.pairing, theta0, n_steps,
                               cfg.checkpoints, table_ptr);
    diverged[p] = res.diverged ? 1 : 0;
    for (std::uint64_t i = 0; i < n_cp; ++i) {
      errors[p * n_cp + i] = std::abs(res.theta_at[i][0] - cf.theta_star);
    }
  });

  ErrorCurve curve;
  curve.checkpoints = cfg.checkpoints;
  curve.n_paths = cfg.n_paths;
  curve.theta_star = cf.theta_star;
  for (const auto flag : diverged) curve.diverged += flag;
  const std::uint64_t n_eff = cfg.n_paths - curve.diverged;
  if (n_eff == 0) {
    throw ExperimentError("run_experiment: every path diverged");
  }

  curve.mean_abs_error.resize(n_cp);
  curve.std_error.resize(n_cp);
  for (std::uint64_t i = 0; i < n_cp; ++i) {
    double sum = 0.0;
    for (std::uint64_t p = 0; p < cfg.n_paths; ++p) {
      if (!diverged[p]) sum += errors[p * n_cp + i];
    }
    const double mean = sum / static_cast<double>(n_eff);
    double ss = 0.0;
    for (std::uint64_t p = 0; p < cfg.n_paths; ++p) {
      if (!diverged[p]) {
        const double d = errors[p * n_cp + i] - mean;
        ss += d * d;
      }
    }
    curve.mean_abs_error[i] = mean;
    curve.std_error[i] =
        n_eff > 1 ? std::sqrt(ss / static_cast<double>(n_eff - 1)) /
                        std::sqrt(static_cast<double>(n_eff))
                  : 0.0;
  }
  return curve;
}

RegressionFit fit_loglog(const ErrorCurve& curve, std::uint64_t k_lo, std::uint64_t k_hi) {
  if (k_lo < 1) {
    throw std::domain_error("fit_loglog: window must start at k >= 1");
  }
  if (!(k_lo < k_hi)) {
    throw std::invalid_argument("fit_loglog: window must satisfy lo < hi");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < curve.checkpoints.size(); ++i) {
    const std::uint64_t k = curve.checkpoints[i];
    if (k < k_lo || k > k_hi) continue;
    const double e = curve.mean_abs_error[i];
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw std::domain_error("fit_loglog: non-positive error value inside the window");
    }
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(e));
  }
  if (xs.size() < 3) {
    throw std::invalid_argument("fit_loglog: window must contain at least 3 checkpoints");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RegressionFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

std::vector<PlateauPoint> plateau_study(const RunConfig& base, std::span<const double> gains,
                                        unsigned workers) {
  if (base.objective != "benchmark") {
    throw std::invalid_argument("plateau_study: only the benchmark objective is available");
  }
  if (const auto r = check_noise(base.noise); !r.ok) {
    throw std::invalid_argument("plateau_study: " + r.violation);
  }
  if (base.noise.variant == NoiseVariant::ar1 && base.pairing == PairingMode::independent) {
    throw std::invalid_argument("plateau_study: independent pairing is undefined for ar1");
  }
  if (base.n_paths == 0) {
    throw std::invalid_argument("plateau_study: n_paths must be >= 1");
  }
  if (!base.master_seed.has_value()) {
    throw std::invalid_argument("plateau_study: master_seed is required");
  }
  if (!std::isfinite(base.theta0)) {
    throw std::invalid_argument("plateau_study: theta0 must be finite");
  }

  const ClosedForm cf = closed_form_for(base.noise);
  const Objective obj = make_benchmark_objective();
  const std::uint64_t seed = *base.master_seed;

  // Contraction exponent of the descent flow y' = -g(y), probed on the mean
  // field; it fixes how long each run must be for the transient to die out.
  const auto descent = [&cf](double y) { return -cf.g(y); };
  const StabilityEstimate st =
      estimate_stability(descent, OdeVariant::fixed, 1.0, 0.0, 8.0, cf.theta_star + 0.5);
  if (!(st.alpha_hat > 0.0) || !std::isfinite(st.alpha_hat)) {
    throw ExperimentError("plateau_study: mean-field probe found no contraction");
  }

  std::vector<PlateauPoint> points;
  points.reserve(gains.size());
  for (const double a : gains) {
    const FixedGain fg = coupled_fixed_gain(a);  // throws unless a in (0, 1]
    PlateauPoint pt;
    pt.a = fg.a;
    pt.c = fg.c;
    pt.n_steps = std::max<std::uint64_t>(
        8, static_cast<std::uint64_t>(std::ceil(20.0 / (a * st.alpha_hat))));

    // Record every iterate in the final quarter and time-average it.
    const std::uint64_t first = pt.n_steps - pt.n_steps / 4 + 1;
    std::vector<std::uint64_t> window;
    window.reserve(pt.n_steps - first + 1);
    for (std::uint64_t k = first; k <= pt.n_steps; ++k) window.push_back(k);

    StepSpec spec;
    spec.gain = fg;
    spec.divisor = base.divisor;
    spec.direction = obj.direction;
    const double theta0[] = {base.theta0};

    std::vector<double> path_avg(base.n_paths);
    std::vector<std::uint8_t> diverged(base.n_paths, 0);
    for_each_path(base.n_paths, resolve_workers(workers), [&](std::uint64_t p) {
      NoiseStream stream(base.noise, derive_path_seed(seed, p));
      const PathResult res =
          run(obj, spec, stream, base.pairing, theta0, pt.n_steps, window);
      diverged[p] = res.diverged ? 1 : 0;
      if (res.diverged) {
        path_avg[p] = 0.0;
        return;
      }
      double sum = 0.0;
      for (const auto& th : res.theta_at) sum += std::abs(th[0] - cf.theta_star);
      path_avg[p] = sum / static_cast<double>(res.theta_at.size());
    });

    std::uint64_t n_div = 0;
    for (const auto flag : diverged) n_div += flag;
    const std::uint64_t n_eff = base.n_paths - n_div;
    if (n_eff == 0) {
      throw ExperimentError("plateau_study: every path diverged");
    }
    double sum = 0.0;
    for (std::uint64_t p = 0; p < base.n_paths; ++p) {
      if (!diverged[p]) sum += path_avg[p];
    }
    pt.plateau_error = sum / static_cast<double>(n_eff);
    pt.diverged = n_div;
    points.push_back(pt);
  }
  return points;
}

}  // namespace kwopt
