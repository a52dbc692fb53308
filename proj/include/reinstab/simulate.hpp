#pragma once

// Time-domain integration (Dormand-Prince 5(4)), settling diagnostics,
// parameter sweeps and the AIRC switching experiment.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "reinstab/certificates.hpp"
#include "reinstab/closed_loop.hpp"
#include "reinstab/equilibria.hpp"
#include "reinstab/errors.hpp"
#include "reinstab/linearize.hpp"
#include "reinstab/matrixlab.hpp"
#include "reinstab/model.hpp"

namespace reinstab {

inline constexpr double kNegativeTolerance = 1e-8;

struct IntegrateOptions {
  double t_end = 200.0;
  double rtol = 1e-6;
  double atol = 1e-9;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 5'000'000;
};

struct SolverStats {
  long accepted = 0;
  long rejected = 0;
  long negative_rejections = 0;
  long clipped = 0;
  long evaluations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  SolverStats stats;
  double min_entry = std::numeric_limits<double>::infinity();  ///< before clipping

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] const Vector& back() const { return states.back(); }
  [[nodiscard]] Matrix matrix() const {
    Matrix m(static_cast<Eigen::Index>(states.size()), states.empty() ? 0 : states.front().size());
    for (std::size_t i = 0; i < states.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = states[i].transpose();
    return m;
  }
};

namespace detail {

// Dormand-Prince tableau.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

inline double error_norm(const Vector& err, const Vector& y0, const Vector& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    acc += (err(i) / sc) * (err(i) / sc);
  }
  return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

}  // namespace detail

/**
 * Adaptive explicit integration of ds/dt = f(s) on [0, t_end]. A step whose
 * result has an entry below -1e-8 is rejected and retried with a smaller
 * step; entries in (-1e-8, 0) are clipped to 0. Step-size underflow or the
 * step budget running out throws StiffnessSuspected.
 */
template <typename Field>
[[nodiscard]] Trajectory integrate_field(const Field& f, const Vector& x0, const IntegrateOptions& opt) {
  using namespace detail;
  if (!(opt.t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  if (!(opt.rtol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if ((x0.array() < 0.0).any()) throw Error(ErrorCode::NegativeState, "initial state has a negative entry");

  Trajectory tr;
  double t = 0.0;
  Vector y = x0;
  tr.times.push_back(t);
  tr.states.push_back(y);
  tr.min_entry = y.size() ? y.minCoeff() : 0.0;

  Vector k1 = f(y);
  ++tr.stats.evaluations;
  // Initial step from the scale of y and f(y).
  double h;
  {
    Vector sc = (opt.atol + opt.rtol * y.array().abs()).matrix();
    const double d0 = (y.array() / sc.array()).matrix().norm() / std::sqrt(double(y.size()));
    const double d1 = (k1.array() / sc.array()).matrix().norm() / std::sqrt(double(y.size()));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, opt.t_end, opt.max_step});
  }

  Vector k2, k3, k4, k5, k6, k7, y1, err;
  while (t < opt.t_end) {
    if (tr.stats.accepted + tr.stats.rejected >= opt.max_steps) {
      throw Error(ErrorCode::StiffnessSuspected, "step budget exhausted at t = " + std::to_string(t));
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorCode::StiffnessSuspected, "step size underflow at t = " + std::to_string(t));
    }
    const bool last = t + h >= opt.t_end;
    if (last) h = opt.t_end - t;

    k2 = f(y + h * (a21 * k1));
    k3 = f(y + h * (a31 * k1 + a32 * k2));
    k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = f(y1);
    tr.stats.evaluations += 6;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, y1, opt.atol, opt.rtol);

    if (!std::isfinite(en) || en > 1.0) {
      ++tr.stats.rejected;
      const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h *= fac;
      continue;
    }
    const double lowest = y1.size() ? y1.minCoeff() : 0.0;
    if (lowest < -kNegativeTolerance) {
      ++tr.stats.rejected;
      ++tr.stats.negative_rejections;
      h *= 0.5;
      continue;
    }
    tr.min_entry = std::min(tr.min_entry, lowest);
    if (lowest < 0.0) {
      ++tr.stats.clipped;
      y1 = y1.cwiseMax(0.0);
      k7 = f(y1);
      ++tr.stats.evaluations;
    }
    t = last ? opt.t_end : t + h;
    y = y1;
    k1 = k7;
    ++tr.stats.accepted;
    tr.times.push_back(t);
    tr.states.push_back(y);
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h = std::min(h * fac, opt.max_step);
  }
  return tr;
}

[[nodiscard]] inline Trajectory integrate(const ClosedLoop& loop, const Vector& x0, double t_end, double tol) {
  IntegrateOptions opt;
  opt.t_end = t_end;
  opt.rtol = tol;
  if (x0.size() != loop.dim()) throw Error(ErrorCode::DimensionMismatch, "x0 has the wrong dimension");
  return integrate_field([&](const Vector& s) { return loop(s); }, x0, opt);
}

[[nodiscard]] inline Trajectory integrate(const ClosedLoop& loop, const Vector& x0, const IntegrateOptions& opt) {
  if (x0.size() != loop.dim()) throw Error(ErrorCode::DimensionMismatch, "x0 has the wrong dimension");
  return integrate_field([&](const Vector& s) { return loop(s); }, x0, opt);
}

/// Open-loop steady state for a Hurwitz linear plant, 0.1 otherwise;
/// controller states start at 1e-3.
[[nodiscard]] inline Vector default_initial_state(const ClosedLoop& loop) {
  const Eigen::Index n = loop.plant_dim();
  Vector s = Vector::Constant(loop.dim(), 1e-3);
  s.head(n) = Vector::Constant(n, 0.1);
  if (const auto* lin = std::get_if<LinearNetwork>(&loop.plant())) {
    if (is_hurwitz(lin->a)) {
      const Vector x = -LinearSolve(lin->a).solve(lin->b0);
      if ((x.array() >= 0.0).all()) s.head(n) = x;
    }
  } else {
    try {
      s.head(n) = nonlinear_steady_state(std::get<NonlinearNetwork>(loop.plant()), 0.0);
    } catch (const Error&) {
    }
  }
  return s;
}

struct SettlingReport {
  bool settled = false;
  double settling_time = std::numeric_limits<double>::quiet_NaN();
  double steady_state_error = std::numeric_limits<double>::quiet_NaN();
  double band = 0.0;
};

/**
 * |x_n - r| < band_fraction r held over the last window_fraction of the
 * horizon. The settling time is the first sample after the last excursion.
 */
[[nodiscard]] inline SettlingReport settling(const Trajectory& tr, Eigen::Index output, double r,
                                             double band_fraction = 0.02, double window_fraction = 0.1) {
  SettlingReport rep;
  rep.band = band_fraction * r;
  if (tr.size() == 0) return rep;
  const double t_end = tr.times.back();
  rep.steady_state_error = std::abs(tr.back()(output) - r);
  std::optional<std::size_t> last_out;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (!(std::abs(tr.states[i](output) - r) < rep.band)) last_out = i;
  }
  const std::size_t first_in = last_out ? *last_out + 1 : 0;
  if (first_in < tr.size()) {
    const double t_in = tr.times[first_in];
    rep.settled = t_in <= t_end * (1.0 - window_fraction);
    if (rep.settled) rep.settling_time = t_in;
  }
  return rep;
}

/**
 * Check of d(z1 - z2)/dt = mu - theta x_n along an antithetic trajectory.
 * Each step's increment of z1 - z2 is compared with the integral of
 * g = mu - theta x_n by the endpoint-corrected trapezoid rule
 * h/2 (g0 + g1) + h^2/12 (g0' - g1'), with g' from the vector field.
 * The result is the worst mismatch per unit time relative to max |g|.
 */
[[nodiscard]] inline double antithetic_identity_error(const Trajectory& tr, const ClosedLoop& loop) {
  double mu = 0.0, theta = 0.0;
  if (const auto* p = std::get_if<PType>(&loop.controller())) {
    mu = p->mu;
    theta = p->theta;
  } else if (const auto* a = std::get_if<Airc>(&loop.controller())) {
    mu = a->mu;
    theta = a->theta;
  } else {
    throw Error(ErrorCode::InvalidArgument, "identity holds for antithetic controllers only");
  }
  const Eigen::Index n = loop.plant_dim();
  double scale = mu;
  std::vector<double> g(tr.size()), dg(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    g[i] = mu - theta * tr.states[i](n - 1);
    dg[i] = -theta * loop(tr.states[i])(n - 1);
    scale = std::max(scale, std::abs(g[i]));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
    const double h = tr.times[i + 1] - tr.times[i];
    if (h <= 0.0) continue;
    const double d0 = tr.states[i](n) - tr.states[i](n + 1);
    const double d1 = tr.states[i + 1](n) - tr.states[i + 1](n + 1);
    const double integral = 0.5 * h * (g[i] + g[i + 1]) + h * h / 12.0 * (dg[i] - dg[i + 1]);
    worst = std::max(worst, std::abs((d1 - d0) - integral) / (h * scale));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Point analysis shared by sweeps and the CLI

struct PointAnalysis {
  std::optional<Equilibrium> eq;
  std::optional<Admissibility> admissibility;
  double abscissa = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

/// Regulated (or positive-branch) equilibrium and its Jacobian abscissa.
[[nodiscard]] inline PointAnalysis analyze_point(const Model& m) {
  PointAnalysis out;
  try {
    const auto* lin = std::get_if<LinearNetwork>(&m.plant);
    if (const auto* p = std::get_if<PType>(&m.controller)) {
      if (lin) {
        PTypeResult r = ptype_analysis(*lin, *p);
        out.admissibility = r.admissibility;
        out.eq = r.eq;
      } else {
        NonlinearPTypeResult r = nonlinear_ptype_analysis(std::get<NonlinearNetwork>(m.plant), *p);
        out.admissibility = r.admissibility;
        out.eq = r.eq;
      }
    } else if (lin) {
      if (const auto* a = std::get_if<Airc>(&m.controller)) {
        out.eq = airc_equilibrium(*lin, *a).eq;
      } else {
        BranchSet set = std::holds_alternative<Exponential>(m.controller)
                            ? exponential_equilibria(*lin, std::get<Exponential>(m.controller))
                            : logistic_equilibria(*lin, std::get<Logistic>(m.controller));
        out.admissibility = set.positive;
        if (const Equilibrium* e = set.find(BranchLabel::Positive)) out.eq = *e;
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, controller_kind(m.controller) + " controller needs a linear plant");
    }
    if (out.eq) out.abscissa = jacobian_at(m.plant, m.controller, *out.eq).abscissa();
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// "name=lo:hi:count" (linear) or "name=lo:hi:countlog" (log-spaced).
[[nodiscard]] inline SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::InvalidArgument, "axis must look like name=lo:hi:count");
  SweepAxis axis;
  axis.name = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  std::vector<std::string> parts;
  std::stringstream ss(rest);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "axis must look like name=lo:hi:count");
  bool log = false;
  std::string count = parts[2];
  if (count.size() > 3 && count.substr(count.size() - 3) == "log") {
    log = true;
    count.resize(count.size() - 3);
  }
  double lo = 0, hi = 0;
  long k = 0;
  try {
    std::size_t pos = 0;
    lo = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("lo");
    hi = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("hi");
    k = std::stol(count, &pos);
    if (pos != count.size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse axis '" + spec + "'");
  }
  if (k < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::InvalidArgument, "axis needs 0 < lo <= hi and count >= 1");
  }
  for (long i = 0; i < k; ++i) {
    const double f = k == 1 ? 0.0 : double(i) / double(k - 1);
    axis.values.push_back(log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo));
  }
  if (k > 1) {
    axis.values.front() = lo;
    axis.values.back() = hi;
  }
  return axis;
}

/// Sets one controller parameter by name; "r" moves theta (antithetic), mu
/// (exponential) or r (logistic).
inline void set_parameter(ControllerSpec& c, const std::string& name, double v) {
  auto fail = [&] {
    throw Error(ErrorCode::InvalidArgument, "parameter '" + name + "' does not apply to a " + controller_kind(c) + " controller");
  };
  std::visit(
      [&](auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Airc> || std::is_same_v<K, PType>) {
          if (name == "mu") k.mu = v;
          else if (name == "theta") k.theta = v;
          else if (name == "eta") k.eta = v;
          else if (name == "kp") k.kp = v;
          else if (name == "r") k.theta = k.mu / v;
          else if constexpr (std::is_same_v<K, Airc>) {
            if (name == "ki") k.ki = v;
            else fail();
          } else {
            fail();
          }
        } else if constexpr (std::is_same_v<K, Exponential>) {
          if (name == "mu" || name == "r") k.mu = v;
          else if (name == "alpha") k.alpha = v;
          else if (name == "kp") k.kp = v;
          else fail();
        } else {
          if (name == "r") k.r = v;
          else if (name == "k") k.k = v;
          else if (name == "beta") k.beta = v;
          else fail();
        }
      },
      c);
}

struct SweepOptions {
  bool simulate = false;
  IntegrateOptions integration;
  unsigned threads = 0;  ///< 0: REINSTAB_THREADS, then hardware concurrency
};

struct SweepCell {
  std::vector<double> coords;
  std::string verdict;
  double abscissa = std::numeric_limits<double>::quiet_NaN();
  bool simulated = false;
  bool settled = false;
  double settling_time = std::numeric_limits<double>::quiet_NaN();
  double steady_state_error = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepCell> cells;
};

[[nodiscard]] inline unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("REINSTAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  if (workers <= 1) {
    run();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (std::thread& th : pool) th.join();
}

[[nodiscard]] inline SweepCell sweep_cell(const Model& base, const std::vector<SweepAxis>& axes,
                                          const std::vector<double>& coords, const SweepOptions& opt) {
  SweepCell cell;
  cell.coords = coords;
  try {
    Model m = base;
    for (std::size_t a = 0; a < axes.size(); ++a) set_parameter(m.controller, axes[a].name, coords[a]);
    validate(m.controller);
    const Certificate cert = certify(m);
    cell.verdict = to_string(cert.verdict);
    const PointAnalysis pa = analyze_point(m);
    cell.abscissa = pa.abscissa;
    if (!pa.error.empty()) cell.error = pa.error;
    if (opt.simulate && pa.eq && pa.abscissa < 0.0) {
      const ClosedLoop loop(m.plant, m.controller);
      try {
        const Trajectory tr = integrate(loop, default_initial_state(loop), opt.integration);
        const SettlingReport st = settling(tr, loop.plant_dim() - 1, set_point(m.controller));
        cell.simulated = true;
        cell.settled = st.settled;
        cell.settling_time = st.settling_time;
        cell.steady_state_error = st.steady_state_error;
      } catch (const Error& e) {
        cell.error = e.what();
      }
    }
  } catch (const Error& e) {
    cell.error = e.what();
    if (cell.verdict.empty()) cell.verdict = "Error";
  }
  return cell;
}

/// Cartesian product of the axes, last axis fastest; cells are stored by index.
[[nodiscard]] inline SweepResult sweep(const Model& base, const std::vector<SweepAxis>& axes,
                                       const SweepOptions& opt = {}) {
  if (axes.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one axis");
  std::size_t total = 1;
  for (const SweepAxis& a : axes) {
    if (a.values.empty()) throw Error(ErrorCode::InvalidArgument, "axis " + a.name + " has no values");
    for (double v : a.values) {
      if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "axis " + a.name + " has a nonpositive value");
    }
    total *= a.values.size();
  }
  SweepResult res;
  res.axes = axes;
  res.cells.resize(total);
  parallel_for(total, worker_count(opt.threads), [&](std::size_t idx) {
    std::vector<double> coords(axes.size());
    std::size_t rem = idx;
    for (std::size_t a = axes.size(); a-- > 0;) {
      coords[a] = axes[a].values[rem % axes[a].values.size()];
      rem /= axes[a].values.size();
    }
    res.cells[idx] = sweep_cell(base, axes, coords, opt);
  });
  return res;
}

// ---------------------------------------------------------------------------
// AIRC switching

inline constexpr double kSimulationEtaCap = 1e4;

struct SwitchingSimulation {
  bool simulated = false;
  bool settled = false;
  double z1_end = std::numeric_limits<double>::quiet_NaN();
  double z2_end = std::numeric_limits<double>::quiet_NaN();
  double abscissa = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct SwitchingExperiment {
  SwitchingTable table;
  std::vector<SwitchingSimulation> runs;
};

/// Equilibria along the eta grid with predicted limits; each row is
/// simulated when eta <= 1e4 and the Jacobian abscissa is negative.
[[nodiscard]] inline SwitchingExperiment switching_experiment(const LinearNetwork& net, const Airc& c,
                                                              const std::vector<double>& eta_grid,
                                                              const IntegrateOptions& integration = {},
                                                              unsigned threads = 0) {
  SwitchingExperiment out;
  out.table = airc_switching_limit(net, c, eta_grid);
  out.runs.resize(eta_grid.size());
  parallel_for(eta_grid.size(), worker_count(threads), [&](std::size_t i) {
    SwitchingSimulation& run = out.runs[i];
    Airc ce = c;
    ce.eta = eta_grid[i];
    const AircEquilibrium ae = airc_equilibrium(net, ce);
    run.abscissa = jacobian_airc(net, ce, ae.eq).abscissa();
    if (ce.eta > kSimulationEtaCap) {
      run.note = "eta above simulation cap";
      return;
    }
    if (!(run.abscissa < 0.0)) {
      run.note = "Jacobian not Hurwitz";
      return;
    }
    const ClosedLoop loop(net, ce);
    try {
      const Trajectory tr = integrate(loop, default_initial_state(loop), integration);
      const Eigen::Index n = net.dim();
      run.simulated = true;
      run.settled = settling(tr, n - 1, ce.set_point()).settled;
      run.z1_end = tr.back()(n);
      run.z2_end = tr.back()(n + 1);
    } catch (const Error& e) {
      run.note = e.what();
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Export

[[nodiscard]] inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC 4180 field quoting.
[[nodiscard]] inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

[[nodiscard]] inline std::vector<std::string> state_names(const ClosedLoop& loop) {
  std::vector<std::string> names;
  for (Eigen::Index i = 0; i < loop.plant_dim(); ++i) names.push_back("x" + std::to_string(i + 1));
  if (controller_states(loop.controller()) == 2) {
    names.emplace_back("z1");
    names.emplace_back("z2");
  } else {
    names.emplace_back("z");
  }
  return names;
}

[[nodiscard]] inline std::string to_csv(const Trajectory& tr, const std::vector<std::string>& names) {
  std::string out = "t";
  for (const std::string& n : names) out += "," + csv_field(n);
  out += "\r\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out += csv_number(tr.times[i]);
    for (Eigen::Index k = 0; k < tr.states[i].size(); ++k) out += "," + csv_number(tr.states[i](k));
    out += "\r\n";
  }
  return out;
}

[[nodiscard]] inline std::string to_csv(const SweepResult& res) {
  std::string out;
  for (const SweepAxis& a : res.axes) out += csv_field(a.name) + ",";
  out += "verdict,abscissa,simulated,settled,settling_time,steady_state_error,error\r\n";
  for (const SweepCell& c : res.cells) {
    for (double v : c.coords) out += csv_number(v) + ",";
    out += csv_field(c.verdict) + "," + csv_number(c.abscissa) + "," + (c.simulated ? "true" : "false") + "," +
           (c.settled ? "true" : "false") + "," + csv_number(c.settling_time) + "," +
           csv_number(c.steady_state_error) + "," + csv_field(c.error) + "\r\n";
  }
  return out;
}

[[nodiscard]] inline std::string to_csv(const SwitchingExperiment& ex) {
  std::string out =
      "eta,z1,z2,z1_predicted,z2_predicted,eta_z1_z2,residual,abscissa,simulated,settled,z1_end,z2_end,note\r\n";
  for (std::size_t i = 0; i < ex.table.rows.size(); ++i) {
    const SwitchingRow& r = ex.table.rows[i];
    const SwitchingSimulation& s = ex.runs[i];
    out += csv_number(r.eta) + "," + csv_number(r.z1) + "," + csv_number(r.z2) + "," + csv_number(r.z1_predicted) +
           "," + csv_number(r.z2_predicted) + "," + csv_number(r.product) + "," + csv_number(r.residual) + "," +
           csv_number(s.abscissa) + "," + (s.simulated ? "true" : "false") + "," + (s.settled ? "true" : "false") +
           "," + csv_number(s.z1_end) + "," + csv_number(s.z2_end) + "," + csv_field(s.note) + "\r\n";
  }
  return out;
}

[[nodiscard]] inline nlohmann::json to_json(const SolverStats& s) {
  return {{"accepted", s.accepted},
          {"rejected", s.rejected},
          {"negative_rejections", s.negative_rejections},
          {"clipped", s.clipped},
          {"evaluations", s.evaluations}};
}

[[nodiscard]] inline nlohmann::json to_json(const Trajectory& tr, const std::vector<std::string>& names) {
  nlohmann::json states = nlohmann::json::array();
  for (const Vector& s : tr.states) states.push_back(to_json(s));
  return {{"names", names}, {"times", tr.times}, {"states", states}, {"stats", to_json(tr.stats)},
          {"min_entry", json_number(tr.min_entry)}};
}

[[nodiscard]] inline nlohmann::json to_json(const SettlingReport& s) {
  return {{"settled", s.settled},
          {"settling_time", json_number(s.settling_time)},
          {"steady_state_error", json_number(s.steady_state_error)},
          {"band", s.band}};
}

[[nodiscard]] inline nlohmann::json to_json(const SweepResult& res) {
  nlohmann::json axes = nlohmann::json::array();
  for (const SweepAxis& a : res.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  nlohmann::json cells = nlohmann::json::array();
  for (const SweepCell& c : res.cells) {
    nlohmann::json j = {{"coords", c.coords},
                        {"verdict", c.verdict},
                        {"abscissa", json_number(c.abscissa)},
                        {"simulated", c.simulated},
                        {"settled", c.settled},
                        {"settling_time", json_number(c.settling_time)},
                        {"steady_state_error", json_number(c.steady_state_error)}};
    if (!c.error.empty()) j["error"] = c.error;
    cells.push_back(j);
  }
  return {{"axes", axes}, {"cells", cells}};
}

[[nodiscard]] inline nlohmann::json to_json(const SwitchingExperiment& ex) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < ex.table.rows.size(); ++i) {
    const SwitchingRow& r = ex.table.rows[i];
    const SwitchingSimulation& s = ex.runs[i];
    nlohmann::json j = {{"eta", r.eta},
                        {"z1", r.z1},
                        {"z2", r.z2},
                        {"z1_predicted", r.z1_predicted},
                        {"z2_predicted", r.z2_predicted},
                        {"eta_z1_z2", r.product},
                        {"residual", r.residual},
                        {"abscissa", json_number(s.abscissa)},
                        {"simulated", s.simulated},
                        {"settled", s.settled},
                        {"z1_end", json_number(s.z1_end)},
                        {"z2_end", json_number(s.z2_end)}};
    if (!s.note.empty()) j["note"] = s.note;
    rows.push_back(j);
  }
  return {{"regime", to_string(ex.table.regime)},
          {"u_star", ex.table.u_star},
          {"z1_limit", ex.table.z1_limit},
          {"z2_limit", ex.table.z2_limit},
          {"gains", to_json(ex.table.gains)},
          {"rows", rows}};
}

}  // namespace reinstab
