#include "multisurf/experiments.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "multisurf/analysis.hpp"
#include "multisurf/controllers.hpp"
#include "multisurf/io.hpp"
#include "multisurf/systems.hpp"
#include "multisurf/zoh.hpp"

namespace multisurf {

namespace {

constexpr double kZero = 1e-12;
constexpr double kPeriodTol = 1e-9;

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Property prop(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, std::move(detail)};
}

enum class Kind { implicit, explicit_ };

Kind scheme_of(const Overrides& ov, Kind fallback) {
  if (!ov.scheme) return fallback;
  if (*ov.scheme == "implicit") return Kind::implicit;
  if (*ov.scheme == "explicit") return Kind::explicit_;
  throw std::invalid_argument("unknown scheme '" + *ov.scheme + "' (expected implicit or explicit)");
}

std::vector<Kind> schemes_of(const Overrides& ov) {
  if (ov.scheme) return {scheme_of(ov, Kind::implicit)};
  return {Kind::implicit, Kind::explicit_};
}

const char* label_of(Kind k) { return k == Kind::implicit ? "implicit" : "explicit"; }

VectorXd initial_state(const Overrides& ov, std::vector<double> fallback) {
  const auto& v = ov.x0 ? *ov.x0 : fallback;
  if (v.size() != fallback.size())
    throw std::invalid_argument("x0 needs " + std::to_string(fallback.size()) + " components");
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SchemeConfig config(const Overrides& ov, double h, double theta = 1.0) {
  SchemeConfig cfg;
  cfg.h = h;
  cfg.theta = ov.theta.value_or(theta);
  cfg.gamma = ov.gamma.value_or(1.0);
  if (ov.solver) cfg.sign.solver = *ov.solver;
  validate(cfg);
  return cfg;
}

SignSolverSettings solver_settings(const Overrides& ov) {
  SignSolverSettings s;
  if (ov.solver) s.solver = *ov.solver;
  return s;
}

Property completed(const Trajectory& traj) {
  return prop("completed", traj.completed(), traj.failure.value_or(""));
}

Property selection_box(const Trajectory& traj, double h) {
  return prop("selection-box", check_trajectory(traj, h), "");
}

Property persistent(const Trajectory& traj, Eigen::Index i, const std::string& name) {
  const auto k = arrival_step(traj, i, kZero);
  return prop(name, k.has_value() && traj.completed(), k ? "from step " + std::to_string(*k) : "never reached");
}

Property period2(const std::vector<double>& channel, bool expected, const std::string& name) {
  const bool p = detect_period2(tail_window(channel), kPeriodTol);
  return prop(name, p == expected, p ? "period-2 tail" : "no period-2 tail");
}

double max_state(const Trajectory& traj) {
  double m = 0;
  for (const auto& x : traj.states) m = std::max(m, x.lpNorm<Eigen::Infinity>());
  return m;
}

// ---------------------------------------------------------------- simple

LinearSignSystem simple_system() { return make_linear_system(MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1)); }

ExperimentResult run_simple(const Overrides& ov) {
  const double h = ov.h.value_or(0.2);
  const double T = ov.T.value_or(3.0);
  const VectorXd x0 = initial_state(ov, {1.01});
  const Kind kind = scheme_of(ov, Kind::implicit);
  const SchemeConfig cfg = config(ov, h);

  ExperimentResult res;
  Variant v;
  v.label = label_of(kind);
  v.traj = simulate(simple_system(), x0, 0.0, T, cfg,
                    kind == Kind::implicit ? Scheme::implicit : Scheme::explicit_euler);
  const auto xs = state_channel(v.traj, 0);
  v.properties.push_back(completed(v.traj));
  if (kind == Kind::implicit) {
    const double a = std::abs(x0(0));
    const auto bound = static_cast<std::size_t>(std::ceil(a / h - 1e-12));
    const auto k = arrival_step(xs, 1e-13);
    const bool ok = a == 0 ? k == std::size_t{0} : (k && *k <= bound);
    v.properties.push_back(prop("finite-time-zero", ok,
                                (k ? "x_k = 0 from step " + std::to_string(*k) : std::string("never zero")) +
                                    ", bound " + std::to_string(bound)));
    v.properties.push_back(selection_box(v.traj, h));
    v.properties.push_back(period2(xs, false, "no-period2"));
  } else {
    v.properties.push_back(period2(xs, true, "period2-detected"));
  }

  std::ostringstream err;
  err << "t,x,x_ref,s,s_ref\n" << std::setprecision(17);
  for (std::size_t k = 0; k < v.traj.size(); ++k) {
    const double t = v.traj.times[k];
    err << t << ',' << xs[k] << ',' << simple_state_reference(x0(0), t) << ',' << v.traj.selections[k](0) << ','
        << simple_selection_reference(x0(0), t) << '\n';
  }
  res.extra_files.emplace_back("error.csv", err.str());
  res.variants.push_back(std::move(v));
  return res;
}

// ----------------------------------------------------------- convergence

struct SweepPoint {
  double h;
  ErrorReport s_err;
  ErrorReport x_err;
  bool completed;
};

ExperimentResult run_convergence(const Overrides& ov) {
  const double h_min = ov.h_min.value_or(1e-3);
  const double h_max = ov.h_max.value_or(1e-1);
  const int points = ov.points.value_or(8);
  const double T = ov.T.value_or(2.0);
  const VectorXd x0 = initial_state(ov, {1.01});
  if (!(h_min > 0) || !(h_max > h_min) || points < 3)
    throw std::invalid_argument("convergence sweep needs 0 < h-min < h-max and at least 3 points");

  std::vector<double> hs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    hs[static_cast<std::size_t>(i)] =
        std::exp(std::log(h_max) + (std::log(h_min) - std::log(h_max)) * i / (points - 1));

  std::vector<std::future<SweepPoint>> jobs;
  for (double h : hs) {
    jobs.push_back(std::async(std::launch::async, [h, T, &x0, &ov] {
      const SchemeConfig cfg = config(ov, h);
      const Trajectory traj = simulate(simple_system(), x0, 0.0, T, cfg);
      const double a = x0(0);
      SweepPoint p{h, {}, {}, traj.completed()};
      p.s_err = error_norms(traj.times, selection_channel(traj, 0),
                            [a](double t) { return simple_selection_reference(a, t); }, h);
      p.x_err = error_norms(traj.times, state_channel(traj, 0),
                            [a](double t) { return simple_state_reference(a, t); }, h);
      return p;
    }));
  }
  std::vector<SweepPoint> sweep;
  for (auto& j : jobs) sweep.push_back(j.get());

  std::vector<ConvergenceRow> rows;
  std::vector<std::pair<double, double>> l1, l2;
  bool inf_one = true, all_done = true;
  double worst_inf = 0, x_max = 0;
  for (const auto& p : sweep) {
    rows.push_back({p.h, p.s_err.inf_norm, p.s_err.l1_norm, p.s_err.l2_norm});
    l1.emplace_back(p.h, p.s_err.l1_norm);
    l2.emplace_back(p.h, p.s_err.l2_norm);
    inf_one = inf_one && std::abs(p.s_err.inf_norm - 1.0) <= 1e-9;
    worst_inf = std::max(worst_inf, std::abs(p.s_err.inf_norm - 1.0));
    x_max = std::max(x_max, p.x_err.inf_norm);
    all_done = all_done && p.completed;
  }
  const double s1 = convergence_slope(l1);
  const double s2 = convergence_slope(l2);

  ExperimentResult res;
  res.properties.push_back(prop("completed", all_done));
  res.properties.push_back(prop("linf-equals-one", inf_one, "max |inf - 1| = " + num(worst_inf)));
  res.properties.push_back(prop("l1-order-one", s1 >= 0.85 && s1 <= 1.15, "slope " + num(s1)));
  res.properties.push_back(prop("l2-order-one", s2 >= 0.85 && s2 <= 1.15, "slope " + num(s2)));
  res.properties.push_back(prop("state-exact-on-grid", x_max <= kZero, "max state error " + num(x_max)));
  std::ostringstream csv;
  write_convergence_csv(csv, rows, s1, s2);
  res.extra_files.emplace_back("convergence.csv", csv.str());
  return res;
}

// ------------------------------------------------------------ galias2007

ExperimentResult run_galias2007(const Overrides& ov) {
  const double c1 = 1.0, alpha = 1.0;
  MatrixXd E(2, 2);
  E << 0, 1, 0, -c1;
  MatrixXd B(2, 1);
  B << 0, alpha;
  MatrixXd C(1, 2);
  C << c1, 1;
  const auto sys = make_linear_system(E, VectorXd::Zero(2), B, C, VectorXd::Zero(1));
  const VectorXd x0 = initial_state(ov, {0.0, 2.21});
  const double T = ov.T.value_or(10.0);

  ExperimentResult res;
  for (Kind kind : schemes_of(ov)) {
    std::vector<double> hs;
    if (ov.h) hs = {*ov.h};
    else if (kind == Kind::implicit) hs = {1.0, 0.3, 0.1, 0.05, 0.01};
    else hs = {0.3};
    for (double h : hs) {
      Variant v;
      v.label = std::string(label_of(kind)) + "_h" + num(h);
      v.traj = simulate(sys, x0, 0.0, T, config(ov, h),
                        kind == Kind::implicit ? Scheme::implicit : Scheme::explicit_euler);
      v.properties.push_back(completed(v.traj));
      const auto y = output_channel(v.traj, 0);
      if (kind == Kind::implicit) {
        v.properties.push_back(persistent(v.traj, 0, "surface-reached-persistent"));
        v.properties.push_back(period2(y, false, "no-period2"));
      } else {
        v.properties.push_back(period2(y, true, "period2-detected"));
      }
      res.variants.push_back(std::move(v));
    }
  }
  return res;
}

// ---------------------------------------------- multisurface / filippov

ExperimentResult run_two_surface(const Overrides& ov, const MatrixXd& B, const MatrixXd& C, double h_default,
                                 double T_default, bool ordered) {
  const auto sys = make_linear_system(MatrixXd::Zero(2, 2), VectorXd::Zero(2), B, C, VectorXd::Zero(2));
  const double h = ov.h.value_or(h_default);
  const VectorXd x0 = initial_state(ov, {1.0, -1.0});
  const Kind kind = scheme_of(ov, Kind::implicit);
  const auto cb = check_cb_positive(sys);

  ExperimentResult res;
  Variant v;
  v.label = label_of(kind);
  v.traj = simulate(sys, x0, 0.0, ov.T.value_or(T_default), config(ov, h),
                    kind == Kind::implicit ? Scheme::implicit : Scheme::explicit_euler);
  v.properties.push_back(completed(v.traj));
  const auto a0 = arrival_step(v.traj, 0, kZero);
  const auto a1 = arrival_step(v.traj, 1, kZero);
  if (kind == Kind::implicit) {
    if (ordered)
      v.properties.push_back(prop("arrival-order", a0 && a1 && *a0 < *a1,
                                  "y1 at " + (a0 ? std::to_string(*a0) : std::string("never")) + ", y2 at " +
                                      (a1 ? std::to_string(*a1) : std::string("never"))));
    v.properties.push_back(prop("both-persist", a0 && a1));
    const double xn = v.traj.states.back().lpNorm<Eigen::Infinity>();
    v.properties.push_back(prop("origin-reached", xn <= 1e-10, "|x_N| = " + num(xn)));
    v.properties.push_back(selection_box(v.traj, h));
  } else {
    v.properties.push_back(prop("no-exact-sliding", !(a0 && a1)));
  }
  res.properties.push_back(prop("cb-advisory", true, cb.is_positive_definite ? "CB positive definite"
                                                                             : "CB not positive definite"));
  res.variants.push_back(std::move(v));
  return res;
}

ExperimentResult run_multisurface(const Overrides& ov) {
  MatrixXd B(2, 2);
  B << 1, 2, 2, -1;
  return run_two_surface(ov, B, B, 0.02, 1.0, true);
}

ExperimentResult run_filippov(const Overrides& ov) {
  MatrixXd B(2, 2);
  B << 1, -2, 2, 1;
  return run_two_surface(ov, B, MatrixXd::Identity(2, 2), 0.002, 2.0, false);
}

// -------------------------------------------------------------- zoh-*

ExperimentResult run_ecb(const Overrides& ov, const MatrixXd& F, const MatrixXd& G, const MatrixXd& C,
                         std::vector<double> x0_default) {
  const double h = ov.h.value_or(0.3);
  const double T = ov.T.value_or(60.0);
  const VectorXd x0 = initial_state(ov, std::move(x0_default));
  const auto m = C.rows();

  ExperimentResult res;
  for (Kind kind : schemes_of(ov)) {
    const auto ctl = make_ecb_controller(F, G, C, 1.0, h,
                                         kind == Kind::implicit ? ZohMode::implicit_hold : ZohMode::explicit_hold);
    Variant v;
    v.label = std::string("zoh_") + label_of(kind);
    v.traj = simulate_ecb(ctl, x0, 0.0, T, solver_settings(ov));
    v.properties.push_back(completed(v.traj));
    if (kind == Kind::implicit) {
      for (Eigen::Index i = 0; i < m; ++i)
        v.properties.push_back(persistent(v.traj, i, "surface" + std::to_string(i + 1) + "-persistent"));
      v.properties.push_back(selection_box(v.traj, h));
    } else if (m == 1) {
      v.properties.push_back(period2(output_channel(v.traj, 0), true, "period2-detected"));
    } else {
      // recurrent departures from the surfaces: at least half of the tail
      std::vector<double> dev;
      for (const auto& y : v.traj.outputs) dev.push_back(y.lpNorm<Eigen::Infinity>());
      const auto tail = tail_window(dev);
      std::size_t off = 0;
      for (double d : tail) off += d > h / 10 ? 1 : 0;
      v.properties.push_back(prop("no-sliding", 2 * off >= tail.size(),
                                  std::to_string(off) + "/" + std::to_string(tail.size()) + " tail samples off"));
    }
    res.variants.push_back(std::move(v));
  }
  return res;
}

ExperimentResult run_zoh_siso(const Overrides& ov) {
  const double a1 = -2, a2 = 2, c1 = 1;
  MatrixXd F(2, 2), G(2, 1), C(1, 2);
  F << 0, 1, -a1, -a2;
  G << 0, 1;
  C << c1, 1;
  return run_ecb(ov, F, G, C, {0.55, 0.55});
}

ExperimentResult run_zoh_mimo(const Overrides& ov) {
  MatrixXd F(3, 3), G(3, 2), C(2, 3);
  F << 0, 0, 1, 1, 1, 1, -1, -3, 1;
  G << 0, 0, 1, 0, 0, 1;
  C << 1, 0, 1, 0, 1, 1;
  return run_ecb(ov, F, G, C, {0.05, -0.5, 0.02});
}

// -------------------------------------------------------------- lyapunov

ExperimentResult run_lyapunov(const Overrides& ov) {
  const double alpha = 0.1;
  const double h = ov.h.value_or(0.1);
  DisturbedLinearSystem sys;
  sys.E = -MatrixXd::Identity(1, 1);
  sys.B = MatrixXd::Identity(1, 1);
  sys.gains = VectorXd::Ones(1);
  sys.P = MatrixXd::Identity(1, 1);
  sys.disturbance = [alpha](double t) { return VectorXd::Constant(1, alpha * std::sin(t)); };
  sys.disturbance_bounds = VectorXd::Ones(1);
  validate(sys);
  const VectorXd x0 = initial_state(ov, {1.0});
  const double T = ov.T.value_or(10.0);

  ExperimentResult res;
  res.properties.push_back(prop("disturbance-bounded", disturbance_within_bounds(sys, 0.0, T, 1000)));
  for (Kind kind : schemes_of(ov)) {
    Variant v;
    v.label = label_of(kind);
    v.traj = simulate_lyapunov(sys, x0, 0.0, T, config(ov, h),
                               kind == Kind::implicit ? LyapunovScheme::implicit : LyapunovScheme::explicit_euler);
    v.properties.push_back(completed(v.traj));
    const auto xs = state_channel(v.traj, 0);
    const auto us = control_channel(v.traj, 0);
    if (kind == Kind::implicit) {
      const auto k0 = arrival_step(xs, kZero);
      v.properties.push_back(
          prop("finite-time-zero", k0.has_value(), k0 ? "from step " + std::to_string(*k0) : "never"));
      // u_k acts on [t_k, t_{k+1}) and is stored on row k + 1
      double worst = 0;
      std::size_t checked = 0;
      for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (std::abs(xs[k]) > kZero) continue;
        worst = std::max(worst, std::abs(us[k + 1] - alpha * std::sin(v.traj.times[k])));
        ++checked;
      }
      v.properties.push_back(prop("control-tracks-disturbance", checked > 0 && worst <= 2 * h,
                                  "max |u - gamma| = " + num(worst) + " over " + std::to_string(checked) + " steps"));
    } else {
      // The disturbance drifts the orbit, so an occasional pair of equal signs is
      // possible: require |u| = 1 on the tail and a sign flip on most steps.
      const auto tail = tail_window(us);
      bool unit = true;
      std::size_t flips = 0;
      for (std::size_t k = 0; k < tail.size(); ++k) {
        unit = unit && std::abs(std::abs(tail[k]) - 1.0) <= 1e-12;
        if (k + 1 < tail.size() && tail[k + 1] == -tail[k]) ++flips;
      }
      const bool alt = unit && 2 * flips >= tail.size() - 1;
      v.properties.push_back(prop("control-chatters", alt,
                                  std::to_string(flips) + "/" + std::to_string(tail.size() - 1) +
                                      " sign flips, |u| = 1: " + (unit ? "yes" : "no")));
    }
    res.variants.push_back(std::move(v));
  }
  return res;
}

// -------------------------------------------------------------- observer

LinearSignSystem observer_system(double k, double tau) {
  MatrixXd E(4, 4);
  E << 0, 0, 0, 0,                              //
      k, -k, -k, 0,                             //
      0, 0, 0, 1,                               //
      1 / (tau * tau), 0, -1 / (tau * tau), -2 / tau;
  MatrixXd B = MatrixXd::Zero(4, 1);
  B(0, 0) = 1;
  MatrixXd C(1, 4);
  C << 1, -1, 0, 0;
  return make_linear_system(E, VectorXd::Zero(4), B, C, VectorXd::Zero(1));
}

ExperimentResult run_observer(const Overrides& ov) {
  struct Case {
    double theta, h, tau;
    bool stable;
  };
  // stability threshold of the explicit drift at tau = 0.001 is roughly h = 0.005
  std::vector<Case> cases;
  if (ov.h || ov.theta) {
    const double theta = ov.theta.value_or(1.0), h = ov.h.value_or(0.1);
    cases.push_back({theta, h, 0.001, !(theta == 0.0 && h >= 0.005)});
  } else {
    cases = {{1.0, 0.1, 0.001, true},  {0.0, 0.1, 0.001, false}, {0.0, 0.01, 0.001, false},
             {0.0, 0.004, 0.001, true}, {1.0, 0.1, 0.5, true},    {0.5, 0.1, 0.5, true}};
  }
  const VectorXd x0 = initial_state(ov, {2.0, 0.0, 0.0, 0.0});
  const double T = ov.T.value_or(10.0);

  ExperimentResult res;
  for (const auto& c : cases) {
    Overrides o = ov;
    o.theta = c.theta;
    Variant v;
    v.label = "theta" + num(c.theta) + "_h" + num(c.h) + "_tau" + num(c.tau);
    v.traj = simulate(observer_system(1.0, c.tau), x0, 0.0, T, config(o, c.h));
    if (c.stable) {
      v.properties.push_back(prop("bounded", v.traj.completed(),
                                  v.traj.failure.value_or("max |x| = " + num(max_state(v.traj)))));
      if (c.theta == 1.0) v.properties.push_back(period2(output_channel(v.traj, 0), false, "no-period2"));
    } else {
      v.properties.push_back(prop("unstable-expected", v.traj.diverged, v.traj.failure.value_or("stayed bounded")));
    }
    res.variants.push_back(std::move(v));
  }
  return res;
}

// ---------------------------------------------------------- hypomonotone

NonlinearSignSystem hypomonotone_system() {
  NonlinearSignSystem sys;
  sys.n = 1;
  sys.m = 1;
  sys.f = [](const VectorXd&, double) { return VectorXd::Zero(1); };
  sys.dfdx = [](const VectorXd&, double) { return MatrixXd::Zero(1, 1); };
  sys.g = [](const VectorXd& x) { return MatrixXd::Constant(1, 1, x(0) + 1); };
  sys.dgdx = [](const VectorXd&) { return GainJacobian{{MatrixXd::Ones(1, 1)}}; };
  sys.h = [](const VectorXd& x) { return x; };
  sys.dhdx = [](const VectorXd&) { return MatrixXd::Identity(1, 1); };
  return sys;
}

ExperimentResult run_hypomonotone(const Overrides& ov) {
  const std::vector<double> hs = ov.h ? std::vector<double>{*ov.h} : std::vector<double>{0.5, 0.1, 0.01};
  const std::vector<double> x0s = ov.x0 ? *ov.x0 : std::vector<double>{2.0, -0.5};
  const double T = ov.T.value_or(5.0);
  const auto sys = hypomonotone_system();

  ExperimentResult res;
  for (double h : hs) {
    for (double x0 : x0s) {
      Variant v;
      v.label = "h" + num(h) + "_x0" + num(x0);
      v.traj = simulate(sys, VectorXd::Constant(1, x0), 0.0, T, config(ov, h));
      v.properties.push_back(completed(v.traj));
      const auto xs = state_channel(v.traj, 0);
      const auto ss = selection_channel(v.traj, 0);
      double worst = 0;
      bool sel_ok = true;
      for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (std::abs(xs[k]) <= h) continue;
        const double sg = xs[k] > 0 ? 1.0 : -1.0;
        worst = std::max(worst, std::abs(xs[k + 1] - (xs[k] - h * sg) / (1 + h * sg)));
        sel_ok = sel_ok && std::abs(ss[k + 1] - sg) <= 1e-12;
      }
      v.properties.push_back(prop("closed-form-match", worst <= 1e-12 && sel_ok, "max deviation " + num(worst)));
      const auto k0 = arrival_step(xs, kZero);
      v.properties.push_back(
          prop("finite-time-zero", k0.has_value(), k0 ? "from step " + std::to_string(*k0) : "never"));
      int iters = 0;
      for (int it : v.traj.newton_iters) iters = std::max(iters, it);
      v.properties.push_back(prop("newton-within-10", iters <= 10, "max iterations " + std::to_string(iters)));
      res.variants.push_back(std::move(v));
    }
  }
  return res;
}

struct Entry {
  ExperimentInfo info;
  std::function<ExperimentResult(const Overrides&)> run;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {{"simple", "scalar x' in -Sgn(x): finite-time exact zero (implicit) vs period-2 (explicit)",
        "h=0.2 x0=1.01 T=3 implicit"},
       run_simple},
      {{"convergence", "h-sweep of the simple system: error norms of s and fitted slopes",
        "h in [1e-3, 1e-1], 8 points, x0=1.01 T=2"},
       run_convergence},
      {{"galias2007", "second-order ECB closed loop with c1 = alpha = 1, implicit and explicit Euler",
        "x0=(0,2.21) T=10 implicit h in {1,0.3,0.1,0.05,0.01}, explicit h=0.3"},
       run_galias2007},
      {{"multisurface", "two sliding surfaces, B = C = [1 2; 2 -1]", "h=0.02 x0=(1,-1) T=1 implicit"},
       run_multisurface},
      {{"filippov", "Filippov example B = [1 -2; 2 1], C = I, codimension-2 sliding at the origin",
        "h=0.002 x0=(1,-1) T=2 implicit"},
       run_filippov},
      {{"zoh-siso", "ECB-SMC under zero-order hold, a1=-2 a2=2 c1=1", "h=0.3 x0=(0.55,0.55) T=60 implicit+explicit"},
       run_zoh_siso},
      {{"zoh-mimo", "ECB-SMC under zero-order hold, 3 states, 2 surfaces",
        "h=0.3 x0=(0.05,-0.5,0.02) T=60 implicit+explicit"},
       run_zoh_mimo},
      {{"lyapunov", "x' = -x - u + 0.1 sin t, u in Sgn(x)", "h=0.1 x0=1 T=10 implicit+explicit"}, run_lyapunov},
      {{"observer", "observer-based SMC with parasitic dynamics, k=1",
        "x0=(2,0,0,0) T=10; tau=0.001: (theta,h) in {(1,0.1),(0,0.1),(0,0.01),(0,0.004)}; tau=0.5: theta in {1,0.5}, "
        "h=0.1"},
       run_observer},
      {{"hypomonotone", "x' in -(x+1) Sgn(x), Newton + MLCP steps", "h in {0.5,0.1,0.01} x0 in {2,-0.5} T=5"},
       run_hypomonotone},
  };
  return entries;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) c = '_';
  return s;
}

}  // namespace

bool ExperimentResult::passed() const {
  for (const auto& p : properties)
    if (!p.passed) return false;
  for (const auto& v : variants)
    for (const auto& p : v.properties)
      if (!p.passed) return false;
  return true;
}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

bool has_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (e.info.name == name) return true;
  return false;
}

ExperimentResult run_experiment(const std::string& name, const Overrides& ov) {
  for (const auto& e : registry()) {
    if (e.info.name != name) continue;
    ExperimentResult r = e.run(ov);
    r.name = name;
    return r;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

void write_result(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (result.variants.size() == 1) {
    write_trajectory_csv((dir / "traj.csv").string(), result.variants.front().traj);
  } else {
    for (const auto& v : result.variants)
      write_trajectory_csv((dir / ("traj_" + sanitize(v.label) + ".csv")).string(), v.traj);
  }
  for (const auto& [file, contents] : result.extra_files) {
    std::ofstream f(dir / file);
    if (!f) throw std::runtime_error("cannot write " + (dir / file).string());
    f << contents;
  }
  std::ofstream f(dir / "properties.txt");
  f << summarize(result);
}

std::string summarize(const ExperimentResult& result) {
  std::ostringstream os;
  auto line = [&os](const std::string& scope, const Property& p) {
    os << (p.passed ? "PASS " : "FAIL ") << scope << p.name;
    if (!p.detail.empty()) {
      // keep the verdict on one line; multi-line diagnostics go to the first line only
      os << " (" << p.detail.substr(0, p.detail.find('\n')) << ")";
    }
    os << '\n';
  };
  for (const auto& p : result.properties) line(result.name + ": ", p);
  for (const auto& v : result.variants)
    for (const auto& p : v.properties) line(result.name + "/" + v.label + ": ", p);
  return os.str();
}

SolverKind parse_solver(const std::string& s) {
  if (s == "enumerative") return SolverKind::enumerative;
  if (s == "psor") return SolverKind::psor;
  if (s == "pivot" || s == "pivoting") return SolverKind::pivoting;
  if (s == "auto" || s == "automatic") return SolverKind::automatic;
  throw std::invalid_argument("unknown solver '" + s + "' (expected enumerative, psor or pivot)");
}

std::vector<double> parse_vector(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + item + "' in vector");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("bad number '" + item + "' in vector");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty vector");
  return out;
}

}  // namespace multisurf
