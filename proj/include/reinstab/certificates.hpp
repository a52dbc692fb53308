#pragma once

/**
 * Structural-stability certificates for the p-type, exponential and logistic
 * loops, plus the eigenvalue perturbation reports for small k_p, small eta
 * and large eta.
 *
 * A certificate never claims instability. Failed hypotheses give
 * HypothesisFailed, passing hypotheses with failing supporting evidence give
 * NotCertified.
 */

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "reinstab/equilibria.hpp"
#include "reinstab/errors.hpp"
#include "reinstab/linearize.hpp"
#include "reinstab/matrixlab.hpp"
#include "reinstab/model.hpp"
#include "reinstab/transfer.hpp"

namespace reinstab {

enum class Theorem {
  None,
  SmallGain,
  SmallEta,
  LargeEta,
  StableCase,
  UnstableCase,
  NonlinearSpr,
  NonlinearCooperative,
  NonlinearDecoupled,
  ExponentialStable,
  ExponentialUnstable,
  LogisticStable,
  LogisticUnstable,
};

constexpr const char* to_string(Theorem t) noexcept {
  switch (t) {
    case Theorem::None: return "None";
    case Theorem::SmallGain: return "SmallGain";
    case Theorem::SmallEta: return "SmallEta";
    case Theorem::LargeEta: return "LargeEta";
    case Theorem::StableCase: return "StableCase";
    case Theorem::UnstableCase: return "UnstableCase";
    case Theorem::NonlinearSpr: return "NonlinearSpr";
    case Theorem::NonlinearCooperative: return "NonlinearCooperative";
    case Theorem::NonlinearDecoupled: return "NonlinearDecoupled";
    case Theorem::ExponentialStable: return "ExponentialStable";
    case Theorem::ExponentialUnstable: return "ExponentialUnstable";
    case Theorem::LogisticStable: return "LogisticStable";
    case Theorem::LogisticUnstable: return "LogisticUnstable";
  }
  return "Unknown";
}

enum class Verdict { StructurallyStable, NotCertified, HypothesisFailed };

constexpr const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::StructurallyStable: return "StructurallyStable";
    case Verdict::NotCertified: return "NotCertified";
    case Verdict::HypothesisFailed: return "HypothesisFailed";
  }
  return "Unknown";
}

struct Hypothesis {
  std::string name;
  bool passed = false;
  nlohmann::json witness;
};

struct Certificate {
  Theorem theorem = Theorem::None;
  std::vector<Hypothesis> hypotheses;
  Verdict verdict = Verdict::NotCertified;
  nlohmann::json evidence = nlohmann::json::object();

  [[nodiscard]] bool hypotheses_passed() const {
    for (const Hypothesis& h : hypotheses) {
      if (!h.passed) return false;
    }
    return true;
  }
  [[nodiscard]] const Hypothesis* first_failure() const {
    for (const Hypothesis& h : hypotheses) {
      if (!h.passed) return &h;
    }
    return nullptr;
  }
  [[nodiscard]] bool certified() const { return verdict == Verdict::StructurallyStable; }

  Hypothesis& add(std::string name, bool passed, nlohmann::json witness = nlohmann::json::object()) {
    hypotheses.push_back({std::move(name), passed, std::move(witness)});
    return hypotheses.back();
  }
  void conclude(bool evidence_ok) {
    if (!hypotheses_passed()) {
      verdict = Verdict::HypothesisFailed;
    } else {
      verdict = evidence_ok ? Verdict::StructurallyStable : Verdict::NotCertified;
    }
  }
};

[[nodiscard]] inline nlohmann::json to_json(const Certificate& c) {
  nlohmann::json hyps = nlohmann::json::array();
  for (const Hypothesis& h : c.hypotheses) hyps.push_back({{"name", h.name}, {"passed", h.passed}, {"witness", h.witness}});
  return {{"theorem", to_string(c.theorem)}, {"verdict", to_string(c.verdict)}, {"hypotheses", hyps},
          {"evidence", c.evidence}};
}

inline constexpr double kProbeEta = 1.0;

[[nodiscard]] inline bool spr_like(PRTag t) { return t == PRTag::SPR || t == PRTag::StrongSPR; }

// ---------------------------------------------------------------------------
// Perturbation reports

/// Real part of the eigenvalue closest to the origin.
[[nodiscard]] inline double eigenvalue_nearest_zero(const Matrix& m) {
  const ComplexVector ev = eigenvalues(m);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < std::abs(ev(best))) best = i;
  }
  return ev(best).real();
}

/// (4 lambda(h) - lambda(2h)) / (2h), exact through second order.
template <typename F>
[[nodiscard]] double richardson_slope(F&& lambda, double h) {
  return (4.0 * lambda(h) - lambda(2.0 * h)) / (2.0 * h);
}

struct DerivativeReport {
  std::string parameter;
  double stated = 0.0;    ///< closed form as stated for the result
  double analytic = 0.0;  ///< first-order eigenvalue perturbation from left/right eigenvectors
  double finite_difference = 0.0;
  double step = 1e-6;
  double u_star = 0.0;
  Matrix a_bar;

  [[nodiscard]] static double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
  [[nodiscard]] double analytic_error() const { return rel(analytic, finite_difference); }
  [[nodiscard]] double stated_error() const { return rel(stated, finite_difference); }
};

[[nodiscard]] inline nlohmann::json to_json(const DerivativeReport& d) {
  return {{"parameter", d.parameter},         {"stated", d.stated},
          {"analytic", d.analytic},           {"finite_difference", d.finite_difference},
          {"step", d.step},                   {"analytic_relative_error", d.analytic_error()},
          {"stated_relative_error", d.stated_error()}, {"u_star", d.u_star}};
}

namespace detail {

struct PerturbationBase {
  double r = 0.0;
  double u = 0.0;
  Matrix a_bar;
};

inline PerturbationBase perturbation_base(const LinearNetwork& net, const PType& c) {
  const PTypeResult res = ptype_analysis(net, c);
  if (!res.admissibility.admissible) {
    throw Error(ErrorCode::PreconditionViolated, "set-point not admissible: " + res.admissibility.reason);
  }
  PerturbationBase b;
  b.r = c.set_point();
  b.u = res.u_star;
  b.a_bar = shifted_plant_block(net, res.eq->x_star, b.u);
  if (classify(b.a_bar).tag != StabilityTag::MetzlerHurwitz) {
    throw Error(ErrorCode::PreconditionViolated, "Abar = A - e_n e_n^T u* is not Metzler and Hurwitz");
  }
  return b;
}

inline double h_nn(const Matrix& a_bar) {
  const Eigen::Index n = a_bar.rows();
  return LinearSolve(a_bar).solve(basis(n, n - 1))(n - 1);
}

}  // namespace detail

/// d lambda_0 / d k_p at k_p = 0: theta r e_n^T Abar^{-1} e_n (the controller's k_p is ignored).
[[nodiscard]] inline DerivativeReport perturbation_small_kp(const LinearNetwork& net, const PType& c,
                                                            double step = 1e-6) {
  const detail::PerturbationBase b = detail::perturbation_base(net, c);
  DerivativeReport d;
  d.parameter = "kp";
  d.step = step;
  d.u_star = b.u;
  d.a_bar = b.a_bar;
  d.analytic = c.theta * b.r * detail::h_nn(b.a_bar);
  d.stated = d.analytic;
  d.finite_difference = richardson_slope(
      [&](double kp) {
        PType ck = c;
        ck.kp = kp;
        return eigenvalue_nearest_zero(ptype_matrix(b.a_bar, b.r, b.u, ck).matrix);
      },
      step);
  return d;
}

/**
 * d lambda_0 / d eta at eta = 0. The stated value is -u*. The eigenvector
 * computation gives -u* c/(c - mu) with c = theta r u* e_n^T Abar^{-1} e_n,
 * which lies strictly between -u* and 0.
 */
[[nodiscard]] inline DerivativeReport perturbation_small_eta(const LinearNetwork& net, const PType& c,
                                                             double step = 1e-6) {
  const detail::PerturbationBase b = detail::perturbation_base(net, c);
  DerivativeReport d;
  d.parameter = "eta";
  d.step = step;
  d.u_star = b.u;
  d.a_bar = b.a_bar;
  d.stated = -b.u;
  const double cc = c.theta * b.r * b.u * detail::h_nn(b.a_bar);
  d.analytic = -b.u * cc / (cc - c.mu);
  d.finite_difference = richardson_slope(
      [&](double eta) {
        PType ce = c;
        ce.eta = eta;
        return eigenvalue_nearest_zero(ptype_matrix(b.a_bar, b.r, b.u, ce).matrix);
      },
      step);
  return d;
}

struct LargeEtaReport {
  Matrix reduced;  ///< [Abar, -e_n k_p r; theta e_n^T, 0]
  double reduced_abscissa = 0.0;
  double full_abscissa = 0.0;  ///< full p-type matrix at eta = probe_eta
  double probe_eta = 1e6;
  bool certified = false;
  bool cross_check = false;
};

[[nodiscard]] inline LargeEtaReport perturbation_large_eta(const LinearNetwork& net, const PType& c,
                                                           double probe_eta = 1e6) {
  const detail::PerturbationBase b = detail::perturbation_base(net, c);
  const Eigen::Index n = net.dim();
  LargeEtaReport rep;
  rep.probe_eta = probe_eta;
  rep.reduced = Matrix::Zero(n + 1, n + 1);
  rep.reduced.topLeftCorner(n, n) = b.a_bar;
  rep.reduced(n - 1, n) = -c.kp * b.r;
  rep.reduced(n, n - 1) = c.theta;
  rep.reduced_abscissa = spectral_abscissa(rep.reduced);
  rep.certified = rep.reduced_abscissa < -kStabilityTolerance;
  PType ce = c;
  ce.eta = probe_eta;
  rep.full_abscissa = spectral_abscissa(ptype_matrix(b.a_bar, b.r, b.u, ce).matrix);
  rep.cross_check = std::abs(rep.full_abscissa - rep.reduced_abscissa) < 1e-2 || rep.full_abscissa < 0.0;
  return rep;
}

/// Raw large-eta check on an arbitrary reduced matrix (negative controls).
[[nodiscard]] inline bool large_eta_certified(const Matrix& reduced) {
  return spectral_abscissa(reduced) < -kStabilityTolerance;
}

[[nodiscard]] inline nlohmann::json to_json(const LargeEtaReport& r) {
  return {{"reduced", to_json(r.reduced)},       {"reduced_abscissa", r.reduced_abscissa},
          {"full_abscissa", r.full_abscissa},     {"probe_eta", r.probe_eta},
          {"certified", r.certified},             {"cross_check", r.cross_check}};
}

// ---------------------------------------------------------------------------
// p-type certificates on linear plants

namespace detail {

inline nlohmann::json class_witness(const StabilityClass& cls) {
  return {{"class", to_string(cls.tag)}, {"spectral_abscissa", json_number(cls.spectral_abscissa)}};
}

/// SPR of H_n on Abar and of the loop transfer at the probe eta.
inline bool ptype_spr_evidence(const LinearNetwork& net, const PType& c, Certificate& cert) {
  PType probe = c;
  probe.eta = kProbeEta;
  try {
    const LoopTransfer lt = loop_transfer(net.a, net.b0, probe);
    const StabilityClass abar_cls = classify(lt.a_bar);
    const PRClass hn = classify_pr(lt.h_n);
    const PRClass g = classify_pr(lt.g_eta);
    cert.evidence["u_star"] = lt.u_star;
    cert.evidence["abar_class"] = class_witness(abar_cls);
    cert.evidence["h_n"] = to_json(hn);
    cert.evidence["loop_transfer"] = to_json(g);
    cert.evidence["probe_eta"] = kProbeEta;
    const PTypeResult res = ptype_analysis(net, c);
    if (res.eq) {
      const ClosedLoopJacobian j = jacobian_ptype(net, c, *res.eq);
      cert.evidence["jacobian_abscissa"] = j.abscissa();
      cert.evidence["equilibrium"] = to_json(*res.eq);
    }
    return abar_cls.tag == StabilityTag::MetzlerHurwitz && spr_like(hn.tag) && spr_like(g.tag);
  } catch (const Error& e) {
    cert.evidence["error"] = e.what();
    return false;
  }
}

}  // namespace detail

[[nodiscard]] inline Certificate certify_stable_case(const LinearNetwork& net, const PType& c) {
  Certificate cert;
  cert.theorem = Theorem::StableCase;
  const StabilityClass cls = classify(net.a);
  cert.add("A Metzler and Hurwitz", cls.tag == StabilityTag::MetzlerHurwitz, detail::class_witness(cls));
  const double r = c.set_point();
  std::optional<StaticGains> g;
  try {
    g = static_gains(net.a, net.b0);
  } catch (const Error& e) {
    cert.add("0 < r < g0", false, {{"error", e.what()}});
  }
  if (g) cert.add("0 < r < g0", r > 0.0 && r < g->g0, {{"r", r}, {"g0", g->g0}});
  if (g) cert.evidence["gains"] = to_json(*g);
  const bool ok = cert.hypotheses_passed() && detail::ptype_spr_evidence(net, c, cert);
  cert.conclude(ok);
  return cert;
}

[[nodiscard]] inline Certificate certify_unstable_case(const LinearNetwork& net, const PType& c) {
  Certificate cert;
  cert.theorem = Theorem::UnstableCase;
  const StabilityClass cls = classify(net.a);
  cert.add("A Metzler", cls.tag != StabilityTag::NonMetzler, detail::class_witness(cls));
  cert.add("A output unstable", cls.tag == StabilityTag::MetzlerOutputUnstable, detail::class_witness(cls));
  std::optional<StaticGains> g;
  try {
    g = static_gains(net.a, net.b0);
    cert.add("A nonsingular", true, {{"condition", g->condition}});
  } catch (const Error& e) {
    cert.add("A nonsingular", false, {{"error", e.what()}});
  }
  if (g) {
    cert.add("g0 < 0", g->g0 < 0.0, {{"g0", g->g0}});
    cert.evidence["gains"] = to_json(*g);
  } else {
    cert.add("g0 < 0", false);
  }
  const double r = c.set_point();
  cert.add("r > 0", r > 0.0, {{"r", r}});
  const bool ok = cert.hypotheses_passed() && detail::ptype_spr_evidence(net, c, cert);
  cert.conclude(ok);
  return cert;
}

/// Picks the stable or output-unstable theorem from the structure of A.
[[nodiscard]] inline Certificate certify_ptype(const LinearNetwork& net, const PType& c) {
  if (classify(net.a).tag == StabilityTag::MetzlerOutputUnstable) return certify_unstable_case(net, c);
  return certify_stable_case(net, c);
}

// ---------------------------------------------------------------------------
// Nonlinear plants

/**
 * SPR test on (J11, J12, -J21, u* - J22) at x*(r); the cooperative and
 * decoupled shortcuts run first. J is partitioned with the output last.
 */
[[nodiscard]] inline Certificate certify_nonlinear(const NonlinearNetwork& net, const PType& c) {
  Certificate cert;
  cert.theorem = Theorem::NonlinearSpr;
  const double r = c.set_point();
  const NonlinearPTypeResult res = nonlinear_ptype_analysis(net, c);
  nlohmann::json adm = to_json(res.admissibility);
  if (res.inverse) adm["u_star"] = res.inverse->u_star;
  if (res.inverse) adm["F_at_zero"] = res.inverse->f_at_zero;
  cert.add("r admissible", res.admissibility.admissible && res.eq.has_value(), adm);
  if (!res.eq) {
    cert.conclude(false);
    return cert;
  }
  const Equilibrium& eq = *res.eq;
  cert.evidence["equilibrium"] = to_json(eq);
  const Eigen::Index n = net.n;
  const Matrix jac = net.jacobian(eq.x_star);
  Matrix a_bar = jac;
  a_bar(n - 1, n - 1) -= eq.u_star;
  const TransferFunction hn = output_transfer(a_bar);
  double hn0 = std::numeric_limits<double>::quiet_NaN();
  try {
    hn0 = LinearSolve(a_bar).solve(-basis(n, n - 1))(n - 1);
  } catch (const Error&) {
  }
  cert.add("H_n(0, r) > 0", hn0 > 0.0, {{"value", json_number(hn0)}});
  cert.evidence["jacobian"] = to_json(jac);
  const double abar_abscissa = spectral_abscissa(a_bar);
  cert.evidence["abar_abscissa"] = abar_abscissa;
  cert.evidence["jacobian_abscissa"] = jacobian_ptype(Plant(net), c, eq).abscissa();
  if (!cert.hypotheses_passed()) {
    cert.conclude(false);
    return cert;
  }

  const bool j_hurwitz = is_hurwitz(jac);
  if (is_metzler(jac) && j_hurwitz) {
    cert.theorem = Theorem::NonlinearCooperative;
    cert.evidence["shortcut"] = "J(x*) Metzler and Hurwitz";
    cert.conclude(true);
    return cert;
  }
  const Matrix j12 = jac.topRightCorner(n - 1, 1);
  const Matrix j21 = jac.bottomLeftCorner(1, n - 1);
  if (n > 1 && j_hurwitz && (j12.isZero(0.0) || j21.isZero(0.0))) {
    cert.theorem = Theorem::NonlinearDecoupled;
    cert.evidence["shortcut"] = j12.isZero(0.0) ? "J12 = 0 and J(x*) Hurwitz" : "J21 = 0 and J(x*) Hurwitz";
    cert.conclude(true);
    return cert;
  }

  const double feedthrough = eq.u_star - jac(n - 1, n - 1);
  TransferFunction t;
  bool j11_hurwitz = true;
  if (n == 1) {
    t.num = {feedthrough};
    t.den = {1.0};
  } else {
    const Matrix j11 = jac.topLeftCorner(n - 1, n - 1);
    j11_hurwitz = is_hurwitz(j11);
    t = tf_from_state_space(j11, jac.topRightCorner(n - 1, 1).col(0), -jac.bottomLeftCorner(1, n - 1).row(0).transpose(),
                            feedthrough);
  }
  const PRClass pr = classify_pr(t);
  cert.evidence["system"] = to_json(t);
  cert.evidence["feedthrough"] = feedthrough;
  cert.evidence["classification"] = to_json(pr);
  cert.evidence["j11_hurwitz"] = j11_hurwitz;
  cert.evidence["h_n"] = to_json(hn);
  cert.conclude(spr_like(pr.tag) && j11_hurwitz && abar_abscissa < -kStabilityTolerance);
  return cert;
}

// ---------------------------------------------------------------------------
// Exponential and logistic controllers

namespace detail {

/// Non-gating instability evidence for the zero and saturating branches.
inline void branch_instability(const LinearNetwork& net, const ControllerSpec& c, const BranchSet& set,
                               Certificate& cert) {
  nlohmann::json out = nlohmann::json::array();
  for (const Equilibrium& e : set.branches) {
    if (e.label == BranchLabel::Positive) continue;
    const ClosedLoopJacobian j = jacobian_fd(ClosedLoop(net, c), e);
    const double a = j.abscissa();
    out.push_back({{"label", to_string(e.label)}, {"spectral_abscissa", a}, {"unstable", a > 0.0}});
  }
  cert.evidence["other_branches"] = out;
}

template <typename Ctrl>
inline bool positive_branch_evidence(const LinearNetwork& net, const Ctrl& c, const BranchSet& set,
                                     Certificate& cert) {
  const Equilibrium* pos = set.find(BranchLabel::Positive);
  if (pos == nullptr) {
    cert.evidence["error"] = "no positive equilibrium";
    return false;
  }
  ClosedLoopJacobian j;
  if constexpr (std::is_same_v<Ctrl, Exponential>) {
    j = jacobian_exponential(net, c, *pos);
  } else {
    j = jacobian_logistic(net, c, *pos);
  }
  const double gain = integrator_gain(j);
  const Matrix a_bar = j.plant_block();
  const StabilityClass cls = classify(a_bar);
  const PRClass hn = classify_pr(output_transfer(a_bar));
  cert.evidence["equilibrium"] = to_json(*pos);
  cert.evidence["integrator_gain"] = gain;
  cert.evidence["abar_class"] = class_witness(cls);
  cert.evidence["h_n"] = to_json(hn);
  cert.evidence["jacobian_abscissa"] = j.abscissa();
  return gain > 0.0 && cls.tag == StabilityTag::MetzlerHurwitz && spr_like(hn.tag);
}

}  // namespace detail

[[nodiscard]] inline Certificate certify_exponential(const LinearNetwork& net, const Exponential& c) {
  Certificate cert;
  const StabilityClass cls = classify(net.a);
  const bool unstable_branch = cls.tag == StabilityTag::MetzlerOutputUnstable;
  cert.theorem = unstable_branch ? Theorem::ExponentialUnstable : Theorem::ExponentialStable;
  std::optional<BranchSet> set;
  nlohmann::json gain_error;
  try {
    set = exponential_equilibria(net, c);
    cert.evidence["gains"] = to_json(set->gains);
  } catch (const Error& e) {
    gain_error = {{"error", e.what()}};
  }
  if (unstable_branch) {
    cert.add("A Metzler", true, detail::class_witness(cls));
    cert.add("A output unstable", true, detail::class_witness(cls));
    cert.add("A nonsingular", set.has_value(), set ? nlohmann::json{{"condition", set->gains.condition}} : gain_error);
    cert.add("g0 < 0", set && set->gains.g0 < 0.0, set ? nlohmann::json{{"g0", set->gains.g0}} : gain_error);
    cert.add("mu > 0", c.mu > 0.0, {{"mu", c.mu}});
  } else {
    cert.add("A Metzler and Hurwitz", cls.tag == StabilityTag::MetzlerHurwitz, detail::class_witness(cls));
    cert.add("0 < mu < g0", set && c.mu > 0.0 && c.mu < set->gains.g0,
             set ? nlohmann::json{{"mu", c.mu}, {"g0", set->gains.g0}} : gain_error);
  }
  bool ok = false;
  if (set && cert.hypotheses_passed()) ok = detail::positive_branch_evidence(net, c, *set, cert);
  if (set) detail::branch_instability(net, c, *set, cert);
  cert.conclude(ok);
  return cert;
}

[[nodiscard]] inline Certificate certify_logistic(const LinearNetwork& net, const Logistic& c) {
  Certificate cert;
  const StabilityClass cls = classify(net.a);
  const bool unstable_branch = cls.tag == StabilityTag::MetzlerOutputUnstable;
  cert.theorem = unstable_branch ? Theorem::LogisticUnstable : Theorem::LogisticStable;
  std::optional<BranchSet> set;
  nlohmann::json gain_error;
  try {
    set = logistic_equilibria(net, c);
    cert.evidence["gains"] = to_json(set->gains);
    cert.evidence["admissibility"] = to_json(set->positive);
  } catch (const Error& e) {
    gain_error = {{"error", e.what()}};
  }
  const double lower = set ? set->positive.lower : std::numeric_limits<double>::quiet_NaN();
  const double z_star = set ? (set->gains.g0 - c.r) / (set->gains.gn * c.r) : std::numeric_limits<double>::quiet_NaN();
  if (unstable_branch) {
    cert.add("A Metzler", true, detail::class_witness(cls));
    cert.add("A output unstable", true, detail::class_witness(cls));
    cert.add("A nonsingular", set.has_value(), set ? nlohmann::json{{"condition", set->gains.condition}} : gain_error);
    cert.add("g0 < 0", set && set->gains.g0 < 0.0, set ? nlohmann::json{{"g0", set->gains.g0}} : gain_error);
    cert.add("r > g0/(1 + beta gn)", set && c.r > 0.0 && c.r > lower,
             {{"r", c.r}, {"lower", json_number(lower)}});
  } else {
    cert.add("A Metzler and Hurwitz", cls.tag == StabilityTag::MetzlerHurwitz, detail::class_witness(cls));
    const double upper = set ? set->gains.g0 : std::numeric_limits<double>::quiet_NaN();
    cert.add("g0/(1 + beta gn) < r < g0", set && c.r > lower && c.r < upper,
             {{"r", c.r}, {"lower", json_number(lower)}, {"upper", json_number(upper)}});
  }
  cert.add("0 < z* < beta", z_star > 0.0 && z_star < c.beta, {{"z_star", json_number(z_star)}, {"beta", c.beta}});
  bool ok = false;
  if (set && cert.hypotheses_passed()) ok = detail::positive_branch_evidence(net, c, *set, cert);
  if (set) detail::branch_instability(net, c, *set, cert);
  cert.conclude(ok);
  return cert;
}

/// Dispatch on plant and controller. AIRC loops and non-p-type controllers on
/// nonlinear plants have no certificate and come back NotCertified.
[[nodiscard]] inline Certificate certify(const Model& m) {
  if (const auto* lin = std::get_if<LinearNetwork>(&m.plant)) {
    if (const auto* p = std::get_if<PType>(&m.controller)) return certify_ptype(*lin, *p);
    if (const auto* e = std::get_if<Exponential>(&m.controller)) return certify_exponential(*lin, *e);
    if (const auto* l = std::get_if<Logistic>(&m.controller)) return certify_logistic(*lin, *l);
  } else if (const auto* p = std::get_if<PType>(&m.controller)) {
    return certify_nonlinear(std::get<NonlinearNetwork>(m.plant), *p);
  }
  Certificate cert;
  cert.theorem = Theorem::None;
  cert.verdict = Verdict::NotCertified;
  cert.evidence["note"] = "no structural certificate for a " + controller_kind(m.controller) + " controller on this plant";
  return cert;
}

}  // namespace reinstab
