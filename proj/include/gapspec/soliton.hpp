#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapspec/chebyshev.hpp"
#include "gapspec/potential.hpp"

namespace gapspec {

/// Frequency inside the spectral gap together with the derived parameters
/// mu = (1-omega)/(1+omega) and beta = sqrt(1-omega^2).
struct SolitonParams {
  double omega;
  double mu;
  double beta;

  explicit SolitonParams(double om) {
    if (!(om > -1.0 && om < 1.0))
      throw std::domain_error("SolitonParams: omega must lie in (-1, 1)");
    omega = om;
    mu = (1.0 - om) / (1.0 + om);
    beta = std::sqrt(1.0 - om * om);
  }
};

enum class Branch { plus, minus };

enum class ProfileSource {
  closed_form_1,
  closed_form_2a,
  closed_form_2b,
  appendix_a,
  general_n
};

enum class ExistenceCase { A1, A2, A3, A4, special };

enum class BoundaryBehavior { decaying, bounded_nondecaying, unbounded, singular };

inline const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

inline const char* to_string(ProfileSource s) {
  switch (s) {
    case ProfileSource::closed_form_1: return "closed_form_1";
    case ProfileSource::closed_form_2a: return "closed_form_2a";
    case ProfileSource::closed_form_2b: return "closed_form_2b";
    case ProfileSource::appendix_a: return "appendixA";
    case ProfileSource::general_n: return "general_n";
  }
  return "?";
}

inline const char* to_string(ExistenceCase c) {
  switch (c) {
    case ExistenceCase::A1: return "A1";
    case ExistenceCase::A2: return "A2";
    case ExistenceCase::A3: return "A3";
    case ExistenceCase::A4: return "A4";
    case ExistenceCase::special: return "special";
  }
  return "?";
}

inline const char* to_string(BoundaryBehavior b) {
  switch (b) {
    case BoundaryBehavior::decaying: return "decaying";
    case BoundaryBehavior::bounded_nondecaying: return "bounded-nondecaying";
    case BoundaryBehavior::unbounded: return "unbounded";
    case BoundaryBehavior::singular: return "singular";
  }
  return "?";
}

/// One admissible open omega-interval with its amplitude branch and the
/// solution behavior in the limit toward each endpoint.
struct ExistenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  Branch branch = Branch::plus;
  BoundaryBehavior lo_behavior = BoundaryBehavior::decaying;
  BoundaryBehavior hi_behavior = BoundaryBehavior::decaying;
};

/// Existence classification of decaying profiles for a coefficient set:
/// signs of A = phi(-1) and C = phi(1), roots of
/// phi(t) = a4 t^2 + 2 a3 t + (a1 + a2)/2 inside (-1, 1), and the
/// admissible omega-domain per branch.
struct ExistenceReport {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  std::vector<double> phi_roots;
  ExistenceCase case_label = ExistenceCase::A2;
  std::vector<ExistenceInterval> omega_domain;

  std::optional<Branch> branch_at(double omega) const {
    for (const auto& iv : omega_domain)
      if (omega > iv.lo && omega < iv.hi) return iv.branch;
    return std::nullopt;
  }
};

namespace detail {

inline double phi_of(const PotentialParams& p, double t) {
  return p.a4 * t * t + 2.0 * p.a3 * t + 0.5 * (p.a1 + p.a2);
}

inline double psi_of(const PotentialParams& p, double mu) {
  const double A = phi_of(p, -1.0);
  const double C = phi_of(p, 1.0);
  const double B = -2.0 * p.a4 + p.a1 + p.a2;
  return A * mu * mu + B * mu + C;
}

/// sech^2 without cosh overflow at large argument.
inline double sech2(double y) {
  const double e = std::exp(-std::abs(y));
  const double s = 2.0 * e / (1.0 + e * e);
  return s * s;
}

inline BoundaryBehavior root_endpoint_behavior(const PotentialParams& p, double t_e,
                                               bool double_root) {
  if (double_root) return BoundaryBehavior::unbounded;
  const double mu_e = (1.0 - t_e) / (1.0 + t_e);
  if (std::abs(psi_of(p, mu_e)) < 1e-10) return BoundaryBehavior::bounded_nondecaying;
  return BoundaryBehavior::decaying;
}

} // namespace detail

/// Classifies the admissible omega-domain and branch map for a coefficient
/// set. Rejects an identically vanishing nonlinearity.
inline ExistenceReport classify_existence(const PotentialParams& p) {
  if (p.a1 == 0.0 && p.a2 == 0.0 && p.a3 == 0.0 && p.a4 == 0.0)
    throw std::invalid_argument("classify_existence: zero potential has no solitons");

  ExistenceReport rep;
  rep.A = detail::phi_of(p, -1.0);
  rep.C = detail::phi_of(p, 1.0);
  rep.B = -2.0 * p.a4 + p.a1 + p.a2;

  const double c0 = 0.5 * (p.a1 + p.a2);
  if (p.a4 == 0.0 && p.a3 == 0.0 && c0 == 0.0)
    throw std::invalid_argument("classify_existence: potential vanishes on |u| = |v|");

  // roots of phi on (-1, 1); a double root is stored twice
  bool double_root = false;
  std::vector<double> roots;
  if (p.a4 != 0.0) {
    const double disc = 4.0 * p.a3 * p.a3 - 2.0 * p.a4 * (p.a1 + p.a2);
    if (std::abs(disc) < 1e-12) {
      const double t = -p.a3 / p.a4;
      if (t > -1.0 && t < 1.0) {
        roots = {t, t};
        double_root = true;
      }
    } else if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-2.0 * p.a3 - sq) / (2.0 * p.a4), (-2.0 * p.a3 + sq) / (2.0 * p.a4)})
        if (t > -1.0 && t < 1.0) roots.push_back(t);
      std::sort(roots.begin(), roots.end());
    }
  } else if (p.a3 != 0.0) {
    const double t = -c0 / (2.0 * p.a3);
    if (t > -1.0 && t < 1.0) roots.push_back(t);
  }
  rep.phi_roots = roots;

  const bool singular_plus = std::abs(rep.C) < 1e-12;
  const bool singular_minus = std::abs(rep.A) < 1e-12;

  if (singular_plus || singular_minus)
    rep.case_label = ExistenceCase::special;
  else if (rep.A < 0.0 && rep.C > 0.0)
    rep.case_label = ExistenceCase::A1;
  else if (rep.A > 0.0 && rep.C > 0.0)
    rep.case_label = ExistenceCase::A2;
  else if (rep.A < 0.0 && rep.C < 0.0)
    rep.case_label = ExistenceCase::A3;
  else
    rep.case_label = ExistenceCase::A4;

  // plus branch needs phi > 0 on (omega, 1]; minus branch needs phi < 0 on [-1, omega)
  if (!singular_plus && rep.C > 0.0) {
    ExistenceInterval iv;
    iv.branch = Branch::plus;
    iv.hi = 1.0;
    iv.hi_behavior = BoundaryBehavior::decaying;
    if (roots.empty()) {
      iv.lo = -1.0;
      iv.lo_behavior = BoundaryBehavior::decaying;
    } else {
      iv.lo = roots.back();
      iv.lo_behavior = detail::root_endpoint_behavior(p, iv.lo, double_root);
    }
    rep.omega_domain.push_back(iv);
  }
  if (!singular_minus && rep.A < 0.0) {
    ExistenceInterval iv;
    iv.branch = Branch::minus;
    iv.lo = -1.0;
    iv.lo_behavior = BoundaryBehavior::decaying;
    if (roots.empty()) {
      iv.hi = 1.0;
      iv.hi_behavior = BoundaryBehavior::decaying;
    } else {
      iv.hi = roots.front();
      iv.hi_behavior = detail::root_endpoint_behavior(p, iv.hi, double_root);
    }
    rep.omega_domain.push_back(iv);
  }
  return rep;
}

/// Amplitude Q(x) >= 0 of the decaying profile on the given branch,
/// evaluated through overflow-safe sech forms.
inline double amplitude_Q(double x, const SolitonParams& sp, const PotentialParams& p,
                          Branch branch) {
  const double A = detail::phi_of(p, -1.0);
  const double C = detail::phi_of(p, 1.0);
  const double B = -2.0 * p.a4 + p.a1 + p.a2;
  const double mu = sp.mu;
  const double psi = A * mu * mu + B * mu + C;
  const double s2 = detail::sech2(sp.beta * x);

  double num, den;
  if (branch == Branch::plus) {
    num = (1.0 - sp.omega) * ((mu + 1.0) * s2 - mu * s2 * s2);
    den = psi - (B * mu + 2.0 * A * mu * mu) * s2 + A * mu * mu * s2 * s2;
  } else {
    num = (sp.omega - 1.0) * ((mu + 1.0) * s2 - s2 * s2);
    den = psi - (B * mu + 2.0 * C) * s2 + C * s2 * s2;
  }
  if (x == 0.0 && branch == Branch::plus && std::abs(den) < 1e-14 && std::abs(num) < 1e-14)
    throw std::domain_error("amplitude_Q: degenerate amplitude at x = 0");
  if (!(std::abs(den) > 1e-300))
    throw std::domain_error("amplitude_Q: singular denominator");
  const double Q = num / den;
  if (Q < -1e-12) throw std::domain_error("amplitude_Q: negative amplitude");
  return std::max(Q, 0.0);
}

/// Phase Theta(x). On the plus branch tan(Theta) = -sqrt(mu) tanh(beta x)
/// with Theta(0) = 0. On the minus branch tan(Theta) = -sqrt(mu) coth(beta x);
/// the one-sided value at x = 0 is -pi/2 and the x < 0 values continue the
/// branch shifted by -pi so Theta is continuous away from the origin.
inline double phase_Theta(double x, const SolitonParams& sp, Branch branch) {
  const double pi = std::acos(-1.0);
  const double rmu = std::sqrt(sp.mu);
  if (branch == Branch::plus) return std::atan(-rmu * std::tanh(sp.beta * x));
  if (x == 0.0) return -pi / 2.0;
  double th = std::atan(-rmu / std::tanh(sp.beta * x));
  if (x < 0.0) th -= pi;
  return th;
}

/// Sampled profile (u0, v0 = conj(u0)) with construction metadata. Profiles
/// built on a ChebGrid keep a handle to it so residuals and quadrature can
/// reuse the differentiation matrix and weights.
struct SolitonProfile {
  double omega = 0.0;
  Branch branch = Branch::plus;
  ProfileSource source = ProfileSource::appendix_a;
  Eigen::VectorXd x_samples;
  Eigen::VectorXcd u0;
  Eigen::VectorXcd v0;
  std::shared_ptr<const ChebGrid> grid;
};

/// Alias for the two closed-form model families.
struct ModelAlias {
  enum class Kind { kerr, grating };
  Kind kind = Kind::kerr;
  double param = 0.0;  ///< rho for kerr, s for grating
};

namespace detail {

inline SolitonProfile make_profile(Eigen::VectorXd x, Eigen::VectorXcd u,
                                   double omega, Branch br, ProfileSource src,
                                   std::shared_ptr<const ChebGrid> grid) {
  SolitonProfile pr;
  pr.omega = omega;
  pr.branch = br;
  pr.source = src;
  pr.x_samples = std::move(x);
  pr.u0 = std::move(u);
  pr.v0 = pr.u0.conjugate();
  pr.grid = std::move(grid);
  return pr;
}

/// cosh and sinh scaled by e^{-|y|}, for ratios that stay finite at large |y|.
struct ScaledHyp {
  double ch;  ///< cosh(y) * e^{-|y|}
  double sh;  ///< sinh(y) * e^{-|y|}
};

inline ScaledHyp scaled_hyp(double y) {
  const double e = std::exp(-2.0 * std::abs(y));
  double ch = 0.5 * (1.0 + e);
  double sh = 0.5 * (1.0 - e);
  if (y < 0.0) sh = -sh;
  return {ch, sh};
}

} // namespace detail

/// Explicit closed-form profile of the kerr family
/// u0 = sqrt(2(1-omega)/(1+rho)) / (cosh(beta x) + i sqrt(mu) sinh(beta x)).
inline Eigen::VectorXcd closed_form_kerr(const Eigen::VectorXd& x,
                                         const SolitonParams& sp, double rho) {
  if (!(rho > -1.0)) throw std::domain_error("closed_form_kerr: requires rho > -1");
  const double amp = std::sqrt(2.0 * (1.0 - sp.omega) / (1.0 + rho));
  const double rmu = std::sqrt(sp.mu);
  Eigen::VectorXcd u(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double y = sp.beta * x(j);
    auto [ch, sh] = detail::scaled_hyp(y);
    // amp / (cosh + i sqrt(mu) sinh) = amp e^{-|y|} / (ch + i sqrt(mu) sh)
    u(j) = amp * std::exp(-std::abs(y)) / cxd(ch, rmu * sh);
  }
  return u;
}

/// Explicit closed-form grating profile for omega > 0, s > -1:
/// u0 = sqrt((1-omega)/2) (cosh - i sqrt(mu) sinh)/sqrt(Delta_plus) with
/// Delta_plus equal to half the plus-branch amplitude denominator.
inline Eigen::VectorXcd closed_form_grating_2a(const Eigen::VectorXd& x,
                                               const SolitonParams& sp, double s) {
  if (!(sp.omega > 0.0 && s > -1.0))
    throw std::domain_error("closed_form_grating_2a: requires omega > 0 and s > -1");
  const PotentialParams p = grating_potential(s);
  const double A = detail::phi_of(p, -1.0);
  const double C = detail::phi_of(p, 1.0);
  const double B = -2.0 * p.a4 + p.a1 + p.a2;
  const double mu = sp.mu;
  const double psi = A * mu * mu + B * mu + C;
  const double amp = std::sqrt(0.5 * (1.0 - sp.omega));
  const double rmu = std::sqrt(mu);
  Eigen::VectorXcd u(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double y = sp.beta * x(j);
    auto [ch, sh] = detail::scaled_hyp(y);
    const double e2 = std::exp(-2.0 * std::abs(y));
    // Delta_plus * e^{-4|y|}, from the ch^4, ch^2, const terms of den/2
    const double d = 0.5 * (psi * ch * ch * ch * ch -
                            (B * mu + 2.0 * A * mu * mu) * ch * ch * e2 +
                            A * mu * mu * e2 * e2);
    if (!(d > 0.0))
      throw std::domain_error("closed_form_grating_2a: non-positive denominator");
    u(j) = amp * cxd(ch, -rmu * sh) / std::sqrt(d) * std::exp(-std::abs(y));
  }
  return u;
}

/// Explicit closed-form grating profile for omega < 0, s < 1:
/// u0 = sqrt((1-omega)/2) (sinh - i sqrt(mu) cosh)/sqrt(Delta_minus) with
/// Delta_minus equal to minus half the minus-branch amplitude denominator.
inline Eigen::VectorXcd closed_form_grating_2b(const Eigen::VectorXd& x,
                                               const SolitonParams& sp, double s) {
  if (!(sp.omega < 0.0 && s < 1.0))
    throw std::domain_error("closed_form_grating_2b: requires omega < 0 and s < 1");
  const PotentialParams p = grating_potential(s);
  const double A = detail::phi_of(p, -1.0);
  const double C = detail::phi_of(p, 1.0);
  const double B = -2.0 * p.a4 + p.a1 + p.a2;
  const double mu = sp.mu;
  const double psi = A * mu * mu + B * mu + C;
  const double amp = std::sqrt(0.5 * (1.0 - sp.omega));
  const double rmu = std::sqrt(mu);
  Eigen::VectorXcd u(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double y = sp.beta * x(j);
    auto [ch, sh] = detail::scaled_hyp(y);
    const double e2 = std::exp(-2.0 * std::abs(y));
    const double d = -0.5 * (psi * ch * ch * ch * ch -
                             (B * mu + 2.0 * C) * ch * ch * e2 + C * e2 * e2);
    if (!(d > 0.0))
      throw std::domain_error("closed_form_grating_2b: non-positive denominator");
    u(j) = amp * cxd(sh, -rmu * ch) / std::sqrt(d) * std::exp(-std::abs(y));
  }
  return u;
}

/// Samples the closed form selected by the model alias; the grating family
/// picks its formula from the sign of omega.
inline SolitonProfile soliton_closed_form(const ChebGrid& grid, const SolitonParams& sp,
                                          const ModelAlias& model) {
  auto gp = std::make_shared<const ChebGrid>(grid);
  if (model.kind == ModelAlias::Kind::kerr) {
    return detail::make_profile(grid.nodes, closed_form_kerr(grid.nodes, sp, model.param),
                                sp.omega, Branch::plus, ProfileSource::closed_form_1, gp);
  }
  if (sp.omega > 0.0)
    return detail::make_profile(grid.nodes,
                                closed_form_grating_2a(grid.nodes, sp, model.param),
                                sp.omega, Branch::plus, ProfileSource::closed_form_2a, gp);
  if (sp.omega < 0.0)
    return detail::make_profile(grid.nodes,
                                closed_form_grating_2b(grid.nodes, sp, model.param),
                                sp.omega, Branch::minus, ProfileSource::closed_form_2b, gp);
  throw std::domain_error("soliton_closed_form: grating profile degenerates at omega = 0");
}

/// Reconstruction u0 = sqrt(Q) e^{i Theta} from the amplitude and phase of
/// the admissible branch at omega.
inline SolitonProfile soliton_appendix_a(const ChebGrid& grid, const SolitonParams& sp,
                                         const PotentialParams& p) {
  const ExistenceReport rep = classify_existence(p);
  const auto br = rep.branch_at(sp.omega);
  if (!br)
    throw std::domain_error("soliton_appendix_a: omega outside the admissible domain");
  Eigen::VectorXcd u(grid.nodes.size());
  for (Eigen::Index j = 0; j < grid.nodes.size(); ++j) {
    const double Q = amplitude_Q(grid.nodes(j), sp, p, *br);
    const double th = phase_Theta(grid.nodes(j), sp, *br);
    u(j) = std::sqrt(Q) * std::exp(cxd(0.0, th));
  }
  return detail::make_profile(grid.nodes, u, sp.omega, *br, ProfileSource::appendix_a,
                              std::make_shared<const ChebGrid>(grid));
}

/// Profile of the homogeneous interaction of monomial order 2n with angular
/// coefficients A_0..A_n: Theta has the plus-branch shape with rate scaled
/// by (n-1) and Q solves Q^{n-1} = (cos 2Theta - omega)/sum_s A_s cos(2 s Theta).
inline SolitonProfile soliton_general_n(const ChebGrid& grid, const SolitonParams& sp,
                                        const std::vector<double>& A_coeffs, int n) {
  if (n < 2) throw std::invalid_argument("soliton_general_n: requires n >= 2");
  if (A_coeffs.size() != static_cast<size_t>(n) + 1)
    throw std::invalid_argument("soliton_general_n: needs exactly n+1 coefficients");
  Eigen::VectorXcd u(grid.nodes.size());
  for (Eigen::Index j = 0; j < grid.nodes.size(); ++j) {
    const double y = (n - 1) * sp.beta * grid.nodes(j);
    const double s2 = detail::sech2(y);
    const double th = std::atan(-std::sqrt(sp.mu) * std::tanh(y));
    // cos 2Theta - omega = (1-omega) sech^2(y) / (1 + mu tanh^2(y)), which
    // avoids the tail cancellation of evaluating cos(2Theta) directly
    const double z2 = sp.mu * (1.0 - s2);
    const double num = (1.0 - sp.omega) * s2 / (1.0 + z2);
    const double c2 = (1.0 - z2) / (1.0 + z2);
    double den = A_coeffs[0];
    double c_prev = 1.0, c_cur = c2;
    for (int s = 1; s <= n; ++s) {
      den += A_coeffs[s] * c_cur;
      const double c_next = 2.0 * c2 * c_cur - c_prev;
      c_prev = c_cur;
      c_cur = c_next;
    }
    if (!(den > 0.0))
      throw std::domain_error("soliton_general_n: sign-incompatible denominator");
    const double Q = std::pow(num / den, 1.0 / (n - 1));
    u(j) = std::sqrt(Q) * std::exp(cxd(0.0, th));
  }
  return detail::make_profile(grid.nodes, u, sp.omega, Branch::plus,
                              ProfileSource::general_n,
                              std::make_shared<const ChebGrid>(grid));
}

/// Max over interior nodes of the stationary-equation defect
/// |i u0' - omega u0 + v0 - dW/dubar| + |-i v0' - omega v0 + u0 - dW/dvbar|.
inline double ode_residual(const SolitonProfile& profile, const PotentialParams& p) {
  if (!profile.grid)
    throw std::invalid_argument("ode_residual: profile was not sampled on a grid");
  const ChebGrid& g = *profile.grid;
  const Eigen::VectorXcd du = g.diff * profile.u0;
  const Eigen::VectorXcd dv = g.diff * profile.v0;
  const cxd i1(0.0, 1.0);
  double worst = 0.0;
  for (int j = 1; j < g.N; ++j) {
    auto [gu, gv] = grad_W({profile.u0(j), profile.v0(j)}, p);
    const cxd r1 = i1 * du(j) - profile.omega * profile.u0(j) + profile.v0(j) - gu;
    const cxd r2 = -i1 * dv(j) - profile.omega * profile.v0(j) + profile.u0(j) - gv;
    worst = std::max(worst, std::abs(r1) + std::abs(r2));
  }
  return worst;
}

/// Quadrature values of the conserved densities: power Q, momentum P,
/// Hamiltonian H, and the combination Lambda = H + omega Q.
struct ConservedQuantities {
  double Q = 0.0;
  double P = 0.0;
  double H = 0.0;
  double Lambda = 0.0;
  double boundary_value = 0.0;  ///< max |u0| at the domain ends
};

inline ConservedQuantities conserved_quantities(const SolitonProfile& profile,
                                                const PotentialParams& p) {
  if (!profile.grid)
    throw std::invalid_argument("conserved_quantities: profile was not sampled on a grid");
  const ChebGrid& g = *profile.grid;
  const Eigen::VectorXcd du = g.diff * profile.u0;
  const Eigen::VectorXcd dv = g.diff * profile.v0;

  Eigen::VectorXd qd(g.N + 1), pd(g.N + 1), hd(g.N + 1);
  const cxd i1(0.0, 1.0);
  for (int j = 0; j <= g.N; ++j) {
    const cxd u = profile.u0(j), v = profile.v0(j);
    const cxd ub = std::conj(u), vb = std::conj(v);
    qd(j) = std::norm(u) + std::norm(v);
    pd(j) = std::real(0.5 * i1 * (u * std::conj(du(j)) - du(j) * ub +
                                  v * std::conj(dv(j)) - dv(j) * vb));
    hd(j) = eval_W({u, v}, p) - std::real(v * ub + u * vb) +
            std::real(0.5 * i1 * (u * std::conj(du(j)) - du(j) * ub)) -
            std::real(0.5 * i1 * (v * std::conj(dv(j)) - dv(j) * vb));
  }

  ConservedQuantities out;
  out.Q = g.weights.dot(qd);
  out.P = g.weights.dot(pd);
  out.H = g.weights.dot(hd);
  out.Lambda = out.H + profile.omega * out.Q;
  out.boundary_value = std::max(std::abs(profile.u0(0)), std::abs(profile.u0(g.N)));
  return out;
}

/// Domain halfwidth policy: wide enough for the e^{-beta |x|} tails while
/// keeping the core resolvable, via the distance of the nearest complex
/// singularity of the amplitude from the real axis.
inline double default_halfwidth(double omega) {
  const SolitonParams sp(omega);
  const double d_pole = std::atan(1.0 / std::sqrt(sp.mu)) / sp.beta;
  return std::clamp(std::min(20.0 / sp.beta, 28.0 * d_pole), 12.0, 200.0);
}

} // namespace gapspec
