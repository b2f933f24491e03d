// Acceptance gate: twelve go/no-go checks with pinned tolerances.
// Prints one verdict line per criterion; the exit code is the number of
// failed criteria.

#include <gapspec/gapspec.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

using namespace gapspec;
using cxd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

int g_failed = 0;

void verdict(int idx, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s (%s)\n", idx, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig production_config(const PotentialParams& p, int N) {
  RunConfig cfg;
  cfg.potential = p;
  cfg.grid.N = N;
  cfg.tolerances.tol_band = 2.5e-4;
  cfg.tolerances.tol_match = 5e-3;
  cfg.jobs = 1;
  return cfg;
}

TolSet production_tols() {
  TolSet t;
  t.tol_band = 2.5e-4;
  t.tol_match = 5e-3;
  return t;
}

double hausdorff(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = 1e300;
    for (Eigen::Index k = 0; k < b.size(); ++k)
      best = std::min(best, std::abs(a(i) - b(k)));
    h = std::max(h, best);
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    double best = 1e300;
    for (Eigen::Index k = 0; k < a.size(); ++k)
      best = std::min(best, std::abs(b(i) - a(k)));
    h = std::max(h, best);
  }
  return h;
}

// 1. Closed-form profiles solve the stationary system to 1e-8 at N = 128
//    on the halfwidth 20/beta, in under a second.
void c1() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  const ModelAlias kerr{ModelAlias::Kind::kerr, 0.0};
  const ModelAlias grating{ModelAlias::Kind::grating, 0.0};
  const std::vector<double> om_kerr = {-0.9, -0.5, 0.0, 0.5, 0.9};
  const std::vector<double> om_grat = {-0.9, -0.5, 0.5, 0.9};
  const std::pair<ModelAlias, std::vector<double>> runs[] = {{kerr, om_kerr},
                                                             {grating, om_grat}};
  for (const auto& [model, omegas] : runs) {
    const PotentialParams p = model.kind == ModelAlias::Kind::kerr
                                  ? kerr_potential(model.param)
                                  : grating_potential(model.param);
    for (double om : omegas) {
      const SolitonParams sp(om);
      const ChebGrid grid = build_grid(128, 20.0 / sp.beta);
      const SolitonProfile pr = soliton_closed_form(grid, sp, model);
      worst = std::max(worst, ode_residual(pr, p));
    }
  }
  const double dt = seconds_since(t0);
  verdict(1, worst < 1e-8 && dt < 1.0,
          fmt("max stationary residual %.3e vs 1e-08 at N=128, %.2f s vs 1 s", worst, dt));
}

// 2. Closed forms and the general amplitude-phase construction agree to
//    1e-10 after phase alignment, five frequencies per model.
void c2() {
  double worst = 0.0;
  const std::pair<ModelAlias, std::vector<double>> runs[] = {
      {{ModelAlias::Kind::kerr, 0.5}, {-0.9, -0.5, 0.0, 0.5, 0.9}},
      {{ModelAlias::Kind::grating, 0.5}, {-0.8, -0.4, 0.3, 0.6, 0.9}}};
  for (const auto& [model, omegas] : runs) {
    const PotentialParams p = model.kind == ModelAlias::Kind::kerr
                                  ? kerr_potential(model.param)
                                  : grating_potential(model.param);
    for (double om : omegas) {
      const SolitonParams sp(om);
      const ChebGrid grid = build_grid(128, default_halfwidth(om));
      const SolitonProfile a = soliton_closed_form(grid, sp, model);
      const SolitonProfile b = soliton_appendix_a(grid, sp, p);
      const Eigen::Index c = a.u0.size() / 2;
      cxd phase = b.u0(c) / a.u0(c);
      phase /= std::abs(phase);
      const double du = (a.u0 * phase - b.u0).cwiseAbs().maxCoeff();
      const double dv = (a.v0 * phase - b.v0).cwiseAbs().maxCoeff();
      worst = std::max(worst, std::max(du, dv));
    }
  }
  verdict(2, worst < 1e-10, fmt("max aligned profile difference %.3e vs 1e-10", worst));
}

// 3. The orthogonal reduction block-diagonalizes the full linearization to
//    1e-12 at N = 64 and the reduction matrix is orthogonal to machine
//    precision.
void c3() {
  const double om = 0.5;
  const PotentialParams p = kerr_potential(0.0);
  const ChebGrid grid = build_grid(64, default_halfwidth(om));
  const SolitonProfile pr = soliton_appendix_a(grid, SolitonParams(om), p);
  const int n = 65;
  const Eigen::MatrixXcd Hfull = assemble_full(grid, pr, p, om);
  const auto [Hp, Hm] = assemble_blocks(grid, pr, p, om);
  const Eigen::MatrixXd S = kron_identity(s4_matrix(), n);
  const Eigen::MatrixXcd Sc = S.cast<cxd>();
  const Eigen::MatrixXcd T = Sc.transpose() * Hfull * Sc;
  const int m = 2 * n;
  const double off = std::max(T.topRightCorner(m, m).cwiseAbs().maxCoeff(),
                              T.bottomLeftCorner(m, m).cwiseAbs().maxCoeff());
  const double diag = std::max((T.topLeftCorner(m, m) - Hp).cwiseAbs().maxCoeff(),
                               (T.bottomRightCorner(m, m) - Hm).cwiseAbs().maxCoeff());
  const double orth =
      (S * S.transpose() - Eigen::MatrixXd::Identity(4 * n, 4 * n)).cwiseAbs().maxCoeff();
  const double eps = std::numeric_limits<double>::epsilon();
  verdict(3, off < 1e-12 && diag < 1e-12 && orth <= eps,
          fmt("off-block %.3e, block mismatch %.3e vs 1e-12, orthogonality %.3e vs %.3e",
              off, diag, orth, eps));
}

// 4. Gauge and translation kernels annihilate to 1e-6 at N = 256 on a
//    fixed halfwidth, and the interior linearization has two matching
//    near-zero eigenvalues.
void c4() {
  const double om = 0.9;
  const PotentialParams p = kerr_potential(0.0);
  const ChebGrid grid = build_grid(256, 20.0);
  const SolitonProfile pr = soliton_appendix_a(grid, SolitonParams(om), p);
  const int n = 257;
  const auto [Hp, Hm] = assemble_blocks(grid, pr, p, om);
  const Eigen::VectorXcd du = spectral_derivative(grid, pr.u0);
  const Eigen::VectorXcd dv = spectral_derivative(grid, pr.v0);
  Eigen::VectorXcd t_mode(2 * n), g_mode(2 * n);
  t_mode << du, dv;
  g_mode << pr.u0, -pr.v0;
  const double r_t = (Hp * t_mode).cwiseAbs().maxCoeff();
  const double r_g = (Hm * g_mode).cwiseAbs().maxCoeff();

  const Eigen::MatrixXcd Hfull = assemble_full(grid, pr, p, om);
  const Eigen::MatrixXcd Hi = interior_matrix(Hfull, n);
  const Eigen::VectorXcd ev = eig_general(Hi);
  std::vector<double> mags(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) mags[i] = std::abs(ev(i));
  std::sort(mags.begin(), mags.end());
  verdict(4, r_t < 1e-6 && r_g < 1e-6 && mags[0] < 1e-6 && mags[1] < 1e-6,
          fmt("kernel residuals %.3e, %.3e vs 1e-06; two smallest eigenvalues %.3e, %.3e",
              r_t, r_g, mags[0], mags[1]));
}

// 5. Spectral symmetry: negation closure of the raw dynamics spectrum and
//    quadruple closure of the reported isolated set to 1e-8, similarity of
//    the sigma-weighted full operator with the reduced dynamics operator to
//    1e-8, and the gamma = -lambda^2 cross-check to 1e-6.
void c5() {
  const PotentialParams kerr0 = kerr_potential(0.0);
  const TolSet tols = production_tols();

  // raw negation closure of the direct dynamics spectrum
  double neg = 0.0;
  {
    const double om = 0.9;
    const ChebGrid grid = build_grid(128, default_halfwidth(om));
    const SolitonProfile pr = soliton_appendix_a(grid, SolitonParams(om), kerr0);
    const auto [Hp, Hm] = assemble_blocks(grid, pr, kerr0, om);
    const Eigen::MatrixXcd L =
        assemble_L(interior_matrix(Hp, 129), interior_matrix(Hm, 129));
    const Eigen::VectorXcd ev = eig_general(L);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      double best = 1e300;
      for (Eigen::Index k = 0; k < ev.size(); ++k)
        best = std::min(best, std::abs(ev(i) + ev(k)));
      neg = std::max(neg, best);
    }
  }

  // quadruple closure of the production isolated set at an unstable omega
  double quad = 0.0;
  {
    const RunConfig cfg = production_config(kerr0, 256);
    CountOptions opt;
    opt.need_H = false;
    opt.want_spectra = true;
    PerOmegaSpectra ps;
    counts_production(kerr0, -0.95, cfg, CountingPolicy{}, opt, &ps);
    std::vector<cxd> all;
    for (const IsolatedEigen& e : ps.L.isolated)
      for (cxd z : e.members) all.push_back(z);
    auto dist_to = [&](cxd target) {
      double best = 1e300;
      for (cxd z : all) best = std::min(best, std::abs(z - target));
      return best;
    };
    for (cxd z : all) quad = std::max(quad, std::max(dist_to(-z), dist_to(std::conj(z))));
    if (all.empty()) quad = 1e300;
  }

  // similarity of the weighted full operator with the reduced dynamics
  double sim = 0.0;
  {
    const double om = 0.3;
    const PotentialParams p = kerr_potential(0.5);
    const ChebGrid grid = build_grid(64, default_halfwidth(om));
    const SolitonProfile pr = soliton_appendix_a(grid, SolitonParams(om), p);
    const int n = 65;
    const Eigen::MatrixXcd Hfull = assemble_full(grid, pr, p, om);
    const auto [Hp, Hm] = assemble_blocks(grid, pr, p, om);
    const cxd i1(0.0, 1.0);
    const Eigen::MatrixXcd dyn =
        -i1 * sigma4_big(n - 2).cast<cxd>() * interior_matrix(Hfull, n);
    const Eigen::MatrixXcd L =
        assemble_L(interior_matrix(Hp, n), interior_matrix(Hm, n));
    sim = hausdorff(eig_general(dyn), eig_general(L));
  }

  // gamma vs lambda^2 between the dynamics and product spectra
  double cross_worst = 0.0;
  int cross_outliers = 0;
  {
    const double om = 0.5;
    const ChebGrid grid = build_grid(96, default_halfwidth(om));
    const SolitonProfile pr = soliton_appendix_a(grid, SolitonParams(om), kerr0);
    const int n = 97;
    const auto [Hp, Hm] = assemble_blocks(grid, pr, kerr0, om);
    const Eigen::MatrixXcd Hpi = interior_matrix(Hp, n);
    const Eigen::MatrixXcd Hmi = interior_matrix(Hm, n);
    const Eigen::MatrixXcd L = assemble_L(Hpi, Hmi);
    const auto [Mp, Mm] = product_blocks(Hpi, Hmi);
    (void)Mm;
    auto to_vec = [](const Eigen::VectorXcd& v) {
      return std::vector<cxd>(v.data(), v.data() + v.size());
    };
    const Spectrum sL = classify(to_vec(eig_general(L)), om, OperatorTag::L, tols);
    const Spectrum sMp = classify(to_vec(eig_general(Mp)), om, OperatorTag::Mplus, tols);
    const CrosscheckReport cr = crosscheck_gamma(sL, sMp);
    cross_worst = cr.worst_matched;
    cross_outliers = cr.outliers;
  }

  verdict(5,
          neg < 1e-8 && quad < 1e-8 && sim < 1e-8 && cross_worst < 1e-6 &&
              cross_outliers == 0,
          fmt("negation %.3e, quadruple %.3e, similarity %.3e vs 1e-08; "
              "cross-check %.3e vs 1e-06 with %d outliers",
              neg, quad, sim, cross_worst, cross_outliers));
}

// 6. The zero-potential dynamics spectrum is purely imaginary with every
//    eigenvalue at least edge - 1e-3 from the origin, at three frequencies.
void c6() {
  const PotentialParams kerr0 = kerr_potential(0.0);
  const TolSet tols = production_tols();
  double max_re = 0.0, worst_edge = 1e300;
  int isolated = 0;
  for (double om : {0.0, 0.5, -0.5}) {
    const ChebGrid grid = build_grid(128, 20.0);
    const int n = 129;
    SolitonProfile zero;
    zero.omega = om;
    zero.x_samples = grid.nodes;
    zero.u0 = Eigen::VectorXcd::Zero(n);
    zero.v0 = Eigen::VectorXcd::Zero(n);
    const auto [Hp, Hm] = assemble_blocks(grid, zero, kerr0, om);
    const auto [Mp, Mm] = product_blocks(interior_matrix(Hp, n), interior_matrix(Hm, n));
    (void)Mm;
    const Eigen::VectorXcd ev = eig_general(Mp);
    const std::vector<cxd> gam(ev.data(), ev.data() + ev.size());
    const LAnalysis a = detail::partition_gammas(gam, om, tols, CountingPolicy{});
    isolated += static_cast<int>(a.members.size());
    const double edge = 1.0 - std::abs(om);
    std::vector<cxd> kept = a.kernel_gammas;
    kept.insert(kept.end(), a.band_gammas.begin(), a.band_gammas.end());
    for (cxd g : kept) {
      const cxd lam = lambda_from_gamma(g);
      max_re = std::max(max_re, std::abs(lam.real()));
      worst_edge = std::min(worst_edge, lam.imag() - (edge - 1e-3));
    }
  }
  verdict(6, isolated == 0 && max_re < 1e-6 && worst_edge >= 0.0,
          fmt("isolated %d, max |Re lambda| %.3e vs 1e-06, edge slack %.3e", isolated,
              max_re, worst_edge));
}

// 7. Counting stability: the isolated counts at two reference frequencies
//    match the expected pattern at N = 256 and N = 384, under 30 s each.
void c7() {
  const PotentialParams kerr0 = kerr_potential(0.0);
  const TolSet tols = production_tols();
  struct Expected {
    double omega;
    int ip, rp, q, hp, hm;
  };
  const Expected cases[] = {{0.9, 1, 0, 0, 1, 1}, {-0.95, 0, 0, 3, 2, 5}};
  bool ok = true;
  double max_dt = 0.0;
  std::string seen;
  for (const Expected& e : cases) {
    for (int N : {256, 384}) {
      const auto t0 = Clock::now();
      const Counts c = counts_single(kerr0, e.omega, N, GridSpecCfg{}, tols);
      const double dt = seconds_since(t0);
      max_dt = std::max(max_dt, dt);
      const bool match = c.L_imag_pairs == e.ip && c.L_real_pairs == e.rp &&
                         c.L_quartets == e.q && c.Hplus_isolated == e.hp &&
                         c.Hminus_isolated == e.hm;
      ok = ok && match && dt < 30.0;
      seen += fmt("%s[%g,N=%d:%d,%d,%d,%d,%d]", seen.empty() ? "" : " ", e.omega, N,
                  c.L_imag_pairs, c.L_real_pairs, c.L_quartets, c.Hplus_isolated,
                  c.Hminus_isolated);
    }
  }
  verdict(7, ok, fmt("counts %s, slowest %.1f s vs 30 s", seen.c_str(), max_dt));
}

// 8. Bifurcation refinement lands in the expected windows for the quartet
//    birth and edge events of the two reference models.
void c8() {
  const PotentialParams kerr0 = kerr_potential(0.0);
  const PotentialParams grat0 = grating_potential(0.0);
  struct Job {
    PotentialParams p;
    double lo, hi;
    EventKind kind;
    double win_lo, win_hi;
  };
  const Job jobs[] = {
      {kerr0, -0.30, -0.10, EventKind::quartet_birth, -0.22, -0.14},
      {kerr0, -0.70, -0.40, EventKind::edge_bifurcation_Hminus, -0.58, -0.50},
      {grat0, 0.30, 0.60, EventKind::edge_bifurcation_Hplus, 0.40, 0.50},
      {grat0, 0.05, 0.30, EventKind::pair_birth, 0.10, 0.20}};
  bool ok = true;
  std::string seen;
  for (const Job& j : jobs) {
    const RunConfig cfg = production_config(j.p, 256);
    const double om = locate_bifurcation(j.p, j.lo, j.hi, j.kind, 5e-3, cfg);
    ok = ok && om > j.win_lo && om < j.win_hi;
    seen += fmt("%s%s=%.4f", seen.empty() ? "" : " ", to_string(j.kind), om);
  }
  verdict(8, ok, seen);
}

// 9. The degenerate quintic-free model has no isolated dynamics
//    eigenvalues anywhere in the gap.
void c9() {
  const PotentialParams p = thirring_potential();
  const RunConfig cfg = production_config(p, 256);
  CountOptions opt;
  opt.need_H = false;
  int bad = 0, total = 0;
  double worst_om = 0.0;
  for (int i = 0; i < 18; ++i) {
    const double om = 0.85 - 0.1 * i;
    const Counts c = counts_production(p, om, cfg, CountingPolicy{}, opt);
    const int iso = c.L_imag_pairs + c.L_real_pairs + c.L_quartets;
    ++total;
    if (iso != 0) {
      ++bad;
      worst_om = om;
    }
  }
  verdict(9, bad == 0,
          bad == 0 ? fmt("no isolated eigenvalues over %d frequencies", total)
                   : fmt("%d of %d frequencies reported isolated eigenvalues, e.g. "
                         "omega=%.3f",
                         bad, total, worst_om));
}

// 10. Over the two instability-map sweeps the number of isolated dynamics
//     groups never exceeds the total isolated count of the two reduced
//     blocks.
void c10() {
  bool ok = true;
  int samples = 0, min_slack = 1 << 20;
  const std::pair<PotentialParams, std::array<double, 3>> runs[] = {
      {kerr_potential(0.0), {-0.95, 0.95, 40}},
      {grating_potential(0.0), {0.05, 0.95, 18}}};
  for (const auto& [p, r] : runs) {
    const RunConfig cfg = production_config(p, 256);
    const SweepResult res =
        sweep(p, r[0], r[1], static_cast<int>(r[2]), cfg, CountingPolicy{}, false, 1);
    for (const Counts& c : res.report.counts) {
      const int iso_L = c.L_imag_pairs + c.L_real_pairs + c.L_quartets;
      const int slack = c.Hplus_isolated + c.Hminus_isolated - iso_L;
      min_slack = std::min(min_slack, slack);
      ok = ok && slack >= 0;
      ++samples;
    }
  }
  verdict(10, ok, fmt("bound held at %d samples, minimum slack %d", samples, min_slack));
}

// 11. Conserved quantities of the reference soliton at the gap center.
void c11() {
  const PotentialParams p = kerr_potential(0.0);
  const ChebGrid grid = build_grid(256, 20.0);
  const SolitonProfile pr =
      soliton_closed_form(grid, SolitonParams(0.0), ModelAlias{ModelAlias::Kind::kerr, 0.0});
  const ConservedQuantities c = conserved_quantities(pr, p);
  const double dq = std::abs(c.Q - 2.0 * M_PI);
  verdict(11, dq < 1e-6 && std::abs(c.P) < 1e-10,
          fmt("|Q - 2pi| = %.3e vs 1e-06, |P| = %.3e vs 1e-10", dq, std::abs(c.P)));
}

// 12. Spectral differentiation converges: doubling the resolution improves
//     the sech derivative by at least three orders of magnitude.
void c12() {
  auto deriv_err = [](int N) {
    const ChebGrid grid = build_grid(N, 10.0);
    Eigen::VectorXcd f(N + 1), exact(N + 1);
    for (int j = 0; j <= N; ++j) {
      const double x = grid.nodes(j);
      f(j) = 1.0 / std::cosh(x);
      exact(j) = -std::tanh(x) / std::cosh(x);
    }
    return (spectral_derivative(grid, f) - exact).cwiseAbs().maxCoeff();
  };
  const double e64 = deriv_err(64);
  const double e128 = deriv_err(128);
  const double ratio = e64 / e128;
  verdict(12, ratio >= 1e3, fmt("error %.3e at N=64, %.3e at N=128, ratio %.1f", e64,
                                e128, ratio));
}

} // namespace

int main() {
  using CriterionFn = void (*)();
  const CriterionFn checks[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  for (int i = 0; i < 12; ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      verdict(i + 1, false, fmt("exception: %s", e.what()));
    }
  }
  std::printf("acceptance: %d of 12 criteria passed\n", 12 - g_failed);
  return g_failed;
}
