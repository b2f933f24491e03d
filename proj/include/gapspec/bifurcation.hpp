#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gapspec/chebyshev.hpp"
#include "gapspec/config.hpp"
#include "gapspec/io.hpp"
#include "gapspec/operators.hpp"
#include "gapspec/parallel.hpp"
#include "gapspec/potential.hpp"
#include "gapspec/soliton.hpp"
#include "gapspec/spectrum.hpp"

namespace gapspec {

/// Structural counting rules applied on top of classification. These are
/// resolution-scale guards tuned for the production grids (N = 256 base);
/// each constant is documented next to its roles in README.
struct CountingPolicy {
  double gamma_floor = 1.1e-9;      ///< |gamma| below: generalized-kernel cluster
  double tol_gamma_imag = 1e-6;     ///< relative realness test for gamma
  double osc_min = 1e-3;            ///< min |Im lambda| for a quartet candidate
  double growth_min = 0.04;         ///< min |Re lambda| for a counted quartet
  double window_extra = 0.1;        ///< isolated window |lambda| <= 1+|omega|+extra
  double kernel_absorb_radius = 0.05;
  int kernel_absorb_L = 2;          ///< L kernel splits into +-sqrt leak pair
  int kernel_absorb_H = 1;          ///< H+- kernels are simple
  double h_dedup = 1e-3;            ///< merge in-gap members closer than this
  double h_realness = 1e-6;         ///< |Im| cut for in-gap H members
  double h_kernel = 1e-5;           ///< |lambda| cut for the H kernel
  double visible_margin = 0.05;     ///< edge distance for event-grade members
  double L_H_min = 24.0;            ///< halfwidth floor for H counting grids
};

/// Per-omega isolated-eigenvalue counts.
struct Counts {
  int L_imag_pairs = 0;
  int L_real_pairs = 0;
  int L_quartets = 0;
  int Hplus_isolated = 0;
  int Hminus_isolated = 0;
  int Hplus_visible = 0;   ///< members clear of the band edge by visible_margin
  int Hminus_visible = 0;

  bool operator==(const Counts&) const = default;
};

inline void to_json(nlohmann::json& j, const Counts& c) {
  j = nlohmann::json{{"L_imag_pairs", c.L_imag_pairs},
                     {"L_real_pairs", c.L_real_pairs},
                     {"L_quartets", c.L_quartets},
                     {"Hplus_isolated", c.Hplus_isolated},
                     {"Hminus_isolated", c.Hminus_isolated},
                     {"Hplus_visible", c.Hplus_visible},
                     {"Hminus_visible", c.Hminus_visible}};
}

enum class MemberKind { imag_pair, real_pair, quartet };

/// One isolated candidate of the product path, in lambda variables
/// (first-quadrant representative).
struct LMember {
  cxd lambda;
  MemberKind kind = MemberKind::imag_pair;
  cxd gamma;
};

/// Product-path gammas at one resolution, partitioned structurally.
struct LAnalysis {
  std::vector<cxd> kernel_gammas;
  std::vector<cxd> band_gammas;
  std::vector<cxd> rejected_gammas;
  std::vector<LMember> members;
};

/// In-gap eigenvalues of one H operator after the structural rules.
struct HGapAnalysis {
  std::vector<cxd> raw;
  std::vector<double> members;
  std::vector<double> excluded;  ///< dedup ghosts, kernel leaks, edge-unresolved
  int visible = 0;
};

namespace detail {

inline LAnalysis partition_gammas(const std::vector<cxd>& gammas, double omega,
                                  const TolSet& t, const CountingPolicy& pol) {
  LAnalysis a;
  const double edge = std::min(1.0 - omega, 1.0 + omega);
  const double band_floor = (edge - t.tol_band) * (edge - t.tol_band);
  const double win2 = (1.0 + std::abs(omega) + pol.window_extra) *
                      (1.0 + std::abs(omega) + pol.window_extra);
  for (cxd g : gammas) {
    if (std::abs(g) < pol.gamma_floor) {
      a.kernel_gammas.push_back(g);
      continue;
    }
    const bool realish = std::abs(g.imag()) < pol.tol_gamma_imag * std::max(1.0, std::abs(g));
    if (realish) {
      if (g.real() > 0.0) {
        if (g.real() < band_floor)
          a.members.push_back({cxd(0.0, std::sqrt(g.real())), MemberKind::imag_pair, g});
        else
          a.band_gammas.push_back(g);
      } else if (std::abs(g) < win2) {
        a.members.push_back({cxd(std::sqrt(-g.real()), 0.0), MemberKind::real_pair, g});
      } else {
        a.rejected_gammas.push_back(g);
      }
    } else if (g.imag() > 0.0) {
      const cxd lam = lambda_from_gamma(g);
      if (std::abs(g) < win2 && lam.imag() > pol.osc_min)
        a.members.push_back({lam, MemberKind::quartet, g});
      else
        a.rejected_gammas.push_back(g);
    }
    // conjugate partners (Im gamma < 0) are represented by their twins
  }
  // generalized-kernel leak absorption: the two smallest members near zero
  std::sort(a.members.begin(), a.members.end(), [](const LMember& x, const LMember& y) {
    return std::abs(x.lambda) < std::abs(y.lambda);
  });
  int dropped = 0;
  while (dropped < static_cast<int>(a.members.size()) && dropped < pol.kernel_absorb_L &&
         std::abs(a.members[dropped].lambda) < pol.kernel_absorb_radius)
    ++dropped;
  for (int k = 0; k < dropped; ++k) a.rejected_gammas.push_back(a.members[k].gamma);
  a.members.erase(a.members.begin(), a.members.begin() + dropped);
  return a;
}

/// Keeps members of `fine` having a partner in `coarse` within tol_match.
inline std::vector<LMember> match_members(const std::vector<LMember>& fine,
                                          const std::vector<LMember>& coarse,
                                          double tol_match,
                                          std::vector<LMember>* dropped = nullptr) {
  std::vector<LMember> kept;
  for (const LMember& m : fine) {
    double best = std::numeric_limits<double>::infinity();
    for (const LMember& c : coarse) best = std::min(best, std::abs(c.lambda - m.lambda));
    if (best < tol_match)
      kept.push_back(m);
    else if (dropped)
      dropped->push_back(m);
  }
  return kept;
}

inline HGapAnalysis analyze_h(const Eigen::MatrixXcd& H_interior, double omega,
                              double Lhw, const TolSet& t, const CountingPolicy& pol) {
  HGapAnalysis a;
  const Eigen::VectorXcd lam = eig_general(H_interior);
  a.raw.assign(lam.data(), lam.data() + lam.size());

  std::vector<double> gap;
  for (cxd z : a.raw) {
    if (std::abs(z) <= pol.h_kernel) continue;
    if (std::abs(z.imag()) >= pol.h_realness) continue;
    if (z.real() > omega - 1.0 + t.tol_band && z.real() < omega + 1.0 - t.tol_band)
      gap.push_back(z.real());
  }
  std::sort(gap.begin(), gap.end());

  std::vector<double> dedup;
  for (double v : gap) {
    if (!dedup.empty() && v - dedup.back() < pol.h_dedup)
      a.excluded.push_back(v);
    else
      dedup.push_back(v);
  }

  if (pol.kernel_absorb_H > 0 && !dedup.empty()) {
    std::vector<size_t> order(dedup.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
      return std::abs(dedup[x]) < std::abs(dedup[y]);
    });
    std::vector<bool> drop(dedup.size(), false);
    int n_drop = 0;
    for (size_t i : order) {
      if (n_drop >= pol.kernel_absorb_H) break;
      if (std::abs(dedup[i]) < pol.kernel_absorb_radius) {
        drop[i] = true;
        ++n_drop;
      }
    }
    std::vector<double> left;
    for (size_t i = 0; i < dedup.size(); ++i)
      (drop[i] ? a.excluded : left).push_back(dedup[i]);
    dedup.swap(left);
  }

  const double pi = std::acos(-1.0);
  const double granularity = (pi / (2.0 * Lhw)) * (pi / (2.0 * Lhw)) / 2.0;
  for (double v : dedup) {
    const double edge_dist = std::min(v - (omega - 1.0), (omega + 1.0) - v);
    if (edge_dist < granularity) {
      a.excluded.push_back(v);
    } else {
      a.members.push_back(v);
      if (edge_dist > pol.visible_margin) ++a.visible;
    }
  }
  std::sort(a.excluded.begin(), a.excluded.end());
  return a;
}

inline std::vector<cxd> product_gammas(const PotentialParams& p, double omega, int N,
                                       double Lhw) {
  const ChebGrid grid = build_grid(N, Lhw);
  const SolitonParams sp(omega);
  const SolitonProfile profile = soliton_appendix_a(grid, sp, p);
  auto [Hp, Hm] = assemble_blocks(grid, profile, p, omega);
  const int n = N + 1;
  const Eigen::MatrixXcd Hpi = interior_matrix(Hp, n);
  const Eigen::MatrixXcd Hmi = interior_matrix(Hm, n);
  auto [Mp, Mm] = product_blocks(Hpi, Hmi);
  (void)Mm;
  const Eigen::VectorXcd gam = eig_general(Mp);
  return {gam.data(), gam.data() + gam.size()};
}

inline void expand_pm(std::vector<cxd>& out, cxd gamma) {
  const cxd lam = std::sqrt(-gamma);
  out.push_back(lam);
  out.push_back(-lam);
}

} // namespace detail

/// Classified per-omega spectra retained for frame emission.
struct PerOmegaSpectra {
  double omega = 0.0;
  Spectrum L;
  Spectrum Hplus;
  Spectrum Hminus;
};

/// Which halves of the pipeline a caller needs.
struct CountOptions {
  bool need_L = true;
  bool need_H = true;
  bool want_spectra = false;
};

namespace detail {

inline Spectrum synthesize_L_spectrum(double omega, const LAnalysis& fine,
                                      const std::vector<LMember>& kept,
                                      const std::vector<LMember>& dropped) {
  Spectrum s;
  s.omega = omega;
  s.tag = OperatorTag::L;
  for (cxd g : fine.kernel_gammas) expand_pm(s.kernel_cluster, g);
  for (cxd g : fine.band_gammas) expand_pm(s.band, g);
  for (const LMember& m : kept) {
    IsolatedEigen e;
    e.value = m.lambda;
    if (m.kind == MemberKind::imag_pair) {
      e.kind = IsolatedKind::imaginary_pair;
      e.members = {m.lambda, -m.lambda};
    } else if (m.kind == MemberKind::real_pair) {
      e.kind = IsolatedKind::real_pair;
      e.members = {m.lambda, -m.lambda};
    } else {
      e.kind = IsolatedKind::complex_quartet;
      e.members = {m.lambda, -m.lambda, std::conj(m.lambda), -std::conj(m.lambda)};
    }
    e.multiplicity = static_cast<int>(e.members.size());
    s.isolated.push_back(std::move(e));
  }
  for (const LMember& m : dropped) expand_pm(s.filtered_out, m.gamma);
  for (cxd g : fine.rejected_gammas) expand_pm(s.filtered_out, g);
  for (cxd z : s.kernel_cluster) s.raw.push_back(z);
  for (cxd z : s.band) s.raw.push_back(z);
  for (const IsolatedEigen& e : s.isolated)
    for (cxd z : e.members) s.raw.push_back(z);
  for (cxd z : s.filtered_out) s.raw.push_back(z);
  sort_cxd(s.raw);
  return s;
}

inline Spectrum synthesize_H_spectrum(double omega, OperatorTag tag,
                                      const HGapAnalysis& a, const TolSet& t,
                                      const CountingPolicy& pol) {
  Spectrum s;
  s.omega = omega;
  s.tag = tag;
  s.raw = a.raw;
  sort_cxd(s.raw);
  auto is_member = [&](double v) {
    for (double m : a.members)
      if (std::abs(m - v) < 1e-12) return true;
    return false;
  };
  for (cxd z : s.raw) {
    if (std::abs(z) <= pol.h_kernel) {
      s.kernel_cluster.push_back(z);
    } else if (std::abs(z.imag()) < pol.h_realness &&
               z.real() > omega - 1.0 + t.tol_band &&
               z.real() < omega + 1.0 - t.tol_band) {
      if (is_member(z.real())) {
        IsolatedEigen e;
        e.value = z;
        e.kind = IsolatedKind::real_isolated;
        e.multiplicity = 1;
        e.members = {z};
        s.isolated.push_back(std::move(e));
      } else {
        s.filtered_out.push_back(z);
      }
    } else if (std::abs(z.imag()) < pol.h_realness) {
      s.band.push_back(z);
    } else {
      s.filtered_out.push_back(z);
    }
  }
  return s;
}

} // namespace detail

/// Single-resolution counts: structural rules only, no cross-resolution
/// matching. Used for resolution-stability checks.
inline Counts counts_single(const PotentialParams& p, double omega, int N,
                            const GridSpecCfg& grid_cfg, const TolSet& tols,
                            const CountingPolicy& pol = {},
                            const CountOptions& opt = {}) {
  Counts c;
  const double L_core = grid_cfg.fixed_L ? grid_cfg.L : default_halfwidth(omega);
  if (opt.need_L) {
    const LAnalysis a =
        detail::partition_gammas(detail::product_gammas(p, omega, N, L_core), omega, tols, pol);
    for (const LMember& m : a.members) {
      if (m.kind == MemberKind::imag_pair) ++c.L_imag_pairs;
      if (m.kind == MemberKind::real_pair) ++c.L_real_pairs;
      if (m.kind == MemberKind::quartet && m.lambda.real() >= pol.growth_min) ++c.L_quartets;
    }
  }
  if (opt.need_H) {
    const double L_H = grid_cfg.fixed_L ? grid_cfg.L : std::max(L_core, pol.L_H_min);
    const ChebGrid grid = build_grid(N, L_H);
    const SolitonParams sp(omega);
    const SolitonProfile profile = soliton_appendix_a(grid, sp, p);
    auto [Hp, Hm] = assemble_blocks(grid, profile, p, omega);
    const HGapAnalysis ap =
        detail::analyze_h(interior_matrix(Hp, N + 1), omega, L_H, tols, pol);
    const HGapAnalysis am =
        detail::analyze_h(interior_matrix(Hm, N + 1), omega, L_H, tols, pol);
    c.Hplus_isolated = static_cast<int>(ap.members.size());
    c.Hminus_isolated = static_cast<int>(am.members.size());
    c.Hplus_visible = ap.visible;
    c.Hminus_visible = am.visible;
  }
  return c;
}

/// Production counts: the L pipeline runs at N and 3N/2 on the same grid
/// halfwidth and keeps only resolution-stable members; H counts run at 3N/2
/// on the widened H grid.
inline Counts counts_production(const PotentialParams& p, double omega,
                                const RunConfig& cfg, const CountingPolicy& pol = {},
                                const CountOptions& opt = {},
                                PerOmegaSpectra* out_spectra = nullptr) {
  Counts c;
  const int N_lo = cfg.grid.N;
  const int N_hi = (3 * N_lo) / 2;
  const double L_core = cfg.grid.halfwidth(omega);
  if (out_spectra) out_spectra->omega = omega;

  if (opt.need_L) {
    const LAnalysis coarse = detail::partition_gammas(
        detail::product_gammas(p, omega, N_lo, L_core), omega, cfg.tolerances, pol);
    const LAnalysis fine = detail::partition_gammas(
        detail::product_gammas(p, omega, N_hi, L_core), omega, cfg.tolerances, pol);
    std::vector<LMember> dropped;
    const std::vector<LMember> kept = detail::match_members(
        fine.members, coarse.members, cfg.tolerances.tol_match, &dropped);
    for (const LMember& m : kept) {
      if (m.kind == MemberKind::imag_pair) ++c.L_imag_pairs;
      if (m.kind == MemberKind::real_pair) ++c.L_real_pairs;
      if (m.kind == MemberKind::quartet && m.lambda.real() >= pol.growth_min) ++c.L_quartets;
    }
    if (out_spectra && opt.want_spectra)
      out_spectra->L = detail::synthesize_L_spectrum(omega, fine, kept, dropped);
  }

  if (opt.need_H) {
    const double L_H = cfg.grid.fixed_L ? cfg.grid.L : std::max(L_core, pol.L_H_min);
    const ChebGrid grid = build_grid(N_hi, L_H);
    const SolitonParams sp(omega);
    const SolitonProfile profile = soliton_appendix_a(grid, sp, p);
    auto [Hp, Hm] = assemble_blocks(grid, profile, p, omega);
    const HGapAnalysis ap =
        detail::analyze_h(interior_matrix(Hp, N_hi + 1), omega, L_H, cfg.tolerances, pol);
    const HGapAnalysis am =
        detail::analyze_h(interior_matrix(Hm, N_hi + 1), omega, L_H, cfg.tolerances, pol);
    c.Hplus_isolated = static_cast<int>(ap.members.size());
    c.Hminus_isolated = static_cast<int>(am.members.size());
    c.Hplus_visible = ap.visible;
    c.Hminus_visible = am.visible;
    if (out_spectra && opt.want_spectra) {
      out_spectra->Hplus =
          detail::synthesize_H_spectrum(omega, OperatorTag::Hplus, ap, cfg.tolerances, pol);
      out_spectra->Hminus =
          detail::synthesize_H_spectrum(omega, OperatorTag::Hminus, am, cfg.tolerances, pol);
    }
  }
  return c;
}

enum class EventKind {
  quartet_birth,
  quartet_death,
  pair_birth,
  edge_bifurcation_Hplus,
  edge_bifurcation_Hminus
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::quartet_birth: return "quartet_birth";
    case EventKind::quartet_death: return "quartet_death";
    case EventKind::pair_birth: return "pair_birth";
    case EventKind::edge_bifurcation_Hplus: return "edge_bifurcation_Hplus";
    case EventKind::edge_bifurcation_Hminus: return "edge_bifurcation_Hminus";
  }
  return "?";
}

inline std::optional<EventKind> parse_event_kind(const std::string& s) {
  for (EventKind k : {EventKind::quartet_birth, EventKind::quartet_death,
                      EventKind::pair_birth, EventKind::edge_bifurcation_Hplus,
                      EventKind::edge_bifurcation_Hminus})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

struct SweepEvent {
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  EventKind kind = EventKind::quartet_birth;
  double refined_omega = 0.0;  ///< bracket midpoint until refined
};

struct SweepSkipped {
  double omega = 0.0;
  std::string reason;
};

struct SweepReport {
  PotentialParams potential;
  std::vector<std::string> branch;
  std::vector<double> omega_values;   ///< decreasing
  std::vector<Counts> counts;
  std::vector<SweepEvent> events;
  std::vector<SweepSkipped> skipped;
};

struct SweepResult {
  SweepReport report;
  std::vector<PerOmegaSpectra> spectra;  ///< nonempty only when requested
};

inline void to_json(nlohmann::json& j, const SweepEvent& e) {
  j = nlohmann::json{{"bracket", {e.bracket_lo, e.bracket_hi}},
                     {"kind", to_string(e.kind)},
                     {"refined_omega", e.refined_omega}};
}

inline void to_json(nlohmann::json& j, const SweepReport& r) {
  j = nlohmann::json{{"potential", r.potential},
                     {"branch", r.branch},
                     {"omega_values", r.omega_values},
                     {"events", r.events}};
  nlohmann::json counts = nlohmann::json::array();
  for (const Counts& c : r.counts) counts.push_back(c);
  j["counts"] = counts;
  nlohmann::json skipped = nlohmann::json::array();
  for (const SweepSkipped& s : r.skipped)
    skipped.push_back({{"omega", s.omega}, {"reason", s.reason}});
  j["skipped"] = skipped;
}

/// Derives events from count changes between consecutive swept points
/// (omega decreasing): quartet count up is a birth; quartet down with an
/// imaginary pair up is a death; imaginary pair up alone is a pair birth;
/// a rise in event-grade H members is an edge bifurcation.
inline std::vector<SweepEvent> synthesize_events(const std::vector<double>& omegas,
                                                 const std::vector<Counts>& counts) {
  std::vector<SweepEvent> events;
  for (size_t i = 0; i + 1 < omegas.size(); ++i) {
    const Counts& a = counts[i];
    const Counts& b = counts[i + 1];
    const double hi = omegas[i], lo = omegas[i + 1];
    auto push = [&](EventKind k) {
      events.push_back({lo, hi, k, 0.5 * (lo + hi)});
    };
    const int dq = b.L_quartets - a.L_quartets;
    const int dip = b.L_imag_pairs - a.L_imag_pairs;
    if (dq > 0) push(EventKind::quartet_birth);
    if (dq < 0 && dip > 0) push(EventKind::quartet_death);
    if (dq >= 0 && dip > 0) push(EventKind::pair_birth);
    if (b.Hplus_visible > a.Hplus_visible) push(EventKind::edge_bifurcation_Hplus);
    if (b.Hminus_visible > a.Hminus_visible) push(EventKind::edge_bifurcation_Hminus);
  }
  return events;
}

/// Sweeps omega from the top of the range downward, collecting counts,
/// events, and optionally per-omega spectra for frame emission.
inline SweepResult sweep(const PotentialParams& p, double omega_lo, double omega_hi,
                         int steps, const RunConfig& cfg, const CountingPolicy& pol = {},
                         bool want_spectra = false, int jobs = 0) {
  if (steps <= 0) throw ConfigError("sweep: steps must be positive");
  if (omega_lo > omega_hi) std::swap(omega_lo, omega_hi);

  SweepResult out;
  out.report.potential = p;
  const ExistenceReport rep = classify_existence(p);

  std::vector<double> omegas;
  for (int i = 0; i < steps; ++i) {
    const double om = steps == 1
                          ? omega_hi
                          : omega_hi - (omega_hi - omega_lo) * i / (steps - 1);
    if (!(om > -1.0 && om < 1.0)) {
      out.report.skipped.push_back({om, "outside the spectral gap (-1, 1)"});
      continue;
    }
    if (!rep.branch_at(om)) {
      out.report.skipped.push_back({om, "outside the admissible existence domain"});
      continue;
    }
    omegas.push_back(om);
  }

  out.report.omega_values = omegas;
  out.report.counts.resize(omegas.size());
  out.report.branch.resize(omegas.size());
  if (want_spectra) out.spectra.resize(omegas.size());

  CountOptions opt;
  opt.want_spectra = want_spectra;
  parallel_for(static_cast<int>(omegas.size()), resolve_jobs(jobs), [&](int i) {
    out.report.branch[i] = to_string(*rep.branch_at(omegas[i]));
    out.report.counts[i] =
        counts_production(p, omegas[i], cfg, pol, opt,
                          want_spectra ? &out.spectra[i] : nullptr);
  });

  out.report.events = synthesize_events(out.report.omega_values, out.report.counts);
  return out;
}

/// Generic bisection on an integer-valued indicator: assumes one change of
/// value inside (lo, hi) and returns the midpoint of the final bracket.
template <class F>
inline double bisect_on_count(F&& indicator, double lo, double hi, double tol_omega) {
  int c_lo = indicator(lo);
  const int c_hi = indicator(hi);
  if (c_lo == c_hi)
    throw std::domain_error("bisect_on_count: indicator does not change across bracket");
  while (hi - lo > tol_omega) {
    const double mid = 0.5 * (lo + hi);
    const int c_mid = indicator(mid);
    if (c_mid == c_lo) {
      lo = mid;
      c_lo = c_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline int event_indicator(const Counts& c, EventKind kind) {
  switch (kind) {
    case EventKind::quartet_birth: return c.L_quartets;
    case EventKind::quartet_death: return c.L_imag_pairs;
    case EventKind::pair_birth: return c.L_imag_pairs;
    case EventKind::edge_bifurcation_Hplus: return c.Hplus_visible;
    case EventKind::edge_bifurcation_Hminus: return c.Hminus_visible;
  }
  return 0;
}

/// Bisects the count indicator matching the event kind over the bracket;
/// only the needed half of the pipeline is evaluated per probe.
inline double locate_bifurcation(const PotentialParams& p, double bracket_lo,
                                 double bracket_hi, EventKind kind, double tol_omega,
                                 const RunConfig& cfg, const CountingPolicy& pol = {}) {
  if (!(tol_omega > 0.0)) throw ConfigError("locate_bifurcation: tol_omega must be positive");
  if (bracket_lo > bracket_hi) std::swap(bracket_lo, bracket_hi);
  CountOptions opt;
  opt.need_L = kind == EventKind::quartet_birth || kind == EventKind::quartet_death ||
               kind == EventKind::pair_birth;
  opt.need_H = !opt.need_L;
  auto indicator = [&](double om) {
    return event_indicator(counts_production(p, om, cfg, pol, opt), kind);
  };
  return bisect_on_count(indicator, bracket_lo, bracket_hi, tol_omega);
}

/// Writes one CSV per omega per operator plus an index JSON; re-emission is
/// byte-identical.
inline std::vector<std::string> emit_frames(const SweepReport& report,
                                            const std::vector<PerOmegaSpectra>& spectra,
                                            const std::string& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::string> written;
  nlohmann::json index;
  index["potential"] = report.potential;
  index["omega_values"] = report.omega_values;
  nlohmann::json frames = nlohmann::json::array();
  for (size_t i = 0; i < spectra.size(); ++i) {
    const PerOmegaSpectra& ps = spectra[i];
    const std::pair<const Spectrum*, const char*> ops[] = {
        {&ps.L, "L"}, {&ps.Hplus, "Hplus"}, {&ps.Hminus, "Hminus"}};
    for (const auto& [spec, name] : ops) {
      const std::string fname = "frame_" + std::to_string(i) + "_" + name + ".csv";
      write_spectrum_csv(*spec, out_dir + "/" + fname);
      written.push_back(fname);
      frames.push_back({{"index", i}, {"omega", ps.omega}, {"operator", name}, {"file", fname}});
    }
  }
  index["frames"] = frames;
  write_json(index, out_dir + "/index.json");
  written.push_back("index.json");
  return written;
}

inline void write_counts_csv(const SweepReport& r, const std::string& path) {
  auto f = open_out(path);
  f << "omega,L_imag_pairs,L_real_pairs,L_quartets,Hplus_isolated,Hminus_isolated\n";
  for (size_t i = 0; i < r.omega_values.size(); ++i)
    f << fmt15(r.omega_values[i]) << ',' << r.counts[i].L_imag_pairs << ','
      << r.counts[i].L_real_pairs << ',' << r.counts[i].L_quartets << ','
      << r.counts[i].Hplus_isolated << ',' << r.counts[i].Hminus_isolated << '\n';
}

} // namespace gapspec
