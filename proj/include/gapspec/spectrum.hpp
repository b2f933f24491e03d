#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gapspec/chebyshev.hpp"
#include "gapspec/potential.hpp"

#if defined(GAPSPEC_HAVE_LAPACKE)
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#endif

namespace gapspec {

/// Classification tolerances; all configurable through RunConfig.
struct TolSet {
  double tol_kernel = 1e-6;
  double tol_re = 1e-6;
  double tol_band = 1e-3;
  double tol_sym = 1e-6;
  double tol_match = 1e-4;

  bool operator==(const TolSet&) const = default;
};

inline void to_json(nlohmann::json& j, const TolSet& t) {
  j = nlohmann::json{{"tol_kernel", t.tol_kernel}, {"tol_re", t.tol_re},
                     {"tol_band", t.tol_band},     {"tol_sym", t.tol_sym},
                     {"tol_match", t.tol_match}};
}

inline void from_json(const nlohmann::json& j, TolSet& t) {
  t.tol_kernel = j.value("tol_kernel", t.tol_kernel);
  t.tol_re = j.value("tol_re", t.tol_re);
  t.tol_band = j.value("tol_band", t.tol_band);
  t.tol_sym = j.value("tol_sym", t.tol_sym);
  t.tol_match = j.value("tol_match", t.tol_match);
}

/// Raised when the dense eigensolver fails to converge; mapped to exit
/// code 4 by the CLI.
struct EigensolverError : std::runtime_error {
  int submatrix_index;
  explicit EigensolverError(int idx)
      : std::runtime_error("eigensolver failed to converge; converged tail starts at index " +
                           std::to_string(idx)),
        submatrix_index(idx) {}
};

/// All eigenvalues of a general complex matrix, sorted by (Re, Im).
/// With a non-null `vectors` argument the right eigenvectors are returned
/// column-matched to the sorted eigenvalues.
inline Eigen::VectorXcd eig_general(const Eigen::MatrixXcd& A,
                                    Eigen::MatrixXcd* vectors = nullptr) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eig_general: matrix not square");
  if (!A.allFinite()) throw std::invalid_argument("eig_general: non-finite entries");
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXcd w(n);
  Eigen::MatrixXcd vr;

#if defined(GAPSPEC_HAVE_LAPACKE)
  Eigen::MatrixXcd Acopy = A;
  if (vectors) vr.resize(n, n);
  const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n,
                                 Acopy.data(), n, w.data(), nullptr, 1,
                                 vectors ? vr.data() : nullptr, vectors ? n : 1);
  if (info > 0) throw EigensolverError(info);
  if (info < 0) throw std::invalid_argument("eig_general: bad argument to backend");
#else
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(A, vectors != nullptr);
  if (ces.info() != Eigen::Success) throw EigensolverError(0);
  w = ces.eigenvalues();
  if (vectors) vr = ces.eigenvectors();
#endif

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w(a).real() != w(b).real()) return w(a).real() < w(b).real();
    return w(a).imag() < w(b).imag();
  });
  Eigen::VectorXcd ws(n);
  for (int i = 0; i < n; ++i) ws(i) = w(order[i]);
  if (vectors) {
    vectors->resize(n, n);
    for (int i = 0; i < n; ++i) vectors->col(i) = vr.col(order[i]);
  }
  return ws;
}

enum class OperatorTag { L, Hplus, Hminus, Mplus, Mminus };

inline const char* to_string(OperatorTag t) {
  switch (t) {
    case OperatorTag::L: return "L";
    case OperatorTag::Hplus: return "Hplus";
    case OperatorTag::Hminus: return "Hminus";
    case OperatorTag::Mplus: return "Mplus";
    case OperatorTag::Mminus: return "Mminus";
  }
  return "?";
}

enum class IsolatedKind { imaginary_pair, real_pair, complex_quartet, real_isolated, unresolved };

inline const char* to_string(IsolatedKind k) {
  switch (k) {
    case IsolatedKind::imaginary_pair: return "imaginary_pair";
    case IsolatedKind::real_pair: return "real_pair";
    case IsolatedKind::complex_quartet: return "complex_quartet";
    case IsolatedKind::real_isolated: return "real_isolated";
    case IsolatedKind::unresolved: return "unresolved";
  }
  return "?";
}

/// One isolated group: the first-quadrant representative, the raw members
/// it accounts for, and its symmetry class.
struct IsolatedEigen {
  cxd value;
  int multiplicity = 1;
  IsolatedKind kind = IsolatedKind::real_isolated;
  std::vector<cxd> members;
};

/// Partitioned eigenvalue set of one operator at one omega.
struct Spectrum {
  double omega = 0.0;
  OperatorTag tag = OperatorTag::L;
  std::vector<cxd> raw;
  std::vector<cxd> kernel_cluster;
  std::vector<cxd> band;
  std::vector<IsolatedEigen> isolated;
  std::vector<cxd> filtered_out;
};

/// Principal square root of -gamma reflected into Re >= 0, Im >= 0.
inline cxd lambda_from_gamma(cxd gamma) {
  cxd lam = std::sqrt(-gamma);
  if (lam.real() < 0.0) lam = -lam;
  return {std::abs(lam.real()), std::abs(lam.imag())};
}

namespace detail {

inline void sort_cxd(std::vector<cxd>& v) {
  std::sort(v.begin(), v.end(), [](cxd a, cxd b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

/// Groups isolated L eigenvalues into pairs and quartets by matching their
/// first-quadrant reflections within tol_sym; ragged groups are flagged
/// unresolved instead of force-classified.
inline std::vector<IsolatedEigen> group_quadruples(std::vector<cxd> iso, const TolSet& t) {
  std::sort(iso.begin(), iso.end(), [](cxd a, cxd b) {
    const double ra = std::abs(a.real()), rb = std::abs(b.real());
    if (ra != rb) return ra > rb;
    const double ia = std::abs(a.imag()), ib = std::abs(b.imag());
    if (ia != ib) return ia > ib;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<bool> used(iso.size(), false);
  std::vector<IsolatedEigen> out;
  for (size_t i = 0; i < iso.size(); ++i) {
    if (used[i]) continue;
    const cxd rep(std::abs(iso[i].real()), std::abs(iso[i].imag()));
    IsolatedEigen grp;
    for (size_t j = i; j < iso.size(); ++j) {
      if (used[j]) continue;
      const cxd rj(std::abs(iso[j].real()), std::abs(iso[j].imag()));
      if (std::abs(rj - rep) < t.tol_sym) {
        used[j] = true;
        grp.members.push_back(iso[j]);
      }
    }
    grp.value = rep;
    grp.multiplicity = static_cast<int>(grp.members.size());
    const bool on_imag_axis = rep.real() < t.tol_re;
    const bool on_real_axis = rep.imag() < t.tol_re;
    if (on_imag_axis && grp.multiplicity == 2)
      grp.kind = IsolatedKind::imaginary_pair;
    else if (on_real_axis && !on_imag_axis && grp.multiplicity == 2)
      grp.kind = IsolatedKind::real_pair;
    else if (!on_imag_axis && !on_real_axis && grp.multiplicity == 4)
      grp.kind = IsolatedKind::complex_quartet;
    else
      grp.kind = IsolatedKind::unresolved;
    out.push_back(std::move(grp));
  }
  return out;
}

} // namespace detail

/// Physical classification of a raw eigenvalue set.
/// L: kernel cluster, imaginary-axis band beyond min(1-omega, 1+omega),
/// isolated groups by quadruple symmetry. H+-: real-axis bands outside the
/// gap (omega-1, omega+1), isolated in-gap members. Mplus/Mminus: the same
/// partition expressed in gamma = -lambda^2 variables.
inline Spectrum classify(const std::vector<cxd>& raw, double omega, OperatorTag tag,
                         const TolSet& t = {}) {
  Spectrum s;
  s.omega = omega;
  s.tag = tag;
  s.raw = raw;
  detail::sort_cxd(s.raw);

  const double edge = std::min(1.0 - omega, 1.0 + omega);
  std::vector<cxd> iso;

  if (tag == OperatorTag::L) {
    for (cxd lam : s.raw) {
      if (std::abs(lam) < t.tol_kernel)
        s.kernel_cluster.push_back(lam);
      else if (std::abs(lam.real()) < t.tol_re && std::abs(lam.imag()) >= edge - t.tol_band)
        s.band.push_back(lam);
      else
        iso.push_back(lam);
    }
    s.isolated = detail::group_quadruples(std::move(iso), t);
  } else if (tag == OperatorTag::Hplus || tag == OperatorTag::Hminus) {
    for (cxd lam : s.raw) {
      if (std::abs(lam) < t.tol_kernel) {
        s.kernel_cluster.push_back(lam);
      } else if (lam.real() > omega - 1.0 + t.tol_band &&
                 lam.real() < omega + 1.0 - t.tol_band) {
        IsolatedEigen e;
        e.value = lam;
        e.kind = IsolatedKind::real_isolated;
        e.multiplicity = 1;
        e.members = {lam};
        s.isolated.push_back(std::move(e));
      } else {
        s.band.push_back(lam);
      }
    }
  } else {
    // gamma plane: band gammas are real with gamma >= (edge - tol_band)^2
    std::vector<cxd> complex_gamma;
    for (cxd g : s.raw) {
      const bool realish = std::abs(g.imag()) < t.tol_re * std::max(1.0, std::abs(g));
      if (std::abs(g) < std::max(t.tol_kernel * t.tol_kernel, 1e-9)) {
        s.kernel_cluster.push_back(g);
      } else if (realish && g.real() >= (edge - t.tol_band) * (edge - t.tol_band)) {
        s.band.push_back(g);
      } else if (realish) {
        IsolatedEigen e;
        e.value = g;
        e.members = {g};
        e.multiplicity = 2;  // one gamma stands for a +-lambda pair
        e.kind = g.real() > 0.0 ? IsolatedKind::imaginary_pair : IsolatedKind::real_pair;
        s.isolated.push_back(std::move(e));
      } else {
        complex_gamma.push_back(g);
      }
    }
    std::vector<bool> used(complex_gamma.size(), false);
    for (size_t i = 0; i < complex_gamma.size(); ++i) {
      if (used[i]) continue;
      IsolatedEigen e;
      e.members = {complex_gamma[i]};
      used[i] = true;
      for (size_t j = i + 1; j < complex_gamma.size(); ++j) {
        if (used[j]) continue;
        if (std::abs(std::conj(complex_gamma[j]) - complex_gamma[i]) < t.tol_sym) {
          e.members.push_back(complex_gamma[j]);
          used[j] = true;
          break;
        }
      }
      e.value = cxd(complex_gamma[i].real(), std::abs(complex_gamma[i].imag()));
      e.multiplicity = static_cast<int>(e.members.size()) * 2;
      e.kind = e.members.size() == 2 ? IsolatedKind::complex_quartet
                                     : IsolatedKind::unresolved;
      s.isolated.push_back(std::move(e));
    }
  }
  return s;
}

/// Resolution-doubling filter: keeps isolated members of the finer spectrum
/// that have a partner in the coarser one; the rest move to filtered_out.
inline Spectrum filter_spurious(const Spectrum& spec_N, const Spectrum& spec_2N,
                                double tol_match = 1e-4) {
  Spectrum out = spec_2N;
  out.isolated.clear();
  for (const IsolatedEigen& e : spec_2N.isolated) {
    double best = std::numeric_limits<double>::infinity();
    for (const IsolatedEigen& c : spec_N.isolated)
      best = std::min(best, std::abs(c.value - e.value));
    if (best < tol_match) {
      out.isolated.push_back(e);
    } else {
      for (cxd m : e.members) out.filtered_out.push_back(m);
    }
  }
  return out;
}

/// Match report between isolated L eigenvalues and product-path gammas.
struct CrosscheckEntry {
  cxd lambda;
  cxd gamma;
  double error = 0.0;
  bool matched = false;
};

struct CrosscheckReport {
  std::vector<CrosscheckEntry> entries;
  double worst_matched = 0.0;
  int outliers = 0;
};

/// For every isolated lambda of an L spectrum, locates the nearest gamma of
/// a product-path spectrum under gamma = -lambda^2.
inline CrosscheckReport crosscheck_gamma(const Spectrum& spec_L, const Spectrum& spec_M,
                                         double tol = 1e-6) {
  CrosscheckReport rep;
  for (const IsolatedEigen& e : spec_L.isolated) {
    for (cxd lam : e.members) {
      CrosscheckEntry ce;
      ce.lambda = lam;
      ce.error = std::numeric_limits<double>::infinity();
      for (cxd g : spec_M.raw) {
        const double d = std::abs(g + lam * lam);
        if (d < ce.error) {
          ce.error = d;
          ce.gamma = g;
        }
      }
      ce.matched = ce.error < tol;
      rep.worst_matched = std::max(rep.worst_matched, ce.matched ? ce.error : 0.0);
      if (!ce.matched) ++rep.outliers;
      rep.entries.push_back(ce);
    }
  }
  return rep;
}

/// Rows of (eigenvalue, class label) covering the whole partition; used by
/// the CSV and JSON writers.
inline std::vector<std::pair<cxd, std::string>> spectrum_rows(const Spectrum& s) {
  std::vector<std::pair<cxd, std::string>> rows;
  for (cxd z : s.kernel_cluster) rows.emplace_back(z, "kernel");
  for (cxd z : s.band) rows.emplace_back(z, "band");
  for (const IsolatedEigen& e : s.isolated)
    for (cxd z : e.members) rows.emplace_back(z, to_string(e.kind));
  for (cxd z : s.filtered_out) rows.emplace_back(z, "filtered");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
    return a.first.imag() < b.first.imag();
  });
  return rows;
}

inline void to_json(nlohmann::json& j, const Spectrum& s) {
  auto cvec = [](const std::vector<cxd>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (cxd z : v) a.push_back({{"re", z.real()}, {"im", z.imag()}});
    return a;
  };
  j = nlohmann::json{{"omega", s.omega},
                     {"operator", to_string(s.tag)},
                     {"raw", cvec(s.raw)},
                     {"kernel_cluster", cvec(s.kernel_cluster)},
                     {"band", cvec(s.band)},
                     {"filtered_out", cvec(s.filtered_out)}};
  nlohmann::json iso = nlohmann::json::array();
  for (const IsolatedEigen& e : s.isolated)
    iso.push_back({{"re", e.value.real()},
                   {"im", e.value.imag()},
                   {"multiplicity", e.multiplicity},
                   {"kind", to_string(e.kind)},
                   {"members", cvec(e.members)}});
  j["isolated"] = iso;
}

} // namespace gapspec
