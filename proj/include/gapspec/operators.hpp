#pragma once

#include <complex>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "gapspec/chebyshev.hpp"
#include "gapspec/potential.hpp"
#include "gapspec/soliton.hpp"

namespace gapspec {

/// Orthogonal mixing matrix whose columns span the two reduction subspaces
/// U1 = +-U4, U2 = +-U3; conjugation transpose(S4) * H * S4 block-diagonalizes
/// the full energy operator.
inline Eigen::Matrix4d s4_matrix() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4d S;
  S << r, 0, r, 0,
       0, r, 0, r,
       0, r, 0, -r,
       r, 0, -r, 0;
  return S;
}

/// kron(M4, I_n) for component-major vectors (all U1 samples, then U2, ...).
inline Eigen::MatrixXd kron_identity(const Eigen::Matrix4d& M, int n) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (M(i, j) != 0.0)
        K.block(i * n, j * n, n, n) = M(i, j) * Eigen::MatrixXd::Identity(n, n);
  return K;
}

/// diag(1,-1) on two grid-sized components.
inline Eigen::MatrixXd sigma3_big(int n) {
  Eigen::VectorXd d(2 * n);
  d.head(n).setOnes();
  d.tail(n).setConstant(-1.0);
  return d.asDiagonal();
}

/// diag(1,-1,1,-1) on four grid-sized components.
inline Eigen::MatrixXd sigma4_big(int n) {
  Eigen::VectorXd d(4 * n);
  for (int c = 0; c < 4; ++c) d.segment(c * n, n).setConstant(c % 2 == 0 ? 1.0 : -1.0);
  return d.asDiagonal();
}

namespace detail {

inline void check_profile_grid(const ChebGrid& grid, const SolitonProfile& profile,
                               const char* who) {
  if (profile.u0.size() != grid.nodes.size())
    throw std::invalid_argument(std::string(who) + ": grid/profile size mismatch");
}

} // namespace detail

/// Full linearization H_omega = D(d/dx) + V(x) acting on component-major
/// (U1, U2, U3, U4) samples; 4(N+1) square.
inline Eigen::MatrixXcd assemble_full(const ChebGrid& grid, const SolitonProfile& profile,
                                      const PotentialParams& p, double omega) {
  detail::check_profile_grid(grid, profile, "assemble_full");
  const int n = static_cast<int>(grid.nodes.size());
  const cxd i1(0.0, 1.0);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(4 * n, 4 * n);

  const Eigen::MatrixXcd Dm = -i1 * grid.diff;
  const Eigen::MatrixXcd Dp = i1 * grid.diff;
  const Eigen::MatrixXcd Wn = omega * Eigen::MatrixXcd::Identity(n, n);
  H.block(0 * n, 0 * n, n, n) = Wn + Dm;
  H.block(1 * n, 1 * n, n, n) = Wn + Dp;
  H.block(2 * n, 2 * n, n, n) = Wn + Dp;
  H.block(3 * n, 3 * n, n, n) = Wn + Dm;
  for (int j = 0; j < n; ++j) {
    H(0 * n + j, 2 * n + j) = -1.0;
    H(1 * n + j, 3 * n + j) = -1.0;
    H(2 * n + j, 0 * n + j) = -1.0;
    H(3 * n + j, 1 * n + j) = -1.0;
  }
  for (int j = 0; j < n; ++j) {
    const Eigen::Matrix4cd V = hessian_full({profile.u0(j), profile.v0(j)}, p);
    for (int c1 = 0; c1 < 4; ++c1)
      for (int c2 = 0; c2 < 4; ++c2) H(c1 * n + j, c2 * n + j) += V(c1, c2);
  }
  return H;
}

/// Reduced Dirac operators H_plus and H_minus, each 2(N+1) square.
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> assemble_blocks(
    const ChebGrid& grid, const SolitonProfile& profile, const PotentialParams& p,
    double omega) {
  detail::check_profile_grid(grid, profile, "assemble_blocks");
  const int n = static_cast<int>(grid.nodes.size());
  const cxd i1(0.0, 1.0);
  Eigen::MatrixXcd Hp = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  Eigen::MatrixXcd Hm = Hp;

  const Eigen::MatrixXcd Dm = omega * Eigen::MatrixXcd::Identity(n, n) - i1 * grid.diff;
  const Eigen::MatrixXcd Dp = omega * Eigen::MatrixXcd::Identity(n, n) + i1 * grid.diff;
  Hp.block(0, 0, n, n) = Dm;
  Hp.block(n, n, n, n) = Dp;
  Hm.block(0, 0, n, n) = Dm;
  Hm.block(n, n, n, n) = Dp;
  for (int j = 0; j < n; ++j) {
    Hp(j, n + j) = -1.0;
    Hp(n + j, j) = -1.0;
    Hm(j, n + j) = 1.0;
    Hm(n + j, j) = 1.0;
  }
  for (int j = 0; j < n; ++j) {
    auto [Vp, Vm] = reduced_potentials(profile.u0(j), p);
    Hp(j, j) += Vp(0, 0);
    Hp(j, n + j) += Vp(0, 1);
    Hp(n + j, j) += Vp(1, 0);
    Hp(n + j, n + j) += Vp(1, 1);
    Hm(j, j) += Vm(0, 0);
    Hm(j, n + j) += Vm(0, 1);
    Hm(n + j, j) += Vm(1, 0);
    Hm(n + j, n + j) += Vm(1, 1);
  }
  return {std::move(Hp), std::move(Hm)};
}

/// Linearized evolution generator L = -i blockdiag(sigma3, sigma3)
/// [[0, H_minus],[H_plus, 0]]; its eigenvalues are the stability eigenvalues.
inline Eigen::MatrixXcd assemble_L(const Eigen::MatrixXcd& Hplus,
                                   const Eigen::MatrixXcd& Hminus) {
  if (Hplus.rows() != Hplus.cols() || Hminus.rows() != Hminus.cols() ||
      Hplus.rows() != Hminus.rows())
    throw std::invalid_argument("assemble_L: dimension mismatch");
  const int n2 = static_cast<int>(Hplus.rows());
  const int n = n2 / 2;
  const Eigen::MatrixXd S3 = sigma3_big(n);
  const cxd mi(0.0, -1.0);
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(2 * n2, 2 * n2);
  L.block(0, n2, n2, n2) = mi * (S3 * Hminus);
  L.block(n2, 0, n2, n2) = mi * (S3 * Hplus);
  return L;
}

/// Quadratic-pencil products whose eigenvalues are gamma = -lambda^2.
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> product_blocks(
    const Eigen::MatrixXcd& Hplus, const Eigen::MatrixXcd& Hminus) {
  if (Hplus.rows() != Hminus.rows() || Hplus.rows() != Hplus.cols())
    throw std::invalid_argument("product_blocks: dimension mismatch");
  const int n = static_cast<int>(Hplus.rows()) / 2;
  const Eigen::MatrixXd S3 = sigma3_big(n);
  Eigen::MatrixXcd Mp = S3 * Hminus * S3 * Hplus;
  Eigen::MatrixXcd Mm = S3 * Hplus * S3 * Hminus;
  return {std::move(Mp), std::move(Mm)};
}

/// Immutable bundle of the assembled operators at one omega.
struct OperatorSet {
  double omega = 0.0;
  Eigen::MatrixXcd Hplus;
  Eigen::MatrixXcd Hminus;
};

inline OperatorSet make_operator_set(const ChebGrid& grid, const SolitonProfile& profile,
                                     const PotentialParams& p, double omega) {
  OperatorSet set;
  set.omega = omega;
  std::tie(set.Hplus, set.Hminus) = assemble_blocks(grid, profile, p, omega);
  return set;
}

/// Quadrature values of the two orthogonality constraints for a full
/// 4-component eigenvector (component-major).
inline std::pair<cxd, cxd> constraint_residuals(const SolitonProfile& profile,
                                                const Eigen::VectorXcd& U) {
  if (!profile.grid)
    throw std::invalid_argument("constraint_residuals: profile was not sampled on a grid");
  const ChebGrid& g = *profile.grid;
  const int n = static_cast<int>(g.nodes.size());
  if (U.size() != 4 * n)
    throw std::invalid_argument("constraint_residuals: expected a 4(N+1) vector");
  const Eigen::VectorXcd du = g.diff * profile.u0;
  const Eigen::VectorXcd dv = g.diff * profile.v0;
  cxd c1 = 0.0, c2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = g.weights(j);
    c1 += w * (std::conj(profile.u0(j)) * U(j) + profile.u0(j) * U(n + j) +
               std::conj(profile.v0(j)) * U(2 * n + j) + profile.v0(j) * U(3 * n + j));
    c2 += w * (std::conj(du(j)) * U(j) - du(j) * U(n + j) +
               std::conj(dv(j)) * U(2 * n + j) - dv(j) * U(3 * n + j));
  }
  return {c1, c2};
}

/// Reduced constraints (u0, V1) and (u0', sigma3 V2) for the block pair.
inline std::pair<cxd, cxd> constraint_residuals(const SolitonProfile& profile,
                                                const Eigen::VectorXcd& V1,
                                                const Eigen::VectorXcd& V2) {
  if (!profile.grid)
    throw std::invalid_argument("constraint_residuals: profile was not sampled on a grid");
  const ChebGrid& g = *profile.grid;
  const int n = static_cast<int>(g.nodes.size());
  if (V1.size() != 2 * n || V2.size() != 2 * n)
    throw std::invalid_argument("constraint_residuals: expected 2(N+1) block vectors");
  const Eigen::VectorXcd du = g.diff * profile.u0;
  cxd c1 = 0.0, c2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = g.weights(j);
    c1 += w * (std::conj(profile.u0(j)) * V1(j) + profile.u0(j) * V1(n + j));
    c2 += w * (std::conj(du(j)) * V2(j) - du(j) * V2(n + j));
  }
  return {c1, c2};
}

/// Max-norm commutation defect of the reduction swap
/// (U1,U2,U3,U4) -> (U4,U3,U2,U1) with the full operator.
inline double reduction_symmetry_residual(const Eigen::MatrixXcd& Hfull) {
  const int n = static_cast<int>(Hfull.rows()) / 4;
  Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
  J(0, 3) = J(1, 2) = J(2, 1) = J(3, 0) = 1.0;
  const Eigen::MatrixXd P = kron_identity(J, n);
  return (P * Hfull - Hfull * P).cwiseAbs().maxCoeff();
}

/// Rows/cols of a component-major operator with the two boundary nodes of
/// every component removed; used before dense eigensolves.
inline Eigen::MatrixXcd interior_matrix(const Eigen::MatrixXcd& M, int n_nodes) {
  const int total = static_cast<int>(M.rows());
  if (n_nodes < 3 || total % n_nodes != 0)
    throw std::invalid_argument("interior_matrix: size is not a component multiple");
  const int comps = total / n_nodes;
  const int keep = n_nodes - 2;
  std::vector<int> idx;
  idx.reserve(comps * keep);
  for (int c = 0; c < comps; ++c)
    for (int j = 1; j < n_nodes - 1; ++j) idx.push_back(c * n_nodes + j);
  Eigen::MatrixXcd out(idx.size(), idx.size());
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = 0; b < idx.size(); ++b) out(a, b) = M(idx[a], idx[b]);
  return out;
}

/// Zero-padded full-grid embedding of an interior-only vector.
inline Eigen::VectorXcd embed_interior(const Eigen::VectorXcd& v, int n_nodes) {
  const int keep = n_nodes - 2;
  if (v.size() % keep != 0)
    throw std::invalid_argument("embed_interior: size is not a component multiple");
  const int comps = static_cast<int>(v.size()) / keep;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(comps * n_nodes);
  for (int c = 0; c < comps; ++c)
    for (int j = 0; j < keep; ++j) out(c * n_nodes + 1 + j) = v(c * keep + j);
  return out;
}

/// Writes a dense complex matrix as row-major little-endian f64 pairs
/// (re, im) with a JSON sidecar <path>.json holding the dimensions.
inline void dump_matrix(const Eigen::MatrixXcd& M, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("dump_matrix: cannot open " + path);
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      const double re = M(i, j).real(), im = M(i, j).imag();
      f.write(reinterpret_cast<const char*>(&re), sizeof(double));
      f.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  f.close();
  nlohmann::json side;
  side["rows"] = M.rows();
  side["cols"] = M.cols();
  side["dtype"] = "complex128";
  side["layout"] = "row-major, interleaved re/im, little-endian";
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
}

inline Eigen::MatrixXcd load_matrix(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw std::runtime_error("load_matrix: missing sidecar for " + path);
  nlohmann::json side = nlohmann::json::parse(js);
  const Eigen::Index rows = side.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = side.at("cols").get<Eigen::Index>();
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_matrix: cannot open " + path);
  Eigen::MatrixXcd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      double re = 0.0, im = 0.0;
      f.read(reinterpret_cast<char*>(&re), sizeof(double));
      f.read(reinterpret_cast<char*>(&im), sizeof(double));
      M(i, j) = cxd(re, im);
    }
  return M;
}

} // namespace gapspec
