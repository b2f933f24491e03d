#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <utility>

namespace gapspec {

using cxd = std::complex<double>;

/// Coefficients of the quartic interaction density
/// W = a1/2 (|u|^4 + |v|^4) + a2 |u|^2 |v|^2
///   + a3 (|u|^2 + |v|^2)(v ubar + vbar u) + a4/2 (v ubar + vbar u)^2.
struct PotentialParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;

  bool operator==(const PotentialParams&) const = default;
};

inline PotentialParams kerr_potential(double rho) { return {1.0, rho, 0.0, 0.0}; }
inline PotentialParams grating_potential(double s) { return {0.0, 0.0, 1.0, s}; }
inline PotentialParams thirring_potential() { return {0.0, 1.0, 0.0, 0.0}; }

inline void to_json(nlohmann::json& j, const PotentialParams& p) {
  j = nlohmann::json{{"a1", p.a1}, {"a2", p.a2}, {"a3", p.a3}, {"a4", p.a4}};
}

inline void from_json(const nlohmann::json& j, PotentialParams& p) {
  j.at("a1").get_to(p.a1);
  j.at("a2").get_to(p.a2);
  j.at("a3").get_to(p.a3);
  j.at("a4").get_to(p.a4);
}

/// A complex amplitude pair (u, v).
struct FieldPair {
  cxd u;
  cxd v;
};

inline double eval_W(const FieldPair& fp, const PotentialParams& p) {
  const double nu = std::norm(fp.u);
  const double nv = std::norm(fp.v);
  const double r = 2.0 * std::real(fp.v * std::conj(fp.u));
  return 0.5 * p.a1 * (nu * nu + nv * nv) + p.a2 * nu * nv +
         p.a3 * (nu + nv) * r + 0.5 * p.a4 * r * r;
}

/// Wirtinger gradient (dW/d ubar, dW/d vbar). u and ubar are treated as
/// independent variables.
inline std::pair<cxd, cxd> grad_W(const FieldPair& fp, const PotentialParams& p) {
  const cxd u = fp.u, v = fp.v;
  const cxd nu = std::norm(u), nv = std::norm(v);
  const cxd r = v * std::conj(u) + std::conj(v) * u;
  cxd du = p.a1 * nu * u + p.a2 * nv * u + p.a3 * (r * u + (nu + nv) * v) + p.a4 * r * v;
  cxd dv = p.a1 * nv * v + p.a2 * nu * v + p.a3 * (r * v + (nu + nv) * u) + p.a4 * r * u;
  return {du, dv};
}

/// 4x4 matrix of second Wirtinger derivatives of W, rows and columns ordered
/// (u, ubar, v, vbar). Hermitian for real W.
inline Eigen::Matrix4cd hessian_full(const FieldPair& fp, const PotentialParams& p) {
  const double a1 = p.a1, a2 = p.a2, a3 = p.a3, a4 = p.a4;
  const cxd u = fp.u, v = fp.v;
  const cxd ub = std::conj(u), vb = std::conj(v);
  const cxd r = u * ub, q = v * vb;
  const cxd w = v * ub + vb * u;

  const cxd h1 = a1 * ub * ub + 2.0 * a3 * ub * vb + a4 * vb * vb;
  const cxd h2 = a1 * u * u + 2.0 * a3 * u * v + a4 * v * v;
  const cxd h3 = a1 * vb * vb + 2.0 * a3 * ub * vb + a4 * ub * ub;
  const cxd h4 = a1 * v * v + 2.0 * a3 * u * v + a4 * u * u;
  const cxd h5 = 2.0 * a1 * r + (a2 + a4) * q + 2.0 * a3 * w;
  const cxd h6 = 2.0 * a1 * q + (a2 + a4) * r + 2.0 * a3 * w;
  const cxd h7 = (a2 + a4) * ub * vb + a3 * (ub * ub + vb * vb);
  const cxd h8 = (a2 + a4) * u * v + a3 * (u * u + v * v);
  const cxd h9 = a2 * ub * v + 2.0 * a3 * (r + q) + a4 * (2.0 * u * vb + ub * v);
  const cxd h10 = a2 * u * vb + 2.0 * a3 * (r + q) + a4 * (2.0 * ub * v + u * vb);

  Eigen::Matrix4cd H;
  H << h5, h2, h10, h8,
       h1, h5, h7, h9,
       h9, h8, h6, h4,
       h7, h10, h3, h6;
  return H;
}

/// The two 2x2 potentials obtained from the Hessian at v = conj(u) by the
/// plus/minus combinations that split the four-component problem. Both are
/// Hermitian.
inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd>
reduced_potentials(cxd u0, const PotentialParams& p) {
  Eigen::Matrix4cd H = hessian_full({u0, std::conj(u0)}, p);
  const cxd h5 = H(0, 0), h2 = H(0, 1), h10 = H(0, 2), h8 = H(0, 3);
  const cxd h1 = H(1, 0), h7 = H(1, 2), h9 = H(1, 3);
  Eigen::Matrix2cd Vp, Vm;
  Vp << h5 + h8, h2 + h10,
        h1 + h9, h5 + h7;
  Vm << h5 - h8, h2 - h10,
        h1 - h9, h5 - h7;
  return {Vp, Vm};
}

} // namespace gapspec
