#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "gapspec/soliton.hpp"
#include "gapspec/spectrum.hpp"

namespace gapspec {

/// 15 significant digits, locale-independent; shared by every writer so
/// regression diffs are meaningful.
inline std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

inline void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // binary: byte-identical newlines
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  return f;
}

inline void write_profile_csv(const SolitonProfile& pr, const std::string& path) {
  auto f = open_out(path);
  f << "x,re_u0,im_u0,re_v0,im_v0\n";
  for (Eigen::Index j = 0; j < pr.x_samples.size(); ++j)
    f << fmt15(pr.x_samples(j)) << ',' << fmt15(pr.u0(j).real()) << ','
      << fmt15(pr.u0(j).imag()) << ',' << fmt15(pr.v0(j).real()) << ','
      << fmt15(pr.v0(j).imag()) << '\n';
}

inline nlohmann::json profile_json(const SolitonProfile& pr) {
  nlohmann::json j;
  j["omega"] = pr.omega;
  j["branch"] = to_string(pr.branch);
  j["source"] = to_string(pr.source);
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index k = 0; k < pr.x_samples.size(); ++k)
    rows.push_back({{"x", pr.x_samples(k)},
                    {"re_u0", pr.u0(k).real()},
                    {"im_u0", pr.u0(k).imag()}});
  j["samples"] = rows;
  return j;
}

inline void write_spectrum_csv(const Spectrum& s, const std::string& path) {
  auto f = open_out(path);
  f << "re,im,class\n";
  for (const auto& [z, label] : spectrum_rows(s))
    f << fmt15(z.real()) << ',' << fmt15(z.imag()) << ',' << label << '\n';
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

} // namespace gapspec
