#pragma once

// CSV writers (15-significant-digit scientific notation) and JSON metadata
// sidecars. Every data file gets a header row and a `<file>.meta.json`
// sidecar recording the config hash, engine version and tolerances.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdecay/basis.hpp"
#include "qdecay/delta_shell.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/single_particle.hpp"
#include "qdecay/version.hpp"

namespace qdecay {

inline std::string fmt15(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.14e", v);
  return buf;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

/// FNV-1a hash of a canonical config string; stable across runs.
inline std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

inline void write_metadata_sidecar(const std::string& data_path,
                                   const nlohmann::json& config) {
  nlohmann::json meta;
  meta["engine_version"] = kVersion;
  meta["config"] = config;
  meta["config_hash"] = config_hash(config.dump());
  meta["tolerances"] = {{"pole_residual", 1e-10},
                        {"normalization_residual", 1e-10},
                        {"probability_slack", 1e-6}};
  auto out = open_output(data_path + ".meta.json");
  out << meta.dump(2) << "\n";
}

inline void write_pole_csv(const std::string& path, const PoleSet& set,
                           const nlohmann::json& config) {
  auto out = open_output(path);
  out << "n,re_kappa,im_kappa,resonance_energy,width\n";
  for (const Pole& p : set.poles)
    out << p.index << "," << fmt15(p.kappa.real()) << ","
        << fmt15(p.kappa.imag()) << "," << fmt15(p.resonance_energy()) << ","
        << fmt15(p.width()) << "\n";
  write_metadata_sidecar(path, config);
}

inline void write_coefficient_csv(const std::string& path,
                                  const CoefficientSet& coeffs,
                                  const nlohmann::json& config) {
  auto out = open_output(path);
  out << "n,re_c,im_c,strength,cumulative_strength\n";
  double cumulative = 0.0;
  for (const CoefficientEntry& e : coeffs.entries()) {
    cumulative += e.strength;
    out << e.n << "," << fmt15(e.C.real()) << "," << fmt15(e.C.imag()) << ","
        << fmt15(e.strength) << "," << fmt15(cumulative) << "\n";
  }
  write_metadata_sidecar(path, config);
}

inline void write_curves_csv(const std::string& path, const DecayCurves& c,
                             const nlohmann::json& config) {
  auto out = open_output(path);
  out << "t,survival,nonescape,re_amplitude,im_amplitude\n";
  for (std::size_t i = 0; i < c.times.size(); ++i)
    out << fmt15(c.times[i]) << "," << fmt15(c.survival[i]) << ","
        << fmt15(c.nonescape[i]) << "," << fmt15(c.amplitude[i].real()) << ","
        << fmt15(c.amplitude[i].imag()) << "\n";
  write_metadata_sidecar(path, config);
}

struct FrameRow {
  double t, r;
  cplx psi;
};

inline void write_frames_csv(const std::string& path,
                             const std::vector<FrameRow>& rows,
                             const nlohmann::json& config) {
  auto out = open_output(path);
  out << "t,r,re_psi,im_psi,abs2_psi\n";
  for (const FrameRow& row : rows)
    out << fmt15(row.t) << "," << fmt15(row.r) << "," << fmt15(row.psi.real())
        << "," << fmt15(row.psi.imag()) << "," << fmt15(std::norm(row.psi))
        << "\n";
  write_metadata_sidecar(path, config);
}

struct FrameRow2 {
  double t, r1, r2;
  cplx psi;
};

inline void write_frames2_csv(const std::string& path,
                              const std::vector<FrameRow2>& rows,
                              const nlohmann::json& config) {
  auto out = open_output(path);
  out << "t,r1,r2,re_psi,im_psi,abs2_psi\n";
  for (const FrameRow2& row : rows)
    out << fmt15(row.t) << "," << fmt15(row.r1) << "," << fmt15(row.r2) << ","
        << fmt15(row.psi.real()) << "," << fmt15(row.psi.imag()) << ","
        << fmt15(std::norm(row.psi)) << "\n";
  write_metadata_sidecar(path, config);
}

}  // namespace qdecay
