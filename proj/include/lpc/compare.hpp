#pragma once

// Side-by-side evaluation of the smoothed geometric count and the spectral
// side over a grid of X. No verdict is attached: with a synthetic or partial
// spectrum the two columns are not expected to agree.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lpc/io.hpp"
#include "lpc/lattice.hpp"
#include "lpc/perron.hpp"
#include "lpc/spectral.hpp"

namespace lpc {

struct CompareConfig {
  SmoothingParams smoothing;
  RootSystemData roots = RootSystemData::sl2c();
  double c_g = 1.0;
  bool with_oracle = false;
  std::string census_source;    // echoed into the metadata
  std::string spectrum_source;  // echoed into the metadata
  std::string timestamp;        // the only field allowed to differ between reruns
};

struct ComparisonReport {
  std::vector<double> X;
  std::vector<double> geometric;
  std::vector<double> spectral;
  std::vector<double> discrepancy;
  std::vector<std::string> spectral_status;
  std::vector<double> oracle;  // empty unless requested
  std::vector<double> oracle_tail;
  Json metadata;
};

inline constexpr const char* kReportVersion = "1";

inline ComparisonReport compare(const std::vector<double>& X_grid, const LatticeCensus& census,
                                const std::vector<SpectralDatum>& spectrum, const CompareConfig& cfg) {
  cfg.smoothing.validate();
  if (X_grid.empty()) throw InputError("compare: empty X grid");
  ComparisonReport rep;
  for (double X : X_grid) {
    if (!std::isfinite(X) || X < 0.0) throw DomainError("compare: X must be finite and >= 0");
    const double geo = smoothed_geometric_count(X, census, cfg.roots, cfg.smoothing, cfg.c_g);
    const SpectralSideReport spec =
        spectral_side_eval(spectrum, X, cfg.smoothing, cfg.roots.nu, cfg.roots.rho_norm);
    rep.X.push_back(X);
    rep.geometric.push_back(geo);
    rep.spectral.push_back(spec.total);
    rep.discrepancy.push_back(geo - spec.total);
    rep.spectral_status.push_back(spectrum.empty() ? "none" : spec.status);
    if (cfg.with_oracle) {
      const ContourResult o = global_contour_oracle(spectrum, X, cfg.smoothing, cfg.roots.nu);
      rep.oracle.push_back(o.value);
      rep.oracle_tail.push_back(o.tail_bound);
    }
  }
  rep.metadata = {
      {"version", kReportVersion},
      {"timestamp", cfg.timestamp},
      {"spectrum", spectrum.empty() ? "none" : (cfg.spectrum_source.empty() ? "inline" : cfg.spectrum_source)},
      {"spectrum_size", spectrum.size()},
      {"census", cfg.census_source},
      {"census_cutoff", census.cutoff},
      {"census_size", census.size()},
      {"lattice_id", census.lattice_id},
      {"cocompact", census.cocompact},
      {"geometric_tail", 0.0},
      {"ell", cfg.smoothing.ell},
      {"theta", cfg.smoothing.theta},
      {"sigma", cfg.smoothing.sigma},
      {"height", cfg.smoothing.height},
      {"rho_norm", cfg.roots.rho_norm},
      {"nu", cfg.roots.nu},
      {"c_g", cfg.c_g},
      {"verdict", nullptr}};
  return rep;
}

inline Json to_json(const ComparisonReport& r) {
  Json j = {{"X", r.X},
            {"geometric", r.geometric},
            {"spectral", r.spectral},
            {"discrepancy", r.discrepancy},
            {"spectral_status", r.spectral_status},
            {"metadata", r.metadata}};
  if (!r.oracle.empty()) {
    j["oracle"] = r.oracle;
    j["oracle_tail"] = r.oracle_tail;
  }
  return j;
}

inline ComparisonReport comparison_report_from_json(const Json& j) {
  ComparisonReport r;
  r.X = j.at("X").get<std::vector<double>>();
  r.geometric = j.at("geometric").get<std::vector<double>>();
  r.spectral = j.at("spectral").get<std::vector<double>>();
  r.discrepancy = j.at("discrepancy").get<std::vector<double>>();
  r.spectral_status = j.at("spectral_status").get<std::vector<std::string>>();
  if (j.contains("oracle")) {
    r.oracle = j.at("oracle").get<std::vector<double>>();
    r.oracle_tail = j.at("oracle_tail").get<std::vector<double>>();
  }
  r.metadata = j.at("metadata");
  const std::size_t n = r.X.size();
  if (r.geometric.size() != n || r.spectral.size() != n || r.discrepancy.size() != n ||
      r.spectral_status.size() != n || (!r.oracle.empty() && r.oracle.size() != n)) {
    throw InputError("comparison report: column lengths differ");
  }
  return r;
}

/// Plot-ready CSV: X,geometric,spectral,discrepancy[,oracle].
inline void write_comparison_csv(std::ostream& os, const ComparisonReport& r) {
  os << "X,geometric,spectral,discrepancy" << (r.oracle.empty() ? "" : ",oracle") << '\n';
  for (std::size_t i = 0; i < r.X.size(); ++i) {
    os << format_real(r.X[i]) << ',' << format_real(r.geometric[i]) << ',' << format_real(r.spectral[i])
       << ',' << format_real(r.discrepancy[i]);
    if (!r.oracle.empty()) os << ',' << format_real(r.oracle[i]);
    os << '\n';
  }
}

}  // namespace lpc
