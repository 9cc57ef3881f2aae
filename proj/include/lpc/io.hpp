#pragma once

// CSV persistence for censuses and spectra, JSON for reports.
//
// Census CSV: optional leading '#' metadata lines (key=value), then the
// header re_a,im_a,re_b,im_b,re_c,im_c,re_d,im_d,radius,gauge. Reals use 17
// significant digits. On reading, radius and gauge are recomputed from the
// exact entries and must agree with the stored values.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lpc/errors.hpp"
#include "lpc/lattice.hpp"
#include "lpc/perron.hpp"
#include "lpc/poincare.hpp"
#include "lpc/spectral.hpp"
#include "lpc/torus.hpp"

namespace lpc {

using Json = nlohmann::json;

inline constexpr const char* kCensusHeader = "re_a,im_a,re_b,im_b,re_c,im_c,re_d,im_d,radius,gauge";
inline constexpr const char* kSpectrumLambdaHeader = "label,lambda,weight";
inline constexpr const char* kSpectrumZHeader = "label,z_re,z_im,weight";

/// 17 significant digits.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::int64_t parse_int(std::string_view s, std::size_t line_no) {
  s = trim(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("line " + std::to_string(line_no) + ": '" + std::string(s) + "' is not an integer");
  }
  return v;
}

inline double parse_real(std::string_view s, std::size_t line_no) {
  const std::string str(trim(s));
  if (str.empty()) throw InputError("line " + std::to_string(line_no) + ": empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size()) {
    throw InputError("line " + std::to_string(line_no) + ": '" + str + "' is not a number");
  }
  return v;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- census

inline void write_census(std::ostream& os, const LatticeCensus& census) {
  os << "# lattice_id=" << census.lattice_id << '\n';
  os << "# cutoff=" << format_real(census.cutoff) << '\n';
  os << "# cocompact=" << (census.cocompact ? "true" : "false") << '\n';
  os << kCensusHeader << '\n';
  for (const auto& p : census.points) {
    const auto& e = p.entries;
    os << e.a.re << ',' << e.a.im << ',' << e.b.re << ',' << e.b.im << ',' << e.c.re << ',' << e.c.im
       << ',' << e.d.re << ',' << e.d.im << ',' << format_real(p.radius) << ',' << format_real(p.gauge)
       << '\n';
  }
}

inline LatticeCensus read_census(std::istream& is) {
  LatticeCensus census;
  bool have_cutoff = false;
  bool have_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view sv = detail::trim(line);
    if (sv.empty()) continue;
    if (sv.front() == '#') {
      if (have_header) throw InputError("census: metadata after the header at line " + std::to_string(line_no));
      const std::string_view body = detail::trim(sv.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string key(detail::trim(body.substr(0, eq)));
      const std::string_view val = detail::trim(body.substr(eq + 1));
      if (key == "lattice_id") {
        census.lattice_id = std::string(val);
      } else if (key == "cutoff") {
        census.cutoff = detail::parse_real(val, line_no);
        have_cutoff = true;
      } else if (key == "cocompact") {
        census.cocompact = val == "true";
      }
      continue;
    }
    if (!have_header) {
      if (sv != kCensusHeader) throw InputError("census: unexpected header '" + std::string(sv) + "'");
      have_header = true;
      continue;
    }
    const auto f = detail::split_csv(sv);
    if (f.size() != 10) throw InputError("census: line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields, expected 10");
    GaussMatrix m{{detail::parse_int(f[0], line_no), detail::parse_int(f[1], line_no)},
                  {detail::parse_int(f[2], line_no), detail::parse_int(f[3], line_no)},
                  {detail::parse_int(f[4], line_no), detail::parse_int(f[5], line_no)},
                  {detail::parse_int(f[6], line_no), detail::parse_int(f[7], line_no)}};
    if (m.det() != GaussInt{1, 0}) throw InputError("census: line " + std::to_string(line_no) + " has determinant != 1");
    const LatticePoint p = LatticePoint::from_entries(m);
    const double r = detail::parse_real(f[8], line_no);
    const double g = detail::parse_real(f[9], line_no);
    if (std::abs(r - p.radius) > 1e-9 * std::max(1.0, p.radius) || std::abs(g - p.gauge) > 1e-9 * p.gauge) {
      throw InputError("census: line " + std::to_string(line_no) + " radius/gauge disagree with the entries");
    }
    census.points.push_back(p);
  }
  if (!have_header) throw InputError("census: missing header");
  if (!have_cutoff) {
    // Without metadata the tightest cutoff consistent with the data is used.
    census.cutoff = census.points.empty() ? 1.0 : census.points.back().gauge;
    for (const auto& p : census.points) census.cutoff = std::max(census.cutoff, p.gauge);
  }
  for (std::size_t i = 0; i < census.points.size(); ++i) {
    if (census.points[i].gauge > census.cutoff * (1.0 + kBoundarySlack)) {
      throw InputError("census: a point exceeds the declared cutoff");
    }
    if (i > 0 && !canonical_less(census.points[i - 1], census.points[i])) {
      throw InputError("census: rows are not in canonical order (or repeat)");
    }
  }
  return census;
}

inline void save_census(const std::string& path, const LatticeCensus& census) {
  auto os = detail::open_out(path);
  write_census(os, census);
  if (!os) throw InputError("census: write to '" + path + "' failed");
}

inline LatticeCensus load_census(const std::string& path) {
  auto is = detail::open_in(path);
  return read_census(is);
}

// ---------------------------------------------------------------- spectrum

/// Written in lambda form when every datum came from lambda, else in z form.
inline void write_spectrum(std::ostream& os, const std::vector<SpectralDatum>& data) {
  const bool lambda_form = std::all_of(data.begin(), data.end(), [](const SpectralDatum& d) {
    return d.source == SpectralDatum::Source::Lambda;
  });
  os << (lambda_form ? kSpectrumLambdaHeader : kSpectrumZHeader) << '\n';
  for (const auto& d : data) {
    if (d.label.find_first_of(",\n\r") != std::string::npos) {
      throw InputError("spectrum: label '" + d.label + "' contains a comma or newline");
    }
    os << d.label << ',';
    if (lambda_form) {
      os << format_real(d.lambda);
    } else {
      os << format_real(d.z.real()) << ',' << format_real(d.z.imag());
    }
    os << ',' << format_real(d.weight) << '\n';
  }
}

inline std::vector<SpectralDatum> read_spectrum(std::istream& is, double rho_norm) {
  std::vector<SpectralDatum> out;
  std::string line;
  std::size_t line_no = 0;
  int form = 0;  // 1 lambda, 2 z
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view sv = detail::trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (form == 0) {
      if (sv == kSpectrumLambdaHeader) {
        form = 1;
      } else if (sv == kSpectrumZHeader) {
        form = 2;
      } else {
        throw InputError("spectrum: unexpected header '" + std::string(sv) + "'");
      }
      continue;
    }
    const auto f = detail::split_csv(sv);
    const std::size_t expected = form == 1 ? 3 : 4;
    if (f.size() != expected) {
      throw InputError("spectrum: line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                       " fields, expected " + std::to_string(expected));
    }
    std::string label(detail::trim(f[0]));
    if (form == 1) {
      out.push_back(SpectralDatum::from_lambda(std::move(label), detail::parse_real(f[1], line_no),
                                               detail::parse_real(f[2], line_no), rho_norm));
    } else {
      out.push_back(SpectralDatum::from_z(
          std::move(label), Complex(detail::parse_real(f[1], line_no), detail::parse_real(f[2], line_no)),
          detail::parse_real(f[3], line_no), rho_norm));
    }
  }
  if (form == 0) throw InputError("spectrum: missing header");
  canonical_spectrum(out);  // duplicate labels and repeated constant forms
  return out;
}

inline void save_spectrum(const std::string& path, const std::vector<SpectralDatum>& data) {
  auto os = detail::open_out(path);
  write_spectrum(os, data);
}

inline std::vector<SpectralDatum> load_spectrum(const std::string& path, double rho_norm) {
  auto is = detail::open_in(path);
  return read_spectrum(is, rho_norm);
}

// ---------------------------------------------------------------- JSON

inline Json to_json(const CountingModel& m) {
  return {{"c", m.c}, {"sigma_o", m.sigma_o}, {"eps", m.eps}, {"safety", m.safety},
          {"fit_lo", m.fit_lo}, {"fit_hi", m.fit_hi}};
}

inline CountingModel counting_model_from_json(const Json& j) {
  CountingModel m;
  m.c = j.at("c").get<double>();
  m.sigma_o = j.at("sigma_o").get<double>();
  m.eps = j.at("eps").get<double>();
  m.safety = j.at("safety").get<double>();
  m.fit_lo = j.at("fit_lo").get<double>();
  m.fit_hi = j.at("fit_hi").get<double>();
  return m;
}

inline Json to_json(const SeriesEvaluation& e) {
  Json shells = Json::array();
  for (const auto& s : e.partial_sums) {
    shells.push_back({{"radius", s.radius},
                      {"count", s.count},
                      {"cum_re", s.cumulative.real()},
                      {"cum_im", s.cumulative.imag()},
                      {"cum_abs", s.cumulative_abs}});
  }
  return {{"z_re", e.z.real()},
          {"z_im", e.z.imag()},
          {"value_re", e.value.real()},
          {"value_im", e.value.imag()},
          {"tail_bound", e.tail_bound},
          {"census_cutoff", e.census_cutoff},
          {"required_abscissa", e.required_abscissa},
          {"lattice_id", e.lattice_id},
          {"cocompact", e.cocompact},
          {"counting_model", to_json(e.model)},
          {"shells", shells}};
}

inline SeriesEvaluation series_evaluation_from_json(const Json& j) {
  SeriesEvaluation e;
  e.z = {j.at("z_re").get<double>(), j.at("z_im").get<double>()};
  e.value = {j.at("value_re").get<double>(), j.at("value_im").get<double>()};
  e.tail_bound = j.at("tail_bound").get<double>();
  e.census_cutoff = j.at("census_cutoff").get<double>();
  e.required_abscissa = j.at("required_abscissa").get<double>();
  e.lattice_id = j.at("lattice_id").get<std::string>();
  e.cocompact = j.at("cocompact").get<bool>();
  e.model = counting_model_from_json(j.at("counting_model"));
  for (const auto& s : j.at("shells")) {
    e.partial_sums.push_back({s.at("radius").get<double>(), s.at("count").get<std::size_t>(),
                              Complex(s.at("cum_re").get<double>(), s.at("cum_im").get<double>()),
                              s.at("cum_abs").get<double>()});
  }
  return e;
}

inline Json to_json(const TorusReport& r) {
  return {{"n", r.params.n},
          {"nu", r.params.nu},
          {"lambda", r.params.lambda},
          {"x", r.params.x},
          {"geom_trunc", r.params.geom_trunc},
          {"spec_trunc", r.params.spec_trunc},
          {"tail_correction", r.params.tail_correction},
          {"geometric", r.geometric},
          {"spectral", r.spectral},
          {"spectral_imag", r.spectral_imag},
          {"discrepancy", r.discrepancy},
          {"geom_tail", r.geom_tail},
          {"spec_tail", r.spec_tail},
          {"budget", r.budget},
          {"pass", r.pass}};
}

inline TorusReport torus_report_from_json(const Json& j) {
  TorusReport r;
  r.params.n = j.at("n").get<int>();
  r.params.nu = j.at("nu").get<int>();
  r.params.lambda = j.at("lambda").get<double>();
  r.params.x = j.at("x").get<std::vector<double>>();
  r.params.geom_trunc = j.at("geom_trunc").get<long>();
  r.params.spec_trunc = j.at("spec_trunc").get<long>();
  r.params.tail_correction = j.at("tail_correction").get<bool>();
  r.geometric = j.at("geometric").get<double>();
  r.spectral = j.at("spectral").get<double>();
  r.spectral_imag = j.at("spectral_imag").get<double>();
  r.discrepancy = j.at("discrepancy").get<double>();
  r.geom_tail = j.at("geom_tail").get<double>();
  r.spec_tail = j.at("spec_tail").get<double>();
  r.budget = j.at("budget").get<double>();
  r.pass = j.at("pass").get<bool>();
  return r;
}

inline Json complex_json(Complex c) { return {c.real(), c.imag()}; }
inline Complex complex_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline Json to_json(const SpectralSideReport& r) {
  Json terms = Json::array();
  for (const auto& t : r.discrete_terms) {
    Json e = {{"label", t.label},
              {"lambda", t.lambda},
              {"z", complex_json(t.z)},
              {"weight", t.weight},
              {"constant_form", t.constant_form},
              {"A", complex_json(t.A)},
              {"B", complex_json(t.B)},
              {"Per", complex_json(t.Per)},
              {"contribution", t.contribution},
              {"imag_residual", t.imag_residual}};
    e["error"] = t.error ? Json(*t.error) : Json(nullptr);
    terms.push_back(std::move(e));
  }
  return {{"X", r.X},
          {"nu", r.nu},
          {"sign", r.sign},
          {"constant_term", r.constant_term},
          {"discrete_terms", terms},
          {"total", r.total},
          {"signed_total", r.signed_total},
          {"status", r.status},
          {"failed", r.failed}};
}

inline SpectralSideReport spectral_report_from_json(const Json& j) {
  SpectralSideReport r;
  r.X = j.at("X").get<double>();
  r.nu = j.at("nu").get<int>();
  r.sign = j.at("sign").get<int>();
  r.constant_term = j.at("constant_term").get<double>();
  r.total = j.at("total").get<double>();
  r.signed_total = j.at("signed_total").get<double>();
  r.status = j.at("status").get<std::string>();
  r.failed = j.at("failed").get<std::size_t>();
  for (const auto& e : j.at("discrete_terms")) {
    DatumTerm t;
    t.label = e.at("label").get<std::string>();
    t.lambda = e.at("lambda").get<double>();
    t.z = complex_from_json(e.at("z"));
    t.weight = e.at("weight").get<double>();
    t.constant_form = e.at("constant_form").get<bool>();
    t.A = complex_from_json(e.at("A"));
    t.B = complex_from_json(e.at("B"));
    t.Per = complex_from_json(e.at("Per"));
    t.contribution = e.at("contribution").get<double>();
    t.imag_residual = e.at("imag_residual").get<double>();
    if (!e.at("error").is_null()) t.error = e.at("error").get<std::string>();
    r.discrete_terms.push_back(std::move(t));
  }
  return r;
}

inline Json to_json(const PerronScaling& s) {
  return {{"X", s.X},
          {"closed_form", s.closed_form},
          {"heights", s.heights},
          {"values", s.values},
          {"raw_errors", s.raw_errors},
          {"envelope_errors", s.envelope_errors},
          {"log2_ratios", s.log2_ratios},
          {"fitted_exponent", s.fitted_exponent},
          {"raw_fitted_exponent", s.raw_fitted_exponent},
          {"fitted_constant", s.fitted_constant}};
}

inline PerronScaling perron_scaling_from_json(const Json& j) {
  PerronScaling s;
  s.X = j.at("X").get<double>();
  s.closed_form = j.at("closed_form").get<double>();
  s.heights = j.at("heights").get<std::vector<double>>();
  s.values = j.at("values").get<std::vector<double>>();
  s.raw_errors = j.at("raw_errors").get<std::vector<double>>();
  s.envelope_errors = j.at("envelope_errors").get<std::vector<double>>();
  s.log2_ratios = j.at("log2_ratios").get<std::vector<double>>();
  s.fitted_exponent = j.at("fitted_exponent").get<double>();
  s.raw_fitted_exponent = j.at("raw_fitted_exponent").get<double>();
  s.fitted_constant = j.at("fitted_constant").get<double>();
  return s;
}

/// Pretty-printed JSON; nlohmann emits the shortest decimal that round-trips.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline void save_json(const std::string& path, const Json& j) {
  auto os = detail::open_out(path);
  os << dump_json(j);
}

inline Json load_json(const std::string& path) {
  auto is = detail::open_in(path);
  try {
    return Json::parse(is);
  } catch (const Json::exception& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

}  // namespace lpc
