#pragma once

// Command-line front end. Every subcommand accepts --config FILE with flat
// `key = value` lines naming its long options; flags on the command line
// win over the file.
//
// Exit status: 0 success, 1 validation or usage error, 2 numeric failure.

#include <chrono>
#include <ctime>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpc/compare.hpp"
#include "lpc/errors.hpp"
#include "lpc/io.hpp"
#include "lpc/lattice.hpp"
#include "lpc/perron.hpp"
#include "lpc/poincare.hpp"
#include "lpc/spectral.hpp"
#include "lpc/torus.hpp"

namespace lpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

struct RunConfig {
  std::string lattice_id = kGaussianLatticeId;
  double rho_norm = 1.0;
  double c_g = 1.0;
  std::optional<double> sigma_o;
  double eps = kDefaultCountingEps;
  double safety = kDefaultTailSafety;
  SmoothingParams smoothing;
  unsigned threads = 1;
  std::uint64_t work_budget = EnumerationOptions{}.work_budget;
  std::string census_path;
  std::optional<double> cutoff;
  std::string out_path;

  RootSystemData roots() const { return RootSystemData::sl2c(rho_norm); }
  EnumerationOptions enumeration() const { return {work_budget, threads}; }

  void validate() const {
    if (lattice_id != kGaussianLatticeId) {
      throw InputError("lattice '" + lattice_id + "' is not supported (only " + kGaussianLatticeId + ")");
    }
    if (!(rho_norm >= 0.0) || !std::isfinite(rho_norm)) throw DomainError("rho-norm must be >= 0");
    if (!(c_g > 0.0) || !std::isfinite(c_g)) throw DomainError("c-g must be > 0");
    if (threads < 1) throw DomainError("threads must be >= 1");
    if (work_budget < 1) throw DomainError("work-budget must be >= 1");
  }
};

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline void emit(std::ostream& out, const std::string& path, const Json& j) {
  if (path.empty()) {
    out << dump_json(j);
  } else {
    save_json(path, j);
  }
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Lattice point counting: geometric and spectral sides with numerical oracles", "lpc"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    add_enumerate(app);
    add_poincare(app);
    add_smoothed_count(app);
    add_spectral_side(app);
    add_compare(app);
    add_oracle_torus(app);
    add_perron_check(app);

    try {
      app.parse(argc, argv);
      if (!config_path_.empty()) apply_config(app.get_subcommands().front(), config_path_);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err_ << "usage error: " << e.what() << "\n";
      err_ << "run 'lpc --help' for usage\n";
      return kExitValidation;
    }
    try {
      cfg_.validate();
      return action_();
    } catch (const ValidationError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const ComputationError& e) {
      err_ << "numeric error: " << e.what() << "\n";
      return kExitNumeric;
    } catch (const Json::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitValidation;
    }
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  RunConfig cfg_;
  std::function<int()> action_;
  std::string config_path_;

  // Fill options not given on the command line; unknown keys are ignored.
  static void apply_config(CLI::App* sub, const std::string& path) {
    for (const auto& item : CLI::ConfigINI().from_file(path)) {
      CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
      if (opt == nullptr || opt->count() > 0 || item.name == "config") continue;
      for (const auto& v : item.inputs) opt->add_result(v);
      opt->run_callback();
    }
  }

  // Options shared by every subcommand.
  void add_common(CLI::App* sub) {
    sub->add_option("--config", config_path_, "Flat key = value file supplying option defaults")
        ->check(CLI::ExistingFile);
    sub->add_option("--lattice", cfg_.lattice_id, "Lattice identifier")->capture_default_str();
    sub->add_option("--rho-norm", cfg_.rho_norm, "|rho| of the group instance")->capture_default_str();
    sub->add_option("--c-g", cfg_.c_g, "Normalising constant C_G")->capture_default_str();
    sub->add_option("--threads", cfg_.threads, "Worker threads")->capture_default_str();
    sub->add_option("--work-budget", cfg_.work_budget, "Enumeration work budget (candidates)")
        ->capture_default_str();
  }

  void add_smoothing(CLI::App* sub) {
    sub->add_option("--ell", cfg_.smoothing.ell, "Perron order ell")->capture_default_str();
    sub->add_option("--theta", cfg_.smoothing.theta, "Perron spacing theta")->capture_default_str();
    sub->add_option("--sigma", cfg_.smoothing.sigma, "Contour abscissa sigma")->capture_default_str();
    sub->add_option("--height", cfg_.smoothing.height, "Contour truncation height T")->capture_default_str();
  }

  void add_census_source(CLI::App* sub) {
    auto* c = sub->add_option("--census", cfg_.census_path, "Census CSV produced by 'enumerate'");
    sub->add_option("--cutoff", cfg_.cutoff, "Enumerate a census of this gauge cutoff instead")
        ->excludes(c);
  }

  LatticeCensus census_for(std::optional<double> needed_cutoff) const {
    if (!cfg_.census_path.empty()) return load_census(cfg_.census_path);
    const double c = cfg_.cutoff.value_or(needed_cutoff.value_or(0.0));
    if (!(c >= 1.0)) throw InputError("give --census or --cutoff");
    return enumerate_pruned(c, cfg_.enumeration());
  }

  CountingModel counting_model(const LatticeCensus& census) const {
    const LatticeCensus& fit = census.cutoff >= 8.0 ? census : fit_census();
    return fit_counting_model(fit, cfg_.eps, cfg_.safety, cfg_.sigma_o);
  }

  const LatticeCensus& fit_census() const {
    static const LatticeCensus c = enumerate_pruned(8.0);
    return c;
  }

  void add_enumerate(CLI::App& app) {
    auto* sub = app.add_subcommand("enumerate", "Enumerate SL2(Z[i]) elements with gauge <= cutoff");
    add_common(sub);
    auto method = std::make_shared<std::string>("pruned");
    sub->add_option("--cutoff", cfg_.cutoff, "Gauge cutoff (>= 1)")->required();
    sub->add_option("--method", *method, "pruned or naive")
        ->check(CLI::IsMember({"pruned", "naive"}))
        ->capture_default_str();
    sub->add_option("--out", cfg_.out_path, "Census CSV path (stdout when omitted)");
    sub->callback([this, method] {
      action_ = [this, method] {
        const LatticeCensus census = *method == "naive"
                                         ? enumerate_naive(*cfg_.cutoff, cfg_.enumeration())
                                         : enumerate_pruned(*cfg_.cutoff, cfg_.enumeration());
        if (cfg_.out_path.empty()) {
          write_census(out_, census);
        } else {
          save_census(cfg_.out_path, census);
          out_ << dump_json({{"count", census.size()},
                             {"cutoff", census.cutoff},
                             {"lattice_id", census.lattice_id},
                             {"cocompact", census.cocompact},
                             {"method", *method},
                             {"out", cfg_.out_path}});
        }
        return kExitOk;
      };
    });
  }

  void add_poincare(CLI::App& app) {
    auto* sub = app.add_subcommand("poincare", "Evaluate the Poincare series over a census");
    add_common(sub);
    add_census_source(sub);
    struct Opts {
      double z_re = 0.0, z_im = 0.0;
      std::vector<double> g;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--z-re", o->z_re, "Re z")->required();
    sub->add_option("--z-im", o->z_im, "Im z")->capture_default_str();
    sub->add_option("--g", o->g, "g as 8 reals: a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im")
        ->delimiter(',')
        ->expected(8);
    sub->add_option("--sigma-o", cfg_.sigma_o, "Fix sigma_o instead of fitting it");
    sub->add_option("--eps", cfg_.eps, "Counting-model epsilon")->capture_default_str();
    sub->add_option("--safety", cfg_.safety, "Counting-model safety factor")->capture_default_str();
    sub->add_option("--out", cfg_.out_path, "Report JSON path (stdout when omitted)");
    sub->callback([this, o] {
      action_ = [this, o] {
        const LatticeCensus census = census_for(std::nullopt);
        PoincareParams p;
        p.c_g = cfg_.c_g;
        p.roots = cfg_.roots();
        p.model = counting_model(census);
        p.threads = cfg_.threads;
        GroupElement g;
        if (!o->g.empty()) {
          const auto& v = o->g;
          g = GroupElement(Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]), Complex(v[6], v[7]));
        }
        const SeriesEvaluation e = poincare_eval(Complex(o->z_re, o->z_im), g, census, p);
        emit(out_, cfg_.out_path, to_json(e));
        return kExitOk;
      };
    });
  }

  void add_smoothed_count(CLI::App& app) {
    auto* sub = app.add_subcommand("smoothed-count", "Perron-smoothed geometric count over a census");
    add_common(sub);
    add_smoothing(sub);
    add_census_source(sub);
    auto xs = std::make_shared<std::vector<double>>();
    sub->add_option("--X", *xs, "Comma-separated X values")->required()->delimiter(',');
    sub->add_option("--out", cfg_.out_path, "Report JSON path (stdout when omitted)");
    sub->callback([this, xs] {
      action_ = [this, xs] {
        const double xmax = *std::max_element(xs->begin(), xs->end());
        const LatticeCensus census = census_for(gauge_from_radius(xmax) * (1.0 + 1e-12));
        std::vector<double> values;
        for (double X : *xs) {
          values.push_back(smoothed_geometric_count(X, census, cfg_.roots(), cfg_.smoothing, cfg_.c_g));
        }
        emit(out_, cfg_.out_path,
             {{"X", *xs},
              {"values", values},
              {"census_cutoff", census.cutoff},
              {"lattice_id", census.lattice_id},
              {"cocompact", census.cocompact},
              {"ell", cfg_.smoothing.ell},
              {"theta", cfg_.smoothing.theta},
              {"c_g", cfg_.c_g}});
        return kExitOk;
      };
    });
  }

  void add_spectral_side(CLI::App& app) {
    auto* sub = app.add_subcommand("spectral-side", "Residue evaluation of the spectral side");
    add_common(sub);
    add_smoothing(sub);
    struct Opts {
      std::string spectrum;
      std::vector<double> xs;
      std::optional<int> nu;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--spectrum", o->spectrum, "Spectrum CSV")->required();
    sub->add_option("--X", o->xs, "Comma-separated X values")->required()->delimiter(',');
    sub->add_option("--nu", o->nu, "Power nu (default from the root data)");
    sub->add_option("--out", cfg_.out_path, "Report JSON path (stdout when omitted)");
    sub->callback([this, o] {
      action_ = [this, o] {
        const auto spectrum = load_spectrum(o->spectrum, cfg_.rho_norm);
        const int nu = o->nu.value_or(cfg_.roots().nu);
        Json reports = Json::array();
        for (double X : o->xs) {
          reports.push_back(to_json(spectral_side_eval(spectrum, X, cfg_.smoothing, nu, cfg_.rho_norm)));
        }
        emit(out_, cfg_.out_path, {{"reports", reports}});
        return kExitOk;
      };
    });
  }

  void add_compare(CLI::App& app) {
    auto* sub = app.add_subcommand("compare", "Geometric vs spectral side over an X grid");
    add_common(sub);
    add_smoothing(sub);
    add_census_source(sub);
    struct Opts {
      std::string spectrum;
      std::vector<double> xs;
      bool oracle = false;
      std::string timestamp;
      std::string csv;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--spectrum", o->spectrum, "Spectrum CSV (omit for an empty spectrum)");
    sub->add_option("--X", o->xs, "Comma-separated X values")->required()->delimiter(',');
    sub->add_flag("--with-oracle", o->oracle, "Also run the global contour oracle");
    sub->add_option("--timestamp", o->timestamp, "Timestamp recorded in the metadata (default: now, UTC)");
    sub->add_option("--csv", o->csv, "Plot-ready CSV path");
    sub->add_option("--out", cfg_.out_path, "Report JSON path (stdout when omitted)");
    sub->callback([this, o] {
      action_ = [this, o] {
        const double xmax = *std::max_element(o->xs.begin(), o->xs.end());
        const LatticeCensus census = census_for(gauge_from_radius(xmax) * (1.0 + 1e-12));
        const auto spectrum =
            o->spectrum.empty() ? std::vector<SpectralDatum>{} : load_spectrum(o->spectrum, cfg_.rho_norm);
        CompareConfig cc;
        cc.smoothing = cfg_.smoothing;
        cc.roots = cfg_.roots();
        cc.c_g = cfg_.c_g;
        cc.with_oracle = o->oracle;
        cc.census_source = cfg_.census_path.empty() ? "enumerated" : cfg_.census_path;
        cc.spectrum_source = o->spectrum;
        cc.timestamp = o->timestamp.empty() ? utc_timestamp() : o->timestamp;
        const ComparisonReport rep = compare(o->xs, census, spectrum, cc);
        if (!o->csv.empty()) {
          auto os = lpc::detail::open_out(o->csv);
          write_comparison_csv(os, rep);
        }
        emit(out_, cfg_.out_path, to_json(rep));
        return kExitOk;
      };
    });
  }

  void add_oracle_torus(CLI::App& app) {
    auto* sub = app.add_subcommand("oracle-torus", "Torus identity check: lattice sum vs Fourier sum");
    add_common(sub);
    struct Opts {
      TorusParams p;
      std::vector<double> x{0.0};
      std::optional<long> trunc;
      std::optional<long> geom, spec;
      bool no_correction = false;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--n", o->p.n, "Dimension 1, 2 or 3")->capture_default_str();
    sub->add_option("--nu", o->p.nu, "Power nu (1 or 2)")->capture_default_str();
    sub->add_option("--lambda", o->p.lambda, "Spectral parameter (< 0)")->capture_default_str();
    sub->add_option("--x", o->x, "Point: one value (broadcast) or n comma-separated values")->delimiter(',');
    sub->add_option("--trunc", o->trunc, "Both truncation radii");
    sub->add_option("--geom-trunc", o->geom, "Lattice-sum truncation radius");
    sub->add_option("--spec-trunc", o->spec, "Fourier-sum truncation radius");
    sub->add_flag("--no-tail-correction", o->no_correction, "Disable the spectral tail correction");
    sub->add_option("--out", cfg_.out_path, "Report JSON path (stdout when omitted)");
    sub->callback([this, o] {
      action_ = [this, o] {
        TorusParams p = o->p;
        p.x = o->x.size() == 1 ? TorusParams::point(p.n, o->x[0]) : o->x;
        if (o->trunc) p.geom_trunc = p.spec_trunc = *o->trunc;
        if (o->geom) p.geom_trunc = *o->geom;
        if (o->spec) p.spec_trunc = *o->spec;
        p.tail_correction = !o->no_correction;
        const TorusReport r = torus_identity_check(p);
        emit(out_, cfg_.out_path, to_json(r));
        if (!r.pass) {
          err_ << "torus identity check failed: discrepancy " << r.discrepancy << " exceeds budget "
               << r.budget << "\n";
          return kExitNumeric;
        }
        return kExitOk;
      };
    });
  }

  void add_perron_check(CLI::App& app) {
    auto* sub = app.add_subcommand("perron-check", "Perron kernel vs truncated contour integral");
    add_common(sub);
    add_smoothing(sub);
    struct Opts {
      double X = 1.0;
      std::vector<double> heights{250.0, 500.0, 1000.0, 2000.0};
      std::string format = "table";
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--X", o->X, "X (nonzero)")->capture_default_str();
    sub->add_option("--heights", o->heights, "Comma-separated truncation heights")->delimiter(',');
    sub->add_option("--format", o->format, "table or json")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    sub->add_option("--out", cfg_.out_path, "Also write the JSON report here");
    sub->callback([this, o] {
      action_ = [this, o] {
        const PerronScaling s = perron_error_scaling(o->X, cfg_.smoothing, o->heights);
        const Json j = to_json(s);
        if (!cfg_.out_path.empty()) save_json(cfg_.out_path, j);
        if (o->format == "json") {
          out_ << dump_json(j);
        } else {
          print_table(s);
        }
        return kExitOk;
      };
    });
  }

  void print_table(const PerronScaling& s) const {
    out_ << "# ell=" << cfg_.smoothing.ell << " theta=" << cfg_.smoothing.theta
         << " sigma=" << cfg_.smoothing.sigma << " X=" << s.X << "\n";
    out_ << "# closed form " << format_real(s.closed_form) << "\n";
    out_ << std::setw(10) << "T" << std::setw(24) << "contour" << std::setw(14) << "raw_err"
         << std::setw(14) << "envelope_err" << std::setw(12) << "order" << "\n";
    for (std::size_t i = 0; i < s.heights.size(); ++i) {
      out_ << std::setw(10) << s.heights[i] << std::setw(24) << std::setprecision(16) << s.values[i]
           << std::setprecision(4) << std::setw(14) << s.raw_errors[i] << std::setw(14)
           << s.envelope_errors[i];
      if (i > 0) {
        out_ << std::setw(12) << s.log2_ratios[i - 1];
      } else {
        out_ << std::setw(12) << "-";
      }
      out_ << "\n";
    }
    out_ << std::setprecision(6);
    out_ << "fitted exponent " << s.fitted_exponent << " (raw " << s.raw_fitted_exponent
         << ", expected " << cfg_.smoothing.ell + 1 << ")\n";
    out_ << "fitted constant " << s.fitted_constant << "\n";
  }
};

}  // namespace detail

/// Runs the CLI on argv; all output goes to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  detail::Runner runner(out, err);
  return runner.run(argc, argv);
}

/// Convenience for tests: argv without the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"lpc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lpc::cli
