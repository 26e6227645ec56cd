#include "heatcount/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

#include "heatcount/asymptotics.hpp"
#include "heatcount/errors.hpp"
#include "heatcount/eval_table.hpp"
#include "heatcount/inversion.hpp"
#include "heatcount/smoothing.hpp"
#include "heatcount/spectrum.hpp"
#include "heatcount/transforms.hpp"

namespace heatcount::cli {

namespace {

// CSV body of a verification run and whether every row met its tolerance.
struct VerificationResult {
  std::string csv;
  bool passed = true;
};

struct GenerateOptions {
  std::string shape;
  double length = 0.0;
  double a = 0.0;
  double b = 0.0;
  double density = 0.0;
  std::optional<double> lambda_max;
  std::optional<std::uint64_t> count;
  std::string label;
  std::string out;
};

struct CommonOptions {
  std::string spectrum;
  std::string out;
  std::string manifest;
};

struct VerifyOptions {
  int theorem = 0;
  std::string t_grid;
  std::string lambda_grid;
  std::string beta_grid;
  std::optional<double> tolerance;
  double quadrature_tolerance = 1e-8;
};

struct InvertOptions {
  std::string lambda_grid;
  std::optional<double> c;
  std::optional<double> T;
  std::optional<double> h;
  double tolerance = 0.1;
};

struct SmoothOptions {
  double lambda = 0.0;
  std::string beta_grid;
  double cap = 700.0;
};

struct TauberOptions {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double lambda_probe = 0.0;
  std::size_t points = 16;
};

struct DensityOptions {
  double bin_width = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << content;
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

Spectrum load_input(const std::string& path, std::ostream& err) {
  std::vector<std::string> warnings;
  auto spectrum = load_spectrum(path, &warnings);
  for (const auto& warning : warnings) {
    err << "warning: " << path << ": " << warning << '\n';
  }
  return spectrum;
}

const char* pass_text(bool pass) { return pass ? "true" : "false"; }

VerificationResult verify_laplace_identity(const Spectrum& spectrum, const std::vector<double>& ts,
                                           double tolerance, double quadrature_tolerance) {
  CsvWriter csv({"t", "heat_trace", "step_exact", "truncation_term", "relative_deviation",
                 "quadrature", "quadrature_deviation", "pass"});
  VerificationResult result;
  for (const double t : ts) {
    const double trace = heat_trace(spectrum, t).value;
    const auto exact = laplace_of_counting(spectrum, t, LaplaceMethod::step_exact);
    const double deviation = std::abs(exact.value + exact.truncation_term - trace) / trace;
    double quadrature = std::nan("");
    double quadrature_deviation = std::nan("");
    try {
      const auto quad = laplace_of_counting(spectrum, t, LaplaceMethod::quadrature);
      quadrature = quad.value;
      quadrature_deviation = std::abs(quad.value + quad.truncation_term - trace) / trace;
    } catch (const AccuracyError& e) {
      quadrature = e.estimate();
    }
    const bool pass = deviation <= tolerance && quadrature_deviation <= quadrature_tolerance;
    result.passed = result.passed && pass;
    csv.real(t)
        .real(trace)
        .real(exact.value)
        .real(exact.truncation_term)
        .real(deviation)
        .real(quadrature)
        .real(quadrature_deviation)
        .text(pass_text(pass))
        .end_row();
  }
  result.csv = csv.str();
  return result;
}

VerificationResult verify_smoothing(const Spectrum& spectrum, double lambda,
                                    const std::vector<double>& betas, double tolerance) {
  const auto sweep = beta_sweep(spectrum, lambda, betas);
  const auto index = spectrum.find_exact(lambda);
  double midpoint = static_cast<double>(counting(spectrum, lambda));
  if (index) midpoint += 0.5 * static_cast<double>(spectrum.entries()[*index].multiplicity);

  CsvWriter csv({"beta", "value", "deviation", "bound", "pass"});
  VerificationResult result;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& row = sweep.rows[i];
    bool pass = row.error.empty();
    if (pass && !index) {
      pass = row.deviation <= row.bound && row.deviation <= previous;
    } else if (pass && i + 1 == sweep.rows.size()) {
      pass = std::abs(row.value - midpoint) <= tolerance;
    }
    previous = row.deviation;
    result.passed = result.passed && pass;
    csv.real(row.beta).real(row.value).real(row.deviation).real(row.bound).text(pass_text(pass)).end_row();
  }
  result.csv = csv.str();
  return result;
}

VerificationResult verify_weyl(const Spectrum& spectrum, const std::vector<double>& ts,
                               double tolerance) {
  const auto report = weyl_check(spectrum, ts);
  CsvWriter csv({"t", "K", "N_inv", "ratio", "flag", "pass"});
  VerificationResult result;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    bool pass = row.flag == "ok";
    if (pass && i == 0) pass = row.deviation <= tolerance;
    result.passed = result.passed && pass;
    csv.real(row.t)
        .real(row.heat_trace)
        .integer(static_cast<long long>(row.count_at_inverse))
        .real(row.ratio)
        .text(row.flag)
        .text(pass_text(pass))
        .end_row();
  }
  result.csv = csv.str();
  return result;
}

std::string require_flag(const std::string& value, const char* field) {
  if (value.empty()) throw InvalidParameter(field, "is required");
  return value;
}

nlohmann::json collect_params(const CLI::App& command) {
  nlohmann::json params = nlohmann::json::object();
  for (const CLI::Option* option : command.get_options()) {
    if (option->count() == 0) continue;
    const auto& results = option->results();
    const std::string name = option->get_single_name();
    if (results.size() == 1) {
      params[name] = results.front();
    } else {
      params[name] = results;
    }
  }
  return params;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();

  CLI::App app{"Counting function and heat trace toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HEATCOUNT_VERSION);

  GenerateOptions gen;
  CommonOptions common;
  VerifyOptions verify;
  InvertOptions invert;
  SmoothOptions smooth;
  TauberOptions tauber;
  DensityOptions density;
  std::string weyl_t_grid;

  auto* generate_cmd = app.add_subcommand("generate", "write a closed-form spectrum to JSON");
  generate_cmd->add_option("--shape", gen.shape, "interval | rectangle | torus | constant_density")
      ->required();
  generate_cmd->add_option("--length", gen.length, "interval length L");
  generate_cmd->add_option("--a", gen.a, "rectangle side a");
  generate_cmd->add_option("--b", gen.b, "rectangle side b");
  generate_cmd->add_option("--density", gen.density, "constant density C");
  generate_cmd->add_option("--lambda-max", gen.lambda_max, "largest eigenvalue kept");
  generate_cmd->add_option("--count", gen.count, "number of eigenvalues");
  generate_cmd->add_option("--label", gen.label, "label stored in the file");
  generate_cmd->add_option("--out", gen.out, "output JSON path")->required();
  generate_cmd->add_option("--manifest", common.manifest, "manifest path (default <out>.manifest.json)");

  const auto add_common = [&common](CLI::App* cmd) {
    cmd->add_option("--spectrum", common.spectrum, "spectrum JSON")->required();
    cmd->add_option("--out", common.out, "output CSV path")->required();
    cmd->add_option("--manifest", common.manifest, "manifest path (default <out>.manifest.json)");
  };

  auto* verify_cmd = app.add_subcommand("verify", "check one of the counting/heat-trace relations");
  add_common(verify_cmd);
  verify_cmd->add_option("--theorem", verify.theorem,
                         "1 Laplace identity | 2 contour inversion | 3 smoothed count | 4 constant density")
      ->required()
      ->check(CLI::Range(1, 4));
  verify_cmd->add_option("--t", verify.t_grid, "t grid (theorems 1 and 4)");
  verify_cmd->add_option("--lambda", verify.lambda_grid, "lambda grid (theorem 2) or value (theorem 3)");
  verify_cmd->add_option("--beta", verify.beta_grid, "beta grid (theorem 3)");
  verify_cmd->add_option("--tolerance", verify.tolerance,
                         "row tolerance; defaults 1e-12 / 0.1 / 1e-6 / 0.01 for theorems 1-4");
  verify_cmd->add_option("--quadrature-tolerance", verify.quadrature_tolerance,
                         "theorem 1 quadrature tolerance")
      ->capture_default_str();

  auto* invert_cmd = app.add_subcommand("invert", "recover N(lambda) from the heat trace");
  add_common(invert_cmd);
  invert_cmd->add_option("--lambda", invert.lambda_grid, "lambda grid")->required();
  invert_cmd->add_option("--c", invert.c, "contour abscissa (manual contour)");
  invert_cmd->add_option("--height", invert.T, "contour height T (manual contour)");
  invert_cmd->add_option("--step", invert.h, "trapezoid step h (manual contour)");
  invert_cmd->add_option("--tolerance", invert.tolerance, "match tolerance")->capture_default_str();

  auto* smooth_cmd = app.add_subcommand("smooth", "Fermi-Dirac smoothed count over a beta sweep");
  add_common(smooth_cmd);
  smooth_cmd->add_option("--lambda", smooth.lambda, "evaluation point")->required();
  smooth_cmd->add_option("--beta", smooth.beta_grid, "beta grid (default 50 / nearest gap)");
  smooth_cmd->add_option("--cap", smooth.cap, "exponent saturation cap")->capture_default_str();

  auto* weyl_cmd = app.add_subcommand("weyl", "compare K(t) with N(1/t)");
  add_common(weyl_cmd);
  weyl_cmd->add_option("--t", weyl_t_grid, "t grid")->required();

  auto* tauber_cmd = app.add_subcommand("tauber", "first-term power-law fit of K(t)");
  add_common(tauber_cmd);
  tauber_cmd->add_option("--t-lo", tauber.t_lo, "fit window start")->required();
  tauber_cmd->add_option("--t-hi", tauber.t_hi, "fit window end")->required();
  tauber_cmd->add_option("--lambda-probe", tauber.lambda_probe, "where to predict N")->required();
  tauber_cmd->add_option("--points", tauber.points, "log-spaced fit points")->capture_default_str();

  auto* density_cmd = app.add_subcommand("density", "eigenvalue density per unit interval");
  add_common(density_cmd);
  density_cmd->add_option("--bin-width", density.bin_width, "bin width")->required();
  density_cmd->add_option("--lo", density.lo, "range start")->required();
  density_cmd->add_option("--hi", density.hi, "range end")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  RunManifest manifest;
  manifest.version = HEATCOUNT_VERSION;
  manifest.argv = args;
  int exit_code = kExitSuccess;

  try {
    CLI::App* chosen = app.get_subcommands().front();
    manifest.command = chosen->get_name();
    manifest.params = collect_params(*chosen);

    if (chosen == generate_cmd) {
      GeneratorSpec spec;
      spec.kind = generator_kind_from_string(gen.shape);
      if (spec.kind == GeneratorKind::file) {
        throw InvalidParameter("shape", "file spectra are loaded, not generated");
      }
      spec.length_a = spec.kind == GeneratorKind::rectangle ? gen.a : gen.length;
      spec.length_b = gen.b;
      spec.density = gen.density;
      spec.lambda_max = gen.lambda_max;
      spec.count = gen.count;
      Spectrum spectrum = generate(spec);
      if (!gen.label.empty()) {
        spectrum = Spectrum({spectrum.entries().begin(), spectrum.entries().end()}, gen.label,
                            spectrum.kind(), spectrum.params(), spectrum.cutoff());
      }
      save_spectrum(spectrum, gen.out);
      out << spectrum.label() << ": " << spectrum.total_count() << " eigenvalues ("
          << spectrum.distinct_count() << " distinct), lambda in [" << format_real(spectrum.min_value())
          << ", " << format_real(spectrum.max_value()) << "], cutoff " << format_real(spectrum.cutoff())
          << '\n';
      manifest.outputs.push_back(gen.out);
      common.out = gen.out;
    } else {
      const Spectrum spectrum = load_input(common.spectrum, err);
      manifest.inputs.push_back(common.spectrum);
      std::string csv;

      if (chosen == verify_cmd) {
        VerificationResult result;
        switch (verify.theorem) {
          case 1:
            result = verify_laplace_identity(spectrum, parse_grid(require_flag(verify.t_grid, "t"), "t"),
                                             verify.tolerance.value_or(1e-12),
                                             verify.quadrature_tolerance);
            break;
          case 2: {
            const auto profile = invert_profile(
                spectrum, parse_grid(require_flag(verify.lambda_grid, "lambda"), "lambda"), {},
                verify.tolerance.value_or(0.1));
            result.csv = profile.to_csv();
            result.passed = profile.all_match();
            break;
          }
          case 3: {
            const auto lambdas = parse_grid(require_flag(verify.lambda_grid, "lambda"), "lambda");
            if (lambdas.size() != 1) throw InvalidParameter("lambda", "theorem 3 takes a single lambda");
            result = verify_smoothing(spectrum, lambdas.front(),
                                      parse_grid(require_flag(verify.beta_grid, "beta"), "beta"),
                                      verify.tolerance.value_or(1e-6));
            break;
          }
          case 4:
            result = verify_weyl(spectrum, parse_grid(require_flag(verify.t_grid, "t"), "t"),
                                 verify.tolerance.value_or(0.01));
            break;
        }
        csv = result.csv;
        if (!result.passed) exit_code = kExitVerificationFailed;
      } else if (chosen == invert_cmd) {
        InversionConfig config;
        if (invert.c || invert.T || invert.h) {
          if (!invert.c || !invert.T || !invert.h) {
            throw InvalidParameter("c", "a manual contour needs --c, --height and --step together");
          }
          config.automatic = false;
          config.c = *invert.c;
          config.T = *invert.T;
          config.h = *invert.h;
        }
        csv = invert_profile(spectrum, parse_grid(invert.lambda_grid, "lambda"), config, invert.tolerance)
                  .to_csv();
      } else if (chosen == smooth_cmd) {
        const auto betas = smooth.beta_grid.empty()
                               ? std::vector<double>{default_beta(spectrum, smooth.lambda)}
                               : parse_grid(smooth.beta_grid, "beta");
        csv = beta_sweep(spectrum, smooth.lambda, betas, smooth.cap).to_csv();
      } else if (chosen == weyl_cmd) {
        csv = weyl_check(spectrum, parse_grid(weyl_t_grid, "t")).to_csv();
      } else if (chosen == tauber_cmd) {
        const auto estimate =
            tauberian_first_term(spectrum, tauber.t_lo, tauber.t_hi, tauber.lambda_probe, tauber.points);
        for (const auto& warning : estimate.warnings) err << "warning: " << warning << '\n';
        csv = estimate.to_csv();
      } else if (chosen == density_cmd) {
        csv = density_estimate(spectrum, density.bin_width, density.lo, density.hi).bins.to_csv();
      }

      write_text(common.out, csv);
      manifest.outputs.push_back(common.out);
    }

    manifest.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const std::string manifest_path =
        common.manifest.empty() ? common.out + ".manifest.json" : common.manifest;
    manifest.write(manifest_path);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return exit_code;
}

}  // namespace heatcount::cli
