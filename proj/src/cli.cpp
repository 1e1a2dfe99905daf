#include "fdrlab/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdrlab/confidence.hpp"
#include "fdrlab/errors.hpp"
#include "fdrlab/format.hpp"
#include "fdrlab/mixtures.hpp"
#include "fdrlab/robust.hpp"
#include "fdrlab/simulation.hpp"
#include "fdrlab/testing.hpp"

namespace fdrlab {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& text) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  return in;
}

// Two-column CSV "x,cdf" for a tabulated null.
CdfTable read_cdf_table(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> xs;
  std::vector<double> fs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_commas(t);
    const auto x = fields.size() == 2 ? parse_number(fields[0]) : std::nullopt;
    const auto f = fields.size() == 2 ? parse_number(fields[1]) : std::nullopt;
    if (!x || !f) {
      if (xs.empty() && fields.size() == 2) continue;  // header
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected two numbers 'x,cdf'");
    }
    xs.push_back(*x);
    fs.push_back(*f);
  }
  return CdfTable(std::move(xs), std::move(fs));
}

struct Output {
  std::ostream* stream;
  std::unique_ptr<std::ofstream> file;
};

Output open_output(const std::string& path, std::ostream& fallback) {
  if (path.empty() || path == "-") return {&fallback, nullptr};
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) throw ConfigError(path + ": cannot open for writing");
  std::ostream* s = file.get();
  return {s, std::move(file)};
}

NullModel shape_for(const std::string& family, double zeta) {
  if (family == "gaussian") return NullModel::gaussian();
  if (family == "laplace") return NullModel::laplace();
  if (family == "subbotin") return NullModel::subbotin(zeta);
  throw ConfigError("unknown family '" + family + "' (gaussian, laplace, subbotin)");
}

// Linear grid from "lo:hi:points".
std::vector<double> parse_grid(const std::string& text, const char* what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(trim(part));
  if (parts.size() != 3) throw ConfigError(std::string(what) + ": expected lo:hi:points");
  const auto lo = parse_number(parts[0]);
  const auto hi = parse_number(parts[1]);
  const auto pts = parse_number(parts[2]);
  if (!lo || !hi || !pts || *pts < 1 || *pts != std::floor(*pts)) {
    throw ConfigError(std::string(what) + ": expected lo:hi:points with an integer point count");
  }
  return linear_grid(*lo, *hi, static_cast<std::size_t>(*pts));
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

struct BhArgs {
  std::string data;
  double alpha = 0.05;
  std::optional<double> u;
  std::optional<double> s;
  bool estimate = false;
  std::string estimator = "median_mad";
  std::string family = "gaussian";
  double zeta = 2.0;
  bool pvalues = false;
  bool all = false;
  std::string format = "csv";
  std::string output;
};

int cmd_bh(const BhArgs& a, std::ostream& out) {
  const std::vector<double> values = read_data_file(a.data);
  std::vector<double> p;
  double u = 0.0;
  double s = 1.0;
  if (a.pvalues) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
        throw DomainError(a.data + ": value " + std::to_string(i + 1) + " is not a p-value");
      }
    }
    p = values;
  } else {
    const Sample y(values);
    const NullModel shape = shape_for(a.family, a.zeta);
    const bool location_only = shape.family() != Family::gaussian;
    if (a.estimate) {
      if (location_only) {
        u = median_estimate(y);
      } else {
        const Scaling est = a.estimator == "trim_mad"     ? trimmed_mad_scaling(y)
                            : a.estimator == "median_mad" ? median_mad_scaling(y)
                                                          : throw ConfigError(
                                                                "unknown estimator '" +
                                                                a.estimator + "'");
        u = est.theta_hat;
        s = est.sigma_hat;
      }
    } else {
      if (!a.u) throw ConfigError("bh: give --u (and --s) or --estimate");
      u = *a.u;
      s = a.s.value_or(1.0);
    }
    if (a.u && a.estimate) throw ConfigError("bh: --u/--s conflict with --estimate");
    p = rescaled_pvalues(y, u, s, shape).p;
  }

  const RejectionSet rej = bh_reject(p, a.alpha);
  Output o = open_output(a.output, out);
  if (a.format == "json") {
    json rejected = json::array();
    for (std::size_t i : rej.indices) rejected.push_back(i + 1);
    json doc = {{"n", values.size()},
                {"alpha", a.alpha},
                {"threshold", rej.threshold},
                {"n_rejections", rej.size()},
                {"rejected", rejected}};
    if (!a.pvalues) {
      doc["u"] = u;
      doc["s"] = json_number(s);
      doc["family"] = a.family;
    }
    if (a.all) doc["p_values"] = p;
    *o.stream << doc.dump(2) << '\n';
  } else if (a.format == "csv") {
    *o.stream << "index,value,p_value,rejected,threshold\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      const bool r = rej.contains(i);
      if (!r && !a.all) continue;
      *o.stream << i + 1 << ',' << format_double(values[i]) << ',' << format_double(p[i]) << ','
                << (r ? 1 : 0) << ',' << format_double(rej.threshold) << '\n';
    }
  } else {
    throw ConfigError("unknown format '" + a.format + "' (csv, json)");
  }
  return kExitOk;
}

int cmd_estimate(const std::string& data, const std::string& method, double trim_fraction,
                 const std::string& output, std::ostream& out) {
  const Sample y(read_data_file(data));
  Scaling est;
  if (method == "median_mad") {
    est = median_mad_scaling(y);
  } else if (method == "trim_mad") {
    est = trimmed_mad_scaling(y, trim_fraction);
  } else {
    throw ConfigError("unknown estimator '" + method + "' (median_mad, trim_mad)");
  }
  json doc = {{"n", y.size()},
              {"method", method},
              {"theta_hat", est.theta_hat},
              {"sigma_hat", est.sigma_hat},
              {"sigma2_hat", est.sigma_hat * est.sigma_hat},
              {"degenerate", est.degenerate()}};
  Output o = open_output(output, out);
  *o.stream << doc.dump(2) << '\n';
  return kExitOk;
}

struct GofArgs {
  std::string data;
  std::size_t k = 0;
  double alpha = 0.05;
  std::string family = "gaussian";
  double zeta = 2.0;
  double theta = 0.0;
  double sigma = 1.0;
  std::string table;
  std::string theta_grid;
  std::string sigma2_grid;
  std::string output;
};

int cmd_gof(const GofArgs& a, std::ostream& out) {
  const Sample y(read_data_file(a.data));
  json doc = {{"n", y.size()}, {"k", a.k}, {"alpha", a.alpha},
              {"dkw_constant", dkw_constant(y.size(), a.k, a.alpha)}};
  if (!a.theta_grid.empty() || !a.sigma2_grid.empty()) {
    if (!a.table.empty()) throw ConfigError("gof: --table cannot be combined with a grid");
    const auto thetas = a.theta_grid.empty() ? std::vector<double>{a.theta}
                                             : parse_grid(a.theta_grid, "--theta-grid");
    std::vector<NullModel> family;
    if (a.family == "gaussian") {
      const auto s2 = a.sigma2_grid.empty() ? std::vector<double>{a.sigma * a.sigma}
                                            : parse_grid(a.sigma2_grid, "--sigma2-grid");
      for (double t : thetas) {
        for (double v : s2) {
          if (!(v > 0.0)) throw ConfigError("gof: sigma2 grid values must be > 0");
          family.push_back(NullModel::gaussian(t, std::sqrt(v)));
        }
      }
    } else {
      if (!a.sigma2_grid.empty()) throw ConfigError("gof: --sigma2-grid needs the gaussian family");
      const NullModel shape = shape_for(a.family, a.zeta);
      for (double t : thetas) family.push_back(shape.shifted(t));
    }
    const FamilyTestResult res = gof_test_family(y, family, a.k, a.alpha);
    const auto inside = std::count(res.in_region.begin(), res.in_region.end(), true);
    doc["family"] = a.family;
    doc["n_candidates"] = family.size();
    doc["n_in_region"] = inside;
    doc["reject"] = res.reject;
  } else {
    NullModel f0 = NullModel::gaussian(a.theta, a.sigma);
    if (!a.table.empty()) {
      f0 = NullModel::tabulated(read_cdf_table(a.table));
      doc["family"] = "tabulated";
    } else {
      if (a.family != "gaussian") f0 = shape_for(a.family, a.zeta).shifted(a.theta);
      doc["family"] = a.family;
      doc["theta"] = a.theta;
      if (a.family == "gaussian") doc["sigma"] = a.sigma;
    }
    const bool inside = null_in_region(y, f0, a.k, a.alpha);
    doc["in_region"] = inside;
    doc["reject"] = !inside;
  }
  Output o = open_output(a.output, out);
  *o.stream << doc.dump(2) << '\n';
  return kExitOk;
}

struct RegionArgs {
  std::string data;
  std::size_t k = 0;
  double alpha = 0.1;
  std::size_t theta_points = 60;
  std::size_t sigma2_points = 60;
  std::string theta_grid;
  std::string sigma2_grid;
  std::string output;
};

int cmd_region(const RegionArgs& a, std::ostream& out) {
  const Sample y(read_data_file(a.data));
  RegionSpec spec;
  if (a.theta_grid.empty() || a.sigma2_grid.empty()) {
    spec = default_region_spec(y, a.k, a.alpha, a.theta_points, a.sigma2_points);
  }
  spec.k = a.k;
  spec.alpha = a.alpha;
  if (!a.theta_grid.empty()) spec.theta_grid = parse_grid(a.theta_grid, "--theta-grid");
  if (!a.sigma2_grid.empty()) spec.sigma2_grid = parse_grid(a.sigma2_grid, "--sigma2-grid");
  const RegionGrid grid = scaling_region_scan(y, spec);
  Output o = open_output(a.output, out);
  write_region_csv(*o.stream, grid);
  return kExitOk;
}

struct MixtureArgs {
  std::string kind = "variance";
  std::optional<double> pi1;
  std::optional<double> pi2;
  std::optional<double> pi;
  std::string family = "laplace";
  double zeta = 2.0;
  std::string output;
};

int cmd_mixture(const MixtureArgs& a, std::ostream& out) {
  MixtureInstance m;
  if (a.kind == "variance" || a.kind == "location") {
    if (!a.pi1 && !a.pi) throw ConfigError("mixture: give --pi1 and --pi2, or --pi");
    const double pi1 = a.pi1.value_or(a.pi.value_or(0.0));
    const double pi2 = a.pi2.value_or(pi1);
    m = a.kind == "variance" ? solve_variance_mixture(pi1, pi2) : solve_location_mixture(pi1, pi2);
  } else if (a.kind == "general") {
    if (!a.pi) throw ConfigError("mixture: the general kind needs --pi");
    m = general_location_mixture(shape_for(a.family, a.zeta), *a.pi);
  } else {
    throw ConfigError("unknown mixture kind '" + a.kind + "' (variance, location, general)");
  }
  json doc = {{"kind", to_string(m.kind)}, {"pi1", m.pi1}, {"pi2", m.pi2}};
  if (m.kind == MixtureKind::variance_gaussian) {
    doc["sigma2"] = m.solved_param;
    doc["sigma2_sq"] = m.solved_param * m.solved_param;
  } else {
    doc["mu"] = m.solved_param;
  }
  if (m.kind == MixtureKind::location_general) doc["family"] = a.family;
  doc["u0"] = m.u0;
  doc["residual"] = m.residual;
  doc["normalization_error"] = normalization_error(m);
  Output o = open_output(a.output, out);
  *o.stream << doc.dump(2) << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::vector<std::string> methods;
  std::string format = "json";
  std::string output;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in = open_input(a.config);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(a.config + ": " + e.what());
  }
  ScenarioConfig cfg = scenario_from_json(doc);
  if (a.seed) cfg.seed = *a.seed;
  if (a.reps) cfg.n_replications = *a.reps;
  std::vector<std::string> names = a.methods;
  if (names.empty() && doc.contains("methods")) {
    names = doc.at("methods").get<std::vector<std::string>>();
  }
  if (names.empty()) names = {"oracle", "median_mad", "trim_mad"};
  std::vector<Method> methods;
  for (const auto& name : names) methods.push_back(parse_method(name));

  const MetricsReport report = run_experiment(cfg, methods);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  Output o = open_output(a.output, out);
  if (a.format == "json") {
    *o.stream << metrics_to_json(report).dump(2) << '\n';
  } else if (a.format == "csv") {
    write_metrics_csv(*o.stream, report);
  } else {
    throw ConfigError("unknown format '" + a.format + "' (csv, json)");
  }
  return kExitOk;
}

int cmd_constants(double alpha, std::size_t points, const std::string& output, std::ostream& out) {
  if (points == 0) throw ConfigError("constants: --grid-points must be >= 1");
  const BoundaryConstants bc = boundary_constants(alpha);
  json grid = json::array();
  for (std::size_t i = 1; i <= points; ++i) {
    const double pi = 0.49 * static_cast<double>(i) / static_cast<double>(points);
    const LaplaceInflation li = laplace_inflation(pi);
    grid.push_back({{"pi", pi}, {"eta", li.eta}, {"gap", li.gap}});
  }
  json doc = {{"alpha", alpha},
              {"pi_alpha", bc.pi_alpha},
              {"pi_star_alpha", bc.pi_star_alpha},
              {"laplace_grid", grid}};
  Output o = open_output(output, out);
  *o.stream << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

std::vector<double> read_data_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_commas(t);
    if (fields.size() != 1) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected a single column, found " + std::to_string(fields.size()));
    }
    const auto v = parse_number(fields[0]);
    if (!v) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ConfigError(path + ":" + std::to_string(line_no) + ": cannot parse '" + fields[0] +
                        "' as a number");
    }
    if (!std::isfinite(*v)) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": value is not finite");
    }
    header_allowed = false;
    values.push_back(*v);
  }
  if (values.empty()) throw ConfigError(path + ": no data values");
  return values;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fdrlab: plug-in BH with an estimated null, least-favorable mixtures, "
               "null confidence regions and simulations"};
  app.require_subcommand(1);

  BhArgs bh;
  auto* c_bh = app.add_subcommand("bh", "Plug-in Benjamini-Hochberg on a data file");
  c_bh->add_option("--data", bh.data, "Data file (one value per line)")->required();
  c_bh->add_option("--alpha", bh.alpha, "Level in (0,1)")->required();
  c_bh->add_option("--u", bh.u, "Null location");
  c_bh->add_option("--s", bh.s, "Null scale (Gaussian family, default 1)");
  c_bh->add_flag("--estimate", bh.estimate, "Estimate the scaling from the data");
  c_bh->add_option("--estimator", bh.estimator, "median_mad or trim_mad")->capture_default_str();
  c_bh->add_option("--family", bh.family, "gaussian, laplace or subbotin")->capture_default_str();
  c_bh->add_option("--zeta", bh.zeta, "Subbotin shape (> 1)")->capture_default_str();
  c_bh->add_flag("--pvalues", bh.pvalues, "The data file already holds p-values");
  c_bh->add_flag("--all", bh.all, "Report every observation, not only rejections");
  c_bh->add_option("--format", bh.format, "csv or json")->capture_default_str();
  c_bh->add_option("-o,--output", bh.output, "Output file (default stdout)");

  std::string est_data;
  std::string est_method = "median_mad";
  double est_trim = 0.5;
  std::string est_output;
  auto* c_est = app.add_subcommand("estimate-null", "Robust location and scale of the null");
  c_est->add_option("--data", est_data, "Data file")->required();
  c_est->add_option("--method", est_method, "median_mad or trim_mad")->capture_default_str();
  c_est->add_option("--trim", est_trim, "Trimmed fraction for trim_mad")->capture_default_str();
  c_est->add_option("-o,--output", est_output, "Output file (default stdout)");

  GofArgs gof;
  auto* c_gof = app.add_subcommand("gof", "Test whether a null (or a null family) is plausible");
  c_gof->add_option("--data", gof.data, "Data file")->required();
  c_gof->add_option("--k", gof.k, "Contamination bound (0 <= k <= n-1)")->required();
  c_gof->add_option("--alpha", gof.alpha, "Level in (0,1)")->required();
  c_gof->add_option("--family", gof.family, "gaussian, laplace or subbotin")->capture_default_str();
  c_gof->add_option("--zeta", gof.zeta, "Subbotin shape")->capture_default_str();
  c_gof->add_option("--theta", gof.theta, "Null location")->capture_default_str();
  c_gof->add_option("--sigma", gof.sigma, "Null scale (gaussian)")->capture_default_str();
  c_gof->add_option("--table", gof.table, "Tabulated null cdf, CSV x,cdf");
  c_gof->add_option("--theta-grid", gof.theta_grid, "Family grid lo:hi:points");
  c_gof->add_option("--sigma2-grid", gof.sigma2_grid, "Family grid lo:hi:points (gaussian)");
  c_gof->add_option("-o,--output", gof.output, "Output file (default stdout)");

  RegionArgs reg;
  auto* c_reg = app.add_subcommand("region", "Scan the confidence region over Gaussian scalings");
  c_reg->add_option("--data", reg.data, "Data file")->required();
  c_reg->add_option("--k", reg.k, "Contamination bound")->required();
  c_reg->add_option("--alpha", reg.alpha, "Level in (0,1)")->capture_default_str();
  c_reg->add_option("--theta-points", reg.theta_points, "Default grid resolution")->capture_default_str();
  c_reg->add_option("--sigma2-points", reg.sigma2_points, "Default grid resolution")->capture_default_str();
  c_reg->add_option("--theta-grid", reg.theta_grid, "Explicit grid lo:hi:points");
  c_reg->add_option("--sigma2-grid", reg.sigma2_grid, "Explicit grid lo:hi:points");
  c_reg->add_option("-o,--output", reg.output, "Output CSV (default stdout)");

  MixtureArgs mix;
  auto* c_mix = app.add_subcommand("mixture", "Solve a least-favorable mixture");
  c_mix->add_option("--kind", mix.kind, "variance, location or general")->capture_default_str();
  c_mix->add_option("--pi1", mix.pi1, "First proportion");
  c_mix->add_option("--pi2", mix.pi2, "Second proportion (default pi1)");
  c_mix->add_option("--pi", mix.pi, "Common proportion");
  c_mix->add_option("--family", mix.family, "Null for the general kind")->capture_default_str();
  c_mix->add_option("--zeta", mix.zeta, "Subbotin shape")->capture_default_str();
  c_mix->add_option("-o,--output", mix.output, "Output file (default stdout)");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Run a simulation scenario from a JSON config");
  c_sim->add_option("--config", sim.config, "Scenario JSON")->required();
  c_sim->add_option("--seed", sim.seed, "Override the configured seed");
  c_sim->add_option("--reps", sim.reps, "Override the replication count");
  c_sim->add_option("--methods", sim.methods, "oracle, median_mad, trim_mad, known_sigma_median");
  c_sim->add_option("--format", sim.format, "json or csv")->capture_default_str();
  c_sim->add_option("-o,--output", sim.output, "Output file (default stdout)");

  double const_alpha = 0.05;
  std::size_t const_points = 100;
  std::string const_output;
  auto* c_const = app.add_subcommand("constants", "Boundary constants and Laplace inflation grid");
  c_const->add_option("--alpha", const_alpha, "Level in (0,1)")->capture_default_str();
  c_const->add_option("--grid-points", const_points, "Points on (0, 0.49]")->capture_default_str();
  c_const->add_option("-o,--output", const_output, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (c_bh->parsed()) return cmd_bh(bh, out);
    if (c_est->parsed()) return cmd_estimate(est_data, est_method, est_trim, est_output, out);
    if (c_gof->parsed()) return cmd_gof(gof, out);
    if (c_reg->parsed()) return cmd_region(reg, out);
    if (c_mix->parsed()) return cmd_mixture(mix, out);
    if (c_sim->parsed()) return cmd_simulate(sim, out, err);
    if (c_const->parsed()) return cmd_constants(const_alpha, const_points, const_output, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NoRootError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace fdrlab
