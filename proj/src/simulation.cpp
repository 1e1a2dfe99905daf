#include "fdrlab/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>

#include "fdrlab/errors.hpp"
#include "fdrlab/format.hpp"
#include "fdrlab/mixtures.hpp"
#include "fdrlab/parallel.hpp"
#include "fdrlab/robust.hpp"

namespace fdrlab {

namespace {

using nlohmann::json;

template <class T>
T read_field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("scenario: field '") + key + "' has the wrong type");
  }
}

std::size_t read_count(const json& doc, const char* key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(std::string("scenario: field '") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

Correlation parse_correlation_kind(const std::string& s) {
  if (s == "independent") return Correlation::independent;
  if (s == "block") return Correlation::block;
  if (s == "equicorrelated") return Correlation::equicorrelated;
  throw ConfigError("scenario: unknown correlation '" + s + "'");
}

Alternative parse_alternative(const std::string& s) {
  if (s == "standard") return Alternative::standard;
  if (s == "cauchy_half") return Alternative::cauchy_half;
  if (s == "zero_located_half") return Alternative::zero_located_half;
  if (s == "location_mixture") return Alternative::location_mixture;
  throw ConfigError("scenario: unknown alternative '" + s + "'");
}

// Zero-located alternative: f2 of the variance mixture with pi1 = pi2 = 1/41,
// i.e. 40 [phi(x) - phi(x/s)/s]_+ .
const MixtureInstance& zero_located_instance() {
  static const MixtureInstance m = solve_variance_mixture(1.0 / 41.0, 1.0 / 41.0);
  return m;
}

double mean_of(const std::vector<double>& xs) {
  return pairwise_sum(xs.data(), xs.size()) / static_cast<double>(xs.size());
}

double standard_error(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  const double var = pairwise_sum(sq.data(), sq.size()) / static_cast<double>(xs.size() - 1);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

const char* to_string(Correlation c) {
  switch (c) {
    case Correlation::independent:
      return "independent";
    case Correlation::block:
      return "block";
    case Correlation::equicorrelated:
      return "equicorrelated";
  }
  return "unknown";
}

const char* to_string(Alternative a) {
  switch (a) {
    case Alternative::standard:
      return "standard";
    case Alternative::cauchy_half:
      return "cauchy_half";
    case Alternative::zero_located_half:
      return "zero_located_half";
    case Alternative::location_mixture:
      return "location_mixture";
  }
  return "unknown";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::oracle:
      return "oracle";
    case Method::median_mad:
      return "median_mad";
    case Method::trim_mad:
      return "trim_mad";
    case Method::known_sigma_median:
      return "known_sigma_median";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::oracle, Method::median_mad, Method::trim_mad, Method::known_sigma_median}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

std::vector<std::string> ScenarioConfig::validate() const {
  if (n == 0) throw ConfigError("scenario: n must be >= 1");
  if (k > n) throw ConfigError("scenario: k must not exceed n");
  if (!std::isfinite(theta)) throw ConfigError("scenario: theta must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("scenario: sigma must be > 0");
  if (alpha_list.empty()) throw ConfigError("scenario: alpha_list is empty");
  if (n_replications == 0) throw ConfigError("scenario: n_replications must be >= 1");
  if (correlation.kind != Correlation::independent) {
    if (!(correlation.rho >= 0.0 && correlation.rho < 1.0)) {
      throw ConfigError("scenario: correlation rho must lie in [0,1)");
    }
    if (correlation.kind == Correlation::block && correlation.block_size == 0) {
      throw ConfigError("scenario: block_size must be >= 1");
    }
  }
  if (alternative == Alternative::location_mixture) {
    if (k == 0 || k >= n) throw ConfigError("scenario: location_mixture needs 0 < k < n");
    if (correlation.kind != Correlation::independent) {
      throw ConfigError("scenario: location_mixture requires independent noise");
    }
  }
  for (double a : alpha_list) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("scenario: every alpha must lie in (0,1)");
    if (level_for(a) >= 1.0) {
      throw ConfigError("scenario: alpha / pi0 reaches 1; lower alpha or disable the adjustment");
    }
  }
  std::vector<std::string> warnings;
  if (2 * k >= n) warnings.push_back("k >= n/2: the null is not identifiable in this scenario");
  return warnings;
}

double ScenarioConfig::level_for(double alpha) const {
  if (!adjust_level_by_pi0 || k == 0) return alpha;
  const double pi0 = static_cast<double>(n - k) / static_cast<double>(n);
  return pi0 > 0.0 ? alpha / pi0 : 1.0;
}

ScenarioConfig scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario: the document must be a JSON object");
  static const std::set<std::string> known = {
      "n", "k", "correlation", "alternative", "theta", "sigma", "alpha_list",
      "n_replications", "seed", "adjust_level_by_pi0", "methods"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw ConfigError("scenario: unknown field '" + item.key() + "'");
  }

  ScenarioConfig cfg;
  cfg.n = read_count(doc, "n", cfg.n);
  cfg.k = read_count(doc, "k", cfg.k);
  cfg.theta = read_field<double>(doc, "theta", cfg.theta);
  cfg.sigma = read_field<double>(doc, "sigma", cfg.sigma);
  cfg.n_replications = read_count(doc, "n_replications", cfg.n_replications);
  cfg.seed = read_count(doc, "seed", cfg.seed);
  cfg.adjust_level_by_pi0 = read_field<bool>(doc, "adjust_level_by_pi0", cfg.adjust_level_by_pi0);
  cfg.alpha_list = read_field<std::vector<double>>(doc, "alpha_list", cfg.alpha_list);
  if (doc.contains("alternative")) {
    cfg.alternative = parse_alternative(read_field<std::string>(doc, "alternative", ""));
  }
  if (doc.contains("correlation")) {
    const json& c = doc.at("correlation");
    if (c.is_string()) {
      const auto kind = parse_correlation_kind(c.get<std::string>());
      cfg.correlation = kind == Correlation::block          ? CorrelationSpec::block()
                        : kind == Correlation::equicorrelated ? CorrelationSpec::equicorrelated()
                                                              : CorrelationSpec::independent();
    } else if (c.is_object()) {
      for (const auto& item : c.items()) {
        if (item.key() != "type" && item.key() != "block_size" && item.key() != "rho") {
          throw ConfigError("scenario: unknown correlation field '" + item.key() + "'");
        }
      }
      const auto kind = parse_correlation_kind(read_field<std::string>(c, "type", "independent"));
      cfg.correlation = kind == Correlation::block          ? CorrelationSpec::block()
                        : kind == Correlation::equicorrelated ? CorrelationSpec::equicorrelated()
                                                              : CorrelationSpec::independent();
      cfg.correlation.block_size = read_count(c, "block_size", cfg.correlation.block_size);
      cfg.correlation.rho = read_field<double>(c, "rho", cfg.correlation.rho);
    } else {
      throw ConfigError("scenario: correlation must be a string or an object");
    }
  }
  if (doc.contains("methods")) {
    const json& m = doc.at("methods");
    if (!m.is_array()) throw ConfigError("scenario: methods must be an array of names");
    for (const auto& name : m) {
      if (!name.is_string()) throw ConfigError("scenario: methods must be an array of names");
      parse_method(name.get<std::string>());
    }
  }
  cfg.validate();
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json corr = {{"type", to_string(cfg.correlation.kind)}};
  if (cfg.correlation.kind == Correlation::block) corr["block_size"] = cfg.correlation.block_size;
  if (cfg.correlation.kind != Correlation::independent) corr["rho"] = cfg.correlation.rho;
  return {{"n", cfg.n},
          {"k", cfg.k},
          {"correlation", corr},
          {"alternative", to_string(cfg.alternative)},
          {"theta", cfg.theta},
          {"sigma", cfg.sigma},
          {"alpha_list", cfg.alpha_list},
          {"n_replications", cfg.n_replications},
          {"seed", cfg.seed},
          {"adjust_level_by_pi0", cfg.adjust_level_by_pi0}};
}

RandomStream replication_stream(const ScenarioConfig& cfg, std::size_t r) {
  return RandomStream(cfg.seed, r);
}

Dataset generate_dataset(const ScenarioConfig& cfg, RandomStream& rng) {
  cfg.validate();
  const std::size_t n = cfg.n;
  const std::size_t k = cfg.k;

  if (cfg.alternative == Alternative::location_mixture) {
    const double pi = static_cast<double>(k) / (2.0 * static_cast<double>(n));
    const MixtureInstance m = solve_location_mixture(pi, pi);
    LabeledDraws draws = sample_labeled(m, n, 1, rng);
    std::vector<std::size_t> h0;
    std::vector<std::size_t> h1;
    for (std::size_t i = 0; i < n; ++i) {
      draws.values[i] = cfg.theta + cfg.sigma * draws.values[i];
      (draws.alternative[i] ? h1 : h0).push_back(i);
    }
    return {Sample(std::move(draws.values)), std::move(h0), std::move(h1)};
  }

  // Noise with unit variance and the requested correlation.
  std::vector<double> noise(n);
  const double rho = cfg.correlation.rho;
  switch (cfg.correlation.kind) {
    case Correlation::independent:
      for (auto& e : noise) e = rng.normal();
      break;
    case Correlation::block: {
      const std::size_t size = cfg.correlation.block_size;
      std::vector<double> factors((n + size - 1) / size);
      for (auto& f : factors) f = rng.normal();
      for (std::size_t i = 0; i < n; ++i) {
        noise[i] = std::sqrt(rho) * factors[i / size] + std::sqrt(1.0 - rho) * rng.normal();
      }
      break;
    }
    case Correlation::equicorrelated: {
      const double shared = rng.normal();
      for (auto& e : noise) e = std::sqrt(rho) * shared + std::sqrt(1.0 - rho) * rng.normal();
      break;
    }
  }

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = cfg.theta + cfg.sigma * noise[i];

  // Alternatives occupy the last k indices.
  const std::size_t first_alt = n - k;
  for (std::size_t i = first_alt; i < n; ++i) {
    const double sign = rng.bernoulli(0.5) ? -1.0 : 1.0;
    y[i] += sign * rng.uniform(2.0, 5.0);
  }
  const std::size_t replaced = k / 2;
  if (cfg.alternative == Alternative::cauchy_half) {
    for (std::size_t i = first_alt; i < first_alt + replaced; ++i) {
      y[i] = cfg.theta + cfg.sigma * std::tan(std::numbers::pi * (rng.uniform() - 0.5));
    }
  } else if (cfg.alternative == Alternative::zero_located_half) {
    const MixtureInstance& m = zero_located_instance();
    for (std::size_t i = first_alt; i < first_alt + replaced; ++i) {
      y[i] = cfg.theta + cfg.sigma * draw_component(m, MixtureComponent::alternative2, rng);
    }
  }

  Dataset out{Sample(std::move(y)), {}, {}};
  out.h0.resize(first_alt);
  for (std::size_t i = 0; i < first_alt; ++i) out.h0[i] = i;
  out.h1.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.h1[i] = first_alt + i;
  return out;
}

Procedure make_procedure(Method m, const ScenarioConfig& cfg) {
  const double theta = cfg.theta;
  const double sigma = cfg.sigma;
  switch (m) {
    case Method::oracle:
      return [=](const Dataset& d, double level) { return bh_procedure(d.y, theta, sigma, level); };
    case Method::median_mad:
      return [](const Dataset& d, double level) {
        const Scaling s = median_mad_scaling(d.y);
        return bh_procedure(d.y, s.theta_hat, s.sigma_hat, level);
      };
    case Method::trim_mad:
      return [](const Dataset& d, double level) {
        const Scaling s = trimmed_mad_scaling(d.y);
        return bh_procedure(d.y, s.theta_hat, s.sigma_hat, level);
      };
    case Method::known_sigma_median:
      return [=](const Dataset& d, double level) {
        return bh_procedure(d.y, median_estimate(d.y), sigma, level);
      };
  }
  throw ConfigError("unknown method");
}

const MetricsRow& MetricsReport::row(const std::string& method, double alpha) const {
  for (const auto& r : rows) {
    if (r.method == method && r.alpha == alpha) return r;
  }
  throw ConfigError("metrics report: no row for method '" + method + "' at alpha " +
                    format_double(alpha));
}

MetricsReport run_procedures(const ScenarioConfig& cfg,
                             const std::vector<std::pair<std::string, Procedure>>& procedures) {
  MetricsReport report;
  report.config = cfg;
  report.warnings = cfg.validate();
  if (procedures.empty()) throw ConfigError("experiment: no methods requested");

  const std::size_t reps = cfg.n_replications;
  const std::size_t n_alpha = cfg.alpha_list.size();
  const std::size_t n_proc = procedures.size();
  const std::size_t slots = n_proc * n_alpha;
  const Procedure oracle = make_procedure(Method::oracle, cfg);

  // Per replication: fdp, tdp and the below-oracle indicator for each slot.
  std::vector<double> fdps(reps * slots);
  std::vector<double> tdps(reps * slots);
  std::vector<double> below(reps * slots);

  parallel_for(reps, [&](std::size_t r) {
    RandomStream rng = replication_stream(cfg, r);
    const Dataset data = generate_dataset(cfg, rng);
    for (std::size_t a = 0; a < n_alpha; ++a) {
      const double level = cfg.level_for(cfg.alpha_list[a]);
      const double oracle_tdp = tdp(oracle(data, level), data.h1);
      for (std::size_t p = 0; p < n_proc; ++p) {
        const RejectionSet rej = procedures[p].second(data, level);
        const std::size_t slot = r * slots + p * n_alpha + a;
        fdps[slot] = fdp(rej, data.h0);
        tdps[slot] = tdp(rej, data.h1);
        below[slot] = tdps[slot] < oracle_tdp ? 1.0 : 0.0;
      }
    }
  });

  std::vector<double> column(reps);
  const auto gather = [&](const std::vector<double>& source, std::size_t slot) {
    for (std::size_t r = 0; r < reps; ++r) column[r] = source[r * slots + slot];
  };
  for (std::size_t p = 0; p < n_proc; ++p) {
    for (std::size_t a = 0; a < n_alpha; ++a) {
      const std::size_t slot = p * n_alpha + a;
      MetricsRow row;
      row.method = procedures[p].first;
      row.alpha = cfg.alpha_list[a];
      row.level = cfg.level_for(row.alpha);
      row.reps = reps;
      gather(fdps, slot);
      row.fdr = mean_of(column);
      row.fdr_se = standard_error(column, row.fdr);
      gather(tdps, slot);
      row.tdr = mean_of(column);
      row.tdr_se = standard_error(column, row.tdr);
      gather(below, slot);
      row.tdp_below_oracle = mean_of(column);
      row.tdp_below_oracle_se = standard_error(column, row.tdp_below_oracle);
      report.rows.push_back(row);
    }
  }
  return report;
}

MetricsReport run_experiment(const ScenarioConfig& cfg, const std::vector<Method>& methods) {
  std::vector<std::pair<std::string, Procedure>> procedures;
  for (Method m : methods) procedures.emplace_back(to_string(m), make_procedure(m, cfg));
  return run_procedures(cfg, procedures);
}

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  out << "method,alpha,fdr,fdr_se,tdr,tdr_se,reps\n";
  for (const auto& r : report.rows) {
    out << r.method << ',' << format_double(r.alpha) << ',' << format_double(r.fdr) << ','
        << format_double(r.fdr_se) << ',' << format_double(r.tdr) << ','
        << format_double(r.tdr_se) << ',' << r.reps << '\n';
  }
}

json metrics_to_json(const MetricsReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", r.method},
                    {"alpha", r.alpha},
                    {"level", r.level},
                    {"fdr", r.fdr},
                    {"fdr_se", r.fdr_se},
                    {"tdr", r.tdr},
                    {"tdr_se", r.tdr_se},
                    {"tdp_below_oracle", r.tdp_below_oracle},
                    {"tdp_below_oracle_se", r.tdp_below_oracle_se},
                    {"reps", r.reps}});
  }
  return {{"config", scenario_to_json(report.config)},
          {"metadata",
           {{"means_redrawn_per_replication", report.means_redrawn_per_replication},
            {"replication_stream", "philox4x32-10 keyed by (seed, replication index)"},
            {"warnings", report.warnings}}},
          {"rows", rows}};
}

CriteriaEstimate estimate_criteria(const std::vector<ScenarioConfig>& family,
                                   const Procedure& procedure, double alpha) {
  if (family.empty()) throw ConfigError("criteria: the scenario family is empty");
  CriteriaEstimate out;
  for (ScenarioConfig cfg : family) {
    cfg.alpha_list = {alpha};
    const MetricsReport rep = run_procedures(cfg, {{"procedure", procedure}});
    out.I_hat = std::max(out.I_hat, rep.rows.front().fdr);
    out.II_hat = std::max(out.II_hat, rep.rows.front().tdp_below_oracle);
  }
  return out;
}

CriteriaEstimate estimate_criteria(const std::vector<ScenarioConfig>& family, Method method,
                                   double alpha) {
  if (family.empty()) throw ConfigError("criteria: the scenario family is empty");
  CriteriaEstimate out;
  for (ScenarioConfig cfg : family) {
    cfg.alpha_list = {alpha};
    const MetricsReport rep = run_experiment(cfg, {method});
    out.I_hat = std::max(out.I_hat, rep.rows.front().fdr);
    out.II_hat = std::max(out.II_hat, rep.rows.front().tdp_below_oracle);
  }
  return out;
}

double pairwise_sum(const double* xs, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += xs[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(xs, half) + pairwise_sum(xs + half, count - half);
}

}  // namespace fdrlab
