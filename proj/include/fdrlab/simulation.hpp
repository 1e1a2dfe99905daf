#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdrlab/rng.hpp"
#include "fdrlab/sample.hpp"
#include "fdrlab/testing.hpp"

namespace fdrlab {

enum class Correlation { independent, block, equicorrelated };

struct CorrelationSpec {
  Correlation kind = Correlation::independent;
  std::size_t block_size = 20;  // block only
  double rho = 0.0;             // shared-factor correlation (0.5 block, 0.2 equicorrelated)

  static CorrelationSpec independent() { return {}; }
  static CorrelationSpec block(std::size_t size = 20, double rho = 0.5) {
    return {Correlation::block, size, rho};
  }
  static CorrelationSpec equicorrelated(double rho = 0.2) {
    return {Correlation::equicorrelated, 20, rho};
  }
};

// standard:          alternative means uniform on [-5,-2] u [2,5]
// cauchy_half:       the first half of the alternatives replaced by theta + sigma * Cauchy
// zero_located_half: the same half replaced by theta + sigma * f2, the
//                    zero-located density 40 [phi(x) - phi(x/s)/s]_+
// location_mixture:  the whole sample drawn from the least-favorable location
//                    mixture with pi1 = pi2 = k/(2n), labels from decomposition 1
enum class Alternative { standard, cauchy_half, zero_located_half, location_mixture };

enum class Method { oracle, median_mad, trim_mad, known_sigma_median };

const char* to_string(Correlation c);
const char* to_string(Alternative a);
const char* to_string(Method m);
Method parse_method(const std::string& name);

struct ScenarioConfig {
  std::size_t n = 1000;
  std::size_t k = 30;
  CorrelationSpec correlation;
  Alternative alternative = Alternative::standard;
  double theta = 0.0;
  double sigma = 1.0;
  std::vector<double> alpha_list = {0.2};
  std::size_t n_replications = 100;
  std::uint64_t seed = 1;
  // Run each method at level alpha / pi0 with pi0 = (n - k) / n.
  bool adjust_level_by_pi0 = true;

  // Throws ConfigError on invalid settings; returns non-fatal warnings.
  std::vector<std::string> validate() const;
  // Level actually handed to BH for nominal level alpha.
  double level_for(double alpha) const;
};

// Strict reader: unknown keys and wrong types are ConfigErrors. The key
// "methods" is accepted and ignored here (the CLI reads it).
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// Indices are 0-based; h0 and h1 partition {0..n-1}.
struct Dataset {
  Sample y;
  std::vector<std::size_t> h0;
  std::vector<std::size_t> h1;
};

Dataset generate_dataset(const ScenarioConfig& cfg, RandomStream& rng);

// Stream used for replication r: RandomStream(seed, r).
RandomStream replication_stream(const ScenarioConfig& cfg, std::size_t r);

// A multiple testing procedure: data and BH level in, rejections out.
using Procedure = std::function<RejectionSet(const Dataset&, double level)>;
Procedure make_procedure(Method m, const ScenarioConfig& cfg);

struct MetricsRow {
  std::string method;
  double alpha = 0.0;
  double level = 0.0;
  double fdr = 0.0;
  double fdr_se = 0.0;
  double tdr = 0.0;
  double tdr_se = 0.0;
  // Frequency of TDP(R) < TDP(oracle BH) at the same level.
  double tdp_below_oracle = 0.0;
  double tdp_below_oracle_se = 0.0;
  std::size_t reps = 0;
};

struct MetricsReport {
  ScenarioConfig config;
  std::vector<MetricsRow> rows;  // method-major, then alpha in config order
  std::vector<std::string> warnings;
  bool means_redrawn_per_replication = true;

  const MetricsRow& row(const std::string& method, double alpha) const;
};

MetricsReport run_experiment(const ScenarioConfig& cfg, const std::vector<Method>& methods);

// Same replication loop for arbitrary named procedures.
MetricsReport run_procedures(const ScenarioConfig& cfg,
                             const std::vector<std::pair<std::string, Procedure>>& procedures);

void write_metrics_csv(std::ostream& out, const MetricsReport& report);
nlohmann::json metrics_to_json(const MetricsReport& report);

// Scenario-family surrogates of the worst-case risks: I_hat is the largest
// fdr_hat, II_hat the largest frequency of TDP(R) < TDP(oracle BH).
struct CriteriaEstimate {
  double I_hat = 0.0;
  double II_hat = 0.0;
};

CriteriaEstimate estimate_criteria(const std::vector<ScenarioConfig>& family, Method method,
                                   double alpha);
CriteriaEstimate estimate_criteria(const std::vector<ScenarioConfig>& family,
                                   const Procedure& procedure, double alpha);

// Sum with pairwise splitting; the result depends only on the order of xs.
double pairwise_sum(const double* xs, std::size_t count);

}  // namespace fdrlab
