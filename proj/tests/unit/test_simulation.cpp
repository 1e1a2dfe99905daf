#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "fdrlab/errors.hpp"
#include "fdrlab/mixtures.hpp"
#include "fdrlab/simulation.hpp"

using namespace fdrlab;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("all-null independent data has the configured moments") {
  ScenarioConfig cfg;
  cfg.n = 200000;
  cfg.k = 0;
  cfg.theta = 2.0;
  cfg.sigma = 3.0;
  RandomStream rng = replication_stream(cfg, 0);
  const Dataset d = generate_dataset(cfg, rng);
  CHECK(d.h1.empty());
  CHECK(d.h0.size() == cfg.n);
  double mean = 0.0, sq = 0.0;
  for (double v : d.y.values()) {
    mean += v;
    sq += v * v;
  }
  mean /= cfg.n;
  const double var = sq / cfg.n - mean * mean;
  CHECK(std::abs(mean - 2.0) < 4.0 * 3.0 / std::sqrt(cfg.n));
  CHECK(std::abs(var - 9.0) < 4.0 * 9.0 * std::sqrt(2.0 / cfg.n));
}

TEST_CASE("correlation structures") {
  ScenarioConfig eq;
  eq.n = 2;
  eq.k = 0;
  eq.correlation = CorrelationSpec::equicorrelated(0.2);
  std::vector<double> a, b;
  for (std::size_t r = 0; r < 100000; ++r) {
    RandomStream rng = replication_stream(eq, r);
    const Dataset d = generate_dataset(eq, rng);
    a.push_back(d.y.values()[0]);
    b.push_back(d.y.values()[1]);
  }
  CHECK(std::abs(correlation(a, b) - 0.2) < 0.01);

  ScenarioConfig blk;
  blk.n = 40;
  blk.k = 0;
  blk.correlation = CorrelationSpec::block(20, 0.5);
  std::vector<double> x0, x19, x20;
  for (std::size_t r = 0; r < 40000; ++r) {
    RandomStream rng = replication_stream(blk, r);
    const Dataset d = generate_dataset(blk, rng);
    x0.push_back(d.y.values()[0]);
    x19.push_back(d.y.values()[19]);
    x20.push_back(d.y.values()[20]);
  }
  CHECK(std::abs(correlation(x0, x19) - 0.5) < 0.02);
  CHECK(std::abs(correlation(x0, x20)) < 0.02);
}

TEST_CASE("alternative structures") {
  ScenarioConfig cfg;
  cfg.n = 100;
  cfg.k = 40;
  cfg.theta = 1.0;
  cfg.sigma = 2.0;
  RandomStream rng(1);
  const Dataset d = generate_dataset(cfg, rng);
  REQUIRE(d.h1.size() == 40);
  CHECK(d.h1.front() == 60);
  for (std::size_t i : d.h1) {
    const double shift = std::abs(d.y.values()[i] - cfg.theta);
    CHECK(shift > 0.0);
  }

  cfg.alternative = Alternative::zero_located_half;
  cfg.correlation = CorrelationSpec::independent();
  const double u0 = solve_variance_mixture(1.0 / 41.0, 1.0 / 41.0).u0;
  RandomStream rng2(2);
  const Dataset z = generate_dataset(cfg, rng2);
  for (std::size_t i = 60; i < 80; ++i) {
    CHECK(std::abs(z.y.values()[i] - cfg.theta) < cfg.sigma * u0);
  }

  cfg.alternative = Alternative::cauchy_half;
  RandomStream rng3(3);
  const Dataset c = generate_dataset(cfg, rng3);
  CHECK(c.h1.size() == 40);

  cfg.alternative = Alternative::location_mixture;
  cfg.n = 10000;
  cfg.k = 3000;
  RandomStream rng4(4);
  const Dataset m = generate_dataset(cfg, rng4);
  CHECK(m.h0.size() + m.h1.size() == cfg.n);
  const double frac = static_cast<double>(m.h1.size()) / cfg.n;
  CHECK(std::abs(frac - 0.15) < 0.02);
}

TEST_CASE("config validation and json") {
  ScenarioConfig cfg;
  cfg.alpha_list = {};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.alpha_list = {0.2};
  cfg.k = cfg.n + 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.k = cfg.n / 2;
  CHECK(cfg.validate().size() == 1);
  cfg.k = 30;
  CHECK(cfg.validate().empty());
  cfg.sigma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  ScenarioConfig src;
  src.n = 500;
  src.k = 50;
  src.correlation = CorrelationSpec::block(10, 0.4);
  src.alternative = Alternative::cauchy_half;
  src.alpha_list = {0.05, 0.1};
  src.seed = 77;
  const ScenarioConfig back = scenario_from_json(scenario_to_json(src));
  CHECK(back.n == 500);
  CHECK(back.k == 50);
  CHECK(back.correlation.kind == Correlation::block);
  CHECK(back.correlation.block_size == 10);
  CHECK(back.correlation.rho == 0.4);
  CHECK(back.alternative == Alternative::cauchy_half);
  CHECK(back.alpha_list == src.alpha_list);
  CHECK(back.seed == 77);

  CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"n", 10}, {"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"n", "ten"}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"alternative", "weird"}}), ConfigError);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"methods", {"nope"}}}), ConfigError);
  const auto eq = scenario_from_json(nlohmann::json{{"correlation", "equicorrelated"}});
  CHECK(eq.correlation.rho == 0.2);
}

TEST_CASE("oracle controls the FDR at the adjusted level") {
  ScenarioConfig cfg;
  cfg.n = 200;
  cfg.k = 20;
  cfg.alpha_list = {0.2};
  cfg.n_replications = 4000;
  cfg.seed = 5;
  const MetricsReport rep = run_experiment(cfg, {Method::oracle});
  const MetricsRow& row = rep.row("oracle", 0.2);
  CHECK(row.level == doctest::Approx(0.2 / 0.9));
  CHECK(std::abs(row.fdr - 0.2) <= 3.0 * row.fdr_se);
  CHECK(row.tdp_below_oracle == 0.0);
}

TEST_CASE("reports are identical across thread counts") {
  ScenarioConfig cfg;
  cfg.n = 300;
  cfg.k = 30;
  cfg.alpha_list = {0.1, 0.2};
  cfg.n_replications = 64;
  cfg.correlation = CorrelationSpec::equicorrelated();
  const std::vector<Method> methods = {Method::oracle, Method::median_mad, Method::trim_mad,
                                       Method::known_sigma_median};
  setenv("FDRLAB_THREADS", "1", 1);
  const MetricsReport one = run_experiment(cfg, methods);
  setenv("FDRLAB_THREADS", "7", 1);
  const MetricsReport many = run_experiment(cfg, methods);
  unsetenv("FDRLAB_THREADS");
  CHECK(metrics_to_json(one).dump() == metrics_to_json(many).dump());
  std::ostringstream csv;
  write_metrics_csv(csv, one);
  CHECK(csv.str().rfind("method,alpha,fdr,fdr_se,tdr,tdr_se,reps\n", 0) == 0);
  CHECK(one.rows.size() == 8);
  for (const auto& r : one.rows) {
    CHECK(r.fdr >= 0.0);
    CHECK(r.fdr <= 1.0);
    CHECK(r.tdr >= 0.0);
    CHECK(r.tdr <= 1.0);
    CHECK(r.fdr_se >= 0.0);
    CHECK(r.tdr_se >= 0.0);
    CHECK(r.reps == 64);
  }
  CHECK(metrics_to_json(one)["metadata"]["means_redrawn_per_replication"] == true);
}

TEST_CASE("all-null scenarios have zero true discovery rate") {
  ScenarioConfig cfg;
  cfg.n = 200;
  cfg.k = 0;
  cfg.n_replications = 50;
  const MetricsReport rep = run_experiment(cfg, {Method::oracle, Method::median_mad});
  for (const auto& r : rep.rows) CHECK(r.tdr == 0.0);
}

TEST_CASE("criteria estimates") {
  ScenarioConfig a;
  a.n = 200;
  a.k = 20;
  a.n_replications = 100;
  ScenarioConfig b = a;
  b.correlation = CorrelationSpec::equicorrelated();
  const std::vector<ScenarioConfig> family = {a, b};

  const CriteriaEstimate self = estimate_criteria(family, Method::oracle, 0.1);
  CHECK(self.II_hat == 0.0);
  const Procedure nothing = [](const Dataset&, double level) {
    RejectionSet r;
    r.alpha = level;
    return r;
  };
  const CriteriaEstimate empty = estimate_criteria(family, nothing, 0.1);
  CHECK(empty.I_hat == 0.0);
  CHECK(empty.II_hat > 0.5);
  CHECK_THROWS_AS(estimate_criteria({}, Method::oracle, 0.1), ConfigError);
}

TEST_CASE("plug-in BH breaks down on the dense location mixture") {
  ScenarioConfig cfg;
  cfg.n = 10000;
  cfg.k = 3000;
  cfg.alternative = Alternative::location_mixture;
  cfg.adjust_level_by_pi0 = false;
  cfg.n_replications = 40;
  const CriteriaEstimate est = estimate_criteria({cfg}, Method::known_sigma_median, 0.2);
  CHECK(est.I_hat > 0.2);
}

TEST_CASE("pairwise sum") {
  std::vector<double> xs(1001, 0.1);
  CHECK(pairwise_sum(xs.data(), xs.size()) == doctest::Approx(100.1).epsilon(1e-14));
  CHECK(pairwise_sum(xs.data(), 0) == 0.0);
}
