#include "fdrlab/mixtures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "fdrlab/errors.hpp"
#include "fdrlab/quadrature.hpp"

namespace fdrlab {

namespace {

constexpr double kBisectionWidth = 1e-12;
constexpr int kScanPoints = 4000;

// Draw from `model` conditioned on x > a.
double draw_above(const NullModel& model, double a, RandomStream& rng) {
  return model.tail_quantile(rng.uniform() * model.tail(a));
}

// Draw from a model symmetric about its theta conditioned on x < a.
double draw_below(const NullModel& model, double a, RandomStream& rng) {
  const double c = model.theta();
  return 2.0 * c - draw_above(model, 2.0 * c - a, rng);
}

// |x - theta| > a, a >= 0.
double draw_outside(const NullModel& model, double a, RandomStream& rng) {
  const double c = model.theta();
  const bool negative = rng.bernoulli(0.5);
  const double offset = draw_above(model, c + a, rng) - c;
  return negative ? c - offset : c + offset;
}

// |x - theta| < a, a > 0.
double draw_inside(const NullModel& model, double a, RandomStream& rng) {
  const double edge = model.tail(model.theta() + a);
  return model.tail_quantile(edge + rng.uniform() * (1.0 - 2.0 * edge));
}

// Smallest sign change of f from negative to nonnegative on a scan of
// [lo, hi], refined by bisection to kBisectionWidth.
double smallest_root(const std::function<double(double)>& f, double lo, double hi, bool log_scan,
                     const char* what) {
  double prev_x = lo;
  double prev_f = f(lo);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double t = static_cast<double>(i) / kScanPoints;
    const double x = log_scan ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    const double fx = f(x);
    if (prev_f < 0.0 && fx >= 0.0) {
      double a = prev_x;
      double b = x;
      while (b - a > kBisectionWidth) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (f(mid) < 0.0) {
          a = mid;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    prev_x = x;
    prev_f = fx;
  }
  throw NoRootError(std::string(what) + ": no sign change in the search bracket");
}

struct VarianceEquation {
  double value;
  double u0;
};

VarianceEquation variance_equation(double sigma2, double pi1, double pi2) {
  const double s2 = sigma2 * sigma2;
  const double u0 =
      std::sqrt(2.0 * s2 / (s2 - 1.0) * std::log(sigma2 * (1.0 - pi1) / (1.0 - pi2)));
  const double value =
      2.0 * ((1.0 - pi2) * gaussian_tail(u0 / sigma2) - (1.0 - pi1) * gaussian_tail(u0)) - pi1;
  return {value, u0};
}

struct LocationEquation {
  double value;
  double u0;
};

LocationEquation location_equation(double mu, double pi1, double pi2) {
  const double kappa0 = pi1 == pi2 ? 0.0 : std::log((1.0 - pi1) / (1.0 - pi2)) / mu;
  const double value = (1.0 - pi2) * gaussian_tail(kappa0 - 0.5 * mu) -
                       (1.0 - pi1) * gaussian_tail(kappa0 + 0.5 * mu) - pi1;
  return {value, kappa0 + 0.5 * mu};
}

void require_proportions(double pi1, double pi2, double upper, bool upper_inclusive,
                         const char* what) {
  const bool upper_ok = upper_inclusive ? pi2 <= upper : pi2 < upper;
  if (!(pi1 > 0.0 && pi1 <= pi2 && upper_ok)) {
    throw DomainError(std::string(what) + ": need 0 < pi1 <= pi2 " +
                      (upper_inclusive ? "<= " : "< ") + std::to_string(upper));
  }
}

}  // namespace

const char* to_string(MixtureKind kind) {
  switch (kind) {
    case MixtureKind::variance_gaussian:
      return "variance_gaussian";
    case MixtureKind::location_gaussian:
      return "location_gaussian";
    case MixtureKind::location_general:
      return "location_general";
  }
  return "unknown";
}

NullModel MixtureInstance::null_model1() const { return base; }

NullModel MixtureInstance::null_model2() const {
  switch (kind) {
    case MixtureKind::variance_gaussian:
      return NullModel::gaussian(0.0, solved_param);
    case MixtureKind::location_gaussian:
      return NullModel::gaussian(solved_param, 1.0);
    case MixtureKind::location_general:
      return base.shifted(solved_param);
  }
  return base;
}

double MixtureInstance::null1_density(double x) const {
  if (kind == MixtureKind::location_general) return base.density(x);
  return gaussian_density(x);
}

double MixtureInstance::null2_density(double x) const {
  switch (kind) {
    case MixtureKind::variance_gaussian:
      return gaussian_density(x / solved_param) / solved_param;
    case MixtureKind::location_gaussian:
      return gaussian_density(x - solved_param);
    case MixtureKind::location_general:
      return base.density(x - solved_param);
  }
  return 0.0;
}

double MixtureInstance::alternative1_density(double x) const {
  if (!in_alternative1_support(x)) return 0.0;
  const double excess = (1.0 - pi2) * null2_density(x) - (1.0 - pi1) * null1_density(x);
  return std::max(0.0, excess) / pi1;
}

double MixtureInstance::alternative2_density(double x) const {
  if (in_alternative1_support(x)) return 0.0;
  const double excess = (1.0 - pi1) * null1_density(x) - (1.0 - pi2) * null2_density(x);
  return std::max(0.0, excess) / pi2;
}

double MixtureInstance::mixture_density(double x) const {
  return std::max((1.0 - pi1) * null1_density(x), (1.0 - pi2) * null2_density(x));
}

bool MixtureInstance::in_alternative1_support(double x) const {
  if (kind == MixtureKind::variance_gaussian) return std::abs(x) > u0;
  return x > u0;
}

MixtureInstance solve_variance_mixture(double pi1, double pi2) {
  require_proportions(pi1, pi2, 0.25, true, "variance mixture");
  const auto f = [=](double sigma) { return variance_equation(sigma, pi1, pi2).value; };
  // Scan sigma2 - 1 geometrically over [1e-9, 99].
  const double excess = smallest_root([&](double e) { return f(1.0 + e); }, 1e-9, 99.0, true,
                                      "variance mixture");
  const double sigma2 = 1.0 + excess;
  const auto eq = variance_equation(sigma2, pi1, pi2);
  MixtureInstance m;
  m.kind = MixtureKind::variance_gaussian;
  m.pi1 = pi1;
  m.pi2 = pi2;
  m.solved_param = sigma2;
  m.u0 = eq.u0;
  m.residual = std::abs(eq.value);
  return m;
}

MixtureInstance solve_location_mixture(double pi1, double pi2) {
  require_proportions(pi1, pi2, 0.5, false, "location mixture");
  const double mu = smallest_root([=](double m) { return location_equation(m, pi1, pi2).value; },
                                  1e-9, 40.0, true, "location mixture");
  const auto eq = location_equation(mu, pi1, pi2);
  MixtureInstance m;
  m.kind = MixtureKind::location_gaussian;
  m.pi1 = pi1;
  m.pi2 = pi2;
  m.solved_param = mu;
  m.u0 = eq.u0;
  m.residual = std::abs(eq.value);
  return m;
}

MixtureInstance general_location_mixture(const NullModel& g, double pi) {
  if (!(pi > 0.0 && pi < 0.5)) {
    throw DomainError("general location mixture: pi must lie in (0, 1/2), got " +
                      std::to_string(pi));
  }
  if (g.family() == Family::tabulated) {
    throw DomainError("general location mixture: needs a symmetric parametric null");
  }
  MixtureInstance m;
  m.kind = MixtureKind::location_general;
  m.pi1 = pi;
  m.pi2 = pi;
  m.base = g.shifted(0.0);
  const double target = (1.0 - 2.0 * pi) / (2.0 * (1.0 - pi));
  m.solved_param = 2.0 * m.base.tail_quantile(target);
  m.u0 = 0.5 * m.solved_param;
  m.residual = std::abs((1.0 - pi) / pi * (1.0 - 2.0 * m.base.tail(m.u0)) - 1.0);
  return m;
}

double normalization_error(const MixtureInstance& m) {
  constexpr double lim = 40.0;
  std::vector<double> breaks = {-lim, lim};
  for (double b : {m.u0, 0.0, m.solved_param}) {
    if (b > -lim && b < lim) breaks.push_back(b);
  }
  if (m.kind == MixtureKind::variance_gaussian) breaks.push_back(-m.u0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double mass1 = 0.0;
  double mass2 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    mass1 += integrate([&](double x) { return m.alternative1_density(x); }, breaks[i], breaks[i + 1]);
    mass2 += integrate([&](double x) { return m.alternative2_density(x); }, breaks[i], breaks[i + 1]);
  }
  return std::max(std::abs(mass1 - 1.0), std::abs(mass2 - 1.0));
}

double draw_component(const MixtureInstance& m, MixtureComponent component, RandomStream& rng) {
  const bool variance = m.kind == MixtureKind::variance_gaussian;
  switch (component) {
    case MixtureComponent::mixture:
      return draw_component(
          m, rng.bernoulli(m.pi1) ? MixtureComponent::alternative1 : MixtureComponent::null1, rng);
    case MixtureComponent::null1:
      return m.null_model1().tail_quantile(rng.uniform());
    case MixtureComponent::null2:
      return m.null_model2().tail_quantile(rng.uniform());
    case MixtureComponent::alternative1: {
      // Proposal: null2 restricted to the support of f1. Accepted with
      // probability pi1 f1 / ((1 - pi2) null2).
      const NullModel proposal = m.null_model2();
      for (;;) {
        const double x = variance ? draw_outside(proposal, m.u0, rng) : draw_above(proposal, m.u0, rng);
        const double ratio = (1.0 - m.pi1) * m.null1_density(x) / ((1.0 - m.pi2) * m.null2_density(x));
        if (rng.uniform() >= ratio) return x;
      }
    }
    case MixtureComponent::alternative2: {
      const NullModel proposal = m.null_model1();
      for (;;) {
        const double x = variance ? draw_inside(proposal, m.u0, rng) : draw_below(proposal, m.u0, rng);
        const double ratio = (1.0 - m.pi2) * m.null2_density(x) / ((1.0 - m.pi1) * m.null1_density(x));
        if (rng.uniform() >= ratio) return x;
      }
    }
  }
  return 0.0;
}

Sample sample_mixture(const MixtureInstance& m, std::size_t n, MixtureComponent component,
                      RandomStream& rng) {
  std::vector<double> values(n);
  for (auto& v : values) v = draw_component(m, component, rng);
  return Sample(std::move(values));
}

LabeledDraws sample_labeled(const MixtureInstance& m, std::size_t n, int decomposition,
                            RandomStream& rng) {
  if (decomposition != 1 && decomposition != 2) {
    throw DomainError("mixture decomposition must be 1 or 2");
  }
  // Values always come from the decomposition-1 scheme so that both readings
  // share one dataset; decomposition 2 relabels from the posterior.
  LabeledDraws out;
  out.values.resize(n);
  out.alternative.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_alt = rng.bernoulli(m.pi1);
    out.alternative[i] = is_alt;
    out.values[i] = draw_component(
        m, is_alt ? MixtureComponent::alternative1 : MixtureComponent::null1, rng);
  }
  if (decomposition == 2) out.alternative = draw_labels(m, out.values, 2, rng);
  return out;
}

std::vector<bool> draw_labels(const MixtureInstance& m, const std::vector<double>& values,
                              int decomposition, RandomStream& rng) {
  if (decomposition != 1 && decomposition != 2) {
    throw DomainError("mixture decomposition must be 1 or 2");
  }
  std::vector<bool> labels(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = values[i];
    const double alt = decomposition == 1 ? m.pi1 * m.alternative1_density(x)
                                          : m.pi2 * m.alternative2_density(x);
    labels[i] = rng.uniform() < alt / m.mixture_density(x);
  }
  return labels;
}

BoundaryConstants boundary_constants(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("boundary constants: alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  const double keep = 1.0 - alpha;
  const double root = std::sqrt(alpha);
  return {(std::sqrt(keep) - keep) / alpha, (1.0 - root) / (2.0 - root)};
}

LaplaceInflation laplace_inflation(double pi) {
  if (!(pi > 0.0 && pi < 0.5)) {
    throw DomainError("laplace inflation: pi must lie in (0, 1/2), got " + std::to_string(pi));
  }
  const double ratio = (1.0 - pi) * (1.0 - pi) / ((1.0 - 2.0 * pi) * (1.0 - 2.0 * pi));  // e^mu
  const double half = 0.5 * (1.0 - pi);
  return {half * (1.0 + ratio), half * (1.0 + ratio - 4.0 / (1.0 + 1.0 / ratio))};
}

}  // namespace fdrlab
