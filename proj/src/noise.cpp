#include "llb/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace llb {

void JumpPath::validate() const {
  double prev = 0.0;
  for (const auto& e : events) {
    if (!(e.time > prev) || e.time > horizon)
      throw std::invalid_argument("jump times must be strictly increasing in (0, T]");
    prev = e.time;
  }
}

Control::Control(std::vector<double> edges, Eigen::MatrixXd values)
    : edges_(std::move(edges)), values_(std::move(values)) {
  if (edges_.size() < 2 || edges_.front() != 0.0)
    throw std::invalid_argument("control grid must start at 0 with at least one cell");
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (!(edges_[i] > edges_[i - 1])) throw std::invalid_argument("control edges must increase");
  if (values_.rows() != static_cast<Eigen::Index>(edges_.size() - 1))
    throw std::invalid_argument("control values need one row per time cell");
  if (!values_.allFinite() || (values_.size() > 0 && values_.minCoeff() < 0.0))
    throw std::invalid_argument("control values must be finite and >= 0");
}

Control Control::constant(double horizon, int cells, int atoms, double value) {
  if (cells < 1 || !(horizon > 0.0)) throw std::invalid_argument("bad control grid");
  std::vector<double> edges(cells + 1);
  for (int m = 0; m <= cells; ++m) edges[m] = horizon * m / cells;
  edges.back() = horizon;
  return Control(std::move(edges), Eigen::MatrixXd::Constant(cells, atoms, value));
}

int Control::cell_at(double t) const {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
  const auto idx = static_cast<int>(it - edges_.begin()) - 1;
  return std::clamp(idx, 0, cells() - 1);
}

Control Control::refined(int factor) const {
  if (factor < 1) throw std::invalid_argument("refinement factor must be >= 1");
  std::vector<double> edges;
  Eigen::MatrixXd vals(cells() * factor, atoms());
  for (int m = 0; m < cells(); ++m) {
    for (int s = 0; s < factor; ++s) {
      edges.push_back(edges_[m] + cell_width(m) * s / factor);
      vals.row(m * factor + s) = values_.row(m);
    }
  }
  edges.push_back(edges_.back());
  return Control(std::move(edges), std::move(vals));
}

namespace {

int categorical(std::mt19937_64& rng, std::span<const Atom> atoms, double mass) {
  std::uniform_real_distribution<double> u(0.0, mass);
  const double x = u(rng);
  double acc = 0.0;
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    acc += atoms[j].weight;
    if (x < acc) return static_cast<int>(j);
  }
  return static_cast<int>(atoms.size()) - 1;
}

}  // namespace

JumpPath sample_prm(const LevyMeasure& nu, double horizon, double rate_scale, std::uint64_t seed) {
  if (!(rate_scale > 0.0)) throw std::invalid_argument("rate_scale must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  JumpPath path{horizon, {}};
  const double mass = nu.mass();
  if (mass == 0.0) return path;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(rate_scale * mass);
  double t = gap(rng);
  while (t <= horizon) {
    const int j = categorical(rng, nu.atoms(), mass);
    path.events.push_back({t, nu.atoms()[j].mark, j});
    t += gap(rng);
  }
  return path;
}

JumpPath sample_controlled_prm(const LevyMeasure& nu, double horizon, double eps,
                               const Control& theta, std::uint64_t seed) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (theta.atoms() != static_cast<int>(nu.size()))
    throw std::invalid_argument("control has " + std::to_string(theta.atoms()) +
                                " atom columns, measure has " + std::to_string(nu.size()));
  if (std::abs(theta.horizon() - horizon) > 1e-12 * std::max(1.0, horizon))
    throw std::invalid_argument("control grid does not cover [0, T]");
  JumpPath path{horizon, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> accept(0.0, 1.0);
  for (std::size_t j = 0; j < nu.size(); ++j) {
    const int col = static_cast<int>(j);
    const double theta_max = theta.max_value(col);
    if (theta_max == 0.0) continue;
    std::exponential_distribution<double> gap(nu.atoms()[j].weight * theta_max / eps);
    for (double t = gap(rng); t <= horizon; t += gap(rng)) {
      const double u = accept(rng);
      if (u * theta_max < theta.at(t, col)) path.events.push_back({t, nu.atoms()[j].mark, col});
    }
  }
  std::sort(path.events.begin(), path.events.end(),
            [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
  return path;
}

double entropy_integrand(double theta) {
  if (theta == 0.0) return 1.0;
  return theta * std::log(theta) - theta + 1.0;
}

double entropy_cost(const Control& theta, const LevyMeasure& nu, double horizon) {
  if (theta.atoms() != static_cast<int>(nu.size()))
    throw std::invalid_argument("control/measure atom count mismatch");
  if (std::abs(theta.horizon() - horizon) > 1e-12 * std::max(1.0, horizon))
    throw std::invalid_argument("control grid does not cover [0, T]");
  double cost = 0.0;
  for (int m = 0; m < theta.cells(); ++m)
    for (int j = 0; j < theta.atoms(); ++j)
      cost += theta.cell_width(m) * nu.atoms()[j].weight * entropy_integrand(theta.values()(m, j));
  return cost;
}

SkBoundReport sk_bound_probe(std::span<const Control> family, const LevyMeasure& nu,
                             double horizon, const std::function<double(double)>& f) {
  SkBoundReport report;
  for (const auto& theta : family) {
    if (theta.atoms() != static_cast<int>(nu.size()))
      throw std::invalid_argument("control/measure atom count mismatch");
    if (std::abs(theta.horizon() - horizon) > 1e-12 * std::max(1.0, horizon))
      throw std::invalid_argument("control grid does not cover [0, T]");
    double v = 0.0;
    for (int m = 0; m < theta.cells(); ++m)
      for (int j = 0; j < theta.atoms(); ++j) {
        const auto& a = nu.atoms()[j];
        v += theta.cell_width(m) * a.weight * f(a.mark) * std::abs(theta.values()(m, j) - 1.0);
      }
    report.finite = report.finite && std::isfinite(v);
    report.values.push_back(v);
    report.max = std::max(report.max, v);
  }
  return report;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace llb
