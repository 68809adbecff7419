#include "hvi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hvi {

namespace {

// Cells whose path weight is this far below the largest one cannot change a
// double-precision sum; their integrand is not evaluated.
constexpr double kNegligibleLogWeight = -745.0;

void validate(const GridSpec& grid) {
  if (grid.axes.empty() || grid.axes.size() > 2)
    throw std::invalid_argument("quadrature supports latent dimension 1 or 2");
  for (const auto& ax : grid.axes) {
    if (ax.points < 2) throw std::invalid_argument("grid axis needs at least 2 points");
    if (!(ax.hi > ax.lo)) throw std::invalid_argument("grid axis must have hi > lo");
  }
}

std::vector<double> axis_log_weights(const GridAxis& ax) {
  const double h = (ax.hi - ax.lo) / static_cast<double>(ax.points - 1);
  std::vector<double> w(ax.points, std::log(h));
  w.front() = w.back() = std::log(0.5 * h);
  return w;
}

double axis_point(const GridAxis& ax, std::size_t j) {
  const double h = (ax.hi - ax.lo) / static_cast<double>(ax.points - 1);
  return j + 1 == ax.points ? ax.hi : ax.lo + static_cast<double>(j) * h;
}

}  // namespace

GridSpec GridSpec::default_for(const LatentModel& model) { return default_for(model, model.parameters().values()); }

GridSpec GridSpec::default_for(const LatentModel& model, const Vector& lambda) {
  const auto box = model.quadrature_domain(lambda);
  if (box.size() > 2) throw std::invalid_argument("quadrature supports latent dimension 1 or 2");
  return uniform(box, box.size() == 1 ? kDefaultPoints1d : kDefaultPoints2d);
}

GridSpec GridSpec::uniform(const std::vector<Interval>& box, std::size_t points_per_axis) {
  GridSpec g;
  for (const auto& iv : box) g.axes.push_back({iv.lo, iv.hi, points_per_axis});
  return g;
}

QuadratureTable::QuadratureTable(const LatentModel& model) : QuadratureTable(model, GridSpec::default_for(model)) {}

QuadratureTable::QuadratureTable(const LatentModel& model, const GridSpec& grid)
    : QuadratureTable(model, model.parameters().values(), grid) {}

QuadratureTable::QuadratureTable(const LatentModel& model, const Vector& lambda, const GridSpec& grid) {
  validate(grid);
  if (grid.axes.size() != model.latent_dim())
    throw std::invalid_argument("grid dimension does not match the model's latent dimension");
  std::vector<std::vector<double>> axis_w;
  std::size_t total = 1;
  for (const auto& ax : grid.axes) {
    axis_w.push_back(axis_log_weights(ax));
    total *= ax.points;
  }
  log_cell_.reserve(total);
  log_proposal_.reserve(total);
  log_target_.reserve(total);

  Vector z(static_cast<Eigen::Index>(grid.axes.size()));
  auto push = [&](double log_w) {
    const double l0 = model.log_proposal(z, lambda);
    const double l1 = model.log_target(z, lambda);
    if (!std::isfinite(l0) || !std::isfinite(l1))
      throw NumericalError("quadrature: non-finite log-density on the grid");
    log_cell_.push_back(log_w);
    log_proposal_.push_back(l0);
    log_target_.push_back(l1);
  };
  if (grid.axes.size() == 1) {
    for (std::size_t i = 0; i < grid.axes[0].points; ++i) {
      z[0] = axis_point(grid.axes[0], i);
      push(axis_w[0][i]);
    }
  } else {
    for (std::size_t i = 0; i < grid.axes[0].points; ++i) {
      z[0] = axis_point(grid.axes[0], i);
      for (std::size_t j = 0; j < grid.axes[1].points; ++j) {
        z[1] = axis_point(grid.axes[1], j);
        push(axis_w[0][i] + axis_w[1][j]);
      }
    }
  }
}

double QuadratureTable::log_marginal() const {
  std::vector<double> terms(size());
  for (std::size_t j = 0; j < size(); ++j) terms[j] = log_cell_[j] + log_target_[j];
  return log_sum_exp(terms);
}

double QuadratureTable::log_normalizer(const PathSpec& spec, double beta) const {
  const PathPoint path(spec, beta);
  std::vector<double> terms(size());
  for (std::size_t j = 0; j < size(); ++j) terms[j] = log_cell_[j] + path.log_density(log_proposal_[j], log_target_[j]);
  const double out = log_sum_exp(terms);
  if (!std::isfinite(out)) throw NumericalError("quadrature: non-finite path normalizer");
  return out;
}

double QuadratureTable::expectation(const PathSpec& spec, double beta,
                                    const std::function<double(double, double)>& fn) const {
  const PathPoint path(spec, beta);
  std::vector<double> lw(size());
  double hi = kNegInf;
  for (std::size_t j = 0; j < size(); ++j) {
    lw[j] = log_cell_[j] + path.log_density(log_proposal_[j], log_target_[j]);
    hi = std::max(hi, lw[j]);
  }
  if (!std::isfinite(hi)) throw NumericalError("quadrature: non-finite path density");
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    const double w = std::exp(lw[j] - hi);
    if (w == 0.0) continue;
    den += w;
    num += w * fn(log_proposal_[j], log_target_[j]);
  }
  const double out = num / den;
  if (!std::isfinite(out)) throw NumericalError("quadrature: non-finite expectation");
  return out;
}

double QuadratureTable::local_evidence(const PathSpec& spec, double beta) const {
  const PathPoint path(spec, beta);
  const std::size_t n = size();
  std::vector<double> log_density(n), lw(n);
  double hi = kNegInf;
  for (std::size_t j = 0; j < n; ++j) {
    log_density[j] = path.log_density(log_proposal_[j], log_target_[j]);
    lw[j] = log_cell_[j] + log_density[j];
    hi = std::max(hi, lw[j]);
  }
  if (!std::isfinite(hi)) throw NumericalError("quadrature: non-finite path density");
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double rel = lw[j] - hi;
    if (rel < kNegligibleLogWeight) continue;
    den += std::exp(rel);
    const auto g = path.log_abs_integrand(log_proposal_[j], log_target_[j], log_density[j]);
    if (g.sign != 0.0) num += g.sign * std::exp(rel + g.log_abs);
  }
  const double out = num / den;
  if (!std::isfinite(out)) throw NumericalError("quadrature: non-finite local evidence");
  return out;
}

double QuadratureTable::proposal_expectation(const std::function<double(double, double)>& fn) const {
  return expectation(PathSpec::geometric(), 0.0, fn);
}

double quadrature_log_marginal(const LatentModel& model, const GridSpec& grid) {
  return QuadratureTable(model, grid).log_marginal();
}

double quadrature_log_marginal(const LatentModel& model) { return QuadratureTable(model).log_marginal(); }

double quadrature_local_evidence(const LatentModel& model, const PathSpec& spec, double beta, const GridSpec& grid) {
  return QuadratureTable(model, grid).local_evidence(spec, beta);
}

double quadrature_local_evidence(const LatentModel& model, double alpha, double beta, const GridSpec& grid) {
  return quadrature_local_evidence(model, PathSpec::holder(alpha), beta, grid);
}

}  // namespace hvi
