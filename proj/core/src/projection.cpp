#include "fdpc/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdpc {

double lambert_w_exp(double z) {
  if (z < -40.0) {
    const double a = std::exp(z);
    return a - a * a;
  }
  double w = z > 1.0 ? z - std::log(z) : std::exp(z) / (1.0 + std::exp(z));
  for (int it = 0; it < 100; ++it) {
    double next = w * (1.0 + z - std::log(w)) / (1.0 + w);
    if (!(next > 0.0)) next = 0.5 * w;
    const double delta = std::abs(next - w);
    w = next;
    if (delta <= 4e-16 * w) break;
  }
  return w;
}

void clip_box(std::span<double> x, std::span<const double> lo, std::span<const double> hi) {
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
}

namespace {

struct Evaluation {
  double log_sum;  // log sum exp(x_j(t))
  double slope;    // d log_sum / dt
};

// x_j(t) for mu = e^t, plus the derivative of log sum exp(x) w.r.t. t.
Evaluation evaluate(std::span<const double> y, std::span<const double> lo, double t,
                    std::vector<double>& x) {
  double sum = 0.0;
  double dsum = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double w = lambert_w_exp(t + y[j]);
    const double free_x = y[j] - w;
    if (free_x > lo[j]) {
      x[j] = free_x;
      const double e = std::exp(free_x);
      sum += e;
      dsum -= e * w / (1.0 + w);
    } else {
      x[j] = lo[j];
      sum += std::exp(lo[j]);
    }
  }
  return {std::log(sum), dsum / sum};
}

}  // namespace

BudgetProjection project_log_budget(std::span<const double> y, std::span<const double> log_floor,
                                    double budget) {
  if (y.size() != log_floor.size()) throw std::invalid_argument("projection size mismatch");
  if (!(budget > 0.0)) throw std::invalid_argument("projection budget must be > 0");
  BudgetProjection out;
  out.x.assign(y.begin(), y.end());
  double floor_sum = 0.0;
  double clipped_sum = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    out.x[j] = std::max(y[j], log_floor[j]);
    clipped_sum += std::exp(out.x[j]);
    floor_sum += std::exp(log_floor[j]);
  }
  // Sums within rounding of the budget count as feasible.
  if (clipped_sum <= budget * (1.0 + 1e-14)) return out;
  if (floor_sum > budget * (1.0 + 1e-12)) {
    throw std::invalid_argument("projection: floors exceed the budget");
  }
  if (floor_sum >= budget) {
    out.x.assign(log_floor.begin(), log_floor.end());
    out.multiplier = std::numeric_limits<double>::infinity();
    return out;
  }

  const double target = std::log(budget);
  std::vector<double> x(y.size());
  // Bracket t = log mu: f(t) = log_sum(t) - target is decreasing.
  double t_lo = 0.0;
  double t_hi = 0.0;
  Evaluation e = evaluate(y, log_floor, 0.0, x);
  if (e.log_sum > target) {
    t_hi = 1.0;
    while (evaluate(y, log_floor, t_hi, x).log_sum > target) {
      t_lo = t_hi;
      t_hi = 2.0 * t_hi + 1.0;
      if (t_hi > 1e4) throw std::runtime_error("projection: failed to bracket multiplier");
    }
  } else {
    t_lo = -1.0;
    while (evaluate(y, log_floor, t_lo, x).log_sum <= target) {
      t_hi = t_lo;
      t_lo = 2.0 * t_lo - 1.0;
      if (t_lo < -1e4) throw std::runtime_error("projection: failed to bracket multiplier");
    }
  }

  double t = 0.5 * (t_lo + t_hi);
  for (int it = 0; it < 200; ++it) {
    e = evaluate(y, log_floor, t, x);
    const double f = e.log_sum - target;
    if (f > 0.0) {
      t_lo = t;
    } else {
      t_hi = t;
    }
    if (std::abs(f) <= 1e-15 || t_hi - t_lo <= 1e-15 * std::max(1.0, std::abs(t))) break;
    double next = e.slope < 0.0 ? t - f / e.slope : 0.5 * (t_lo + t_hi);
    if (!(next > t_lo && next < t_hi)) next = 0.5 * (t_lo + t_hi);
    t = next;
  }
  out.x = std::move(x);
  out.multiplier = std::exp(t);
  return out;
}

}  // namespace fdpc
