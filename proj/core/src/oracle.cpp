#include "fdpc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fdpc/model.hpp"
#include "fdpc/projection.hpp"

namespace fdpc {
namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

// Flattened [ul..., dl...] log-power coordinates.
struct Layout {
  std::size_t num_ul;
  std::size_t num_dl;

  Vec pack(const LogPowers& x) const {
    Vec v(x.ul);
    v.insert(v.end(), x.dl.begin(), x.dl.end());
    return v;
  }
  LogPowers unpack(const Vec& v) const {
    LogPowers x;
    x.ul.assign(v.begin(), v.begin() + static_cast<long>(num_ul));
    x.dl.assign(v.begin() + static_cast<long>(num_ul), v.end());
    return x;
  }
};

using ValueGrad = std::function<double(const Vec& x, Vec& grad)>;
using Projector = std::function<Vec(const Vec& y)>;
// f(to) - f(from); the plain difference of values when unset.
using Change = std::function<double(const Vec& from, const Vec& to)>;

struct AscentOutcome {
  Vec x;
  double value = 0.0;
  double pg_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;
  Vec trace;
};

Vec projected_step(const Projector& proj, const Vec& x, const Vec& g, double t) {
  Vec y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + t * g[k];
  return proj(y);
}

double projected_gradient_norm(const Projector& proj, const Vec& x, const Vec& g) {
  Vec p = projected_step(proj, x, g, 1.0);
  for (std::size_t k = 0; k < x.size(); ++k) p[k] -= x[k];
  return norm2(p);
}

// Monotone projected gradient ascent with Armijo backtracking along the
// projection arc.
AscentOutcome ascend(const ValueGrad& fn, const Projector& proj, Vec x0,
                     const OracleOptions& opts, bool keep_trace, const Change& change = {}) {
  AscentOutcome out;
  out.x = proj(x0);
  Vec g(out.x.size());
  out.value = fn(out.x, g);
  if (keep_trace) out.trace.push_back(out.value);
  Vec prev_x;
  Vec prev_g;
  double step = opts.initial_step;
  for (int it = 0; it < opts.max_iters; ++it) {
    out.pg_norm = projected_gradient_norm(proj, out.x, g);
    out.iterations = it;
    if (out.pg_norm <= opts.grad_tol) {
      out.converged = true;
      out.status = "converged";
      return out;
    }
    if (opts.bb_steps && !prev_x.empty()) {
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t k = 0; k < out.x.size(); ++k) {
        const double sk = out.x[k] - prev_x[k];
        ss += sk * sk;
        sy -= sk * (g[k] - prev_g[k]);
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : opts.initial_step;
    } else {
      step = opts.initial_step;
    }
    Vec g_new(out.x.size());
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Vec cand = projected_step(proj, out.x, g, step);
      double ascent = 0.0;
      for (std::size_t k = 0; k < cand.size(); ++k) ascent += g[k] * (cand[k] - out.x[k]);
      const double f = fn(cand, g_new);
      const double gain = change ? change(out.x, cand) : f - out.value;
      if (gain >= opts.armijo * ascent) {
        prev_x = std::move(out.x);
        prev_g = g;
        out.x = std::move(cand);
        out.value = f;
        g = g_new;
        accepted = true;
        break;
      }
      step *= opts.shrink;
    }
    if (keep_trace) out.trace.push_back(out.value);
    if (!accepted) {
      out.pg_norm = projected_gradient_norm(proj, out.x, g);
      out.converged = out.pg_norm <= opts.grad_tol;
      out.status = out.converged ? "converged" : "line search stalled";
      return out;
    }
  }
  out.iterations = opts.max_iters;
  out.pg_norm = projected_gradient_norm(proj, out.x, g);
  out.converged = out.pg_norm <= opts.grad_tol;
  out.status = out.converged ? "converged" : "max iterations reached";
  return out;
}

struct Bounds {
  Vec ul_lo;
  Vec ul_hi;
  Vec dl_lo;
};

Bounds log_bounds(const Scenario& s, bool fix_uplink) {
  Bounds b;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    b.ul_hi.push_back(std::log(s.p_ul_max));
    b.ul_lo.push_back(fix_uplink ? b.ul_hi.back() : std::log(s.p0_ul[i]));
  }
  for (double p : s.p0_dl) b.dl_lo.push_back(std::log(p));
  return b;
}

// P_j = max(P0_j, q_j / mu) with sum P = budget.
Vec water_fill(const Vec& q, const Vec& floor, double budget) {
  const double floor_sum = std::accumulate(floor.begin(), floor.end(), 0.0);
  if (floor_sum >= budget) return floor;
  auto total = [&](double log_mu) {
    double acc = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) acc += std::max(floor[j], q[j] * std::exp(-log_mu));
    return acc;
  };
  double lo = -50.0;
  double hi = 50.0;
  while (total(lo) < budget) lo -= 50.0;
  while (total(hi) > budget) hi += 50.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > budget ? lo : hi) = mid;
  }
  Vec p(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) p[j] = std::max(floor[j], q[j] * std::exp(-hi));
  return p;
}

}  // namespace

OracleResult solve_centralized(const Scenario& s, const Utilities& utils,
                               const OracleOptions& opts) {
  s.validate();
  if (utils.ul.size() != s.num_ul() || utils.dl.size() != s.num_dl()) {
    throw std::invalid_argument("utility assignment does not match scenario size");
  }
  const Layout layout{s.num_ul(), s.num_dl()};
  const Bounds b = log_bounds(s, opts.fix_uplink_at_max);

  const Projector proj = [&](const Vec& y) {
    Vec x(y.size());
    for (std::size_t i = 0; i < layout.num_ul; ++i) x[i] = std::clamp(y[i], b.ul_lo[i], b.ul_hi[i]);
    const std::span<const double> ydl(y.data() + layout.num_ul, layout.num_dl);
    const BudgetProjection pd = project_log_budget(ydl, b.dl_lo, s.p_dl_total);
    std::copy(pd.x.begin(), pd.x.end(), x.begin() + static_cast<long>(layout.num_ul));
    return x;
  };
  const ValueGrad fn = [&](const Vec& x, Vec& grad) {
    const ObjectiveEval e = evaluate_objective(s, utils, layout.unpack(x));
    grad = layout.pack(e.gradient);
    return e.value;
  };

  LogPowers start;
  start.ul.assign(s.num_ul(), std::log(s.p_ul_max));
  start.dl.assign(s.num_dl(), std::log(s.p_dl_total / static_cast<double>(s.num_dl())));
  const Change change = [&](const Vec& from, const Vec& to) {
    return objective_change(s, utils, layout.unpack(from), layout.unpack(to));
  };
  const AscentOutcome a = ascend(fn, proj, layout.pack(start), opts, true, change);

  OracleResult r;
  r.p_star = layout.unpack(a.x).to_linear();
  r.utility_star = a.value;
  r.grad_norm = a.pg_norm;
  r.iterations = a.iterations;
  r.converged = a.converged;
  r.status = a.status;
  r.objective_trace = a.trace;
  r.prices = marginal_prices(s, utils, r.p_star);
  r.kkt = kkt_residual(s, utils, r.p_star);
  const double dl_sum = std::accumulate(r.p_star.p_dl.begin(), r.p_star.p_dl.end(), 0.0);
  r.budget_binding = std::abs(dl_sum - s.p_dl_total) <= 1e-9 * s.p_dl_total;
  if (!opts.fix_uplink_at_max) {
    r.duality_gap = dual_value(s, utils, r.prices, layout.unpack(a.x).ul) - r.utility_star;
  }
  return r;
}

double dual_value(const Scenario& s, const Utilities& utils, const Prices& q,
                  std::span<const double> ul_start) {
  // Rate subproblem: r = (U')^{-1}(q).
  double rate_part = 0.0;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    const double r = utils.ul[i].inv_derivative(q.ul[i]);
    rate_part += utils.ul[i].value(r) - q.ul[i] * r;
  }
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    const double r = utils.dl[j].inv_derivative(q.dl[j]);
    rate_part += utils.dl[j].value(r) - q.dl[j] * r;
  }

  // Uplink subproblem over the box, concave in log powers.
  const Bounds b = log_bounds(s, false);
  const ValueGrad vul = [&](const Vec& x, Vec& grad) {
    double v = 0.0;
    grad.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < s.num_ul(); ++i) {
      v += q.ul[i] * (std::log(s.antennas * s.g_ul[i]) + x[i]);
      grad[i] = q.ul[i];
    }
    for (std::size_t j = 0; j < s.num_dl(); ++j) {
      double in = s.noise;
      for (std::size_t i : s.nbr.of_dl[j]) in += s.g_inter(i, j) * std::exp(x[i]);
      v -= q.dl[j] * std::log(in);
      for (std::size_t i : s.nbr.of_dl[j]) {
        grad[i] -= q.dl[j] * s.g_inter(i, j) * std::exp(x[i]) / in;
      }
    }
    return v;
  };
  const Projector box = [&](const Vec& y) {
    Vec x(y);
    clip_box(x, b.ul_lo, b.ul_hi);
    return x;
  };
  Vec x0(b.ul_hi);
  if (ul_start.size() == x0.size()) x0.assign(ul_start.begin(), ul_start.end());
  OracleOptions inner;
  inner.grad_tol = 1e-12;
  inner.max_iters = 500;
  const AscentOutcome ul = ascend(vul, box, x0, inner, false);
  // Concavity: max V <= V(x) + max over the box of g . (y - x).
  Vec g;
  double v_ul = vul(ul.x, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    v_ul += std::max(g[i] * (b.ul_hi[i] - ul.x[i]), g[i] * (b.ul_lo[i] - ul.x[i]));
  }

  // Downlink subproblem: linear objective on the budget set.
  const Vec p_dl = water_fill(q.dl, s.p0_dl, s.p_dl_total);
  double vdl = 0.0;
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    vdl += q.dl[j] * (std::log(s.antennas * s.g_dl[j]) + std::log(p_dl[j]));
  }

  double noise_term = 0.0;
  for (double qi : q.ul) noise_term += qi * std::log(s.noise);
  return rate_part + v_ul + vdl - noise_term;
}

KktResidual kkt_residual(const Scenario& s, const Utilities& utils, const PowerAllocation& p) {
  const LinkState st = link_state(s, p);
  const Prices q = marginal_prices(s, utils, p);
  const LogPowers g = assemble_gradient(s, q, p, st.in_dl);
  constexpr double kBoundTol = 1e-9;

  KktResidual res;
  for (std::size_t i = 0; i < s.num_ul(); ++i) {
    const bool at_hi = p.p_ul[i] >= s.p_ul_max * (1.0 - kBoundTol);
    const bool at_lo = p.p_ul[i] <= s.p0_ul[i] * (1.0 + kBoundTol);
    double r = std::abs(g.ul[i]);
    if (at_hi) r = std::max(0.0, -g.ul[i]);
    if (at_lo) r = std::max(0.0, g.ul[i]);
    res.ul = std::max(res.ul, r);
  }

  const double total = std::accumulate(p.p_dl.begin(), p.p_dl.end(), 0.0);
  const bool budget_active = std::abs(total - s.p_dl_total) <= kBoundTol * s.p_dl_total;
  double qp = 0.0;
  double pp = 0.0;
  std::vector<bool> at_floor(s.num_dl());
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    at_floor[j] = p.p_dl[j] <= s.p0_dl[j] * (1.0 + kBoundTol);
    if (!at_floor[j]) {
      qp += g.dl[j] * p.p_dl[j];
      pp += p.p_dl[j] * p.p_dl[j];
    }
  }
  // Stationarity in log coordinates: q_j - mu P_j + nu_j = 0, nu_j >= 0 at the floor.
  const double mu = budget_active && pp > 0.0 ? std::max(0.0, qp / pp) : 0.0;
  res.budget_multiplier = mu;
  for (std::size_t j = 0; j < s.num_dl(); ++j) {
    const double stat = g.dl[j] - mu * p.p_dl[j];
    res.dl = std::max(res.dl, at_floor[j] ? std::max(0.0, stat) : std::abs(stat));
  }
  res.max = std::max(res.ul, res.dl);
  return res;
}

GridResult brute_force_grid(const Scenario& s, const Utilities& utils, int points_per_dim) {
  const std::size_t kul = s.num_ul();
  const std::size_t kdl = s.num_dl();
  if (kul + kdl > 4) throw std::invalid_argument("brute_force_grid: K_ul + K_dl must be <= 4");
  if (points_per_dim < 2) throw std::invalid_argument("brute_force_grid: need >= 2 points");
  s.validate();
  const int n = points_per_dim;

  std::vector<Vec> ul_axis(kul, Vec(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < kul; ++i) {
    const double lo = std::log(s.p0_ul[i]);
    const double hi = std::log(s.p_ul_max);
    for (int k = 0; k < n; ++k) {
      ul_axis[i][static_cast<std::size_t>(k)] =
          k == n - 1 ? s.p_ul_max : std::exp(lo + (hi - lo) * k / (n - 1));
    }
  }
  const double spare =
      s.p_dl_total - std::accumulate(s.p0_dl.begin(), s.p0_dl.end(), 0.0);
  const int units = kdl == 1 ? 0 : n - 1;

  // Enumerate the index vector: kul uplink indices in [0, n) and a
  // composition of `units` across the downlink users.
  std::vector<std::vector<int>> compositions;
  {
    std::vector<int> c(kdl, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
      if (pos + 1 == kdl) {
        c[pos] = left;
        compositions.push_back(c);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        c[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, units);
  }

  auto make_point = [&](const std::vector<int>& ul_idx, const std::vector<int>& comp) {
    PowerAllocation p;
    for (std::size_t i = 0; i < kul; ++i) p.p_ul.push_back(ul_axis[i][static_cast<std::size_t>(ul_idx[i])]);
    for (std::size_t j = 0; j < kdl; ++j) {
      const double share = kdl == 1 ? 1.0 : static_cast<double>(comp[j]) / units;
      p.p_dl.push_back(s.p0_dl[j] + spare * share);
    }
    return p;
  };

  GridResult best;
  best.utility = -std::numeric_limits<double>::infinity();
  std::vector<int> best_ul;
  std::vector<int> best_comp;
  std::vector<int> ul_idx(kul, 0);
  const long long ul_count = static_cast<long long>(std::pow(n, static_cast<double>(kul)));
  for (long long code = 0; code < ul_count; ++code) {
    long long c = code;
    for (std::size_t i = 0; i < kul; ++i) {
      ul_idx[i] = static_cast<int>(c % n);
      c /= n;
    }
    for (const auto& comp : compositions) {
      const PowerAllocation p = make_point(ul_idx, comp);
      const double u = sum_utility(s, utils, p, RateMode::high_snr);
      ++best.evaluated;
      if (u > best.utility) {
        best.utility = u;
        best.best = p;
        best_ul = ul_idx;
        best_comp = comp;
      }
    }
  }

  // Resolution: utility change to each grid neighbor of the best point.
  double bound = 0.0;
  auto consider = [&](const std::vector<int>& ui, const std::vector<int>& comp) {
    const double u = sum_utility(s, utils, make_point(ui, comp), RateMode::high_snr);
    bound = std::max(bound, std::abs(u - best.utility));
  };
  for (std::size_t i = 0; i < kul; ++i) {
    for (int d : {-1, 1}) {
      std::vector<int> ui = best_ul;
      ui[i] += d;
      if (ui[i] >= 0 && ui[i] < n) consider(ui, best_comp);
    }
  }
  for (std::size_t a = 0; a < kdl; ++a) {
    for (std::size_t c = 0; c < kdl; ++c) {
      if (a == c || best_comp[a] == 0) continue;
      std::vector<int> comp = best_comp;
      --comp[a];
      ++comp[c];
      consider(best_ul, comp);
    }
  }
  best.resolution_bound = bound;
  return best;
}

}  // namespace fdpc
