#include "fdpc/utility.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace fdpc {
namespace {

void require_positive_rate(double rate) {
  if (!(rate > 0.0)) {
    throw std::domain_error("utility evaluated at nonpositive rate " + std::to_string(rate));
  }
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view text, std::string_view context) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("bad number '" + s + "' in utility spec '" +
                                std::string(context) + "'");
  }
  return v;
}

}  // namespace

UtilityFn UtilityFn::log(double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("utility weight must be > 0");
  return UtilityFn(Kind::log, weight, 1.0, nullptr);
}

UtilityFn UtilityFn::alpha_fair(double alpha, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("utility weight must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (alpha == 1.0) return log(weight);
  return UtilityFn(Kind::alpha_fair, weight, alpha, nullptr);
}

UtilityFn UtilityFn::custom(std::string name, ScalarFn value, ScalarFn derivative,
                            ScalarFn inv_derivative, double weight) {
  if (!(weight > 0.0)) throw std::invalid_argument("utility weight must be > 0");
  if (!value || !derivative || !inv_derivative) {
    throw std::invalid_argument("custom utility '" + name + "' needs all three functions");
  }
  constexpr std::array<double, 7> probes{0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0};
  double previous = std::numeric_limits<double>::infinity();
  for (double r : probes) {
    const double d = derivative(r);
    if (!(d > 0.0) || !(d < previous)) {
      throw std::invalid_argument("custom utility '" + name +
                                  "': derivative must be positive and decreasing");
    }
    previous = d;
    const double h = 1e-5 * r;
    const double fd = (value(r + h) - value(r - h)) / (2.0 * h);
    if (std::abs(fd - d) > 1e-5 * std::abs(d)) {
      throw std::invalid_argument("custom utility '" + name +
                                  "': derivative disagrees with value");
    }
    const double back = inv_derivative(d);
    if (std::abs(back - r) > 1e-9 * r) {
      throw std::invalid_argument("custom utility '" + name +
                                  "': inv_derivative is not the inverse of derivative");
    }
  }
  auto impl = std::make_shared<const CustomImpl>(
      CustomImpl{std::move(name), std::move(value), std::move(derivative),
                 std::move(inv_derivative)});
  return UtilityFn(Kind::custom, weight, 0.0, std::move(impl));
}

UtilityFn UtilityFn::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  double weight = 1.0;
  double alpha = 0.0;
  bool have_alpha = false;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("expected key=value in utility spec '" +
                                    std::string(text) + "'");
      }
      const std::string_view key = item.substr(0, eq);
      const double v = parse_number(item.substr(eq + 1), text);
      if (key == "w") {
        weight = v;
      } else if (key == "alpha") {
        alpha = v;
        have_alpha = true;
      } else {
        throw std::invalid_argument("unknown key '" + std::string(key) + "' in utility spec");
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  if (head == "log") {
    if (have_alpha) throw std::invalid_argument("log utility takes no alpha");
    return log(weight);
  }
  if (head == "afair") {
    if (!have_alpha) throw std::invalid_argument("afair utility needs alpha=");
    return alpha_fair(alpha, weight);
  }
  throw std::invalid_argument("unknown utility kind '" + std::string(head) + "'");
}

double UtilityFn::value(double rate) const {
  require_positive_rate(rate);
  switch (kind_) {
    case Kind::log:
      return weight_ * std::log(rate);
    case Kind::alpha_fair:
      return weight_ * std::pow(rate, 1.0 - alpha_) / (1.0 - alpha_);
    case Kind::custom:
      return weight_ * custom_->value(rate);
  }
  return 0.0;
}

double UtilityFn::value_change(double rate, double delta) const {
  require_positive_rate(rate);
  require_positive_rate(rate + delta);
  switch (kind_) {
    case Kind::log:
      return weight_ * std::log1p(delta / rate);
    case Kind::alpha_fair: {
      const double e = 1.0 - alpha_;
      return weight_ * std::pow(rate, e) * std::expm1(e * std::log1p(delta / rate)) / e;
    }
    case Kind::custom:
      return weight_ * (custom_->value(rate + delta) - custom_->value(rate));
  }
  return 0.0;
}

double UtilityFn::derivative(double rate) const {
  require_positive_rate(rate);
  switch (kind_) {
    case Kind::log:
      return weight_ / rate;
    case Kind::alpha_fair:
      return weight_ * std::pow(rate, -alpha_);
    case Kind::custom:
      return weight_ * custom_->derivative(rate);
  }
  return 0.0;
}

double UtilityFn::inv_derivative(double price) const {
  if (!(price > 0.0)) {
    throw std::domain_error("inverse marginal utility undefined at price " +
                            std::to_string(price));
  }
  switch (kind_) {
    case Kind::log:
      return weight_ / price;
    case Kind::alpha_fair:
      return std::pow(price / weight_, -1.0 / alpha_);
    case Kind::custom:
      return custom_->inv_derivative(price / weight_);
  }
  return 0.0;
}

double UtilityFn::second_derivative(double rate) const {
  require_positive_rate(rate);
  switch (kind_) {
    case Kind::log:
      return -weight_ / (rate * rate);
    case Kind::alpha_fair:
      return -alpha_ * weight_ * std::pow(rate, -alpha_ - 1.0);
    case Kind::custom: {
      const double h = 1e-4 * rate;
      return weight_ * (custom_->derivative(rate + h) - custom_->derivative(rate - h)) /
             (2.0 * h);
    }
  }
  return 0.0;
}

UtilityFn UtilityFn::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("utility scale must be > 0");
  UtilityFn out = *this;
  out.weight_ *= factor;
  return out;
}

std::string UtilityFn::spec() const {
  switch (kind_) {
    case Kind::log:
      return "log:w=" + format_number(weight_);
    case Kind::alpha_fair:
      return "afair:alpha=" + format_number(alpha_) + ",w=" + format_number(weight_);
    case Kind::custom:
      return "custom:" + custom_->name + ",w=" + format_number(weight_);
  }
  return {};
}

bool UtilityFn::operator==(const UtilityFn& other) const {
  return kind_ == other.kind_ && weight_ == other.weight_ && alpha_ == other.alpha_ &&
         custom_ == other.custom_;
}

Utilities Utilities::uniform(std::size_t num_ul, std::size_t num_dl, const UtilityFn& ul_fn,
                             const UtilityFn& dl_fn) {
  return Utilities{std::vector<UtilityFn>(num_ul, ul_fn), std::vector<UtilityFn>(num_dl, dl_fn)};
}

Utilities Utilities::scaled(double factor) const {
  Utilities out;
  out.ul.reserve(ul.size());
  out.dl.reserve(dl.size());
  for (const auto& u : ul) out.ul.push_back(u.scaled(factor));
  for (const auto& u : dl) out.dl.push_back(u.scaled(factor));
  return out;
}

std::size_t Utilities::distinct_count() const {
  std::vector<const UtilityFn*> seen;
  auto visit = [&](const UtilityFn& u) {
    for (const auto* s : seen) {
      if (*s == u) return;
    }
    seen.push_back(&u);
  };
  for (const auto& u : ul) visit(u);
  for (const auto& u : dl) visit(u);
  return seen.size();
}

}  // namespace fdpc
