#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fdpc {

/// Concave, nondecreasing rate utility from the alpha-fair family
/// (weight * log r, or weight * r^(1-alpha)/(1-alpha)), or a user-supplied
/// triple registered through custom().
///
/// Rates are in nats. Prices are marginal utilities U'(r), so
/// inv_derivative maps a price back to the rate a user asks for.
class UtilityFn {
 public:
  enum class Kind { log, alpha_fair, custom };

  using ScalarFn = std::function<double(double)>;

  static UtilityFn log(double weight = 1.0);
  static UtilityFn alpha_fair(double alpha, double weight = 1.0);

  /// Registers an arbitrary (value, derivative, inverse-derivative) triple.
  /// The triple is probed on a fixed rate grid: derivative positive and
  /// decreasing, matching a finite difference of value, and inverted by
  /// inv_derivative. Throws std::invalid_argument when any probe fails.
  static UtilityFn custom(std::string name, ScalarFn value, ScalarFn derivative,
                          ScalarFn inv_derivative, double weight = 1.0);

  /// Parses "log:w=2", "afair:alpha=2,w=2" (w defaults to 1).
  static UtilityFn parse(std::string_view text);

  Kind kind() const { return kind_; }
  double weight() const { return weight_; }
  double alpha() const { return alpha_; }

  double value(double rate) const;
  /// U(rate + delta) - U(rate) without cancellation for the built-in kinds.
  double value_change(double rate, double delta) const;
  double derivative(double rate) const;
  double inv_derivative(double price) const;
  /// U''(r); strictly negative.
  double second_derivative(double rate) const;

  /// c * U. Same maximizers, prices multiplied by c.
  UtilityFn scaled(double factor) const;

  /// Canonical config string, accepted by parse() for the built-in kinds.
  std::string spec() const;

  bool operator==(const UtilityFn& other) const;

 private:
  struct CustomImpl {
    std::string name;
    ScalarFn value;
    ScalarFn derivative;
    ScalarFn inv_derivative;
  };

  UtilityFn(Kind kind, double weight, double alpha,
            std::shared_ptr<const CustomImpl> custom)
      : kind_(kind), weight_(weight), alpha_(alpha), custom_(std::move(custom)) {}

  Kind kind_;
  double weight_;
  double alpha_;
  std::shared_ptr<const CustomImpl> custom_;
};

/// Per-user utility assignment for one scenario.
struct Utilities {
  std::vector<UtilityFn> ul;
  std::vector<UtilityFn> dl;

  static Utilities uniform(std::size_t num_ul, std::size_t num_dl,
                           const UtilityFn& ul_fn, const UtilityFn& dl_fn);

  Utilities scaled(double factor) const;

  /// Number of distinct functions in use; finite by construction.
  std::size_t distinct_count() const;
};

}  // namespace fdpc
