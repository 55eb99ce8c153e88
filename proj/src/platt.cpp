#include "diab/platt.hpp"

#include <cmath>
#include <string>

#include "diab/errors.hpp"

namespace diab {

namespace {

constexpr int kMaxIters = 100;
constexpr double kGradTol = 1e-5;
constexpr double kRidge = 1e-12;
constexpr double kMinStep = 1e-10;

// cross-entropy of sigmoid(a*m + b) against fractional targets,
// written in the overflow-safe form used by the usual Platt fitters
double objective(const std::vector<double>& margins, const std::vector<double>& targets,
                 double a, double b) {
  double f = 0.0;
  for (size_t i = 0; i < margins.size(); ++i) {
    const double z = a * margins[i] + b;
    const double t = targets[i];
    if (z >= 0.0)
      f += (1.0 - t) * z + std::log1p(std::exp(-z));
    else
      f += -t * z + std::log1p(std::exp(z));
  }
  return f;
}

}  // namespace

PlattScaling fit_platt_calibrator(const std::vector<double>& margins,
                                  const std::vector<int>& labels) {
  if (margins.size() != labels.size())
    throw ArgumentError("margin count does not match label count");
  size_t n_pos = 0, n_neg = 0;
  for (int y : labels) {
    if (y == 1) ++n_pos;
    else if (y == 0) ++n_neg;
    else throw ArgumentError("labels must be 0 or 1");
  }
  if (n_pos == 0 || n_neg == 0)
    throw CalibrationError("platt calibration requires both classes (got " +
                           std::to_string(n_pos) + " positive, " + std::to_string(n_neg) +
                           " negative)");

  const double t_pos = (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_pos) + 2.0);
  const double t_neg = 1.0 / (static_cast<double>(n_neg) + 2.0);
  std::vector<double> targets(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) targets[i] = labels[i] == 1 ? t_pos : t_neg;

  double a = 0.0;
  double b = std::log((static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_neg) + 1.0));
  double f = objective(margins, targets, a, b);
  for (int iter = 0; iter < kMaxIters; ++iter) {
    double ga = 0.0, gb = 0.0, h11 = kRidge, h22 = kRidge, h12 = 0.0;
    for (size_t i = 0; i < margins.size(); ++i) {
      const double z = a * margins[i] + b;
      const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                                : std::exp(z) / (1.0 + std::exp(z));
      const double d = p - targets[i];
      const double w = p * (1.0 - p);
      ga += d * margins[i];
      gb += d;
      h11 += w * margins[i] * margins[i];
      h22 += w;
      h12 += w * margins[i];
    }
    if (std::abs(ga) < kGradTol && std::abs(gb) < kGradTol) return {a, b};
    const double det = h11 * h22 - h12 * h12;
    const double da = -(h22 * ga - h12 * gb) / det;
    const double db = -(h11 * gb - h12 * ga) / det;
    const double slope = ga * da + gb * db;  // negative for a descent direction
    double step = 1.0;
    while (step >= kMinStep) {
      const double f_next = objective(margins, targets, a + step * da, b + step * db);
      if (f_next <= f + 1e-4 * step * slope) {
        a += step * da;
        b += step * db;
        f = f_next;
        break;
      }
      step *= 0.5;
    }
    if (step < kMinStep)
      throw CalibrationError("platt line search stalled at iteration " + std::to_string(iter) +
                             " (objective " + std::to_string(f) + ")");
    if (!std::isfinite(a) || !std::isfinite(b))
      throw CalibrationError("platt parameters diverged to non-finite values");
  }
  throw CalibrationError("platt calibration did not converge within " +
                         std::to_string(kMaxIters) + " iterations");
}

}  // namespace diab
