#pragma once

#include <vector>

namespace diab {

struct PlattScaling {
  double a = 0.0;
  double b = 0.0;
};

// Fits p = sigmoid(a * margin + b) by maximum likelihood against
// smoothed targets (N+ + 1)/(N+ + 2) and 1/(N- + 2), Newton iterations
// with backtracking. Throws CalibrationError when either class is
// absent or the iteration cap is hit without convergence.
PlattScaling fit_platt_calibrator(const std::vector<double>& margins,
                                  const std::vector<int>& labels);

}  // namespace diab
