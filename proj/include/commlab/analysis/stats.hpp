#pragma once

#include <span>

namespace commlab::analysis {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_tailed = 1.0;
};

// Welch's unequal-variance two-sample t-test. Both samples need at least
// two values. When both variances are zero the result is t = 0, p = 1 for
// equal means and t = +/-inf, p = 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
// Unbiased (n - 1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);
double standard_error(std::span<const double> xs);

}  // namespace commlab::analysis
