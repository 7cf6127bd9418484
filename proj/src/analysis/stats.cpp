#include "commlab/analysis/stats.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace commlab::analysis {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double sample_stddev(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double standard_error(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("standard error of empty sample");
  return sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("welch_t_test: each sample needs at least two values");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na;
  const double vb = sample_variance(b) / nb;
  const double diff = mean(a) - mean(b);
  const double se2 = va + vb;

  WelchResult r;
  if (se2 == 0.0) {
    r.df = na + nb - 2.0;
    if (diff == 0.0) return r;
    r.t = diff > 0.0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
    r.p_two_tailed = 0.0;
    return r;
  }
  r.t = diff / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
  const double x = r.df / (r.df + r.t * r.t);
  r.p_two_tailed = boost::math::ibeta(r.df / 2.0, 0.5, x);
  return r;
}

}  // namespace commlab::analysis
