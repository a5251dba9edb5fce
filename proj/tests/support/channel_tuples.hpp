#pragma once

#include "random_tuples.hpp"

#include <cfloat>
#include <cmath>

namespace modgamp::testing {

struct ChannelTuple {
  double y;
  double mu;
  double var;
  double noise;  // 0 for the noiseless channel
  double lambda;
};

/// y in [-lambda, lambda), mu in [-10 lambda, 10 lambda], var in [1e-3, 25],
/// noise in {0} U [1e-4, 4], lambda in [0.25, 4].
inline ChannelTuple draw_channel_tuple(TupleGen& gen, double p_noiseless = 0.3) {
  ChannelTuple t{};
  t.lambda = gen.log_uniform(0.25, 4.0);
  t.y = gen.uniform(-t.lambda, t.lambda);
  t.mu = gen.uniform(-10 * t.lambda, 10 * t.lambda);
  t.var = gen.log_uniform(1e-3, 25.0);
  t.noise = gen.coin(p_noiseless) ? 0.0 : gen.log_uniform(1e-4, 4.0);
  return t;
}

/// Relative error whose denominator never drops below the smallest normal
/// double: true values below that are not representable and compare as 0.
inline double rel_err_repr(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-290);
}

}  // namespace modgamp::testing

namespace modgamp::testing {

/// Relative error for a posterior variance. Variances below the squared
/// resolution of the mean (a few ulps of max(|mean|, scale)) are round-off
/// in both the library and the extended-precision oracle, so they are
/// compared against that floor instead of against zero.
inline double rel_err_variance(double got, double want, double mean, double scale) {
  const double resolution = 4 * DBL_EPSILON * std::max(std::abs(mean), scale);
  return std::abs(got - want) / std::max(std::abs(want), resolution * resolution);
}

}  // namespace modgamp::testing
