#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace modgamp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Floor applied to every variance GAMP divides by.
inline constexpr double kDefaultVarianceFloor = 1e-12;

/// Raised when a numerical quantity cannot be represented (e.g. a
/// non-finite evidence after log-domain accumulation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Posterior mean/variance of a scalar latent plus the log of the
/// marginal density of the observation that produced it.
struct PosteriorMoments {
  double mean = 0.0;
  double variance = 0.0;
  double log_evidence = 0.0;
};

}  // namespace modgamp
