#pragma once

// Scalar posterior moments of a noiseless CS measurement z given its
// folded observation y = fold(z + w), w ~ N(0, sigma_w2), and the GAMP
// output nonlinearities built on top of them.
//
// The pseudo-prior z ~ N(mu_z, sigma_z2) combined with the folding
// lattice {y + 2k*lambda} gives a Gaussian mixture posterior:
//   weight_k   ∝ n(y + 2k*lambda; mu_z, sigma_z2 + sigma_w2)
//   mean_k     = ((y + 2k*lambda)/sigma_w2 + mu_z/sigma_z2) * sigma_wz2
//   variance_k = sigma_wz2 = (1/sigma_w2 + 1/sigma_z2)^-1
// which collapses to point masses at the branches when sigma_w2 = 0.

#include <modgamp/modulo.hpp>
#include <modgamp/types.hpp>

namespace modgamp {

/// Folding threshold plus AWGN power ahead of the ADC. noise_variance = 0
/// is the noiseless channel.
class ModuloAwgnChannel {
 public:
  ModuloAwgnChannel(FoldingThreshold lambda, double noise_variance);

  FoldingThreshold lambda() const noexcept { return lambda_; }
  double noise_variance() const noexcept { return noise_variance_; }

 private:
  FoldingThreshold lambda_;
  double noise_variance_;
};

/// Gaussian belief about z before seeing y (GAMP's p_hat, v_p).
struct PseudoPrior {
  double mean;
  double variance;
};

/// Branches with |y + 2k*lambda - mu_z| beyond this many standard
/// deviations of sqrt(sigma_z2 + sigma_w2) are dropped (mass < 1e-15).
inline constexpr double kDefaultTruncationSigmas = 8.0;

/// Noiseless SR-ADC posterior. Requires y in [-lambda, lambda) and
/// variance > 0; throws std::domain_error otherwise.
PosteriorMoments sr_adc_moments(double y, PseudoPrior pp, FoldingThreshold lambda,
                                double truncation_sigmas = kDefaultTruncationSigmas);

/// Unfolded AWGN posterior. Both variances must be positive.
PosteriorMoments awgn_moments(double y, PseudoPrior pp, double noise_variance);

/// Folded AWGN posterior (mixture above). Delegates to sr_adc_moments when
/// the channel is noiseless.
PosteriorMoments modulo_awgn_moments(double y, PseudoPrior pp, const ModuloAwgnChannel& ch,
                                     double truncation_sigmas = kDefaultTruncationSigmas);

struct OutputUpdate {
  double s_hat;
  double v_s;
};

/// F1 = (E{z|y} - p_hat)/v_p and F2 = (v_p - var{z|y})/v_p^2, with F2
/// clamped below at v_s_floor.
OutputUpdate output_denoise(double y, double p_hat, double v_p, const ModuloAwgnChannel& ch,
                            double v_s_floor = kDefaultVarianceFloor);

}  // namespace modgamp
