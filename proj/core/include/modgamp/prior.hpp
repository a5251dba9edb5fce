#pragma once

#include <modgamp/rng.hpp>
#include <modgamp/types.hpp>

#include <cstddef>

namespace modgamp {

/// Spike-and-slab source: (1 - eps) * delta(x) + eps * N(x; 0, sigma2).
class BernoulliGaussianPrior {
 public:
  BernoulliGaussianPrior(double nonzero_probability, double slab_variance);

  double nonzero_probability() const noexcept { return eps_; }
  double slab_variance() const noexcept { return sigma2_; }

  double mean() const noexcept { return 0.0; }
  double variance() const noexcept { return eps_ * sigma2_; }

 private:
  double eps_;
  double sigma2_;
};

/// MMSE denoiser for x observed as r_hat = x + N(0, v_r).
///
/// With pi the posterior probability of the slab, m = r*s2/(s2+v) and
/// s = s2*v/(s2+v):
///   mean     = pi * m
///   variance = pi * (s + m^2) - (pi * m)^2   (clamped at 0)
///   evidence = (1-eps) n(r; 0, v) + eps n(r; 0, s2+v)
/// pi is evaluated in the log domain so it stays accurate for |r| >> sqrt(v).
///
/// Throws std::domain_error if v_r <= 0.
PosteriorMoments prior_denoise(double r_hat, double v_r, const BernoulliGaussianPrior& prior);

/// i.i.d. draws from the prior. The support pattern comes from `support`
/// and the slab values from `values`; pass the same stream twice to use one.
Vector prior_sample(const BernoulliGaussianPrior& prior, std::size_t length,
                    RngStream& support, RngStream& values);

Vector prior_sample(const BernoulliGaussianPrior& prior, std::size_t length, RngStream& rng);

/// Exactly round(eps * length) nonzeros at uniformly random positions.
Vector prior_sample_fixed_support(const BernoulliGaussianPrior& prior, std::size_t length,
                                  RngStream& support, RngStream& values);

}  // namespace modgamp
