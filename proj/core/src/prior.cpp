#include <modgamp/prior.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace modgamp {

namespace {

double log_normal_pdf(double x, double variance) {
  return -0.5 * (x * x / variance + std::log(2.0 * std::numbers::pi * variance));
}

}  // namespace

BernoulliGaussianPrior::BernoulliGaussianPrior(double nonzero_probability, double slab_variance)
    : eps_(nonzero_probability), sigma2_(slab_variance) {
  if (!(eps_ > 0.0 && eps_ <= 1.0)) {
    throw std::domain_error("nonzero probability must lie in (0, 1]");
  }
  if (!(sigma2_ > 0.0) || !std::isfinite(sigma2_)) {
    throw std::domain_error("slab variance must be positive and finite");
  }
}

PosteriorMoments prior_denoise(double r_hat, double v_r, const BernoulliGaussianPrior& prior) {
  if (!(v_r > 0.0)) {
    throw std::domain_error("prior_denoise: v_r must be positive");
  }
  const double eps = prior.nonzero_probability();
  const double s2 = prior.slab_variance();

  const double log_slab = std::log(eps) + log_normal_pdf(r_hat, s2 + v_r);
  double log_evidence = log_slab;
  double pi = 1.0;
  double one_minus_pi = 0.0;
  if (eps < 1.0) {
    const double log_spike = std::log1p(-eps) + log_normal_pdf(r_hat, v_r);
    const double hi = std::max(log_slab, log_spike);
    log_evidence = hi + std::log(std::exp(log_slab - hi) + std::exp(log_spike - hi));
    pi = std::exp(log_slab - log_evidence);
    one_minus_pi = std::exp(log_spike - log_evidence);
  }

  const double gain = s2 / (s2 + v_r);
  const double m = r_hat * gain;
  const double s = v_r * gain;

  PosteriorMoments out;
  out.mean = pi * m;
  // pi*(s + m^2) - (pi*m)^2 rearranged so no cancellation occurs.
  out.variance = std::max(0.0, pi * s + pi * one_minus_pi * m * m);
  out.log_evidence = log_evidence;
  return out;
}

Vector prior_sample(const BernoulliGaussianPrior& prior, std::size_t length, RngStream& support,
                    RngStream& values) {
  std::bernoulli_distribution active(prior.nonzero_probability());
  std::normal_distribution<double> slab(0.0, std::sqrt(prior.slab_variance()));
  Vector x = Vector::Zero(static_cast<Eigen::Index>(length));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (active(support)) x[i] = slab(values);
  }
  return x;
}

Vector prior_sample(const BernoulliGaussianPrior& prior, std::size_t length, RngStream& rng) {
  return prior_sample(prior, length, rng, rng);
}

Vector prior_sample_fixed_support(const BernoulliGaussianPrior& prior, std::size_t length,
                                  RngStream& support, RngStream& values) {
  const auto k = static_cast<std::size_t>(
      std::llround(prior.nonzero_probability() * static_cast<double>(length)));
  std::vector<std::size_t> idx(length);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (std::size_t i = 0; i < k && i + 1 < length; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, length - 1);
    std::swap(idx[i], idx[pick(support)]);
  }
  std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(std::min(k, length)));

  std::normal_distribution<double> slab(0.0, std::sqrt(prior.slab_variance()));
  Vector x = Vector::Zero(static_cast<Eigen::Index>(length));
  for (std::size_t i = 0; i < std::min(k, length); ++i) {
    x[static_cast<Eigen::Index>(idx[i])] = slab(values);
  }
  return x;
}

}  // namespace modgamp
