#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's closed forms: posterior moments come from adaptive quadrature of
// the unnormalized posterior and from brute-force lattice sums in extended
// precision. Quadrature integrands are only rescaled by their peak value.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace modgamp::testing {

struct OracleMoments {
  long double mean = 0;
  long double variance = 0;
  long double log_evidence = 0;
};

inline long double gauss_pdf(long double x, long double mean, long double var) {
  const long double d = x - mean;
  return std::exp(-d * d / (2 * var)) / std::sqrt(2 * std::numbers::pi_v<long double> * var);
}

namespace detail {

// The product n(x; c1, v1) * n(x; c2, v2) is concentrated inside the
// support of the narrower factor, shifted toward the other centre by at
// most the distance between them. A ternary search on its (concave) log
// locates the peak; quadrature then covers 40 narrow standard deviations
// either side, with the integrand divided by its peak value so that masses
// far below the long double range stay usable.
struct Window {
  long double lo;
  long double hi;
  long double log_peak;
};

inline long double log_product(long double x, long double c1, long double v1, long double c2, long double v2) {
  const long double d1 = x - c1;
  const long double d2 = x - c2;
  return -d1 * d1 / (2 * v1) - d2 * d2 / (2 * v2) -
         std::log(2 * std::numbers::pi_v<long double> * std::sqrt(v1 * v2));
}

inline Window product_window(long double c1, long double v1, long double c2, long double v2) {
  const long double narrow_sd = std::sqrt(std::min(v1, v2));
  const long double narrow_c = v1 <= v2 ? c1 : c2;
  const long double dist = std::abs(c1 - c2) / std::sqrt(v1 + v2);
  const long double half = (2 * dist + 15) * narrow_sd;
  long double lo = std::min(narrow_c, std::min(c1, c2)) - half;
  long double hi = std::max(narrow_c, std::max(c1, c2)) + half;
  const long double full_lo = lo, full_hi = hi;
  for (int i = 0; i < 300; ++i) {
    const long double m1 = lo + (hi - lo) / 3;
    const long double m2 = hi - (hi - lo) / 3;
    if (log_product(m1, c1, v1, c2, v2) < log_product(m2, c1, v1, c2, v2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const long double peak = (lo + hi) / 2;
  return {std::max(full_lo, peak - 40 * narrow_sd), std::min(full_hi, peak + 40 * narrow_sd),
          log_product(peak, c1, v1, c2, v2)};
}

// Integral of g(x) * n(x; c1, v1) * n(x; c2, v2) / exp(w.log_peak).
template <class G>
long double product_integral(G g, const Window& w, long double c1, long double v1, long double c2,
                             long double v2) {
  const auto f = [&](long double x) { return g(x) * std::exp(log_product(x, c1, v1, c2, v2) - w.log_peak); };
  return boost::math::quadrature::gauss_kronrod<long double, 31>::integrate(f, w.lo, w.hi, 20, 1e-14L);
}

// Total (unnormalized) log mass, mean and central variance of a Gaussian
// product component, all by quadrature.
struct Component {
  long double log_mass;
  long double mean;
  long double variance;
};

inline Component product_component(long double c1, long double v1, long double c2, long double v2) {
  const Window w = product_window(c1, v1, c2, v2);
  const long double mass = product_integral([](long double) { return 1.0L; }, w, c1, v1, c2, v2);
  const long double mean = product_integral([](long double x) { return x; }, w, c1, v1, c2, v2) / mass;
  const long double var =
      product_integral([&](long double x) { return (x - mean) * (x - mean); }, w, c1, v1, c2, v2) / mass;
  return {std::log(mass) + w.log_peak, mean, var};
}

}  // namespace detail

/// Bernoulli-Gaussian posterior of x given r = x + N(0, v): spike handled
/// analytically, slab by quadrature.
inline OracleMoments prior_oracle(long double r, long double v, long double eps, long double s2) {
  const detail::Component slab = detail::product_component(r, v, 0, s2);
  const long double slab_mass = eps * std::exp(slab.log_mass);
  const long double spike_mass = (1 - eps) * gauss_pdf(r, 0, v);
  const long double z = slab_mass + spike_mass;
  const long double p = slab_mass / z;
  OracleMoments out;
  out.mean = p * slab.mean;
  // Total variance over the two-point mixture {spike at 0, slab}.
  out.variance = p * slab.variance + p * (1 - p) * slab.mean * slab.mean;
  out.log_evidence = std::log(z);
  return out;
}

/// Noiseless folded channel: brute-force sum over a generous lattice
/// window (always including k in [-50, 50]) in extended precision.
inline OracleMoments sr_adc_oracle(long double y, long double mu, long double var,
                                   long double lambda) {
  const long double period = 2 * lambda;
  const long double sd = std::sqrt(var);
  const long long k_lo = std::min<long long>(-50, static_cast<long long>(std::floor((mu - y - 40 * sd) / period)) - 1);
  const long long k_hi = std::max<long long>(50, static_cast<long long>(std::ceil((mu - y + 40 * sd) / period)) + 1);
  long double z = 0, first = 0;
  for (long long k = k_lo; k <= k_hi; ++k) {
    const long double a = y + static_cast<long double>(k) * period;
    const long double w = gauss_pdf(a, mu, var);
    z += w;
    first += w * a;
  }
  const long double mean = first / z;
  long double central = 0;
  for (long long k = k_lo; k <= k_hi; ++k) {
    const long double a = y + static_cast<long double>(k) * period;
    central += gauss_pdf(a, mu, var) * (a - mean) * (a - mean);
  }
  return {mean, central / z, std::log(z)};
}

/// Unfolded AWGN channel: posterior of z ~ N(mu, var) given y = z + N(0, noise) by
/// quadrature over z.
inline OracleMoments awgn_oracle(long double y, long double mu, long double var, long double noise) {
  const detail::Component c = detail::product_component(mu, var, y, noise);
  return {c.mean, c.variance, c.log_mass};
}

/// Folded AWGN channel: quadrature over z for every lattice branch
/// y + 2k*lambda within 12 standard deviations, then mixed by mass.
inline OracleMoments modulo_awgn_oracle(long double y, long double mu, long double var,
                                        long double noise, long double lambda) {
  const long double period = 2 * lambda;
  const long double reach = 12 * std::sqrt(var + noise);
  const auto k_lo = static_cast<long long>(std::floor((mu - y - reach) / period)) - 1;
  const auto k_hi = static_cast<long long>(std::ceil((mu - y + reach) / period)) + 1;
  std::vector<detail::Component> parts;
  long double top = -std::numeric_limits<long double>::infinity();
  for (long long k = k_lo; k <= k_hi; ++k) {
    const long double a = y + static_cast<long double>(k) * period;
    parts.push_back(detail::product_component(mu, var, a, noise));
    top = std::max(top, parts.back().log_mass);
  }
  // Branch masses relative to the heaviest one.
  long double z = 0, first = 0;
  for (const detail::Component& c : parts) {
    const long double m = std::exp(c.log_mass - top);
    z += m;
    first += m * c.mean;
  }
  const long double mean = first / z;
  long double second = 0;
  for (const detail::Component& c : parts) {
    second += std::exp(c.log_mass - top) * (c.variance + (c.mean - mean) * (c.mean - mean));
  }
  return {mean, second / z, std::log(z) + top};
}

/// Gaussian upper tail Q(x).
inline double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace modgamp::testing

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

namespace modgamp::testing {

/// Expected number of folded samples per trial without the Gaussian
/// approximation: conditioned on x, every y*_i is N(0, ||x||^2/n + noise),
/// with K ~ Bin(N, eps) nonzeros and ||x||^2 ~ s2 * chi2_K.
inline double exact_expected_folds(int n_signal, int n, double eps, double s2, double noise,
                                   double lambda) {
  const auto fold_prob = [&](double norm2) {
    const double var = norm2 / n + noise;
    return var > 0 ? 2.0 * gaussian_tail(lambda / std::sqrt(var)) : 0.0;
  };
  const boost::math::binomial_distribution<double> kdist(n_signal, eps);
  double total = 0.0;
  for (int k = 0; k <= n_signal; ++k) {
    const double pk = boost::math::pdf(kdist, k);
    if (pk < 1e-16) continue;
    if (k == 0) {
      total += pk * fold_prob(0.0);
      continue;
    }
    const boost::math::chi_squared_distribution<double> chi(k);
    const double hi = boost::math::quantile(boost::math::complement(chi, 1e-15));
    const auto f = [&](double u) { return fold_prob(s2 * u) * boost::math::pdf(chi, u); };
    total += pk * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, hi, 15, 1e-12);
  }
  return n * total;
}

}  // namespace modgamp::testing
