#include <modgamp/modulo.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace modgamp {

FoldingThreshold::FoldingThreshold(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("folding threshold must be positive and finite, got " +
                            std::to_string(lambda));
  }
}

double modulo_fold(double t, FoldingThreshold lambda) {
  if (!std::isfinite(t)) {
    throw std::domain_error("modulo_fold: non-finite input");
  }
  // Same map as 2*lambda*(frac(t/(2*lambda) + 1/2) - 1/2), written as a
  // subtraction of whole periods so in-range samples pass through exactly.
  const double lam = lambda.value();
  const double period = lambda.period();
  double r = t - period * std::floor(t / period + 0.5);
  if (r >= lam) r -= period;
  if (r < -lam) r += period;
  if (!(r >= -lam && r < lam)) r = -lam;
  return r;
}

Vector fold_vector(const Vector& y_star, FoldingThreshold lambda) {
  Vector out(y_star.size());
  for (Eigen::Index i = 0; i < y_star.size(); ++i) {
    out[i] = modulo_fold(y_star[i], lambda);
  }
  return out;
}

SimpleFunction simple_function(const Vector& y_star, FoldingThreshold lambda) {
  return SimpleFunction{y_star - fold_vector(y_star, lambda), lambda};
}

std::size_t folding_count(const SimpleFunction& epsilon_g) {
  const double tol = epsilon_g.lambda.value() * 1e-9;
  std::size_t count = 0;
  for (const double e : epsilon_g.offsets) {
    if (std::abs(e) > tol) ++count;
  }
  return count;
}

}  // namespace modgamp
