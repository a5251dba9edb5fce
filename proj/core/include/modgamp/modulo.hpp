#pragma once

// Self-reset ADC forward model: the folding map and the decomposition of
// an unfolded sample into folded value plus a 2*lambda-quantized offset.

#include <modgamp/types.hpp>

#include <cstddef>

namespace modgamp {

/// Half-range lambda of the self-reset ADC. Outputs live in [-lambda, lambda).
class FoldingThreshold {
 public:
  explicit FoldingThreshold(double lambda);

  double value() const noexcept { return lambda_; }
  /// Spacing 2*lambda between consecutive folding branches.
  double period() const noexcept { return 2.0 * lambda_; }

  friend bool operator==(FoldingThreshold, FoldingThreshold) = default;

 private:
  double lambda_;
};

/// 2*lambda*(frac(t/(2*lambda) + 1/2) - 1/2). Throws std::domain_error on
/// non-finite t.
double modulo_fold(double t, FoldingThreshold lambda);

Vector fold_vector(const Vector& y_star, FoldingThreshold lambda);

/// Per-sample folding offsets y* - fold(y*). Every entry is an integer
/// multiple of 2*lambda.
struct SimpleFunction {
  Vector offsets;
  FoldingThreshold lambda;
};

SimpleFunction simple_function(const Vector& y_star, FoldingThreshold lambda);

/// Number of folded samples, i.e. entries with |offset| > lambda * 1e-9.
std::size_t folding_count(const SimpleFunction& epsilon_g);

}  // namespace modgamp
