#pragma once

#include <span>
#include <stdexcept>

namespace enfsim {

// Thrown when a Pearson correlation is requested for a constant input.
// Policy (treat as indeterminate, skip, ...) is the caller's call.
struct undefined_correlation : std::domain_error {
  undefined_correlation() : std::domain_error("pearson: correlation undefined for constant input") {}
};

// Standard product-moment correlation coefficient in [-1, 1].
// Requires equal lengths >= 2; throws undefined_correlation if either
// input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace enfsim
