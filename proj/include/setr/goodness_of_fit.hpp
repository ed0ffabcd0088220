#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace setr {

/// Two-sided Kolmogorov-Smirnov distance sup |F_n - F| between samples and a
/// reference law. `cdf_before(x)` is P(X < x); pass the cdf itself for
/// continuous laws. Ties and atoms are handled by comparing both one-sided
/// limits at every distinct sample value.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_before);

/// Critical value of the one-sample statistic at level alpha, from the
/// Kolmogorov limit law with Stephens' finite-n correction.
double ks_critical_value(std::size_t n, double alpha);

}  // namespace setr
