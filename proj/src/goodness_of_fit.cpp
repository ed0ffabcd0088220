#include "setr/goodness_of_fit.hpp"

#include <algorithm>
#include <cmath>

#include "setr/errors.hpp"
#include "setr/kernels.hpp"

namespace setr {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_before) {
    SETR_REQUIRE(!samples.empty(), DomainError, "KS statistic needs at least one sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());

    // At each distinct value v: empirical and model cdf just below and at v.
    std::vector<double> ecdf_lo, ecdf_hi, model_lo, model_hi;
    for (std::size_t i = 0; i < samples.size();) {
        std::size_t j = i;
        while (j < samples.size() && samples[j] == samples[i]) ++j;
        ecdf_lo.push_back(static_cast<double>(i) / n);
        ecdf_hi.push_back(static_cast<double>(j) / n);
        model_lo.push_back(cdf_before(samples[i]));
        model_hi.push_back(cdf(samples[i]));
        i = j;
    }
    return std::max(kernels::max_abs_diff(ecdf_lo, model_lo),
                    kernels::max_abs_diff(ecdf_hi, model_hi));
}

double ks_critical_value(std::size_t n, double alpha) {
    SETR_REQUIRE(n > 0 && alpha > 0.0 && alpha < 1.0, DomainError,
                 "KS critical value needs n > 0 and alpha in (0, 1)");
    const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
    const double rn = std::sqrt(static_cast<double>(n));
    return c / (rn + 0.12 + 0.11 / rn);
}

}  // namespace setr
