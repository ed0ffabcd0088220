#include "setr/kernels.hpp"

#include <algorithm>
#include <cmath>

// Reference variants. Reductions mirror the four-lane layout of the AVX2
// code: lane j accumulates indices i = j (mod 4) of the vectorizable prefix,
// lanes fold as (l0 + l1) + (l2 + l3), and the remainder is added in order.

namespace setr::kernels::scalar {

namespace {

constexpr std::size_t kLanes = 4;

inline double fold(const double (&l)[kLanes]) { return (l[0] + l[1]) + (l[2] + l[3]); }

}  // namespace

void affine(const double* x, std::size_t n, double scale, double offset, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = scale * x[i] + offset;
}

void add(const double* x, const double* y, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void add_scalar(double* x, std::size_t n, double c) {
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] + c;
}

double dot(const double* w, const double* f, std::size_t n) {
    double lanes[kLanes] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = n - n % kLanes;
    for (std::size_t i = 0; i < body; i += kLanes)
        for (std::size_t j = 0; j < kLanes; ++j) lanes[j] = lanes[j] + w[i + j] * f[i + j];
    double s = fold(lanes);
    for (std::size_t i = body; i < n; ++i) s = s + w[i] * f[i];
    return s;
}

double dot_abs(const double* w, const double* f, std::size_t n) {
    double lanes[kLanes] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = n - n % kLanes;
    for (std::size_t i = 0; i < body; i += kLanes)
        for (std::size_t j = 0; j < kLanes; ++j)
            lanes[j] = lanes[j] + w[i + j] * std::fabs(f[i + j]);
    double s = fold(lanes);
    for (std::size_t i = body; i < n; ++i) s = s + w[i] * std::fabs(f[i]);
    return s;
}

ShiftedMoments shifted_moments(const double* x, std::size_t n, double shift) {
    double s1[kLanes] = {0.0, 0.0, 0.0, 0.0};
    double s2[kLanes] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = n - n % kLanes;
    for (std::size_t i = 0; i < body; i += kLanes) {
        for (std::size_t j = 0; j < kLanes; ++j) {
            const double d = x[i + j] - shift;
            s1[j] = s1[j] + d;
            s2[j] = s2[j] + d * d;
        }
    }
    ShiftedMoments m{fold(s1), fold(s2)};
    for (std::size_t i = body; i < n; ++i) {
        const double d = x[i] - shift;
        m.sum = m.sum + d;
        m.sum_sq = m.sum_sq + d * d;
    }
    return m;
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

}  // namespace setr::kernels::scalar
