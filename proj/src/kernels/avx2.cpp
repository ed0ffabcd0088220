// Compiled with -mavx2 only; never called unless dispatch confirmed support.

#include "setr/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace setr::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

inline double fold(__m256d v) {
    alignas(32) double l[kLanes];
    _mm256_store_pd(l, v);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline std::size_t body_of(std::size_t n) { return n - n % kLanes; }

}  // namespace

void affine(const double* x, std::size_t n, double scale, double offset, double* out) {
    const __m256d vs = _mm256_set1_pd(scale);
    const __m256d vo = _mm256_set1_pd(offset);
    const std::size_t body = body_of(n);
    for (std::size_t i = 0; i < body; i += kLanes) {
        const __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(vs, v), vo));
    }
    for (std::size_t i = body; i < n; ++i) out[i] = scale * x[i] + offset;
}

void add(const double* x, const double* y, std::size_t n, double* out) {
    const std::size_t body = body_of(n);
    for (std::size_t i = 0; i < body; i += kLanes)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (std::size_t i = body; i < n; ++i) out[i] = x[i] + y[i];
}

void add_scalar(double* x, std::size_t n, double c) {
    const __m256d vc = _mm256_set1_pd(c);
    const std::size_t body = body_of(n);
    for (std::size_t i = 0; i < body; i += kLanes)
        _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vc));
    for (std::size_t i = body; i < n; ++i) x[i] = x[i] + c;
}

double dot(const double* w, const double* f, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = body_of(n);
    for (std::size_t i = 0; i < body; i += kLanes)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(f + i)));
    double s = fold(acc);
    for (std::size_t i = body; i < n; ++i) s = s + w[i] * f[i];
    return s;
}

double dot_abs(const double* w, const double* f, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = body_of(n);
    for (std::size_t i = 0; i < body; i += kLanes)
        acc = _mm256_add_pd(
            acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), abs_pd(_mm256_loadu_pd(f + i))));
    double s = fold(acc);
    for (std::size_t i = body; i < n; ++i) s = s + w[i] * std::fabs(f[i]);
    return s;
}

ShiftedMoments shifted_moments(const double* x, std::size_t n, double shift) {
    const __m256d vs = _mm256_set1_pd(shift);
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    const std::size_t body = body_of(n);
    for (std::size_t i = 0; i < body; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vs);
        s1 = _mm256_add_pd(s1, d);
        s2 = _mm256_add_pd(s2, _mm256_mul_pd(d, d));
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
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = body_of(n);
    for (std::size_t i = 0; i < body; i += kLanes)
        acc = _mm256_max_pd(acc,
                            abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i))));
    alignas(32) double l[kLanes];
    _mm256_store_pd(l, acc);
    double m = std::max(std::max(l[0], l[1]), std::max(l[2], l[3]));
    for (std::size_t i = body; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

}  // namespace setr::kernels::avx2

#else

// Non-x86 builds: keep the symbols so dispatch links; never selected because
// avx2_available() reports false.
namespace setr::kernels::avx2 {
void affine(const double* x, std::size_t n, double s, double o, double* out) {
    scalar::affine(x, n, s, o, out);
}
void add(const double* x, const double* y, std::size_t n, double* out) {
    scalar::add(x, y, n, out);
}
void add_scalar(double* x, std::size_t n, double c) { scalar::add_scalar(x, n, c); }
double dot(const double* w, const double* f, std::size_t n) { return scalar::dot(w, f, n); }
double dot_abs(const double* w, const double* f, std::size_t n) {
    return scalar::dot_abs(w, f, n);
}
ShiftedMoments shifted_moments(const double* x, std::size_t n, double shift) {
    return scalar::shifted_moments(x, n, shift);
}
double max_abs_diff(const double* x, const double* y, std::size_t n) {
    return scalar::max_abs_diff(x, y, n);
}
}  // namespace setr::kernels::avx2

#endif
