#pragma once

// Data-parallel inner loops shared by quadrature, path generation, Monte Carlo
// reduction and goodness-of-fit statistics.
//
// Every kernel has a scalar reference implementation and an AVX2 variant. The
// active variant is chosen once at startup from CPUID (override with the
// SETR_SIMD environment variable: "scalar" or "avx2"). Reductions use a fixed
// four-lane accumulation order in both variants and the build disables FMA
// contraction, so the two variants produce bitwise-identical results.

#include <cstddef>
#include <span>
#include <string_view>

namespace setr::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b) noexcept;

/// True when the running CPU (and the build) can execute the AVX2 variants.
bool avx2_available() noexcept;

Backend active_backend() noexcept;

/// Forces a backend. Requesting Avx2 on a machine without it falls back to
/// Scalar; the backend actually installed is returned.
Backend set_backend(Backend b) noexcept;

/// out[i] = scale * x[i] + offset
void affine(std::span<const double> x, double scale, double offset, std::span<double> out);

/// out[i] = x[i] + y[i]
void add(std::span<const double> x, std::span<const double> y, std::span<double> out);

/// x[i] += c
void add_scalar(std::span<double> x, double c);

/// sum_i w[i] * f[i]
double dot(std::span<const double> w, std::span<const double> f);

/// sum_i w[i] * |f[i]|
double dot_abs(std::span<const double> w, std::span<const double> f);

struct ShiftedMoments {
    double sum = 0.0;     ///< sum_i (x[i] - shift)
    double sum_sq = 0.0;  ///< sum_i (x[i] - shift)^2
};

ShiftedMoments shifted_moments(std::span<const double> x, double shift);

/// max_i |x[i] - y[i]|, 0 for empty input
double max_abs_diff(std::span<const double> x, std::span<const double> y);

/// Direct access to one variant, bypassing dispatch. Used by the
/// equivalence tests; not part of the stable surface.
namespace scalar {
void affine(const double* x, std::size_t n, double scale, double offset, double* out);
void add(const double* x, const double* y, std::size_t n, double* out);
void add_scalar(double* x, std::size_t n, double c);
double dot(const double* w, const double* f, std::size_t n);
double dot_abs(const double* w, const double* f, std::size_t n);
ShiftedMoments shifted_moments(const double* x, std::size_t n, double shift);
double max_abs_diff(const double* x, const double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
void affine(const double* x, std::size_t n, double scale, double offset, double* out);
void add(const double* x, const double* y, std::size_t n, double* out);
void add_scalar(double* x, std::size_t n, double c);
double dot(const double* w, const double* f, std::size_t n);
double dot_abs(const double* w, const double* f, std::size_t n);
ShiftedMoments shifted_moments(const double* x, std::size_t n, double shift);
double max_abs_diff(const double* x, const double* y, std::size_t n);
}  // namespace avx2

}  // namespace setr::kernels
