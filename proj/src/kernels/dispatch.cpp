#include "setr/kernels.hpp"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string>

namespace setr::kernels {

namespace {

Backend detect() noexcept {
    Backend b = avx2_available() ? Backend::Avx2 : Backend::Scalar;
    if (const char* env = std::getenv("SETR_SIMD")) {
        const std::string v(env);
        if (v == "scalar") b = Backend::Scalar;
        else if (v == "avx2" && avx2_available()) b = Backend::Avx2;
    }
    return b;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> backend{detect()};
    return backend;
}

inline bool use_avx2() noexcept {
    return current().load(std::memory_order_relaxed) == Backend::Avx2;
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
    return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept {
#if SETR_HAVE_AVX2_BUILD && (defined(__x86_64__) || defined(__i386__))
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
#else
    return false;
#endif
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

Backend set_backend(Backend b) noexcept {
    if (b == Backend::Avx2 && !avx2_available()) b = Backend::Scalar;
    current().store(b, std::memory_order_relaxed);
    return b;
}

void affine(std::span<const double> x, double scale, double offset, std::span<double> out) {
    assert(out.size() >= x.size());
    if (use_avx2()) avx2::affine(x.data(), x.size(), scale, offset, out.data());
    else scalar::affine(x.data(), x.size(), scale, offset, out.data());
}

void add(std::span<const double> x, std::span<const double> y, std::span<double> out) {
    assert(y.size() >= x.size() && out.size() >= x.size());
    if (use_avx2()) avx2::add(x.data(), y.data(), x.size(), out.data());
    else scalar::add(x.data(), y.data(), x.size(), out.data());
}

void add_scalar(std::span<double> x, double c) {
    if (use_avx2()) avx2::add_scalar(x.data(), x.size(), c);
    else scalar::add_scalar(x.data(), x.size(), c);
}

double dot(std::span<const double> w, std::span<const double> f) {
    assert(w.size() == f.size());
    return use_avx2() ? avx2::dot(w.data(), f.data(), w.size())
                      : scalar::dot(w.data(), f.data(), w.size());
}

double dot_abs(std::span<const double> w, std::span<const double> f) {
    assert(w.size() == f.size());
    return use_avx2() ? avx2::dot_abs(w.data(), f.data(), w.size())
                      : scalar::dot_abs(w.data(), f.data(), w.size());
}

ShiftedMoments shifted_moments(std::span<const double> x, double shift) {
    return use_avx2() ? avx2::shifted_moments(x.data(), x.size(), shift)
                      : scalar::shifted_moments(x.data(), x.size(), shift);
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
    assert(x.size() == y.size());
    return use_avx2() ? avx2::max_abs_diff(x.data(), y.data(), x.size())
                      : scalar::max_abs_diff(x.data(), y.data(), x.size());
}

}  // namespace setr::kernels
