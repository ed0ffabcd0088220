#include "setr/kernels.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

namespace k = setr::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::vector<double> v(n);
    for (double& x : v) x = u(gen);
    return v;
}

bool bit_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

class KernelEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (!k::avx2_available()) GTEST_SKIP() << "AVX2 not available on this machine";
    }
};

}  // namespace

TEST_F(KernelEquivalence, ElementwiseKernelsMatchScalarBitwise) {
    std::mt19937_64 gen(7);
    for (std::size_t n = 0; n < 70; ++n) {
        const auto x = random_vector(gen, n);
        const auto y = random_vector(gen, n);
        std::vector<double> s(n), v(n);

        k::scalar::affine(x.data(), n, 0.37, -2.5, s.data());
        k::avx2::affine(x.data(), n, 0.37, -2.5, v.data());
        for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(bit_equal(s[i], v[i])) << "affine n=" << n;

        k::scalar::add(x.data(), y.data(), n, s.data());
        k::avx2::add(x.data(), y.data(), n, v.data());
        for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(bit_equal(s[i], v[i])) << "add n=" << n;

        auto s2 = x, v2 = x;
        k::scalar::add_scalar(s2.data(), n, -0.75);
        k::avx2::add_scalar(v2.data(), n, -0.75);
        for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(bit_equal(s2[i], v2[i]));
    }
}

TEST_F(KernelEquivalence, ReductionsMatchScalarBitwise) {
    std::mt19937_64 gen(11);
    for (std::size_t n = 0; n < 70; ++n) {
        const auto x = random_vector(gen, n);
        const auto y = random_vector(gen, n);
        EXPECT_TRUE(bit_equal(k::scalar::dot(x.data(), y.data(), n), k::avx2::dot(x.data(), y.data(), n)));
        EXPECT_TRUE(bit_equal(k::scalar::dot_abs(x.data(), y.data(), n),
                              k::avx2::dot_abs(x.data(), y.data(), n)));
        const auto ms = k::scalar::shifted_moments(x.data(), n, 3.25);
        const auto mv = k::avx2::shifted_moments(x.data(), n, 3.25);
        EXPECT_TRUE(bit_equal(ms.sum, mv.sum));
        EXPECT_TRUE(bit_equal(ms.sum_sq, mv.sum_sq));
        EXPECT_TRUE(bit_equal(k::scalar::max_abs_diff(x.data(), y.data(), n),
                              k::avx2::max_abs_diff(x.data(), y.data(), n)));
    }
}

TEST_F(KernelEquivalence, DispatchFollowsSelectedBackend) {
    std::mt19937_64 gen(3);
    const auto x = random_vector(gen, 1001);
    const auto y = random_vector(gen, 1001);
    const k::Backend before = k::active_backend();
    ASSERT_EQ(k::set_backend(k::Backend::Scalar), k::Backend::Scalar);
    const double ds = k::dot(x, y);
    ASSERT_EQ(k::set_backend(k::Backend::Avx2), k::Backend::Avx2);
    const double dv = k::dot(x, y);
    k::set_backend(before);
    EXPECT_TRUE(bit_equal(ds, dv));
}

TEST(Kernels, ScalarReferenceValues) {
    const std::vector<double> w{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> f{-1.0, 1.0, -1.0, 1.0, -1.0};
    EXPECT_DOUBLE_EQ(k::dot(w, f), -3.0);
    EXPECT_DOUBLE_EQ(k::dot_abs(w, f), 15.0);
    const auto m = k::shifted_moments(w, 3.0);
    EXPECT_DOUBLE_EQ(m.sum, 0.0);
    EXPECT_DOUBLE_EQ(m.sum_sq, 10.0);
    EXPECT_DOUBLE_EQ(k::max_abs_diff(w, f), 6.0);
    EXPECT_EQ(k::max_abs_diff(std::span<const double>{}, std::span<const double>{}), 0.0);
}

TEST(Kernels, ConstantDataHasExactlyZeroShiftedMoments) {
    const std::vector<double> x(97, 0.3);
    const auto m = k::shifted_moments(x, x.front());
    EXPECT_EQ(m.sum, 0.0);
    EXPECT_EQ(m.sum_sq, 0.0);
}

TEST(Kernels, ForcingUnavailableBackendFallsBack) {
    const k::Backend before = k::active_backend();
    const k::Backend got = k::set_backend(k::Backend::Avx2);
    EXPECT_EQ(got, k::avx2_available() ? k::Backend::Avx2 : k::Backend::Scalar);
    k::set_backend(before);
}
