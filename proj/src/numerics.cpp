#include "setr/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "setr/errors.hpp"
#include "setr/kernels.hpp"

namespace setr {

namespace {

constexpr std::size_t kPoints = 15;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();

// Kronrod abscissae in [-1, 1], increasing. Gauss points sit at odd indices.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule {
    std::array<double, kPoints> nodes{};
    std::array<double, kPoints> kronrod{};
    std::array<double, kPoints> gauss{};
};

constexpr Rule make_rule() {
    Rule r{};
    for (std::size_t j = 0; j < 7; ++j) {
        r.nodes[j] = -kXgk[j];
        r.nodes[kPoints - 1 - j] = kXgk[j];
        r.kronrod[j] = r.kronrod[kPoints - 1 - j] = kWgk[j];
        if (j % 2 == 1) r.gauss[j] = r.gauss[kPoints - 1 - j] = kWg[j / 2];
    }
    r.nodes[7] = 0.0;
    r.kronrod[7] = kWgk[7];
    r.gauss[7] = kWg[3];
    return r;
}

constexpr Rule kRule = make_rule();

struct Segment {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    double resabs = 0.0;
};

struct ByError {
    bool operator()(const Segment& l, const Segment& r) const {
        if (l.error != r.error) return l.error < r.error;
        return l.a > r.a;
    }
};

Segment apply_rule(const Integrand& fn, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, kPoints> f{};
    for (std::size_t j = 0; j < kPoints; ++j) {
        const double x = center + half * kRule.nodes[j];
        const double v = fn(x);
        if (!std::isfinite(v))
            throw NonFiniteIntegrand("integrand is not finite at t = " + std::to_string(x));
        f[j] = v;
    }
    const double resk = kernels::dot(kRule.kronrod, f);
    const double resg = kernels::dot(kRule.gauss, f);
    const double resabs = kernels::dot_abs(kRule.kronrod, f);
    const double mean = 0.5 * resk;
    std::array<double, kPoints> dev{};
    for (std::size_t j = 0; j < kPoints; ++j) dev[j] = f[j] - mean;
    const double resasc = kernels::dot_abs(kRule.kronrod, dev);

    const double abs_half = std::fabs(half);
    Segment s{a, b, resk * half, std::fabs((resk - resg) * half), resabs * abs_half};
    const double asc = resasc * abs_half;
    // QUADPACK error scaling.
    if (asc != 0.0 && s.error != 0.0) s.error = asc * std::min(1.0, std::pow(200.0 * s.error / asc, 1.5));
    if (s.resabs > kUflow / (50.0 * kEps)) s.error = std::max(50.0 * kEps * s.resabs, s.error);
    return s;
}

}  // namespace

void validate(const NumericsPolicy& p) {
    if (!(p.rel_tol > 0.0 && p.rel_tol < 1.0))
        throw ValidationError("numerics.rel_tol", "must lie in (0, 1)");
    if (!(p.tail_cutoff > 0.0 && p.tail_cutoff <= 1e-6))
        throw ValidationError("numerics.tail_cutoff", "must lie in (0, 1e-6]");
    if (!(p.hazard_floor > 0.0 && p.hazard_floor <= 1e-100))
        throw ValidationError("numerics.hazard_floor", "must lie in (0, 1e-100]");
    if (p.max_evaluations < kPoints)
        throw ValidationError("numerics.max_evaluations", "must be at least 15");
}

QuadratureResult integrate(const Integrand& fn, double a, double b,
                           const QuadratureOptions& opts,
                           std::span<const double> breakpoints) {
    SETR_REQUIRE(std::isfinite(a) && std::isfinite(b), DomainError,
                 "integration limits must be finite");
    SETR_REQUIRE(a <= b, DomainError, "integration requires a <= b");
    SETR_REQUIRE(opts.rel_tol > 0.0 && opts.rel_tol < 1.0, DomainError,
                 "rel_tol must lie in (0, 1)");

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(b);

    std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
    std::size_t evaluations = 0;
    double total = 0.0;
    double total_err = 0.0;
    double total_abs = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (evaluations + kPoints > std::max(opts.max_evaluations, kPoints))
            throw NonConvergence("quadrature budget exhausted by the initial partition");
        Segment s = apply_rule(fn, cuts[i], cuts[i + 1]);
        evaluations += kPoints;
        total += s.value;
        total_err += s.error;
        total_abs += s.resabs;
        heap.push(s);
    }

    auto converged = [&] {
        const double floor = std::max(opts.abs_tol, 100.0 * kEps * total_abs);
        return total_err <= std::max(opts.rel_tol * std::fabs(total), floor);
    };

    while (!converged()) {
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw NonConvergence("quadrature interval cannot be bisected further near t = " +
                                 std::to_string(worst.a));
        if (evaluations + 2 * kPoints > opts.max_evaluations)
            throw NonConvergence("quadrature budget of " + std::to_string(opts.max_evaluations) +
                                 " evaluations exhausted");
        heap.pop();
        Segment left = apply_rule(fn, worst.a, mid);
        Segment right = apply_rule(fn, mid, worst.b);
        evaluations += 2 * kPoints;
        total += (left.value + right.value) - worst.value;
        total_err += (left.error + right.error) - worst.error;
        total_abs += (left.resabs + right.resabs) - worst.resabs;
        heap.push(left);
        heap.push(right);
    }

    // Final sum in left-to-right order, independent of heap history.
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
    QuadratureResult out;
    for (const Segment& s : segs) {
        out.value += s.value;
        out.abs_error_estimate += s.error;
    }
    out.evaluations = evaluations;
    return out;
}

QuadratureResult integrate_halfline(const Integrand& fn, double a, double truncation_point,
                                    double tail_mass_bound, const QuadratureOptions& opts,
                                    std::span<const double> breakpoints) {
    SETR_REQUIRE(std::isfinite(a), DomainError, "half-line origin must be finite");
    SETR_REQUIRE(std::isfinite(truncation_point) && truncation_point >= a, DomainError,
                 "truncation point must be finite and not below the origin");
    SETR_REQUIRE(std::isfinite(tail_mass_bound) && tail_mass_bound >= 0.0, DomainError,
                 "tail mass bound must be finite and nonnegative");
    QuadratureResult r = integrate(fn, a, truncation_point, opts, breakpoints);
    r.abs_error_estimate += tail_mass_bound;
    return r;
}

}  // namespace setr
