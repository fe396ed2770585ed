#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "serf/scalar_math.hpp"

using serf::detail::exp_d;
using serf::detail::expm1_d;
using serf::detail::log1p01_d;
using serf::detail::log_d;

namespace {

// Deterministic stress inputs: zeros, denormals, huge values, branch edges.
std::vector<double> edge_inputs() {
    std::vector<double> v = {
        0.0, -0.0, 1e-320, -1e-320, std::numeric_limits<double>::denorm_min(),
        -std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::min(),
        -std::numeric_limits<double>::min(), 1e-12, -1e-12, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0,
        20.0, -20.0, 29.999999, -29.999999, 30.0, -30.0, 30.000001, -30.000001, 40.0, -40.0,
        700.0, -700.0, 709.78, -709.78, 745.0, -745.0, 746.0, -746.0, 1000.0, -1000.0,
        1e308, -1e308, std::numeric_limits<double>::max(), -std::numeric_limits<double>::max(),
    };
    return v;
}

std::vector<double> random_finite(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> mag(-320.0, 308.0);
    std::uniform_real_distribution<double> mant(1.0, 10.0);
    std::bernoulli_distribution neg(0.5);
    std::vector<double> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = mant(gen) * std::pow(10.0, std::floor(mag(gen)));
        v.push_back(neg(gen) ? -x : x);
    }
    return v;
}

}  // namespace

TEST_SUITE("scalar_math") {

TEST_CASE("exp kernel matches long double libm") {
    for (double x = -700.0; x <= 700.0; x += 0.3137) {
        double mine = exp_d(x);
        double ref = static_cast<double>(expl(static_cast<long double>(x)));
        INFO("x=", x, " mine=", mine, " ref=", ref);
        CHECK(oracle::ulps_between(mine, ref) <= 4);
    }
    CHECK(exp_d(0.0) == 1.0);
    CHECK(exp_d(1.0) == doctest::Approx(2.718281828459045).epsilon(1e-15));
    CHECK(exp_d(800.0) == std::numeric_limits<double>::infinity());
    CHECK(exp_d(-800.0) == 0.0);
}

TEST_CASE("exp kernel handles the subnormal result range") {
    for (double x = -745.1; x <= -700.0; x += 0.317) {
        double mine = exp_d(x);
        long double ref = expl(static_cast<long double>(x));
        CHECK(mine > 0.0);
        INFO("x=", x);
        CHECK(oracle::close(mine, static_cast<double>(ref), 1e-13, 3e-324));
    }
}

TEST_CASE("expm1 kernel") {
    for (double x = -40.0; x <= 0.6; x += 0.0137) {
        double mine = expm1_d(x);
        double ref = static_cast<double>(expm1l(static_cast<long double>(x)));
        INFO("x=", x);
        CHECK(oracle::close(mine, ref, 1e-14, 0.0));
    }
    CHECK(expm1_d(0.0) == 0.0);
    CHECK(expm1_d(1e-300) == 1e-300);
    CHECK(expm1_d(-50.0) == -1.0);
}

TEST_CASE("log1p kernel on [0,1]") {
    auto check_at = [](double u) {
        double mine = log1p01_d(u);
        double ref = static_cast<double>(log1pl(static_cast<long double>(u)));
        INFO("u=", u);
        CHECK(oracle::close(mine, ref, 5e-16, 0.0));
    };
    for (double u = 0.0; u <= 1.0; u += 0.0009765625) check_at(u);
    double edge = std::sqrt(2.0) - 1.0;
    for (int k = -8; k <= 8; ++k) {
        double u = edge;
        for (int i = 0; i < std::abs(k); ++i)
            u = k < 0 ? std::nextafter(u, 0.0) : std::nextafter(u, 2.0);
        check_at(u);
    }
    check_at(1e-18);
    check_at(1e-300);
    check_at(std::numeric_limits<double>::denorm_min());
    CHECK(log1p01_d(0.0) == 0.0);
    CHECK(log1p01_d(1.0) == serf::kLn2);
}

TEST_CASE("log kernel on (0,1]") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 20000; ++i) {
        double s = uni(gen);
        if (s <= 0.0) continue;
        double mine = log_d(s);
        double ref = static_cast<double>(logl(static_cast<long double>(s)));
        INFO("s=", s);
        CHECK(oracle::close(mine, ref, 4e-16, 0.0));
    }
    for (double s : {1e-300, 1e-30, 1e-6, 0.25, 0.5, 0.999999, 1.0}) {
        double mine = log_d(s);
        double ref = static_cast<double>(logl(static_cast<long double>(s)));
        CHECK(oracle::close(mine, ref, 4e-16, 0.0));
    }
    CHECK(log_d(1.0) == 0.0);
}

TEST_CASE("softplus golden values") {
    CHECK(serf::softplus(0.0) == serf::kLn2);
    CHECK(oracle::close_rel(serf::softplus(-40.0), 4.248354255291589e-18, 1e-13));
    CHECK(oracle::close_rel(serf::softplus(10.0), 10.000045398899217, 1e-14));
    CHECK(serf::softplus(1000.0) == 1000.0);
    CHECK(serf::softplus(1e308) == 1e308);
}

TEST_CASE("softplus against long double reference") {
    auto ref = [](double x) {
        long double lx = x;
        if (x > 0) return static_cast<double>(lx + log1pl(expl(-lx)));
        return static_cast<double>(log1pl(expl(lx)));
    };
    for (double x = -700.0; x <= 700.0; x += 0.1931) {
        INFO("x=", x);
        CHECK(oracle::close_rel(serf::softplus(x), ref(x), 1e-13));
    }
    for (double x = -745.0; x < -700.0; x += 0.5) {
        INFO("x=", x);
        CHECK(oracle::close(serf::softplus(x), ref(x), 1e-13, 3e-324));
    }
}

TEST_CASE("softplus is strictly positive and finite everywhere") {
    for (double x : edge_inputs()) {
        INFO("x=", x);
        double y = serf::softplus(x);
        CHECK(y > 0.0);
        CHECK(std::isfinite(y));
    }
    for (double x : random_finite(20000, 11)) {
        INFO("x=", x);
        double y = serf::softplus(x);
        CHECK(y > 0.0);
        CHECK(std::isfinite(y));
    }
}

TEST_CASE("sigmoid golden and symmetry") {
    CHECK(serf::sigmoid(0.0) == 0.5);
    CHECK(oracle::close_rel(serf::sigmoid(-4.0), 0.01798620996209156, 1e-14));
    for (double x = -30.0; x <= 30.0; x += 0.1719) {
        INFO("x=", x);
        CHECK(oracle::close_abs(serf::sigmoid(x) + serf::sigmoid(-x), 1.0, 1e-15));
    }
}

TEST_CASE("sigmoid against long double reference") {
    auto ref = [](double x) {
        long double e = expl(-fabsl(static_cast<long double>(x)));
        long double v = x < 0 ? e / (1.0L + e) : 1.0L / (1.0L + e);
        return static_cast<double>(v);
    };
    for (double x = -700.0; x <= 700.0; x += 0.2713) {
        INFO("x=", x);
        CHECK(oracle::close_rel(serf::sigmoid(x), ref(x), 1e-13));
    }
}

TEST_CASE("sigmoid stays in (0, 1] everywhere") {
    for (double x : edge_inputs()) {
        double y = serf::sigmoid(x);
        INFO("x=", x, " y=", y);
        CHECK(y > 0.0);
        CHECK(y <= 1.0);
    }
    CHECK(serf::sigmoid(710.0) > 0.999999);
    CHECK(serf::sigmoid(710.0) <= 1.0);
    CHECK(serf::sigmoid(-1e308) > 0.0);
    for (double x : random_finite(20000, 13)) {
        double y = serf::sigmoid(x);
        INFO("x=", x);
        CHECK(y > 0.0);
        CHECK(y <= 1.0);
    }
}

TEST_CASE("tanh against long double libm") {
    for (double x = -25.0; x <= 25.0; x += 0.0617) {
        INFO("x=", x);
        double ref = static_cast<double>(tanhl(static_cast<long double>(x)));
        CHECK(oracle::close(serf::tanh(x), ref, 1e-13, 1e-300));
    }
    CHECK(serf::tanh(0.0) == 0.0);
    CHECK(serf::tanh(20.0) == 1.0);
    CHECK(serf::tanh(-20.0) == -1.0);
    CHECK(serf::tanh(1e308) == 1.0);
}

TEST_CASE("tanh is odd bit-for-bit and bounded") {
    for (double x : random_finite(20000, 17)) {
        double p = serf::tanh(x), n = serf::tanh(-x);
        INFO("x=", x);
        CHECK(std::bit_cast<std::uint64_t>(p) ==
              (std::bit_cast<std::uint64_t>(n) ^ 0x8000000000000000ull));
        CHECK(std::fabs(p) <= 1.0);
    }
}

TEST_CASE("erf against quadrature oracle") {
    for (double x = -8.0; x <= 8.0; x += 0.0711) {
        double ref = static_cast<double>(oracle::erf_quadrature(x));
        INFO("x=", x);
        CHECK(oracle::close_abs(serf::erf(x), ref, 5e-13));
    }
    for (double x : {0.001, 0.01, 0.1, 0.5, 0.9, 0.999999999, 1.0, 1.0000000001, 3.5,
                     5.999999999, 6.0, 6.0000000001, 7.5}) {
        double ref = static_cast<double>(oracle::erf_quadrature(x));
        INFO("x=", x);
        CHECK(oracle::close(serf::erf(x), ref, 1e-12, 1e-16));
        CHECK(oracle::close(serf::erf(-x), -ref, 1e-12, 1e-16));
    }
}

TEST_CASE("erf small-argument relative accuracy") {
    for (double x : {1e-300, 1e-30, 1e-8, 1e-3, 0.05, 0.3, 0.7, 0.89}) {
        double ref = static_cast<double>(oracle::erf_quadrature(x));
        INFO("x=", x);
        CHECK(oracle::close_rel(serf::erf(x), ref, 1e-12));
    }
}

TEST_CASE("erf golden values") {
    CHECK(oracle::close_rel(serf::erf(serf::kLn2), 0.673041289742525, 1e-12));
    CHECK(oracle::close_rel(serf::erf(1.0), 0.8427007929497149, 1e-13));
    CHECK(serf::erf(6.0) == 1.0);
    CHECK(serf::erf(-6.0) == -1.0);
    CHECK(serf::erf(1e308) == 1.0);
}

TEST_CASE("erf is odd bit-for-bit, strictly inside (-1,1) below saturation") {
    for (double x : random_finite(20000, 23)) {
        double p = serf::erf(x), n = serf::erf(-x);
        INFO("x=", x);
        CHECK(std::bit_cast<std::uint64_t>(p) ==
              (std::bit_cast<std::uint64_t>(n) ^ 0x8000000000000000ull));
        CHECK(std::fabs(p) <= 1.0);
        if (std::fabs(x) < 6.0) CHECK(std::fabs(p) < 1.0);
    }
    CHECK(serf::erf(0.0) == 0.0);
    CHECK(std::signbit(serf::erf(-0.0)));
}

TEST_CASE("erf_derivative golden and symmetry") {
    CHECK(serf::erf_derivative(0.0) == serf::kTwoOverSqrtPi);
    CHECK(oracle::close_rel(serf::erf_derivative(6.0), 2.617301239249265e-16, 1e-12));
    for (double x : random_finite(5000, 29)) {
        INFO("x=", x);
        CHECK(serf::erf_derivative(x) == serf::erf_derivative(-x));
        CHECK(serf::erf_derivative(x) >= 0.0);
        CHECK(serf::erf_derivative(x) <= serf::kTwoOverSqrtPi);
    }
}

TEST_CASE("erf_derivative against libm reference") {
    for (double x = -26.0; x <= 26.0; x += 0.1357) {
        double ref = static_cast<double>(2.0L / sqrtl(acosl(-1.0L)) *
                                         expl(-static_cast<long double>(x) * x));
        INFO("x=", x);
        CHECK(oracle::close_rel(serf::erf_derivative(x), ref, 1e-13));
    }
}

TEST_CASE("erf_derivative matches finite differences of erf") {
    for (double x = -5.0; x <= 5.0; x += 0.217) {
        double fd = oracle::fd_derivative([](double t) { return serf::erf(t); }, x);
        INFO("x=", x);
        CHECK(oracle::close(serf::erf_derivative(x), fd, 1e-9, 1e-10));
    }
}

TEST_CASE("all public functions are total over wild finite inputs") {
    auto inputs = random_finite(50000, 31);
    for (double x : edge_inputs()) inputs.push_back(x);
    for (double x : inputs) {
        INFO("x=", x);
        CHECK(std::isfinite(serf::softplus(x)));
        CHECK(std::isfinite(serf::sigmoid(x)));
        CHECK(std::isfinite(serf::tanh(x)));
        CHECK(std::isfinite(serf::erf(x)));
        CHECK(std::isfinite(serf::erf_derivative(x)));
    }
}

}  // TEST_SUITE
