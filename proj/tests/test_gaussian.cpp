#include <doctest.h>

#include <cmath>
#include <random>

#include "byzq/gaussian.hpp"

using namespace byzq;

TEST_CASE("normal cdf/pdf reference values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
    CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-13));
    CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(normal_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-14));
}

TEST_CASE("gaussian tail and inverse") {
    CHECK(gaussian_tail(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gaussian_tail_inv(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::fabs(gaussian_tail(1.6448536) - 0.05) < 1e-6);

    CHECK_THROWS_AS(gaussian_tail_inv(0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_tail_inv(1.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_tail_inv(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.5), std::invalid_argument);
}

TEST_CASE("tail inverse round trip to 1e-10") {
    std::mt19937 gen(123);
    std::uniform_real_distribution<double> u(1e-9, 1.0 - 1e-9);
    for (int k = 0; k < 2000; ++k) {
        const double p = u(gen);
        CHECK(std::fabs(gaussian_tail(gaussian_tail_inv(p)) - p) < 1e-10);
    }
    // deep tails
    for (double p : {1e-12, 1e-10, 1e-6, 1.0 - 1e-6, 1.0 - 1e-10}) {
        const double x = gaussian_tail_inv(p);
        CHECK(std::fabs(gaussian_tail(x) - p) <= 1e-10);
    }
}

TEST_CASE("quantile inverts the cdf") {
    for (double x = -6.0; x <= 6.0; x += 0.25)
        CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
}
