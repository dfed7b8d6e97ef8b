#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "core/model.hpp"
#include "doctest.h"

using muofdm::Allocation;
using muofdm::SystemParams;

TEST_CASE("defaults describe the benchmark configuration") {
    const SystemParams params;
    CHECK(params.m == 64);
    CHECK(params.beta == 128);
    CHECK(params.p == 1);
    CHECK(params.n0 == doctest::Approx(1.0));
    CHECK(params.eb == doctest::Approx(10.0));
    const Allocation alloc;
    CHECK(alloc.n == 1);
    CHECK(alloc.a == doctest::Approx(1.0));
    CHECK(alloc.b == doctest::Approx(1.0));
}

TEST_CASE("power_sum weights data and reference carriers") {
    SystemParams params;
    params.m = 64;
    Allocation alloc;
    alloc.n = 12;
    alloc.a = 0.5;
    alloc.b = 2.0;
    CHECK(muofdm::power_sum(params, alloc) == doctest::Approx(52 * 0.5 + 12 * 2.0));

    alloc.n = 1;
    alloc.a = 1.0;
    alloc.b = 1.0;
    CHECK(muofdm::power_sum(params, alloc) == doctest::Approx(64.0));
}

TEST_CASE("dB conversion matches n0 * 10^(db/10)") {
    CHECK(muofdm::ebn0_db_to_linear(10.0, 1.0) == doctest::Approx(10.0));
    CHECK(muofdm::ebn0_db_to_linear(0.0, 1.0) == doctest::Approx(1.0));
    CHECK(muofdm::ebn0_db_to_linear(3.0, 1.0) ==
          doctest::Approx(std::pow(10.0, 0.3)));
    CHECK(muofdm::ebn0_db_to_linear(7.0, 0.5) ==
          doctest::Approx(0.5 * std::pow(10.0, 0.7)));
    CHECK(muofdm::ebn0_db_to_linear(-10.0, 2.0) == doctest::Approx(0.2));
}

TEST_CASE("dB conversion rejects non-finite and non-positive inputs") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(muofdm::ebn0_db_to_linear(inf, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(muofdm::ebn0_db_to_linear(nan, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(muofdm::ebn0_db_to_linear(10.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(muofdm::ebn0_db_to_linear(10.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(muofdm::ebn0_db_to_linear(10.0, nan), std::invalid_argument);
}

TEST_CASE("parameter validation accepts the defaults") {
    CHECK(muofdm::validate(SystemParams{}).empty());
    CHECK(muofdm::validate(SystemParams{}, Allocation{}, std::nullopt).empty());
}

TEST_CASE("parameter validation flags each violation separately") {
    SystemParams params;
    params.m = 1;
    CHECK(muofdm::validate(params).size() == 1);
    params.beta = 0;
    CHECK(muofdm::validate(params).size() == 2);
    params.p = 0;
    CHECK(muofdm::validate(params).size() == 3);
    params.n0 = 0.0;
    CHECK(muofdm::validate(params).size() == 4);
    params.eb = -1.0;
    CHECK(muofdm::validate(params).size() == 5);
}

TEST_CASE("allocation validation enforces the carrier range and positivity") {
    const SystemParams params;
    Allocation alloc;

    alloc.n = 0;
    CHECK(muofdm::validate(params, alloc, std::nullopt).size() == 1);
    alloc.n = params.m;
    CHECK(muofdm::validate(params, alloc, std::nullopt).size() == 1);
    alloc.n = params.m - 1;
    CHECK(muofdm::validate(params, alloc, std::nullopt).empty());

    alloc.n = 1;
    alloc.a = 0.0;
    CHECK(muofdm::validate(params, alloc, std::nullopt).size() == 1);
    alloc.a = 1.0;
    alloc.b = -2.0;
    CHECK(muofdm::validate(params, alloc, std::nullopt).size() == 1);
}

TEST_CASE("budget validation compares against the power sum") {
    const SystemParams params;  // m = 64
    Allocation alloc;           // n=1, a=b=1 -> power_sum = 64

    CHECK(muofdm::validate(params, alloc, 64.0).empty());
    CHECK(muofdm::validate(params, alloc, 63.9).size() == 1);
    CHECK(muofdm::validate(params, alloc, 0.0).size() == 1);

    alloc.a = 1e-3;
    alloc.b = 1e-3;
    CHECK(muofdm::validate(params, alloc, 1.0).empty());
}
