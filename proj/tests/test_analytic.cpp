#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "core/analytic.hpp"
#include "core/errata.hpp"
#include "core/model.hpp"
#include "doctest.h"

using muofdm::Allocation;
using muofdm::SystemParams;
namespace analytic = muofdm::analytic;

namespace {

SystemParams benchmark(int p) {
    SystemParams params;
    params.m = 64;
    params.beta = 128;
    params.p = p;
    params.n0 = 1.0;
    params.eb = 10.0;
    return params;
}

// Independent transcription of the ratio pieces, kept deliberately separate
// from the library's implementation as a change detector.
double expected_numerator(const SystemParams& prm, const Allocation& al) {
    const double mn = prm.m - al.n;
    return 2.0 * al.n * al.a * al.b * mn * mn * prm.eb * prm.eb;
}

double expected_denominator(const SystemParams& prm, const Allocation& al) {
    const double mn = prm.m - al.n;
    const double sum_c = mn * al.a + al.n * al.b;
    const double bracket = 2.0 * (al.a * prm.p + al.b) * (al.n + 1) * prm.n0 +
                           4.0 * al.a * al.b * (prm.p - 1) * al.n;
    return mn * prm.eb * sum_c * bracket +
           prm.beta * prm.n0 * prm.n0 * sum_c * sum_c;
}

}  // namespace

TEST_CASE("equal-power objective on a hand-checkable configuration") {
    SystemParams prm;
    prm.m = 2;
    prm.beta = 1;
    prm.p = 1;
    prm.n0 = 1.0;
    prm.eb = 1.0;
    // (n+1)/n * p*m*n0 / ((m-n)*eb) = 4, beta*m^2*n0^2 / (2n(m-n)^2 eb^2) = 2
    CHECK(analytic::objective_sa(prm, 1) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("equal-power benchmark values stay pinned") {
    const SystemParams p1 = benchmark(1);
    CHECK(analytic::objective_sa(p1, 12) ==
          doctest::Approx(0.21412228796844181).epsilon(1e-14));
    CHECK(analytic::ber_sa(p1, 12) ==
          doctest::Approx(0.0011207481759789707).epsilon(1e-12));
    CHECK(analytic::objective_sa(p1, 14) ==
          doctest::Approx(0.21204114285714286).epsilon(1e-14));
    CHECK(analytic::ber_sa(p1, 14) ==
          doctest::Approx(0.0010660814793009072).epsilon(1e-12));

    const SystemParams p2 = benchmark(2);
    CHECK(analytic::ber_sa(p2, 9) ==
          doctest::Approx(0.032525775660922526).epsilon(1e-12));
    CHECK(analytic::ber_sa(p2, 12) ==
          doctest::Approx(0.033212628983348891).epsilon(1e-12));
}

TEST_CASE("equal-power BER follows the erfc chain") {
    for (int p : {1, 2, 3}) {
        const SystemParams prm = benchmark(p);
        for (int n : {1, 5, 12, 30, 63}) {
            const double objective = analytic::objective_sa(prm, n);
            const double expected = 0.5 * std::erfc(1.0 / std::sqrt(objective));
            CHECK(analytic::ber_sa(prm, n) ==
                  doctest::Approx(expected).epsilon(1e-14));
        }
    }
}

TEST_CASE("power-allocated ratio matches its independent transcription") {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> power(1e-4, 2.0);
    std::uniform_int_distribution<int> pick_n(1, 63);
    std::uniform_int_distribution<int> pick_p(1, 4);
    for (int i = 0; i < 2000; ++i) {
        SystemParams prm = benchmark(pick_p(gen));
        Allocation al;
        al.n = pick_n(gen);
        al.a = power(gen);
        al.b = power(gen);
        const analytic::RatioParts parts = analytic::ratio_parts(prm, al);
        const double num = expected_numerator(prm, al);
        const double den = expected_denominator(prm, al);
        CHECK(parts.numerator == doctest::Approx(num).epsilon(1e-12));
        CHECK(parts.denominator == doctest::Approx(den).epsilon(1e-12));
        CHECK(analytic::ratio_u(prm, al) ==
              doctest::Approx(num / den).epsilon(1e-12));
        const double q = 0.25 + 3.0 * power(gen);
        CHECK(analytic::dinkelbach_v(prm, al, q) ==
              doctest::Approx(num - q * den).epsilon(1e-12));
    }
}

TEST_CASE("power-allocated anchor point stays pinned") {
    const SystemParams prm = benchmark(2);
    Allocation al;
    al.n = 3;
    al.a = 0.01;
    al.b = 0.01;
    CHECK(analytic::ratio_u(prm, al) ==
          doctest::Approx(1.5229893212021724).epsilon(1e-13));
    CHECK(analytic::ber_psa(prm, al) ==
          doctest::Approx(0.040468659845412703).epsilon(1e-12));
}

// Reducing the allocated-power ratio at a = b = 1 does NOT recover the
// equal-power objective: the first term carries (p+1) instead of p.  The gap
// is exactly one unit of (n+1)*n0*m / (n*(m-n)*eb).
TEST_CASE("reduction gap between the two closed forms is one first-term unit") {
    for (int p : {1, 2, 3}) {
        for (int m : {16, 64}) {
            SystemParams prm = benchmark(p);
            prm.m = m;
            for (int n : {1, 3, m / 4}) {
                Allocation al;
                al.n = n;
                al.a = 1.0;
                al.b = 1.0;
                const double inv_u = 1.0 / analytic::ratio_u(prm, al);
                const double objective = analytic::objective_sa(prm, n);
                const double unit = (n + 1.0) * prm.n0 * prm.m /
                                    (n * (prm.m - n) * prm.eb);
                CHECK(inv_u - objective == doctest::Approx(unit).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("single-user ratio is scale invariant, multi-user is not") {
    Allocation base;
    base.n = 5;
    base.a = 0.02;
    base.b = 0.08;

    const SystemParams p1 = benchmark(1);
    const double u1 = analytic::ratio_u(p1, base);
    for (double t : {1e-3, 0.1, 10.0}) {
        Allocation scaled = base;
        scaled.a *= t;
        scaled.b *= t;
        CHECK(analytic::ratio_u(p1, scaled) == doctest::Approx(u1).epsilon(1e-12));
    }

    const SystemParams p2 = benchmark(2);
    Allocation half = base, twice = base;
    half.a *= 0.5;
    half.b *= 0.5;
    twice.a *= 2.0;
    twice.b *= 2.0;
    CHECK(analytic::ratio_u(p2, half) > analytic::ratio_u(p2, base));
    CHECK(analytic::ratio_u(p2, twice) < analytic::ratio_u(p2, base));
}

TEST_CASE("both BER forms stay inside (0, 0.5]") {
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> power(1e-5, 3.0);
    std::uniform_real_distribution<double> energy(0.05, 200.0);
    std::uniform_int_distribution<int> pick_n(1, 15);
    std::uniform_int_distribution<int> pick_p(1, 6);
    for (int i = 0; i < 2000; ++i) {
        SystemParams prm;
        prm.m = 16;
        prm.beta = 32;
        prm.p = pick_p(gen);
        prm.n0 = 1.0;
        prm.eb = energy(gen);
        const int n = pick_n(gen);
        const double sa = analytic::ber_sa(prm, n);
        CHECK(sa > 0.0);
        CHECK(sa <= 0.5);
        Allocation al;
        al.n = n;
        al.a = power(gen);
        al.b = power(gen);
        const double psa = analytic::ber_psa(prm, al);
        CHECK(psa > 0.0);
        CHECK(psa <= 0.5);
    }
}

TEST_CASE("BER improves with energy and degrades with more users") {
    SystemParams prm = benchmark(1);
    double previous = 1.0;
    for (int db = 0; db <= 20; db += 2) {
        prm.eb = muofdm::ebn0_db_to_linear(db, prm.n0);
        const double ber = analytic::ber_sa(prm, 12);
        CHECK(ber < previous);
        previous = ber;
    }

    prm.eb = 10.0;
    previous = 0.0;
    for (int p = 1; p <= 6; ++p) {
        prm.p = p;
        const double ber = analytic::ber_sa(prm, 12);
        CHECK(ber >= previous);
        previous = ber;
    }
}

TEST_CASE("equal-power finding reports the first-term coefficient split") {
    const muofdm::errata::EqualPowerFinding f =
        muofdm::errata::equal_power_finding(benchmark(1));
    CHECK(f.stated_argmin == 14);   // the objective as derived
    CHECK(f.variant_argmin == 12);  // the (p+1) first-term variant
    CHECK(f.ber_at_stated ==
          doctest::Approx(0.0010660814793009072).epsilon(1e-12));
    CHECK(f.ber_at_variant ==
          doctest::Approx(0.0011207481759789707).epsilon(1e-12));
    CHECK(f.ber_at_stated < f.ber_at_variant);
}
