#include <doctest.h>

#include <cmath>
#include <vector>

#include "fhe/stable.hpp"

using namespace fhe;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// closed-form Cauchy kernel (alpha = 1): p_t(x) = G((d+1)/2) pi^-((d+1)/2) t (t^2+|x|^2)^-((d+1)/2)
double cauchy_kernel(int d, double t, double rho) {
    return std::tgamma(0.5 * (d + 1)) * std::pow(kPi, -0.5 * (d + 1)) * t *
           std::pow(t * t + rho * rho, -0.5 * (d + 1));
}

}  // namespace

TEST_CASE("levy constant closed forms") {
    // d=2, alpha=1: 2 Gamma(3/2) / (pi * |Gamma(-1/2)|), Gamma(-1/2) = -2 sqrt(pi)
    CHECK(levy_constant(2, 1.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    CHECK(levy_constant(1, 1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-12));
    const double expect21 = 2.0 * std::tgamma(1.5) / (kPi * 2.0 * std::sqrt(kPi));
    CHECK(levy_constant(2, 1.0) == doctest::Approx(expect21).epsilon(1e-13));
    CHECK_THROWS_AS(levy_constant(2, 2.5), std::domain_error);
    CHECK_THROWS_AS(levy_constant(2, 0.0), std::domain_error);
    CHECK_THROWS_AS(levy_constant(4, 1.0), std::domain_error);
    CHECK(levy_constant(3, 0.7) > 0.0);
}

TEST_CASE("StableParams validation and derived constant") {
    StableParams p(2, 1.0);
    CHECK(p.c == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    CHECK_THROWS_AS(StableParams(2, 0.2), std::domain_error);
    CHECK_THROWS_AS(StableParams(2, 1.95), std::domain_error);
    CHECK_THROWS_AS(StableParams(0, 1.0), std::domain_error);
}

TEST_CASE("levy density values and singularity") {
    StableParams p(2, 1.0);
    CHECK(levy_density(p, vec2(1.0, 0.0)) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    CHECK(levy_density(p, vec2(2.0, 0.0)) ==
          doctest::Approx(1.0 / (2.0 * kPi) * std::pow(2.0, -3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(levy_density(p, vec2(0.0, 0.0)), std::domain_error);
    // strictly decreasing in |y|
    double prev = levy_density_radial(p, 0.25);
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
        const double v = levy_density_radial(p, r);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("density matches Cauchy closed form (d=2, alpha=1)") {
    StableDensity den(StableParams(2, 1.0));
    CHECK(den.density(1.0, vec2(0, 0)) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-8));
    CHECK(den.density(1.0, vec2(1, 0)) ==
          doctest::Approx(1.0 / (2.0 * kPi) * std::pow(2.0, -1.5)).epsilon(1e-8));

    // 50-point oracle grid
    double worst = 0.0;
    int n = 0;
    for (double t : {0.5, 1.0, 2.0, 4.0, 0.25}) {
        for (int i = 0; i < 10; ++i) {
            const double rho = 0.03 + 0.6 * i;
            const double got = den.density_radial(t, rho);
            const double want = cauchy_kernel(2, t, rho);
            worst = std::max(worst, std::abs(got - want) / want);
            ++n;
        }
    }
    CHECK(n == 50);
    CHECK(worst < 1e-6);
}

TEST_CASE("density matches Cauchy closed form (d=1 and d=3)") {
    StableDensity d1(StableParams(1, 1.0));
    CHECK(d1.density(1.0, vec1(0.5)) == doctest::Approx(cauchy_kernel(1, 1.0, 0.5)).epsilon(1e-8));
    StableDensity d3(StableParams(3, 1.0));
    CHECK(d3.density(0.7, vec3(0.3, 0.2, -0.4)) ==
          doctest::Approx(cauchy_kernel(3, 0.7, norm(vec3(0.3, 0.2, -0.4)))).epsilon(1e-8));
}

TEST_CASE("scaling identity is exact in code") {
    StableDensity den(StableParams(2, 1.0));
    const double t = 4.0;
    const double lhs = den.density(t, vec2(0, 0));
    const double rhs = std::pow(t, -2.0 / 1.0) * den.p1(0.0);
    CHECK(lhs == rhs);  // same code path, bitwise
    CHECK(lhs == doctest::Approx(0.0099472).epsilon(1e-4));

    StableDensity d15(StableParams(2, 1.5));
    const double t2 = 0.37;
    const double rho = 1.3;
    CHECK(d15.density_radial(t2, rho) ==
          std::pow(t2, -2.0 / 1.5) * d15.p1(std::pow(t2, -1.0 / 1.5) * rho));
}

TEST_CASE("spatial derivative closed form and FD consistency") {
    StableDensity den(StableParams(2, 1.0));
    // d/dx1 p_1 at (1,0): differentiate the Cauchy kernel
    const double want = -3.0 / (2.0 * kPi) * std::pow(2.0, -2.5);
    CHECK(den.derivative(1.0, vec2(1, 0), {1, 0, 0}) == doctest::Approx(want).epsilon(1e-7));
    // gradient at the origin vanishes by radial symmetry
    CHECK(den.derivative(1.0, vec2(0, 0), {1, 0, 0}) == 0.0);

    // FD oracle at |x| = 0.5 for several alphas
    for (double alpha : {0.7, 1.0, 1.6}) {
        StableDensity da(StableParams(2, alpha));
        const double h = 1e-3;
        const Vec x = vec2(0.5, 0.0);
        const double fd =
            (da.density(1.0, vec2(0.5 + h, 0.0)) - da.density(1.0, vec2(0.5 - h, 0.0))) /
            (2.0 * h);
        const double an = da.derivative(1.0, x, {1, 0, 0});
        CHECK(an == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("second derivatives match FD of first derivatives") {
    StableDensity den(StableParams(2, 1.3));
    const double h = 1e-3;
    const Vec x = vec2(0.6, -0.3);
    for (int i = 0; i < 2; ++i) {
        std::array<int, 3> m2{0, 0, 0};
        m2[i] = 1;
        m2[0] += 1;  // d^2 / dx0 dxi
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (den.derivative(1.0, xp, {1, 0, 0}) - den.derivative(1.0, xm, {1, 0, 0})) /
                          (2.0 * h);
        CHECK(den.derivative(1.0, x, m2) == doctest::Approx(fd).epsilon(2e-4));
    }
}

TEST_CASE("time derivative closed form and FD consistency") {
    StableDensity den(StableParams(2, 1.0));
    CHECK(den.dt(1.0, vec2(0, 0)) == doctest::Approx(-1.0 / kPi).epsilon(1e-7));
    CHECK(den.dt(2.0, vec2(0, 0)) == doctest::Approx(-1.0 / (8.0 * kPi)).epsilon(1e-7));

    for (double alpha : {0.6, 1.0, 1.5}) {
        StableDensity da(StableParams(2, alpha));
        const double t = 0.7, rho = 0.9, k = 1e-4;
        const double fd = (da.density_radial(t + k, rho) - da.density_radial(t - k, rho)) / (2.0 * k);
        CHECK(da.dt(t, vec2(rho, 0.0)) == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("dt profile agrees with scaling identity route") {
    // d/dt p_t|_(t=1) = -(d/alpha) p1(rho) - (1/alpha) rho p1'(rho): two independent integrals
    for (double alpha : {0.5, 1.2, 1.8}) {
        StableDensity den(StableParams(2, alpha));
        for (double rho : {0.0, 0.4, 1.7, 4.0}) {
            const double lhs = den.q1(rho);
            const double rhs =
                -(2.0 / alpha) * den.p1(rho) - (1.0 / alpha) * rho * den.dp1(rho);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
        }
    }
}

TEST_CASE("normalization within 1e-6 across t, alpha, d") {
    for (int d : {1, 2}) {
        for (double alpha : {0.5, 1.0, 1.5}) {
            StableDensity den(StableParams(d, alpha));
            for (double t : {0.25, 1.0, 4.0}) {
                CHECK(den.total_mass(t) == doctest::Approx(1.0).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("two-sided estimate: ratio against t^(-d/a) min t|x|^(-d-a) stays bounded") {
    StableDensity den(StableParams(2, 0.8));
    auto bound = [&](double t, double rho) {
        return std::min(std::pow(t, -2.0 / 0.8), t * std::pow(rho, -2.0 - 0.8));
    };
    auto sweep = [&](int nt, int nx) {
        double lo = 1e300, hi = 0.0;
        for (int i = 0; i < nt; ++i) {
            const double t = std::pow(10.0, -1.0 + 2.0 * i / (nt - 1.0));
            for (int j = 0; j < nx; ++j) {
                const double rho = std::pow(10.0, -1.0 + 2.0 * j / (nx - 1.0));
                const double ratio = den.density_radial(t, rho) / bound(t, rho);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        return std::pair<double, double>(lo, hi);
    };
    auto [lo1, hi1] = sweep(9, 9);
    auto [lo2, hi2] = sweep(17, 17);
    CHECK(lo1 > 0.0);
    CHECK(std::isfinite(hi1));
    // refinement stability of the empirical constant
    CHECK(hi2 / hi1 < 1.5);
    CHECK(lo1 / lo2 < 1.5);
    CHECK(hi2 / lo2 < 50.0);  // C and 1/C finite and moderate
}

TEST_CASE("tail branch is continuous at the switch radius") {
    for (double alpha : {0.5, 1.0, 1.9}) {
        StableDensity den(StableParams(2, alpha));
        const double R = den.tail_radius();
        const double below = den.p1(R * (1.0 - 1e-9));
        const double above = den.p1(R * (1.0 + 1e-9));
        CHECK(below == doctest::Approx(above).epsilon(1e-6));
    }
}

TEST_CASE("config validation") {
    StableParams p(2, 1.0);
    DensityEvalConfig bad;
    bad.nodes_per_decade = 8;
    CHECK_THROWS_AS(StableDensity(p, bad), std::domain_error);
    DensityEvalConfig bad2;
    bad2.rel_tol = 0.5;
    CHECK_THROWS_AS(StableDensity(p, bad2), std::domain_error);
    DensityEvalConfig bad3;
    bad3.rel_tol = 0.0;
    CHECK_THROWS_AS(StableDensity(p, bad3), std::domain_error);
}

TEST_CASE("t <= 0 rejected") {
    StableDensity den(StableParams(2, 1.0));
    CHECK_THROWS_AS(den.density(0.0, vec2(1, 0)), std::domain_error);
    CHECK_THROWS_AS(den.dt(-1.0, vec2(1, 0)), std::domain_error);
}

TEST_CASE("direct quadrature agrees with cached profiles") {
    StableDensity den(StableParams(2, 1.4));
    for (double rho : {0.1, 1.0, 3.7, 6.9}) {
        CHECK(den.p1(rho) == doctest::Approx(den.p1_direct(rho)).epsilon(1e-8));
        CHECK(den.q1(rho) == doctest::Approx(den.q1_direct(rho)).epsilon(1e-7));
    }
}
