#ifndef FHE_STABLE_HPP
#define FHE_STABLE_HPP

#include <array>
#include <stdexcept>
#include <string>

#include "fhe/quadrature.hpp"
#include "fhe/vec.hpp"

namespace fhe {

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved(achieved_error) {}
    double achieved;
};

// Normalizing constant of the jump kernel nu(y) = c |y|^(-d-alpha).
// Valid for any alpha in (0,2); the narrower sampler/density range is
// enforced by StableParams.
double levy_constant(int d, double alpha);

struct StableParams {
    int d;
    double alpha;
    double c;  // levy_constant(d, alpha)

    StableParams(int d_, double alpha_);

    static constexpr double alpha_min = 0.3;
    static constexpr double alpha_max = 1.9;
};

double levy_density_radial(const StableParams& p, double r);
double levy_density(const StableParams& p, const Vec& y);

struct DensityEvalConfig {
    int nodes_per_decade = 16;   // quadrature nodes per panel of the graded segments
    double tail_radius = 8.0;    // switch to the asymptotic series beyond this |x| (t=1 units)
    double rel_tol = 1e-9;       // target relative accuracy of the radial profiles
};

// Isotropic stable heat kernel p_t and its space/time derivatives.
//
// The radial profile at t=1 is computed by Fourier inversion
//   p_1(x) = (2 pi)^(-d/2) |x|^(1-d/2) Int_0^inf e^(-r^alpha) r^(d/2) J_(d/2-1)(r|x|) dr
// with Gauss panels between consecutive zeros of the oscillatory kernel and
// iterated-average acceleration of the alternating panel sums. Beyond the
// tail radius the asymptotic series  sum_k a_k |x|^(-d-k alpha)  takes over;
// the two branches are cross-checked at construction. Profiles are cached in
// piecewise Chebyshev form so downstream quadratures evaluate in O(1).
// General t goes through the exact scaling p_t(x) = t^(-d/alpha) p_1(t^(-1/alpha) x).
class StableDensity {
public:
    explicit StableDensity(const StableParams& params, const DensityEvalConfig& cfg = {});

    const StableParams& params() const { return params_; }
    const DensityEvalConfig& config() const { return cfg_; }
    double tail_radius() const { return tail_radius_; }

    // radial profile and helpers at t = 1 (rho = |x|)
    double p1(double rho) const;
    double dp1(double rho) const;           // d/drho p1
    double p1_over_rho_derivative(double rho) const;  // dp1 / rho, smooth at 0
    double d2p1(double rho) const;          // d2/drho2 p1
    double q1(double rho) const;            // d/dt p_t | t=1

    // evaluators at general (t, x)
    double density(double t, const Vec& x) const;
    double density_radial(double t, double rho) const;
    Vec gradient(double t, const Vec& x) const;
    double hessian(double t, const Vec& x, int i, int j) const;
    double dt(double t, const Vec& x) const;
    // spatial derivative for a multi-index of order 1 or 2
    double derivative(double t, const Vec& x, const std::array<int, 3>& multi) const;

    // asymptotic tail series (valid for rho >= tail radius)
    double tail_series(double rho, double* err_estimate = nullptr) const;

    // mass of p_t inside radius R (radial quadrature through the profile)
    double mass_within(double t, double R) const;
    // total mass: quadrature inside the tail radius plus the analytic series tail
    double total_mass(double t) const;

    // direct quadrature bypassing the Chebyshev cache; reference path for tests
    double p1_direct(double rho) const;
    double q1_direct(double rho) const;

private:
    double profile_value(int which, double rho) const;  // 0:P0 1:P1R 2:W2 3:Q0
    double tail_profile(int which, double rho) const;

    StableParams params_;
    DensityEvalConfig cfg_;
    double tail_radius_;
    ChebInterp p0_, p1r_, w2_, q0_;
};

}  // namespace fhe

#endif
