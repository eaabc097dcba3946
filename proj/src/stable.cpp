#include "fhe/stable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fhe {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// sin(pi x) with integer x mapped to an exact zero (poles of 1/Gamma(-x))
double sin_pi(double x) {
    const double n = std::round(x);
    const double f = x - n;
    if (std::abs(f) < 1e-9) return 0.0;
    const bool even = (static_cast<long long>(n) % 2LL) == 0LL;
    return (even ? 1.0 : -1.0) * std::sin(kPi * f);
}

// w_nu(z) = z^(-nu) J_nu(z): entire and even, finite at z = 0.
double bessel_w(double nu, double z) {
    const double z2 = z * z;
    if (z < 1e-4) {
        // two-term series around 0
        const double lead = std::pow(0.5, nu) / std::tgamma(nu + 1.0);
        return lead * (1.0 - z2 / (4.0 * (nu + 1.0)) * (1.0 - z2 / (8.0 * (nu + 2.0))));
    }
    if (nu == -0.5) return std::sqrt(2.0 / kPi) * std::cos(z) ;
    if (nu == 0.5) return std::sqrt(2.0 / kPi) * std::sin(z) / z;
    if (nu == 1.5) return std::sqrt(2.0 / kPi) * (std::sin(z) - z * std::cos(z)) / (z * z2);
    if (nu == 2.5)
        return std::sqrt(2.0 / kPi) * ((3.0 - z2) * std::sin(z) - 3.0 * z * std::cos(z)) /
               (z2 * z2 * z);
    return std::cyl_bessel_j(nu, z) * std::pow(z, -nu);
}

// k-th positive zero of J_nu, McMahon expansion (panel boundaries only;
// sub-percent accuracy is plenty there).
double bessel_zero(double nu, int k) {
    if (nu == -0.5) return (k - 0.5) * kPi;
    if (nu == 0.5) return k * kPi;
    const double b = (k + 0.5 * nu - 0.25) * kPi;
    const double mu = 4.0 * nu * nu;
    return b - (mu - 1.0) / (8.0 * b) -
           4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(8.0 * b, 3));
}

double euler_accel(const std::vector<double>& partial, std::size_t window) {
    std::vector<double> t(partial.end() - window, partial.end());
    while (t.size() > 1) {
        for (std::size_t i = 0; i + 1 < t.size(); ++i) t[i] = 0.5 * (t[i] + t[i + 1]);
        t.pop_back();
    }
    return t[0];
}

struct OscResult {
    double value;
    double err;
};

// Int_0^inf exp(-r^alpha) r^power w_(nu)(r rho) dr.
// Geometrically graded panels up to the first oscillation (exp(-r^alpha) has a
// singular derivative at r = 0 for non-integer alpha), then Gauss panels
// between consecutive Bessel zeros with iterated-average acceleration of the
// alternating partial sums.
OscResult osc_integral(double alpha, double rho, double power, double nu, int gl_order,
                       double tol) {
    const GaussRule& g = gauss_legendre(gl_order);
    auto f = [&](double r) {
        return std::exp(-std::pow(r, alpha)) * std::pow(r, power) * bessel_w(nu, r * rho);
    };
    const double r_env = std::pow(42.0 + 2.0 * power, 1.0 / alpha);
    const double z1 = rho > 0.0 ? bessel_zero(nu, 1) / rho : r_env + 1.0;

    if (rho <= 0.0 || z1 >= r_env) {
        return {graded_left_integral(f, 0.0, r_env, g), 0.0};
    }

    double s = graded_left_integral(f, 0.0, z1, g);
    std::vector<double> partial;
    partial.reserve(4096);
    const std::size_t window = 48;
    double a = z1;
    double prev_est = 0.0;
    bool have_prev = false;
    const long max_panels = 300000;
    for (long k = 1; k <= max_panels; ++k) {
        const double b = bessel_zero(nu, static_cast<int>(k) + 1) / rho;
        const double c = panel_integral(f, a, b, g);
        s += c;
        partial.push_back(s);
        a = b;
        // raw termination: envelope exhausted
        const double env = std::exp(-std::pow(a, alpha)) * std::pow(std::max(a, 1.0), std::max(power, 0.0));
        if (env < 1e-18 * std::max(1e-300, std::abs(s)) && std::abs(c) < tol * std::abs(s)) {
            return {s, std::abs(c)};
        }
        if (partial.size() >= window && k % 8 == 0) {
            const double e1 = euler_accel(partial, window);
            const double e2 = euler_accel(partial, window / 2);
            const double err = std::abs(e1 - e2);
            if (err < tol * std::max(std::abs(e1), 1e-300) && have_prev &&
                std::abs(e1 - prev_est) < 4.0 * tol * std::max(std::abs(e1), 1e-300)) {
                return {e1, err};
            }
            prev_est = e1;
            have_prev = true;
        }
    }
    const double e1 = euler_accel(partial, window);
    const double e2 = euler_accel(partial, window / 2);
    const double err = std::abs(e1 - e2);
    if (err > 100.0 * tol * std::max(std::abs(e1), 1e-300)) {
        throw ConvergenceError("stable density quadrature did not converge (achieved " +
                                   std::to_string(err / std::max(std::abs(e1), 1e-300)) +
                                   " relative)",
                               err);
    }
    return {e1, err};
}

}  // namespace

double levy_constant(int d, double alpha) {
    if (d < 1 || d > 3) throw std::domain_error("levy_constant: d must be 1, 2, or 3");
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::domain_error("levy_constant: alpha must be in (0,2)");
    // |Gamma(-alpha/2)| = (2/alpha) Gamma(1 - alpha/2)
    const double abs_gamma = 2.0 / alpha * std::tgamma(1.0 - 0.5 * alpha);
    return std::pow(2.0, alpha) * std::tgamma(0.5 * (d + alpha)) /
           (std::pow(kPi, 0.5 * d) * abs_gamma);
}

StableParams::StableParams(int d_, double alpha_) : d(d_), alpha(alpha_), c(0.0) {
    if (d < 1 || d > 3) throw std::domain_error("StableParams: d must be 1, 2, or 3");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::domain_error("StableParams: alpha must be in (0,2)");
    if (alpha < alpha_min || alpha > alpha_max)
        throw std::domain_error("StableParams: alpha outside supported range [0.3, 1.9]");
    c = levy_constant(d, alpha);
}

double levy_density_radial(const StableParams& p, double r) {
    if (!(r > 0.0)) throw std::domain_error("levy_density: |y| must be positive");
    return p.c * std::pow(r, -static_cast<double>(p.d) - p.alpha);
}

double levy_density(const StableParams& p, const Vec& y) {
    return levy_density_radial(p, norm(y));
}

// ---- tail series ------------------------------------------------------
//
// p_1(rho) ~ sum_k a_k rho^(-d - k alpha),
// a_k = (-1)^k 2^(k alpha) Gamma((d + k alpha)/2) / (pi^(d/2) k! Gamma(-k alpha/2)),
// evaluated through 1/Gamma(-x) = -sin(pi x) Gamma(1+x)/pi (zero at the poles).
// Convergent for alpha < 1, asymptotic for alpha >= 1; truncated at the
// smallest term either way.

double StableDensity::tail_series(double rho, double* err_estimate) const {
    const int d = params_.d;
    const double alpha = params_.alpha;
    double total = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (int k = 1; k <= 400; ++k) {
        const double x = 0.5 * k * alpha;
        const double sine = sin_pi(x);
        double term = 0.0;
        if (sine != 0.0) {
            const double lg = k * alpha * std::log(2.0) + std::lgamma(0.5 * (d + k * alpha)) +
                              std::lgamma(1.0 + x) - 0.5 * d * std::log(kPi) -
                              std::lgamma(k + 1.0) - std::log(kPi) -
                              (d + k * alpha) * std::log(rho);
            const double sign = (k % 2 == 0 ? 1.0 : -1.0) * (sine > 0.0 ? -1.0 : 1.0);
            term = sign * std::abs(sine) * std::exp(lg);
        }
        const double mag = std::abs(term);
        if (mag > prev && k > 3) {  // asymptotic series: stop at the smallest term
            if (err_estimate) *err_estimate = std::abs(last);
            return total;
        }
        total += term;
        if (mag > 0.0) prev = mag;
        last = term;
        if (mag > 0.0 && mag < 1e-17 * std::abs(total) && k > 3) break;
    }
    if (err_estimate) *err_estimate = std::abs(last);
    return total;
}

// ---- profiles ---------------------------------------------------------

namespace {
struct ProfileSpec {
    double power_shift;  // power = d - 1 + shift
    int m;               // bessel order shift
    double sign;
};
}  // namespace

double StableDensity::tail_profile(int which, double rho) const {
    const int d = params_.d;
    const double alpha = params_.alpha;
    // derivatives of S(rho) = sum a_k rho^(-d-k alpha), Q0 = sum k a_k rho^(-d-k alpha)
    double s = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 400; ++k) {
        const double x = 0.5 * k * alpha;
        const double sine = sin_pi(x);
        double a = 0.0;
        if (sine != 0.0) {
            const double lg = k * alpha * std::log(2.0) + std::lgamma(0.5 * (d + k * alpha)) +
                              std::lgamma(1.0 + x) - 0.5 * d * std::log(kPi) -
                              std::lgamma(k + 1.0) - std::log(kPi) -
                              (d + k * alpha) * std::log(rho);
            const double sign = (k % 2 == 0 ? 1.0 : -1.0) * (sine > 0.0 ? -1.0 : 1.0);
            a = sign * std::abs(sine) * std::exp(lg);
        }
        const double q = d + k * alpha;
        double term = 0.0;
        switch (which) {
            case 0: term = a; break;                                    // P0
            case 1: term = a * q / (rho * rho); break;                  // -S'/rho... see below
            case 2: term = a * (q * (q + 1.0) + q) / std::pow(rho, 4); break;
            case 3: term = a * k; break;                                // Q0
        }
        const double mag = std::abs(term);
        if (mag > prev && k > 3) break;
        s += term;
        if (mag > 0.0) prev = mag;
        if (mag > 0.0 && mag < 1e-17 * std::abs(s) && k > 3) break;
    }
    switch (which) {
        case 0: return s;
        case 1: return -s;  // P1R = S'/rho = -sum a_k q rho^(-q-2)
        case 2: {
            // W2 = (S'' - S'/rho)/rho^2 = sum a_k [q(q+1) + q] rho^(-q-4)
            return s;
        }
        case 3: return s;
        default: throw std::logic_error("tail_profile");
    }
}

double StableDensity::profile_value(int which, double rho) const {
    const int d = params_.d;
    const double alpha = params_.alpha;
    const double nu = 0.5 * d - 1.0;
    const int order = std::max(16, cfg_.nodes_per_decade);
    const double tol = std::min(1e-10, 0.1 * cfg_.rel_tol);
    const double norm_const = std::pow(2.0 * kPi, -0.5 * d);
    switch (which) {
        case 0:
            return norm_const * osc_integral(alpha, rho, d - 1.0, nu, order, tol).value;
        case 1:
            return -norm_const * osc_integral(alpha, rho, d + 1.0, nu + 1.0, order, tol).value;
        case 2:
            return norm_const * osc_integral(alpha, rho, d + 3.0, nu + 2.0, order, tol).value;
        case 3:
            return -norm_const *
                   osc_integral(alpha, rho, alpha + d - 1.0, nu, order, tol).value;
        default:
            throw std::logic_error("profile_value");
    }
}

StableDensity::StableDensity(const StableParams& params, const DensityEvalConfig& cfg)
    : params_(params), cfg_(cfg), tail_radius_(cfg.tail_radius) {
    if (cfg_.nodes_per_decade < 16)
        throw std::domain_error("DensityEvalConfig: nodes per decade must be >= 16");
    if (!(cfg_.rel_tol > 0.0 && cfg_.rel_tol <= 1e-2))
        throw std::domain_error("DensityEvalConfig: tolerance must lie in (0, 1e-2]");
    if (!(cfg_.tail_radius > 1.0))
        throw std::domain_error("DensityEvalConfig: tail radius must exceed 1");

    // Tail switch: enlarge the radius until inversion quadrature and the
    // asymptotic series agree there (verified, not assumed).
    const double vtol = std::max(3.0 * cfg_.rel_tol, 1e-7);
    for (int attempt = 0;; ++attempt) {
        const double q0 = profile_value(0, tail_radius_);
        const double q1v = profile_value(0, 1.15 * tail_radius_);
        const double s0 = tail_series(tail_radius_);
        const double s1 = tail_series(1.15 * tail_radius_);
        const double rel0 = std::abs(q0 - s0) / std::abs(s0);
        const double rel1 = std::abs(q1v - s1) / std::abs(s1);
        if (rel0 <= vtol && rel1 <= vtol) break;
        if (attempt >= 6)
            throw ConvergenceError("tail switch verification failed", std::max(rel0, rel1));
        tail_radius_ *= 1.25;
    }

    const int panels = 16;
    const int degree = 24;
    p0_ = ChebInterp([this](double r) { return profile_value(0, r); }, 0.0, tail_radius_, panels,
                     degree);
    p1r_ = ChebInterp([this](double r) { return profile_value(1, r); }, 0.0, tail_radius_, panels,
                      degree);
    w2_ = ChebInterp([this](double r) { return profile_value(2, r); }, 0.0, tail_radius_, panels,
                     degree);
    q0_ = ChebInterp([this](double r) { return profile_value(3, r); }, 0.0, tail_radius_, panels,
                     degree);

    // probe the cache against direct quadrature
    for (double rho : {0.013, 0.77, 1.9, 3.1, 0.62 * tail_radius_, 0.93 * tail_radius_}) {
        const double direct = profile_value(0, rho);
        const double cached = p0_(rho);
        if (std::abs(direct - cached) > std::max(10.0 * cfg_.rel_tol, 1e-8) *
                                            std::max(std::abs(direct), 1e-12))
            throw ConvergenceError("density profile cache verification failed",
                                   std::abs(direct - cached) / std::abs(direct));
    }
}

double StableDensity::p1(double rho) const {
    rho = std::abs(rho);
    if (rho >= tail_radius_) return tail_series(rho);
    return p0_(rho);
}

double StableDensity::p1_over_rho_derivative(double rho) const {
    rho = std::abs(rho);
    if (rho >= tail_radius_) return tail_profile(1, rho);
    return p1r_(rho);
}

double StableDensity::dp1(double rho) const { return rho * p1_over_rho_derivative(rho); }

double StableDensity::d2p1(double rho) const {
    rho = std::abs(rho);
    if (rho >= tail_radius_) return tail_profile(1, rho) + rho * rho * tail_profile(2, rho);
    return p1r_(rho) + rho * rho * w2_(rho);
}

double StableDensity::q1(double rho) const {
    rho = std::abs(rho);
    if (rho >= tail_radius_) return tail_profile(3, rho);
    return q0_(rho);
}

double StableDensity::density_radial(double t, double rho) const {
    if (!(t > 0.0)) throw std::domain_error("stable density: t must be positive");
    const double s = std::pow(t, -1.0 / params_.alpha);
    return std::pow(t, -params_.d / params_.alpha) * p1(s * rho);
}

double StableDensity::density(double t, const Vec& x) const { return density_radial(t, norm(x)); }

Vec StableDensity::gradient(double t, const Vec& x) const {
    if (!(t > 0.0)) throw std::domain_error("stable density: t must be positive");
    const double s = std::pow(t, -1.0 / params_.alpha);
    const Vec xi = scale(x, s);
    const double rho = norm(xi);
    const double f = std::pow(t, -params_.d / params_.alpha) * s * p1_over_rho_derivative(rho);
    return scale(xi, f);
}

double StableDensity::hessian(double t, const Vec& x, int i, int j) const {
    if (!(t > 0.0)) throw std::domain_error("stable density: t must be positive");
    const double s = std::pow(t, -1.0 / params_.alpha);
    const Vec xi = scale(x, s);
    const double rho = norm(xi);
    const double pref = std::pow(t, -params_.d / params_.alpha) * s * s;
    double val = (i == j) ? p1_over_rho_derivative(rho) : 0.0;
    double w2v = (rho >= tail_radius_) ? tail_profile(2, rho) : w2_(rho);
    val += xi[i] * xi[j] * w2v;
    return pref * val;
}

double StableDensity::dt(double t, const Vec& x) const {
    if (!(t > 0.0)) throw std::domain_error("stable density: t must be positive");
    const double s = std::pow(t, -1.0 / params_.alpha);
    return std::pow(t, -params_.d / params_.alpha - 1.0) * q1(s * norm(x));
}

double StableDensity::derivative(double t, const Vec& x, const std::array<int, 3>& multi) const {
    const int order = multi[0] + multi[1] + multi[2];
    for (int k = params_.d; k < 3; ++k)
        if (multi[k] != 0) throw std::domain_error("derivative: multi-index beyond dimension");
    if (order == 1) {
        if (norm(x) == 0.0) return 0.0;  // radial symmetry
        const Vec g = gradient(t, x);
        for (int k = 0; k < 3; ++k)
            if (multi[k] == 1) return g[k];
    }
    if (order == 2) {
        int i = -1, j = -1;
        for (int k = 0; k < 3; ++k) {
            if (multi[k] == 2) i = j = k;
            if (multi[k] == 1) (i < 0 ? i : j) = k;
        }
        return hessian(t, x, i, j);
    }
    throw std::domain_error("derivative: order must be 1 or 2");
}

double StableDensity::mass_within(double t, double R) const {
    const double area = sphere_area(params_.d);
    auto f = [&](double rho) {
        return area * std::pow(rho, params_.d - 1.0) * density_radial(t, rho);
    };
    AdaptiveResult r = adaptive_integrate(f, 0.0, R, 1e-9, 1e-12);
    return r.value;
}

double StableDensity::total_mass(double t) const {
    const double cut = std::pow(t, 1.0 / params_.alpha) * tail_radius_;
    const double inner = mass_within(t, cut);
    // tail of p_t: sum_k a_k t^k rho^(-d - k alpha) integrated over |x| > cut
    const int d = params_.d;
    const double alpha = params_.alpha;
    const double area = sphere_area(d);
    double tail = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 400; ++k) {
        const double x = 0.5 * k * alpha;
        const double sine = sin_pi(x);
        double term = 0.0;
        if (sine != 0.0) {
            const double lg = k * alpha * std::log(2.0) + std::lgamma(0.5 * (d + k * alpha)) +
                              std::lgamma(1.0 + x) - 0.5 * d * std::log(kPi) -
                              std::lgamma(k + 1.0) - std::log(kPi) + k * std::log(t) -
                              k * alpha * std::log(cut);
            const double sign = (k % 2 == 0 ? 1.0 : -1.0) * (sine > 0.0 ? -1.0 : 1.0);
            term = sign * std::abs(sine) * std::exp(lg) * area / (k * alpha);
        }
        const double mag = std::abs(term);
        if (mag > prev && k > 3) break;
        tail += term;
        if (mag > 0.0) prev = mag;
        if (mag > 0.0 && mag < 1e-17 * std::max(std::abs(tail), 1e-30) && k > 3) break;
    }
    return inner + tail;
}

double StableDensity::p1_direct(double rho) const { return profile_value(0, std::abs(rho)); }
double StableDensity::q1_direct(double rho) const { return profile_value(3, std::abs(rho)); }

}  // namespace fhe
