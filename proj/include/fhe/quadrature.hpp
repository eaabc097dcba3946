#ifndef FHE_QUADRATURE_HPP
#define FHE_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fhe/vec.hpp"

namespace fhe {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1,1]
    std::vector<double> w;
};

// Cached Gauss-Legendre rule of order n (Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

template <class F>
double panel_integral(F&& f, double a, double b, const GaussRule& g) {
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(m + h * g.x[i]);
    return h * s;
}

// Composite integral over [a,b] with geometric grading toward `a`.
// Handles integrands with an integrable irregularity (e.g. r^c, c > -1,
// or a singular derivative) at the left endpoint.
template <class F>
double graded_left_integral(F&& f, double a, double b, const GaussRule& g, int levels = 54) {
    if (!(b > a)) return 0.0;
    double total = 0.0;
    double hi = b;
    for (int j = 0; j < levels; ++j) {
        const double lo = a + (b - a) * std::pow(0.5, j + 1);
        total += panel_integral(f, lo, hi, g);
        hi = lo;
    }
    total += panel_integral(f, a, hi, g);
    return total;
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
    bool converged = true;
};

// Adaptive bisection with an embedded low/high order pair.
AdaptiveResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_depth = 30);

// Piecewise Chebyshev interpolant of a smooth function on [a,b].
class ChebInterp {
public:
    ChebInterp() = default;
    ChebInterp(const std::function<double(double)>& f, double a, double b, int panels, int degree);

    double operator()(double x) const;
    double lo() const { return a_; }
    double hi() const { return b_; }
    bool empty() const { return coeffs_.empty(); }

private:
    double a_ = 0.0, b_ = 1.0;
    int degree_ = 0;
    std::vector<std::vector<double>> coeffs_;  // per panel
};

// Product quadrature mesh (nodes and weights) for volume integrals.
struct QuadMesh {
    std::vector<Vec> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

struct BallMeshSpec {
    int radial_panels = 10;
    int radial_order = 6;
    int angular = 32;        // azimuthal nodes (d >= 2)
    int polar = 8;           // polar nodes (d == 3)
    double grading = 2.0;    // exponent of the map clustering nodes at the boundary
};

// Mesh over the centered ball of radius `radius`, graded toward the boundary.
QuadMesh ball_mesh(int d, double radius, const BallMeshSpec& spec);

// Mesh over the annulus r0 < |x| < r1, graded toward |x| = r0.
QuadMesh annulus_mesh(int d, double r0, double r1, const BallMeshSpec& spec);

// Geometric subdivision of [0, t] refined toward s = t (ratio 1/2).
std::vector<std::pair<double, double>> graded_time_panels(double t, int levels);

// Surface area of the unit sphere in R^d.
double sphere_area(int d);

// Volume of the unit ball in R^d.
double ball_volume(int d);

}  // namespace fhe

#endif
