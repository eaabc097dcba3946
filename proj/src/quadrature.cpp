#include "fhe/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace fhe {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    const double pi = 3.141592653589793238462643383279;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        g.x[i] = -x;
        g.x[n - 1 - i] = x;
        g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    if (n % 2 == 1) g.x[n / 2] = 0.0;
    return g;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

AdaptiveResult adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_depth) {
    const GaussRule& lo = gauss_legendre(8);
    const GaussRule& hi = gauss_legendre(16);
    AdaptiveResult res;

    struct Seg {
        double a, b;
        int depth;
    };
    std::vector<Seg> stack{{a, b, 0}};
    // first pass for a magnitude scale
    const double coarse = std::abs(panel_integral(f, a, b, lo));

    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const double i_lo = panel_integral(f, s.a, s.b, lo);
        const double i_hi = panel_integral(f, s.a, s.b, hi);
        res.evals += 24;
        const double err = std::abs(i_hi - i_lo);
        const double scale = std::max({std::abs(res.value), coarse, abs_tol});
        if (err <= std::max(abs_tol, rel_tol * scale) * ((s.b - s.a) / (b - a)) ||
            s.depth >= max_depth) {
            res.value += i_hi;
            res.error += err;
            if (s.depth >= max_depth && err > std::max(abs_tol, rel_tol * scale)) res.converged = false;
        } else {
            const double m = 0.5 * (s.a + s.b);
            stack.push_back({s.a, m, s.depth + 1});
            stack.push_back({m, s.b, s.depth + 1});
        }
    }
    return res;
}

ChebInterp::ChebInterp(const std::function<double(double)>& f, double a, double b, int panels,
                       int degree)
    : a_(a), b_(b), degree_(degree) {
    if (panels < 1 || degree < 2) throw std::invalid_argument("ChebInterp: bad spec");
    const double pi = 3.141592653589793238462643383279;
    coeffs_.resize(panels);
    const int n = degree + 1;
    std::vector<double> vals(n);
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        for (int j = 0; j < n; ++j) {
            const double t = std::cos(pi * (j + 0.5) / n);  // Chebyshev points
            vals[j] = f(0.5 * (pa + pb) + 0.5 * (pb - pa) * t);
        }
        std::vector<double> c(n, 0.0);
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += vals[j] * std::cos(pi * k * (j + 0.5) / n);
            c[k] = 2.0 * s / n;
        }
        c[0] *= 0.5;
        coeffs_[p] = std::move(c);
    }
}

double ChebInterp::operator()(double x) const {
    if (coeffs_.empty()) throw std::logic_error("ChebInterp: empty");
    const int panels = static_cast<int>(coeffs_.size());
    double u = (x - a_) / (b_ - a_) * panels;
    int p = static_cast<int>(u);
    if (p < 0) p = 0;
    if (p >= panels) p = panels - 1;
    const double pa = a_ + (b_ - a_) * p / panels;
    const double pb = a_ + (b_ - a_) * (p + 1) / panels;
    const double t = (2.0 * x - pa - pb) / (pb - pa);
    // Clenshaw
    const std::vector<double>& c = coeffs_[p];
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        const double tmp = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = tmp;
    }
    return t * b1 - b2 + c[0];
}

double sphere_area(int d) {
    const double pi = 3.141592653589793238462643383279;
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        default: throw std::invalid_argument("sphere_area: d must be 1, 2, or 3");
    }
}

double ball_volume(int d) {
    const double pi = 3.141592653589793238462643383279;
    switch (d) {
        case 1: return 2.0;
        case 2: return pi;
        case 3: return 4.0 * pi / 3.0;
        default: throw std::invalid_argument("ball_volume: d must be 1, 2, or 3");
    }
}

namespace {

// radial nodes/weights on [0, radius] graded toward the outer boundary:
// r = radius * (1 - (1-u)^grading), u in [0,1] composite Gauss panels
void radial_graded(double radius, const BallMeshSpec& spec, std::vector<double>& r,
                   std::vector<double>& w) {
    const GaussRule& g = gauss_legendre(spec.radial_order);
    for (int p = 0; p < spec.radial_panels; ++p) {
        const double ua = static_cast<double>(p) / spec.radial_panels;
        const double ub = static_cast<double>(p + 1) / spec.radial_panels;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * g.x[i];
            const double wu = 0.5 * (ub - ua) * g.w[i];
            const double om = 1.0 - u;
            r.push_back(radius * (1.0 - std::pow(om, spec.grading)));
            w.push_back(wu * radius * spec.grading * std::pow(om, spec.grading - 1.0));
        }
    }
}

QuadMesh assemble(int d, const std::vector<double>& r, const std::vector<double>& wr,
                  const BallMeshSpec& spec) {
    const double pi = 3.141592653589793238462643383279;
    QuadMesh mesh;
    if (d == 1) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i] == 0.0) continue;
            mesh.nodes.push_back(vec1(r[i]));
            mesh.weights.push_back(wr[i]);
            mesh.nodes.push_back(vec1(-r[i]));
            mesh.weights.push_back(wr[i]);
        }
    } else if (d == 2) {
        const double dw = 2.0 * pi / spec.angular;
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (int j = 0; j < spec.angular; ++j) {
                const double phi = dw * (j + 0.5);
                mesh.nodes.push_back(scale(unit2(phi), r[i]));
                mesh.weights.push_back(wr[i] * r[i] * dw);
            }
        }
    } else if (d == 3) {
        const GaussRule& gp = gauss_legendre(spec.polar);
        const double dw = 2.0 * pi / spec.angular;
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (std::size_t k = 0; k < gp.x.size(); ++k) {
                for (int j = 0; j < spec.angular; ++j) {
                    const double phi = dw * (j + 0.5);
                    mesh.nodes.push_back(scale(unit3(gp.x[k], phi), r[i]));
                    mesh.weights.push_back(wr[i] * r[i] * r[i] * gp.w[k] * dw);
                }
            }
        }
    } else {
        throw std::invalid_argument("mesh: d must be 1, 2, or 3");
    }
    return mesh;
}

}  // namespace

QuadMesh ball_mesh(int d, double radius, const BallMeshSpec& spec) {
    std::vector<double> r, w;
    radial_graded(radius, spec, r, w);
    return assemble(d, r, w, spec);
}

QuadMesh annulus_mesh(int d, double r0, double r1, const BallMeshSpec& spec) {
    if (!(r1 > r0) || r0 < 0.0) throw std::invalid_argument("annulus_mesh: bad radii");
    // graded toward r0 where kernels are largest
    std::vector<double> r, w;
    const GaussRule& g = gauss_legendre(spec.radial_order);
    for (int p = 0; p < spec.radial_panels; ++p) {
        const double ua = static_cast<double>(p) / spec.radial_panels;
        const double ub = static_cast<double>(p + 1) / spec.radial_panels;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * g.x[i];
            const double wu = 0.5 * (ub - ua) * g.w[i];
            r.push_back(r0 + (r1 - r0) * std::pow(u, spec.grading));
            w.push_back(wu * (r1 - r0) * spec.grading * std::pow(u, spec.grading - 1.0));
        }
    }
    return assemble(d, r, w, spec);
}

std::vector<std::pair<double, double>> graded_time_panels(double t, int levels) {
    std::vector<std::pair<double, double>> panels;
    if (!(t > 0.0)) return panels;
    double lo = 0.0;
    for (int j = 0; j < levels; ++j) {
        const double hi = t * (1.0 - std::pow(0.5, j + 1));
        panels.emplace_back(lo, hi);
        lo = hi;
    }
    panels.emplace_back(lo, t);
    return panels;
}

}  // namespace fhe
