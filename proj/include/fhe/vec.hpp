#ifndef FHE_VEC_HPP
#define FHE_VEC_HPP

#include <array>
#include <cmath>

namespace fhe {

// Points in R^d for d <= 3; unused trailing components stay zero so that
// norms and dot products can ignore the ambient dimension.
using Vec = std::array<double, 3>;

inline Vec vec1(double x) { return {x, 0.0, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y, 0.0}; }
inline Vec vec3(double x, double y, double z) { return {x, y, z}; }

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec scale(const Vec& a, double c) { return {c * a[0], c * a[1], c * a[2]}; }
inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec& a, const Vec& b) { return norm(sub(a, b)); }

// unit vector at planar angle phi (d=2) or spherical angles (d=3)
inline Vec unit2(double phi) { return {std::cos(phi), std::sin(phi), 0.0}; }
inline Vec unit3(double cos_theta, double phi) {
    const double s = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    return {s * std::cos(phi), s * std::sin(phi), cos_theta};
}

}  // namespace fhe

#endif
