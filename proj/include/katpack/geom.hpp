/*
katpack

Copyright 2026 The katpack authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <array>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "katpack/complex.hpp"

namespace katpack
{

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Geometry { Hyperbolic, Euclidean };
std::string to_string(Geometry g);

/** Hyperbolic radii are carried as s = exp(-r); s = 0 is an infinite radius. */
inline double s_from_r(double r) { return r == kInf ? 0.0 : std::exp(-r); }
inline double r_from_s(double s) { return s <= 0.0 ? kInf : -std::log(s); }

/**
 * Side length joining circles of radii ra, rb meeting with inversive
 * distance I (I = cos of the overlap angle). Returns +inf for ideal ends.
 */
double edge_length(Geometry g, double ra, double rb, double I = 1.0);

/**
 * Angle at the first circle of a labeled face. Radii are hyperbolic s-values
 * (hyperbolic) or plain radii (euclidean). I_ab, I_ac touch the vertex, I_bc is
 * opposite.
 */
double face_angle_s(double sa, double sb, double sc, double I_ab = 1, double I_ac = 1, double I_bc = 1);
double face_angle_euc(double ra, double rb, double rc, double I_ab = 1, double I_ac = 1, double I_bc = 1);
/** Same, with radii given as r (inf allowed for hyperbolic). */
double face_angle(Geometry g, double ra, double rb, double rc, double I_ab = 1, double I_ac = 1,
                  double I_bc = 1);

/** d(angle)/d(own variable): d/ds for hyperbolic, d/dr for euclidean. */
double face_angle_s_deriv(double sa, double sb, double sc, double I_ab = 1, double I_ac = 1, double I_bc = 1);
double face_angle_euc_deriv(double ra, double rb, double rc, double I_ab = 1, double I_ac = 1,
                            double I_bc = 1);

/** Label stored in native coordinates: s for hyperbolic, r for euclidean. */
struct NativeLabel {
    Geometry geometry{Geometry::Hyperbolic};
    std::vector<double> x;
};

double angle_sum(const Triangulation& T, const NativeLabel& label, const EdgeLabel& phi, int v);
/** Angle of face f at its corner k. */
double face_corner_angle(const Triangulation& T, const NativeLabel& label, const EdgeLabel& phi, int f, int k);

double face_area_hyperbolic(double a, double b, double c);

/**
 * Oriented circle. The companion disk lies to the left: the interior of a
 * counterclockwise planar circle (o = +1), the cap {X : p.X >= cos rho} on
 * the sphere (o = +1), and for a line with unit normal n and offset t the
 * half-plane n.z <= t (o = +1). o = -1 selects the complement.
 */
struct Circle {
    enum class Kind { Plane, Sphere, Line };
    Kind kind{Kind::Plane};
    cplx c{};            // plane center
    double r{1.0};       // plane radius
    Vec3 p{0, 0, 1};     // sphere center
    double rho{0.0};     // spherical radius
    cplx n{1.0, 0.0};    // line normal
    double t{0.0};       // line offset
    int o{1};

    static Circle plane(cplx center, double radius, int orientation = 1);
    static Circle sphere(const Vec3& center, double radius, int orientation = 1);
    static Circle line(cplx normal, double offset, int orientation = 1);
};

/**
 * Hermitian form a|z|^2 + 2 Re(conj(b) z) + d >= 0 describing the companion
 * disk, scaled so |b|^2 - a d = 1. Every Circle kind maps to one.
 */
struct Hermitian {
    double a{0};
    cplx b{};
    double d{0};
};

Hermitian to_hermitian(const Circle& C);
/** Back to a plane circle or a line (orientation encoded as the Circle's o). */
Circle from_hermitian(const Hermitian& H);
/** Lorentz vector (b, (a-d)/2, -(a+d)/2); pairing x4 y4 - x.y gives inversive distance. */
std::array<double, 4> desitter(const Circle& C);
Circle from_desitter(const std::array<double, 4>& X, bool sphere);
double lorentz(const std::array<double, 4>& x, const std::array<double, 4>& y);

enum class InvMethod { Planar, Spherical, CrossRatio, DeSitter };
double inversive_distance(const Circle& C1, const Circle& C2, InvMethod method = InvMethod::DeSitter);

class MobiusMap
{
public:
    MobiusMap();  // identity
    MobiusMap(cplx a, cplx b, cplx c, cplx d);
    cplx a() const { return m_[0]; }
    cplx b() const { return m_[1]; }
    cplx c() const { return m_[2]; }
    cplx d() const { return m_[3]; }
    cplx det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
    /** Image of a point; returns inf-valued complex for the pole. */
    cplx operator()(cplx z) const;
    MobiusMap inverse() const;
    MobiusMap compose(const MobiusMap& inner) const;  // this o inner
    /** Disk automorphism z -> e^{i theta} (z - w)/(1 - conj(w) z). */
    static MobiusMap disk_automorphism(cplx w, double theta = 0.0);

private:
    std::array<cplx, 4> m_;
};

Circle apply_mobius(const MobiusMap& M, const Circle& C);

enum class StereoDirection { PlaneToSphere, SphereToPlane };
/** North pole (0,0,1), plane z = 0; the plane unit circle maps to the equator. */
Circle stereographic(const Circle& C, StereoDirection dir);
Vec3 stereographic_point(cplx z);
cplx stereographic_inverse(const Vec3& X);

enum class CycleKind { Circle, Horocycle, Hypercycle, Geodesic };
struct Curvature {
    double kappa{0};
    CycleKind kind{CycleKind::Circle};
};
/** Geodesic curvature of the part of C inside the unit disk. */
Curvature geodetic_curvature(const Circle& C, double tol = 1e-10);

struct RealizationReport {
    double max_residual{0};
    int worst_edge{-1};
    bool pass{false};
};
RealizationReport verify_realization(const std::vector<std::pair<int, int>>& edges,
                                     const std::vector<double>& beta, const std::vector<Circle>& circles,
                                     double tol = 1e-9);

}  // namespace katpack
