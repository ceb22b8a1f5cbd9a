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
#include "katpack/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "katpack/error.hpp"

namespace katpack
{

namespace
{
constexpr double kPi = std::numbers::pi;

bool all_tangent(double a, double b, double c) { return a == 1.0 && b == 1.0 && c == 1.0; }

// Neumaier summation
struct Accum {
    double sum{0}, comp{0};
    void add(double x)
    {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};
}  // namespace

std::string to_string(Geometry g) { return g == Geometry::Hyperbolic ? "hyperbolic" : "euclidean"; }

double edge_length(Geometry g, double ra, double rb, double I)
{
    if (I < -1.0) throw NoTriangleDatum("inversive distance below -1");
    if (g == Geometry::Euclidean) {
        if (I == 1.0) return ra + rb;
        return std::sqrt(ra * ra + rb * rb + 2 * ra * rb * I);
    }
    if (ra == kInf || rb == kInf) return kInf;
    if (I == 1.0) return ra + rb;
    double ch = std::cosh(ra) * std::cosh(rb) + I * std::sinh(ra) * std::sinh(rb);
    return std::acosh(std::max(1.0, ch));
}

double face_angle_s(double sa, double sb, double sc, double I_ab, double I_ac, double I_bc)
{
    if (sa <= 0.0) return 0.0;
    if (sa >= 1.0) {
        // a shrinks to a point on both neighbors: angle pi minus the opposite overlap
        return all_tangent(I_ab, I_ac, I_bc) ? kPi : std::acos(std::clamp(-I_bc, -1.0, 1.0));
    }
    if (all_tangent(I_ab, I_ac, I_bc)) {
        // tan^2(A/2) = sinh rb sinh rc / (sinh(ra+rb+rc) sinh ra), rewritten in s
        double sa2 = sa * sa, p = sb * sc;
        double num = sa2 * (1 - sb * sb) * (1 - sc * sc);
        double den = (1 - sa2 * p * p) * (1 - sa2);
        return 2 * std::atan(std::sqrt(num / den));
    }
    auto N = [](double x, double y, double I) {
        return (1 + x * x) * (1 + y * y) + I * (1 - x * x) * (1 - y * y);
    };
    auto M = [&](double x, double y, double I) {
        double n = N(x, y, I);
        return std::sqrt(std::max(0.0, n * n - 16 * x * x * y * y));
    };
    double nab = N(sa, sb, I_ab), nac = N(sa, sc, I_ac), nbc = N(sb, sc, I_bc);
    double den = M(sa, sb, I_ab) * M(sa, sc, I_ac);
    if (den <= 0.0) throw DegenerateTriangle("zero-length side");
    double c = (nab * nac - 4 * sa * sa * nbc) / den;
    if (c > 1 + 1e-9 || c < -1 - 1e-9) throw DegenerateTriangle("triangle inequality fails (cos = " + std::to_string(c) + ")");
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double face_angle_euc(double ra, double rb, double rc, double I_ab, double I_ac, double I_bc)
{
    if (all_tangent(I_ab, I_ac, I_bc)) return 2 * std::atan(std::sqrt(rb * rc / (ra * (ra + rb + rc))));
    double c = edge_length(Geometry::Euclidean, ra, rb, I_ab);
    double b = edge_length(Geometry::Euclidean, ra, rc, I_ac);
    double a = edge_length(Geometry::Euclidean, rb, rc, I_bc);
    double s = 0.5 * (a + b + c);
    double num = (s - b) * (s - c), den = s * (s - a);
    double scale = 1e-9 * s * s;
    if (num < -scale || den < -scale) throw DegenerateTriangle("triangle inequality fails");
    if (den <= 0) return kPi;
    return 2 * std::atan(std::sqrt(std::max(0.0, num) / den));
}

double face_angle(Geometry g, double ra, double rb, double rc, double I_ab, double I_ac, double I_bc)
{
    if (g == Geometry::Hyperbolic) return face_angle_s(s_from_r(ra), s_from_r(rb), s_from_r(rc), I_ab, I_ac, I_bc);
    return face_angle_euc(ra, rb, rc, I_ab, I_ac, I_bc);
}

double face_angle_s_deriv(double sa, double sb, double sc, double I_ab, double I_ac, double I_bc)
{
    if (sa >= 1.0) return kInf;
    if (all_tangent(I_ab, I_ac, I_bc)) {
        double sa2 = sa * sa, p2 = sb * sb * sc * sc;
        double q = 1 - sa2 * p2;
        double T = sa2 * (1 - sb * sb) * (1 - sc * sc) / (q * (1 - sa2));
        double rootT_over_s = std::sqrt((1 - sb * sb) * (1 - sc * sc) / (q * (1 - sa2)));
        double bracket = 1 + sa2 * p2 / q + sa2 / (1 - sa2);
        return 2 * rootT_over_s * bracket / (1 + T);
    }
    double h = 1e-7;
    double lo = std::max(0.0, sa - h), hi = std::min(1.0 - 1e-15, sa + h);
    return (face_angle_s(hi, sb, sc, I_ab, I_ac, I_bc) - face_angle_s(lo, sb, sc, I_ab, I_ac, I_bc)) / (hi - lo);
}

double face_angle_euc_deriv(double ra, double rb, double rc, double I_ab, double I_ac, double I_bc)
{
    if (all_tangent(I_ab, I_ac, I_bc)) {
        double T = rb * rc / (ra * (ra + rb + rc));
        double dlog = -1 / ra - 1 / (ra + rb + rc);
        return std::sqrt(T) / (1 + T) * dlog;
    }
    double h = 1e-7 * ra;
    return (face_angle_euc(ra + h, rb, rc, I_ab, I_ac, I_bc) - face_angle_euc(ra - h, rb, rc, I_ab, I_ac, I_bc)) /
           (2 * h);
}

double face_corner_angle(const Triangulation& T, const NativeLabel& L, const EdgeLabel& phi, int f, int k)
{
    const auto& t = T.face(f);
    int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
    double Iab = phi.inversive(T.edge_index(a, b));
    double Iac = phi.inversive(T.edge_index(a, c));
    double Ibc = phi.inversive(T.edge_index(b, c));
    if (L.geometry == Geometry::Hyperbolic) return face_angle_s(L.x[a], L.x[b], L.x[c], Iab, Iac, Ibc);
    return face_angle_euc(L.x[a], L.x[b], L.x[c], Iab, Iac, Ibc);
}

double angle_sum(const Triangulation& T, const NativeLabel& L, const EdgeLabel& phi, int v)
{
    if (L.geometry == Geometry::Hyperbolic && L.x[v] <= 0.0) return 0.0;
    Accum acc;
    for (int f : T.star(v)) {
        try {
            acc.add(face_corner_angle(T, L, phi, f, T.corner(f, v)));
        } catch (const DegenerateTriangle& e) {
            throw DegenerateTriangle("face " + std::to_string(f) + ": " + e.what());
        }
    }
    return acc.value();
}

double face_area_hyperbolic(double a, double b, double c) { return kPi - (a + b + c); }

// ---------------------------------------------------------------- circles

Circle Circle::plane(cplx center, double radius, int orientation)
{
    if (!(radius > 0)) throw InvalidInput("plane circle radius must be positive");
    Circle C;
    C.kind = Kind::Plane;
    C.c = center;
    C.r = radius;
    C.o = orientation >= 0 ? 1 : -1;
    return C;
}

Circle Circle::sphere(const Vec3& center, double radius, int orientation)
{
    double n = std::sqrt(center[0] * center[0] + center[1] * center[1] + center[2] * center[2]);
    if (!(radius > 0 && radius < kPi) || !(n > 0)) throw InvalidInput("bad spherical circle");
    Circle C;
    C.kind = Kind::Sphere;
    C.p = {center[0] / n, center[1] / n, center[2] / n};
    C.rho = radius;
    C.o = orientation >= 0 ? 1 : -1;
    return C;
}

Circle Circle::line(cplx normal, double offset, int orientation)
{
    double n = std::abs(normal);
    if (!(n > 0)) throw InvalidInput("line normal must be nonzero");
    Circle C;
    C.kind = Kind::Line;
    C.n = normal / n;
    C.t = offset / n;
    C.o = orientation >= 0 ? 1 : -1;
    return C;
}

namespace
{
Hermitian normalized(Hermitian H)
{
    double q = std::norm(H.b) - H.a * H.d;
    if (!(q > 0)) throw InvalidInput("degenerate circle (point or empty)");
    double s = 1 / std::sqrt(q);
    H.a *= s;
    H.b *= s;
    H.d *= s;
    return H;
}
}  // namespace

Hermitian to_hermitian(const Circle& C)
{
    Hermitian H;
    switch (C.kind) {
        case Circle::Kind::Plane:
            H = {-1 / C.r, C.c / C.r, (C.r * C.r - std::norm(C.c)) / C.r};
            break;
        case Circle::Kind::Line:
            H = {0.0, -C.n, 2 * C.t};
            break;
        case Circle::Kind::Sphere: {
            double s = std::sin(C.rho), ct = std::cos(C.rho) / s;
            double x3 = C.p[2] / s;
            H = {x3 - ct, cplx(C.p[0] / s, C.p[1] / s), -x3 - ct};
            break;
        }
    }
    if (C.o < 0) {
        H.a = -H.a;
        H.b = -H.b;
        H.d = -H.d;
    }
    return normalized(H);
}

Circle from_hermitian(const Hermitian& H0)
{
    Hermitian H = normalized(H0);
    double scale = std::max({1.0, std::abs(H.b), std::abs(H.d)});
    if (std::abs(H.a) <= 1e-13 * scale) {
        double nb = std::abs(H.b);
        return Circle::line(-H.b / nb, H.d / (2 * nb), 1);
    }
    Circle C;
    C.kind = Circle::Kind::Plane;
    C.c = H.b / (-H.a);
    C.r = 1 / std::abs(H.a);
    C.o = H.a < 0 ? 1 : -1;
    return C;
}

std::array<double, 4> desitter(const Circle& C)
{
    Hermitian H = to_hermitian(C);
    return {H.b.real(), H.b.imag(), (H.a - H.d) / 2, -(H.a + H.d) / 2};
}

double lorentz(const std::array<double, 4>& x, const std::array<double, 4>& y)
{
    return x[3] * y[3] - x[0] * y[0] - x[1] * y[1] - x[2] * y[2];
}

Circle from_desitter(const std::array<double, 4>& X0, bool sphere)
{
    double q = -lorentz(X0, X0);
    if (!(q > 0)) throw InvalidInput("de Sitter vector is not spacelike");
    double s = 1 / std::sqrt(q);
    std::array<double, 4> X{X0[0] * s, X0[1] * s, X0[2] * s, X0[3] * s};
    if (sphere) {
        double m = std::sqrt(X[0] * X[0] + X[1] * X[1] + X[2] * X[2]);
        Circle C;
        C.kind = Circle::Kind::Sphere;
        C.p = {X[0] / m, X[1] / m, X[2] / m};
        C.rho = std::atan2(1.0, X[3]);
        C.o = 1;
        return C;
    }
    Hermitian H{X[2] - X[3], cplx(X[0], X[1]), -X[2] - X[3]};
    return from_hermitian(H);
}

namespace
{
double cross_ratio_planar(const Circle& A, const Circle& B)
{
    cplx d = B.c - A.c;
    double t0 = std::abs(d);
    double z1 = A.o > 0 ? -A.r : A.r, z2 = -z1;
    double w1 = B.o > 0 ? t0 - B.r : t0 + B.r;
    double w2 = B.o > 0 ? t0 + B.r : t0 - B.r;
    double X = (z1 - w1) * (z2 - w2) / ((z1 - z2) * (w1 - w2));
    return 2 * X - 1;
}

double dist_to_circle(cplx q, const Circle& C)
{
    if (C.kind == Circle::Kind::Line) return std::abs((std::conj(C.n) * q).real() - C.t);
    return std::abs(std::abs(q - C.c) - C.r);
}
}  // namespace

double inversive_distance(const Circle& C1, const Circle& C2, InvMethod method)
{
    auto X1 = desitter(C1), X2 = desitter(C2);
    double diff = 0, sum = 0;
    for (int i = 0; i < 4; ++i) {
        diff = std::max(diff, std::abs(X1[i] - X2[i]));
        sum = std::max(sum, std::abs(X1[i] + X2[i]));
    }
    if (diff < 1e-14 || sum < 1e-14) throw CoincidentCircles("the two circles coincide");

    switch (method) {
        case InvMethod::DeSitter: return lorentz(X1, X2);
        case InvMethod::Spherical: {
            Circle a = stereographic(C1, StereoDirection::PlaneToSphere);
            Circle b = stereographic(C2, StereoDirection::PlaneToSphere);
            double dot = a.p[0] * b.p[0] + a.p[1] * b.p[1] + a.p[2] * b.p[2];
            return (-dot + std::cos(a.rho) * std::cos(b.rho)) / (std::sin(a.rho) * std::sin(b.rho));
        }
        case InvMethod::Planar: {
            Circle a = C1.kind == Circle::Kind::Plane ? C1 : stereographic(C1, StereoDirection::SphereToPlane);
            Circle b = C2.kind == Circle::Kind::Plane ? C2 : stereographic(C2, StereoDirection::SphereToPlane);
            if (a.kind == Circle::Kind::Line || b.kind == Circle::Kind::Line) {
                // lines have no radius; the Hermitian pairing is the planar formula's limit
                Hermitian h1 = to_hermitian(a), h2 = to_hermitian(b);
                return (h1.a * h2.d + h2.a * h1.d) / 2 - (std::conj(h1.b) * h2.b).real();
            }
            double v = (std::norm(a.c - b.c) - a.r * a.r - b.r * b.r) / (2 * a.r * b.r);
            return a.o * b.o * v;
        }
        case InvMethod::CrossRatio: {
            Circle a = from_hermitian(to_hermitian(C1)), b = from_hermitian(to_hermitian(C2));
            if (a.kind == Circle::Kind::Plane && b.kind == Circle::Kind::Plane) return cross_ratio_planar(a, b);
            // move a point off both circles to infinity so both become proper circles
            cplx best{};
            double score = -1;
            for (int i = 0; i < 16; ++i) {
                cplx q = std::polar(1.0 + 0.37 * i, 0.9 * i);
                double s = std::min(dist_to_circle(q, a), dist_to_circle(q, b));
                if (s > score) {
                    score = s;
                    best = q;
                }
            }
            MobiusMap M(0.0, 1.0, 1.0, -best);
            return cross_ratio_planar(apply_mobius(M, a), apply_mobius(M, b));
        }
    }
    return 0;
}

// ---------------------------------------------------------------- Mobius

MobiusMap::MobiusMap() : m_{1.0, 0.0, 0.0, 1.0} {}

MobiusMap::MobiusMap(cplx a, cplx b, cplx c, cplx d) : m_{a, b, c, d}
{
    cplx det = a * d - b * c;
    if (std::abs(det) < 1e-300) throw InvalidInput("singular Mobius matrix");
    cplx s = std::sqrt(det);
    for (auto& x : m_) x /= s;
}

cplx MobiusMap::operator()(cplx z) const
{
    if (std::isinf(z.real()) || std::isinf(z.imag())) {
        if (m_[2] == 0.0) return {kInf, kInf};
        return m_[0] / m_[2];
    }
    cplx den = m_[2] * z + m_[3];
    if (den == 0.0) return {kInf, kInf};
    return (m_[0] * z + m_[1]) / den;
}

MobiusMap MobiusMap::inverse() const { return MobiusMap(m_[3], -m_[1], -m_[2], m_[0]); }

MobiusMap MobiusMap::compose(const MobiusMap& in) const
{
    return MobiusMap(m_[0] * in.m_[0] + m_[1] * in.m_[2], m_[0] * in.m_[1] + m_[1] * in.m_[3],
                     m_[2] * in.m_[0] + m_[3] * in.m_[2], m_[2] * in.m_[1] + m_[3] * in.m_[3]);
}

MobiusMap MobiusMap::disk_automorphism(cplx w, double theta)
{
    cplx e = std::polar(1.0, theta);
    return MobiusMap(e, -e * w, -std::conj(w), 1.0);
}

Circle apply_mobius(const MobiusMap& M, const Circle& C)
{
    Hermitian H = to_hermitian(C);
    MobiusMap N = M.inverse();
    // H' = N^* H N with H = [[a, b], [conj b, d]]
    cplx h[2][2] = {{H.a, H.b}, {std::conj(H.b), H.d}};
    cplx n[2][2] = {{N.a(), N.b()}, {N.c(), N.d()}};
    cplx hn[2][2], out[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) hn[i][j] = h[i][0] * n[0][j] + h[i][1] * n[1][j];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = std::conj(n[0][i]) * hn[0][j] + std::conj(n[1][i]) * hn[1][j];
    Hermitian R{out[0][0].real(), out[0][1], out[1][1].real()};
    Circle img = from_hermitian(R);
    if (C.kind == Circle::Kind::Sphere) return stereographic(img, StereoDirection::PlaneToSphere);
    return img;
}

Circle stereographic(const Circle& C, StereoDirection dir)
{
    if (dir == StereoDirection::PlaneToSphere) return from_desitter(desitter(C), true);
    return from_hermitian(to_hermitian(C));
}

Vec3 stereographic_point(cplx z)
{
    double n = std::norm(z);
    return {2 * z.real() / (n + 1), 2 * z.imag() / (n + 1), (n - 1) / (n + 1)};
}

cplx stereographic_inverse(const Vec3& X) { return cplx(X[0], X[1]) / (1 - X[2]); }

Curvature geodetic_curvature(const Circle& C0, double tol)
{
    Circle C = from_hermitian(to_hermitian(C0));
    bool meets;
    if (C.kind == Circle::Kind::Line) {
        meets = std::abs(C.t) < 1;
    } else {
        double m = std::abs(C.c);
        meets = (m - C.r < 1) && (C.r - m < 1);
    }
    if (!meets) throw DiskDisjoint("circle does not meet the open unit disk");
    Curvature k;
    k.kappa = -desitter(C0)[2];
    double a = std::abs(k.kappa);
    if (a < tol)
        k.kind = CycleKind::Geodesic;
    else if (std::abs(a - 1) < tol)
        k.kind = CycleKind::Horocycle;
    else if (a > 1)
        k.kind = CycleKind::Circle;
    else
        k.kind = CycleKind::Hypercycle;
    return k;
}

RealizationReport verify_realization(const std::vector<std::pair<int, int>>& edges, const std::vector<double>& beta,
                                     const std::vector<Circle>& circles, double tol)
{
    RealizationReport r;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        double v = inversive_distance(circles[edges[i].first], circles[edges[i].second]);
        double res = std::abs(v - beta[i]);
        if (res > r.max_residual) {
            r.max_residual = res;
            r.worst_edge = static_cast<int>(i);
        }
    }
    r.pass = r.max_residual <= tol;
    return r;
}

}  // namespace katpack
