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
#include "katpack/layout.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "katpack/error.hpp"

namespace katpack
{

namespace
{
using Vec4 = std::array<double, 4>;
constexpr double kPi = std::numbers::pi;

Vec4 add(const Vec4& a, const Vec4& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

cplx hyperbolic_center(const Circle& C, bool* ideal = nullptr)
{
    double m = std::abs(C.c);
    if (ideal) *ideal = false;
    if (m < 1e-300) return 0.0;
    cplx dir = C.c / m;
    double p1 = m - C.r, p2 = m + C.r;
    if (p2 >= 1.0 - 1e-14) {
        if (ideal) *ideal = true;
        return dir;
    }
    return std::tanh(0.5 * (std::atanh(p1) + std::atanh(p2))) * dir;
}

cplx klein(cplx p) { return 2.0 * p / (1.0 + std::norm(p)); }

double orient(cplx a, cplx b, cplx c) { return ((b - a) * std::conj(c - a)).imag() * -1.0; }

// The two circles meeting X_u, X_v with the given inversive distances and <Y, U_cw> = kappa.
std::array<Vec4, 2> third_circle(const Vec4& U, const Vec4& W, double Iu, double Iw, double kappa)
{
    const double y3 = -kappa;
    const std::array<double, 3> r1{-U[0], -U[1], U[3]}, r2{-W[0], -W[1], W[3]};
    const double b1 = Iu + y3 * U[2], b2 = Iw + y3 * W[2];
    auto dot = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    };
    double g11 = dot(r1, r1), g12 = dot(r1, r2), g22 = dot(r2, r2);
    double det = g11 * g22 - g12 * g12;
    if (!(std::abs(det) > 0)) throw LayoutInconsistent("coincident neighbor circles");
    double l1 = (b1 * g22 - b2 * g12) / det, l2 = (g11 * b2 - g12 * b1) / det;
    std::array<double, 3> p{l1 * r1[0] + l2 * r2[0], l1 * r1[1] + l2 * r2[1], l1 * r1[2] + l2 * r2[2]};
    std::array<double, 3> n{r1[1] * r2[2] - r1[2] * r2[1], r1[2] * r2[0] - r1[0] * r2[2],
                            r1[0] * r2[1] - r1[1] * r2[0]};
    double nn = std::sqrt(dot(n, n));
    for (double& x : n) x /= nn;
    double A = n[2] * n[2] - n[0] * n[0] - n[1] * n[1];
    double B = 2 * (p[2] * n[2] - p[0] * n[0] - p[1] * n[1]);
    double C = p[2] * p[2] - p[0] * p[0] - p[1] * p[1] - y3 * y3 + 1;
    double t1, t2;
    if (std::abs(A) < 1e-14 * (std::abs(B) + std::abs(C))) {
        t1 = t2 = -C / B;
    } else {
        double disc = std::max(0.0, B * B - 4 * A * C);
        double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
        t1 = q / A;
        t2 = q != 0 ? C / q : t1;
    }
    auto make = [&](double t) { return Vec4{p[0] + t * n[0], p[1] + t * n[1], y3, p[2] + t * n[2]}; };
    return {make(t1), make(t2)};
}

double circle_mismatch(const Circle& a, const Circle& b) { return std::abs(a.c - b.c) + std::abs(a.r - b.r); }

void check_residual(double res, double tol)
{
    if (res > 100 * tol)
        throw LayoutInconsistent("revisit mismatch " + std::to_string(res) + " exceeds 100 x tolerance");
}

double I_of(const Triangulation& T, const EdgeLabel& phi, int a, int b) { return phi.inversive(T.edge_index(a, b)); }

// Rotate a face so that vertex v comes first.
Face rotate_to(const Face& t, int v)
{
    if (t[1] == v) return {t[1], t[2], t[0]};
    if (t[2] == v) return {t[2], t[0], t[1]};
    return t;
}

// For face g adjacent to an already placed face: (u, v, w) in g's cyclic order, w the new corner.
Face new_corner(const Face& g, const std::vector<char>& placed_in_f, const Face& f)
{
    (void)placed_in_f;
    for (int k = 0; k < 3; ++k)
        if (g[k] != f[0] && g[k] != f[1] && g[k] != f[2]) return {g[(k + 1) % 3], g[(k + 2) % 3], g[k]};
    throw LayoutInconsistent("adjacent faces share all vertices");
}
}  // namespace

std::string to_string(Model m)
{
    switch (m) {
        case Model::Disk: return "disk";
        case Model::Plane: return "plane";
        case Model::Torus: return "torus";
        case Model::Sphere: return "sphere";
    }
    return "?";
}

// ---------------------------------------------------------------- disk

namespace
{
// Plane circle of hyperbolic radius -log s about the hyperbolic point z.
Circle disk_circle(cplx z, double s)
{
    double rho = (1 - s) / (1 + s);  // tanh(r/2)
    double m = std::norm(z);
    double den = 1 - rho * rho * m;
    return Circle::plane(z * (1 - rho * rho) / den, rho * (1 - m) / den);
}

// Horocycle at the ideal point zeta meeting C with inversive distance I.
Circle horocycle_against(cplx zeta, const Circle& C, double I)
{
    cplx d = zeta - C.c;
    double rho = (std::norm(d) - C.r * C.r) / (2 * ((std::conj(zeta) * d).real() + I * C.r));
    return Circle::plane(zeta * (1 - rho), rho);
}

// tanh(d/2) for the distance between the centers of two finite circles.
double half_tanh_distance(double sa, double sb, double I)
{
    if (I == 1.0) {
        double e = sa * sb;
        return (1 - e) / (1 + e);
    }
    return std::tanh(0.5 * edge_length(Geometry::Hyperbolic, r_from_s(sa), r_from_s(sb), I));
}
}  // namespace

LayoutResult layout_disk(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& label,
                         const LayoutOptions& opt)
{
    if (label.geometry != Geometry::Hyperbolic) throw InvalidInput("layout_disk needs a hyperbolic label");
    if (T.kind() != SurfaceKind::Disk) throw InvalidInput("layout_disk needs a disk triangulation");
    const int V = T.num_vertices();
    std::vector<double> s(V);
    for (int v = 0; v < V; ++v) s[v] = s_from_r(label.r[v]);
    auto kappa = [&](int v) { return (1 + s[v] * s[v]) / (1 - s[v] * s[v]); };

    int v0 = opt.root_vertex;
    if (v0 < 0)
        for (int v = 0; v < V && v0 < 0; ++v)
            if (s[v] > 0) v0 = v;
    int rf = opt.root_face >= 0 ? opt.root_face : (v0 >= 0 ? T.star(v0)[0] : 0);

    // hyperbolic centers (ideal points for horocycles) and the matching plane circles
    std::vector<cplx> z(V);
    std::vector<Circle> C(V);
    std::vector<char> placed(V, 0);

    // Each new circle is placed in the frame where its pivot sits at the origin, so
    // rounding does not grow with the distance from the root.
    auto place = [&](int u, int v, int w) {
        const double Iuv = I_of(T, phi, u, v), Iuw = I_of(T, phi, u, w), Ivw = I_of(T, phi, v, w);
        int p = u, q = v;
        double sigma = 1, alpha = 0, Ipw = Iuw;
        if (s[u] > 0) {
            alpha = face_angle_s(s[u], s[v], s[w], Iuv, Iuw, Ivw);
        } else if (s[v] > 0) {
            p = v;
            q = u;
            sigma = -1;
            Ipw = Ivw;
            alpha = face_angle_s(s[v], s[w], s[u], Ivw, Iuv, Iuw);
        } else {
            // two horocycles: solve for the third circle in Lorentz space
            auto cand = third_circle(desitter(C[u]), desitter(C[v]), Iuw, Ivw, kappa(w));
            double best = -kInf;
            Circle out = from_desitter(cand[0], false);
            for (const auto& Y : cand) {
                Circle c = from_desitter(Y, false);
                if (c.kind != Circle::Kind::Plane || c.o < 0) continue;
                double o = orient(klein(z[u]), klein(z[v]), klein(hyperbolic_center(c)));
                if (o > best) {
                    best = o;
                    out = c;
                }
            }
            return std::pair<cplx, Circle>{hyperbolic_center(out), out};
        }
        MobiusMap M = MobiusMap::disk_automorphism(z[p]);
        double theta = std::arg(M(z[q])) + sigma * alpha;
        if (s[w] > 0) {
            cplx zw = M.inverse()(std::polar(half_tanh_distance(s[p], s[w], Ipw), theta));
            return std::pair<cplx, Circle>{zw, disk_circle(zw, s[w])};
        }
        cplx zeta = M.inverse()(std::polar(1.0, theta));
        zeta /= std::abs(zeta);
        return std::pair<cplx, Circle>{zeta, horocycle_against(zeta, C[p], Ipw)};
    };
    auto set = [&](int v, cplx zv, const Circle& c) {
        z[v] = zv;
        C[v] = c;
        placed[v] = 1;
    };

    // root face
    Face t = T.face(rf);
    int first_finite = -1;
    for (int k = 0; k < 3; ++k)
        if (s[t[k]] > 0 && (first_finite < 0 || t[k] == v0)) first_finite = t[k];
    if (first_finite >= 0) {
        t = rotate_to(t, first_finite);
        set(t[0], 0.0, disk_circle(0.0, s[t[0]]));
        const double I01 = I_of(T, phi, t[0], t[1]);
        if (s[t[1]] > 0) {
            cplx z1 = half_tanh_distance(s[t[0]], s[t[1]], I01);
            set(t[1], z1, disk_circle(z1, s[t[1]]));
        } else {
            set(t[1], 1.0, horocycle_against(1.0, C[t[0]], I01));
        }
        auto [z2, c2] = place(t[0], t[1], t[2]);
        set(t[2], z2, c2);
    } else {
        // all-ideal face: horocycles at the cube roots of unity
        double H[3];
        for (int k = 0; k < 3; ++k) H[k] = (1 + I_of(T, phi, t[k], t[(k + 1) % 3])) / 1.5;
        // H[0] = h0 h1, H[1] = h1 h2, H[2] = h2 h0
        double h[3] = {std::sqrt(H[0] * H[2] / H[1]), std::sqrt(H[0] * H[1] / H[2]), std::sqrt(H[1] * H[2] / H[0])};
        for (int k = 0; k < 3; ++k) {
            cplx w = std::polar(1.0, 2 * kPi * k / 3);
            set(t[k], w, from_desitter(Vec4{h[k] * w.real(), h[k] * w.imag(), -1.0, h[k]}, false));
        }
    }

    LayoutResult out;
    out.model = Model::Disk;
    std::vector<char> done(T.num_faces(), 0);
    std::queue<int> q;
    q.push(rf);
    done[rf] = 1;
    while (!q.empty()) {
        int f = q.front();
        q.pop();
        auto nb = T.face_neighbors(f);
        for (int k = 0; k < 3; ++k) {
            int g = nb[k];
            if (g < 0 || done[g]) continue;
            done[g] = 1;
            Face uvw = new_corner(T.face(g), placed, T.face(f));
            auto [zw, cw] = place(uvw[0], uvw[1], uvw[2]);
            if (placed[uvw[2]])
                out.residual = std::max(out.residual, circle_mismatch(cw, C[uvw[2]]));
            else
                set(uvw[2], zw, cw);
            q.push(g);
        }
    }
    check_residual(out.residual, opt.tol);

    MobiusMap M;
    if (v0 >= 0) {
        MobiusMap M1 = MobiusMap::disk_automorphism(z[v0]);
        int n0 = T.flower(v0)[0];
        M = MobiusMap::disk_automorphism(z[v0], -std::arg(M1(z[n0])));
    }
    out.circles.resize(V);
    out.center.resize(V);
    out.horocycle.assign(V, 0);
    for (int v = 0; v < V; ++v) {
        out.horocycle[v] = s[v] == 0.0;
        if (out.horocycle[v]) {
            // keep horocycles exactly internally tangent
            Circle c = apply_mobius(M, C[v]);
            cplx dir = c.c / std::abs(c.c);
            double rho = 0.5 * (c.r + 1 - std::abs(c.c));
            out.circles[v] = Circle::plane(dir * (1 - rho), rho);
            out.center[v] = dir;
        } else {
            out.center[v] = v == v0 ? cplx(0.0) : M(z[v]);
            out.circles[v] = disk_circle(out.center[v], s[v]);
        }
    }
    return out;
}

// ---------------------------------------------------------------- plane

namespace
{
cplx place_euclidean(cplx pu, cplx pv, double ru, double rv, double rw, double Iuv, double Iuw, double Ivw)
{
    double alpha = face_angle_euc(ru, rv, rw, Iuv, Iuw, Ivw);
    double l = edge_length(Geometry::Euclidean, ru, rw, Iuw);
    cplx d = pv - pu;
    return pu + l * (d / std::abs(d)) * std::polar(1.0, alpha);
}
}  // namespace

LayoutResult layout_plane(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& label,
                          const LayoutOptions& opt)
{
    if (label.geometry != Geometry::Euclidean) throw InvalidInput("layout_plane needs a euclidean label");
    if (T.kind() != SurfaceKind::Disk) throw InvalidInput("layout_plane needs a disk triangulation");
    const int V = T.num_vertices();
    const auto& r = label.r;
    int v0 = opt.root_vertex >= 0 ? opt.root_vertex : (label.unit_vertex >= 0 ? label.unit_vertex : 0);
    int rf = opt.root_face >= 0 ? opt.root_face : T.star(v0)[0];

    std::vector<cplx> pos(V);
    std::vector<char> placed(V, 0);
    Face t = T.face(rf);
    pos[t[0]] = 0.0;
    pos[t[1]] = edge_length(Geometry::Euclidean, r[t[0]], r[t[1]], I_of(T, phi, t[0], t[1]));
    auto place = [&](int u, int v, int w) {
        return place_euclidean(pos[u], pos[v], r[u], r[v], r[w], I_of(T, phi, u, v), I_of(T, phi, u, w),
                               I_of(T, phi, v, w));
    };
    pos[t[2]] = place(t[0], t[1], t[2]);
    placed[t[0]] = placed[t[1]] = placed[t[2]] = 1;

    LayoutResult out;
    out.model = Model::Plane;
    std::vector<char> done(T.num_faces(), 0);
    std::queue<int> q;
    q.push(rf);
    done[rf] = 1;
    while (!q.empty()) {
        int f = q.front();
        q.pop();
        auto nb = T.face_neighbors(f);
        for (int k = 0; k < 3; ++k) {
            int g = nb[k];
            if (g < 0 || done[g]) continue;
            done[g] = 1;
            Face uvw = new_corner(T.face(g), placed, T.face(f));
            cplx p = place(uvw[0], uvw[1], uvw[2]);
            if (placed[uvw[2]])
                out.residual = std::max(out.residual, std::abs(p - pos[uvw[2]]));
            else {
                pos[uvw[2]] = p;
                placed[uvw[2]] = 1;
            }
            q.push(g);
        }
    }
    check_residual(out.residual, opt.tol);

    // normalize: v0 at the origin, its first neighbor on the positive real axis
    cplx shift = pos[v0];
    cplx d = pos[T.flower(v0)[0]] - shift;
    cplx rot = std::conj(d) / std::abs(d);
    out.center.resize(V);
    out.circles.resize(V);
    out.horocycle.assign(V, 0);
    for (int v = 0; v < V; ++v) {
        out.center[v] = (pos[v] - shift) * rot;
        out.circles[v] = Circle::plane(out.center[v], r[v]);
    }
    out.center[v0] = 0.0;
    out.circles[v0].c = 0.0;
    return out;
}

// ---------------------------------------------------------------- torus

cplx reduce_modulus(cplx tau)
{
    if (tau.imag() < 0) tau = std::conj(tau);  // orientation flip of the basis
    for (int it = 0; it < 1000; ++it) {
        tau -= std::round(tau.real());
        if (std::norm(tau) < 1 - 1e-14)
            tau = -1.0 / tau;
        else
            break;
    }
    const double eps = 1e-12;
    if (tau.real() < -0.5 + eps) tau += 1.0;
    if (std::abs(std::abs(tau) - 1) < eps && tau.real() < 0) tau = -std::conj(tau);
    return tau;
}

LayoutResult layout_torus(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& label,
                          const LayoutOptions& opt)
{
    if (label.geometry != Geometry::Euclidean) throw InvalidInput("layout_torus needs a euclidean label");
    if (T.kind() != SurfaceKind::Torus) throw InvalidInput("layout_torus needs a torus triangulation");
    const int V = T.num_vertices(), F = T.num_faces(), E = T.num_edges();
    const auto& r = label.r;
    int rf = opt.root_face >= 0 ? opt.root_face : 0;

    LayoutResult out;
    out.model = Model::Torus;
    out.face_positions.assign(F, {});
    std::vector<char> done(F, 0), dual_tree(E, 0);
    auto pos_in = [&](int f, int v) { return out.face_positions[f][T.corner(f, v)]; };

    {
        const Face& t = T.face(rf);
        auto& P = out.face_positions[rf];
        P[0] = 0.0;
        P[1] = edge_length(Geometry::Euclidean, r[t[0]], r[t[1]], I_of(T, phi, t[0], t[1]));
        P[2] = place_euclidean(P[0], P[1], r[t[0]], r[t[1]], r[t[2]], I_of(T, phi, t[0], t[1]),
                               I_of(T, phi, t[0], t[2]), I_of(T, phi, t[1], t[2]));
    }
    std::queue<int> q;
    q.push(rf);
    done[rf] = 1;
    while (!q.empty()) {
        int f = q.front();
        q.pop();
        auto nb = T.face_neighbors(f);
        const Face& tf = T.face(f);
        for (int k = 0; k < 3; ++k) {
            int g = nb[k];
            if (done[g]) continue;
            done[g] = 1;
            int u = tf[(k + 1) % 3], v = tf[(k + 2) % 3];  // edge opposite corner k
            dual_tree[T.edge_index(u, v)] = 1;
            const Face& tg = T.face(g);
            auto& P = out.face_positions[g];
            int cu = T.corner(g, u), cv = T.corner(g, v), cw = 3 - cu - cv;
            P[cu] = pos_in(f, u);
            P[cv] = pos_in(f, v);
            int w = tg[cw];
            // in g the edge runs v -> u
            P[cw] = place_euclidean(P[cv], P[cu], r[v], r[u], r[w], I_of(T, phi, u, v), I_of(T, phi, v, w),
                                    I_of(T, phi, u, w));
            q.push(g);
        }
    }

    // translations across non-tree edges
    std::vector<cplx> trans(E, 0.0);
    for (int e = 0; e < E; ++e) {
        if (dual_tree[e]) continue;
        const Edge& ed = T.edge(e);
        cplx ta = pos_in(ed.right, ed.a) - pos_in(ed.left, ed.a);
        cplx tb = pos_in(ed.right, ed.b) - pos_in(ed.left, ed.b);
        trans[e] = 0.5 * (ta + tb);
        out.closure_residual = std::max(out.closure_residual, std::abs(ta - tb));
    }
    // primal spanning tree on the remaining edges; two edges are left over
    std::vector<int> parent(V);
    for (int v = 0; v < V; ++v) parent[v] = v;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<int> leftover;
    for (int e = 0; e < E; ++e) {
        if (dual_tree[e]) continue;
        int a = find(T.edge(e).a), b = find(T.edge(e).b);
        if (a != b)
            parent[a] = b;
        else
            leftover.push_back(e);
    }
    if (leftover.size() != 2) throw LayoutInconsistent("tree-cotree split did not leave two generators");
    cplx a = trans[leftover[0]], b = trans[leftover[1]];
    if ((b / a).imag() < 0) b = -b;
    out.hol_a = a;
    out.hol_b = b;
    // every other translation must lie in the lattice spanned by a, b
    double det = (std::conj(a) * b).imag();
    for (int e = 0; e < E; ++e) {
        if (dual_tree[e]) continue;
        cplx t = trans[e];
        double m = (std::conj(t) * b).imag() / det, n = (std::conj(a) * t).imag() / det;
        cplx lat = std::round(m) * a + std::round(n) * b;
        out.closure_residual = std::max(out.closure_residual, std::abs(t - lat));
    }
    out.tau = reduce_modulus(b / a);

    out.center.assign(V, 0.0);
    std::vector<char> seen(V, 0);
    for (int f = 0; f < F; ++f)
        for (int k = 0; k < 3; ++k) {
            int v = T.face(f)[k];
            if (!seen[v]) {
                seen[v] = 1;
                out.center[v] = out.face_positions[f][k];
            }
        }
    out.circles.resize(V);
    out.horocycle.assign(V, 0);
    for (int v = 0; v < V; ++v) out.circles[v] = Circle::plane(out.center[v], r[v]);
    out.residual = out.closure_residual;
    check_residual(out.residual, opt.tol);
    return out;
}

// ---------------------------------------------------------------- sphere

Vec3 tangency_point_sphere(const Circle& a, const Circle& b)
{
    Vec4 X = add(desitter(a), desitter(b));
    if (X[3] < 0)
        for (double& x : X) x = -x;
    return {X[0] / X[3], X[1] / X[3], X[2] / X[3]};
}

Lorentz centering_boost(const std::vector<Vec3>& pts)
{
    using Eigen::Matrix3d;
    using Eigen::Vector3d;
    std::vector<Vector3d> p;
    for (const auto& x : pts) p.emplace_back(x[0], x[1], x[2]);
    auto F = [&](const Vector3d& y) {
        double q = std::sqrt(1 + y.squaredNorm()), f = 0;
        for (const auto& pi : p) {
            double D = q - y.dot(pi);
            if (!(D > 0)) return kInf;
            f += std::log(D);
        }
        return f;
    };
    Vector3d y = Vector3d::Zero();
    for (int it = 0; it < 200; ++it) {
        double q = std::sqrt(1 + y.squaredNorm());
        Vector3d g = Vector3d::Zero();
        Matrix3d H = Matrix3d::Zero();
        Matrix3d dyq = Matrix3d::Identity() / q - y * y.transpose() / (q * q * q);
        for (const auto& pi : p) {
            double D = q - y.dot(pi);
            Vector3d w = y / q - pi;
            g += w / D;
            H += dyq / D - w * w.transpose() / (D * D);
        }
        if (g.norm() < 1e-15 * p.size()) break;
        Vector3d step = -g;
        Eigen::LLT<Matrix3d> llt(H);
        if (llt.info() == Eigen::Success) step = -llt.solve(g);
        double lam = 1;
        if (g.norm() > 1e-6) {
            // damped far from the minimizer; near it the objective is flat to rounding, take full steps
            double f0 = F(y);
            while (lam > 1e-12 && !(F(y + lam * step) <= f0 + 1e-4 * lam * g.dot(step))) lam *= 0.5;
            if (lam <= 1e-12) break;
        }
        y += lam * step;
        if (lam * step.norm() < 1e-17) break;
    }
    Lorentz L{};
    double ny = y.norm(), gamma = std::sqrt(1 + y.squaredNorm());
    for (int i = 0; i < 4; ++i) L[i][i] = 1;
    if (ny == 0) return L;
    Vector3d n = y / ny;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) L[i][j] = (i == j ? 1.0 : 0.0) + (gamma - 1) * n[i] * n[j];
        L[i][3] = -ny * n[i];
        L[3][i] = -ny * n[i];
    }
    L[3][3] = gamma;
    return L;
}

namespace
{
Vec4 apply_L(const Lorentz& L, const Vec4& X)
{
    Vec4 Y{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) Y[i] += L[i][j] * X[j];
    return Y;
}

// Solve <X_v, X_v> = -1 and <X_u, X_v> = I_uv by minimum-norm Gauss-Newton steps.
// The rows are independent away from degenerate data (the kernel is the Lorentz
// group), so the min-norm step comes from the normal equations J J^T y = -F.
bool lorentz_newton(const Triangulation& K, const std::vector<double>& I, std::vector<Vec4>& X, double tol,
                    double* residual_out = nullptr)
{
    const int V = K.num_vertices(), E = K.num_edges();
    const int m = V + E, n = 4 * V;
    auto eta = [](const Vec4& x) { return Vec4{-x[0], -x[1], -x[2], x[3]}; };
    std::vector<Vec4> best = X;
    double best_res = kInf;
    int stagnant = 0;
    double noise = 0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXd F(m);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(4 * V + 8 * E);
        for (int v = 0; v < V; ++v) {
            F[v] = lorentz(X[v], X[v]) + 1;
            Vec4 d = eta(X[v]);
            for (int k = 0; k < 4; ++k) trip.emplace_back(v, 4 * v + k, 2 * d[k]);
        }
        for (int e = 0; e < E; ++e) {
            int a = K.edge(e).a, b = K.edge(e).b;
            F[V + e] = lorentz(X[a], X[b]) - I[e];
            Vec4 da = eta(X[b]), db = eta(X[a]);
            for (int k = 0; k < 4; ++k) {
                trip.emplace_back(V + e, 4 * a + k, da[k]);
                trip.emplace_back(V + e, 4 * b + k, db[k]);
            }
        }
        double res = F.cwiseAbs().maxCoeff();
        if (residual_out) *residual_out = res;
        if (!std::isfinite(res)) break;
        // pairings of large vectors cancel; below this the residual is rounding
        double big = 0;
        for (const auto& x : X) big = std::max(big, x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        noise = 64 * std::numeric_limits<double>::epsilon() * big;
        if (res < best_res) {
            if (res < 0.5 * best_res) stagnant = 0;
            best_res = res;
            best = X;
        }
        if (res < std::max(tol, noise)) return true;
        if (++stagnant > 3) break;
        Eigen::SparseMatrix<double> J(m, n);
        J.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseMatrix<double> A = J * J.transpose();
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
        Eigen::VectorXd step;
        if (ldlt.info() == Eigen::Success) step = J.transpose() * ldlt.solve(-F);
        if (ldlt.info() != Eigen::Success || !step.allFinite()) {
            if (n > 4000) break;
            step = Eigen::MatrixXd(J).completeOrthogonalDecomposition().solve(-F);
        }
        for (int v = 0; v < V; ++v)
            for (int k = 0; k < 4; ++k) X[v][k] += step[4 * v + k];
    }
    X = std::move(best);
    if (residual_out) *residual_out = best_res;
    return best_res < std::max(1e3 * tol, noise);
}

void center_configuration(const Triangulation& K, const std::vector<double>& I, std::vector<Vec4>& X)
{
    std::vector<Vec3> pts;
    for (int e = 0; e < K.num_edges(); ++e) {
        if (I[e] != 1.0) continue;
        Vec4 P = add(X[K.edge(e).a], X[K.edge(e).b]);
        if (P[3] < 0)
            for (double& x : P) x = -x;
        pts.push_back({P[0] / P[3], P[1] / P[3], P[2] / P[3]});
    }
    if (pts.size() < 3) return;
    Lorentz L = centering_boost(pts);
    for (auto& x : X) x = apply_L(L, x);
}
}  // namespace

Circle apply_lorentz(const Lorentz& L, const Circle& C) { return from_desitter(apply_L(L, desitter(C)), true); }

LayoutResult sphere_pack(const Triangulation& K, const EdgeLabel& phi, const SphereOptions& opt)
{
    if (K.kind() != SurfaceKind::Sphere) throw InvalidInput("sphere_pack needs a triangulated sphere");
    phi.validate(K);
    const int V = K.num_vertices(), E = K.num_edges();
    const int vinf = opt.v_inf >= 0 ? opt.v_inf : V - 1;
    if (vinf >= V) throw InvalidInput("v_inf out of range");

    std::vector<double> I(E);
    for (int e = 0; e < E; ++e) I[e] = phi.inversive(e);
    bool tangent_at_inf = true;
    for (int w : K.flower(vinf))
        if (I[K.edge_index(vinf, w)] != 1.0) tangent_at_inf = false;

    std::vector<Vec4> X(V);
    {
        // maximal packing of the complement of v_inf; with data at v_inf this seeds the continuation
        VertexRemoval rem = remove_vertex_star(K, vinf);
        EdgeLabel dphi;
        if (tangent_at_inf && !phi.is_tangency()) {
            dphi.mode = EdgeLabel::Mode::Inversive;
            dphi.values.resize(rem.disk.num_edges());
            for (int e = 0; e < rem.disk.num_edges(); ++e) {
                const Edge& ed = rem.disk.edge(e);
                dphi.values[e] = I[K.edge_index(rem.to_old[ed.a], rem.to_old[ed.b])];
            }
        }
        SolveResult sr = maximal_disk_label(rem.disk, dphi, opt.solve);
        // only a seed: the Lorentz polish below restores full accuracy
        LayoutOptions seed;
        seed.tol = 1e-4;
        LayoutResult dl = layout_disk(rem.disk, dphi, sr.label, seed);
        for (int i = 0; i < rem.disk.num_vertices(); ++i) X[rem.to_old[i]] = desitter(dl.circles[i]);
        X[vinf] = desitter(Circle::plane(0.0, 1.0, -1));
    }

    if (!tangent_at_inf || !phi.is_tangency()) {
        std::vector<double> I0(E, 1.0);
        if (tangent_at_inf) I0 = I;
        center_configuration(K, I0, X);
        // continuation from the seed data I0 to the requested data I, linear in the overlap angle
        std::vector<double> a0(E), a1(E), It(E);
        for (int e = 0; e < E; ++e) {
            a0[e] = std::acos(std::clamp(I0[e], -1.0, 1.0));
            a1[e] = I[e] <= 1.0 ? std::acos(std::max(-1.0, I[e])) : 0.0;
        }
        bool has_separated = std::any_of(I.begin(), I.end(), [](double x) { return x > 1.0; });
        double t = 0, h = 0.125;
        while (t < 1) {
            double tn = std::min(1.0, t + h);
            for (int e = 0; e < E; ++e) {
                if (I[e] > 1.0)
                    It[e] = 1 + tn * (I[e] - 1);
                else
                    It[e] = std::cos((1 - tn) * a0[e] + tn * a1[e]);
            }
            std::vector<Vec4> trial = X;
            if (lorentz_newton(K, It, trial, opt.newton_tol)) {
                X = trial;
                t = tn;
                h = std::min(0.25, 2 * h);
            } else {
                h *= 0.5;
                if (h < 1e-4) throw NonConvergence("overlap continuation stalled at t = " + std::to_string(t));
            }
        }
        (void)has_separated;
    } else {
        // the disk layout is only a seed; polish it where the vectors are well scaled
        center_configuration(K, I, X);
        lorentz_newton(K, I, X, opt.newton_tol);
    }
    if (opt.center) center_configuration(K, I, X);

    LayoutResult out;
    out.model = Model::Sphere;
    out.circles.resize(V);
    out.center.resize(V);
    out.horocycle.assign(V, 0);
    for (int v = 0; v < V; ++v) {
        out.circles[v] = from_desitter(X[v], true);
        out.center[v] = stereographic_inverse(out.circles[v].p);
    }
    for (int e = 0; e < E; ++e)
        out.edge_residual =
            std::max(out.edge_residual, std::abs(lorentz(X[K.edge(e).a], X[K.edge(e).b]) - I[e]));
    out.residual = out.edge_residual;
    return out;
}

// ---------------------------------------------------------------- carrier

Carrier carrier(const Triangulation& T, const LayoutResult& L)
{
    Carrier c;
    c.vertices = L.center;
    c.faces = T.faces();
    return c;
}

UnivalenceReport check_univalence(const Triangulation& T, const LayoutResult& L, double tol)
{
    UnivalenceReport rep;
    const int V = T.num_vertices();
    std::vector<cplx> p(V);
    for (int v = 0; v < V; ++v) p[v] = L.model == Model::Disk ? klein(L.center[v]) : L.center[v];
    if (L.model != Model::Sphere && L.model != Model::Torus) {
        for (const auto& t : T.faces())
            if (orient(p[t[0]], p[t[1]], p[t[2]]) <= 0) ++rep.negative_faces;
        for (int v : T.interior_vertices()) {
            const auto& fl = T.flower(v);
            double wind = 0;
            for (std::size_t i = 0; i < fl.size(); ++i) {
                cplx a = p[fl[i]] - p[v], b = p[fl[(i + 1) % fl.size()]] - p[v];
                wind += std::arg(b / a);
            }
            if (std::lround(wind / (2 * kPi)) != 1) rep.wrapped_vertices.push_back(v);
        }
    }
    rep.locally_univalent = rep.negative_faces == 0 && rep.wrapped_vertices.empty();

    std::vector<int> order(V);
    for (int v = 0; v < V; ++v) order[v] = v;
    auto overlapping = [&](int a, int b) {
        if (T.edge_index(a, b) >= 0) return false;
        return inversive_distance(L.circles[a], L.circles[b]) < 1 - tol;
    };
    if (L.model == Model::Sphere) {
        for (int a = 0; a < V; ++a)
            for (int b = a + 1; b < V; ++b)
                if (overlapping(a, b)) rep.overlaps.push_back({a, b});
    } else {
        // sweep over x-extents
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return L.circles[a].c.real() - L.circles[a].r < L.circles[b].c.real() - L.circles[b].r;
        });
        for (int i = 0; i < V; ++i) {
            int a = order[i];
            double right = L.circles[a].c.real() + L.circles[a].r;
            for (int j = i + 1; j < V; ++j) {
                int b = order[j];
                if (L.circles[b].c.real() - L.circles[b].r >= right) break;
                if (overlapping(a, b)) rep.overlaps.push_back({std::min(a, b), std::max(a, b)});
            }
        }
        std::sort(rep.overlaps.begin(), rep.overlaps.end());
    }
    rep.univalent = rep.locally_univalent && rep.overlaps.empty();
    return rep;
}

}  // namespace katpack
