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
#include "katpack/refine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <unordered_set>

#include "katpack/error.hpp"

namespace katpack
{

namespace
{

constexpr double kSqrt3 = std::numbers::sqrt3;

std::int64_t lattice_key(int i, int j)
{
    return (static_cast<std::int64_t>(i) + (1LL << 30)) << 32 | static_cast<std::int64_t>(j + (1LL << 30));
}

std::int64_t face_key(int i, int j, bool up) { return lattice_key(i, j) * 2 + (up ? 1 : 0); }

double signed_area(const Polygon& P)
{
    double a = 0;
    for (std::size_t k = 0; k < P.size(); ++k) {
        const cplx& p = P[k];
        const cplx& q = P[(k + 1) % P.size()];
        a += p.real() * q.imag() - q.real() * p.imag();
    }
    return a / 2;
}

cplx centroid(const Polygon& P)
{
    double A = signed_area(P);
    cplx c{};
    for (std::size_t k = 0; k < P.size(); ++k) {
        const cplx& p = P[k];
        const cplx& q = P[(k + 1) % P.size()];
        double cr = p.real() * q.imag() - q.real() * p.imag();
        c += (p + q) * cr;
    }
    return c / (6 * A);
}

bool inside(const Polygon& P, cplx z)
{
    bool in = false;
    for (std::size_t k = 0, m = P.size() - 1; k < P.size(); m = k++) {
        const cplx& a = P[k];
        const cplx& b = P[m];
        if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
            double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
            if (z.real() < x) in = !in;
        }
    }
    return in;
}

double segment_distance(cplx z, cplx a, cplx b)
{
    cplx d = b - a;
    double L = std::norm(d);
    double t = L > 0 ? std::clamp(((z - a) * std::conj(d)).real() / L, 0.0, 1.0) : 0.0;
    return std::abs(z - (a + t * d));
}

double boundary_distance(const Polygon& P, cplx z)
{
    double d = kInf;
    for (std::size_t k = 0; k < P.size(); ++k) d = std::min(d, segment_distance(z, P[k], P[(k + 1) % P.size()]));
    return d;
}

struct LatticeFace {
    int i, j;
    bool up;
    std::array<std::int64_t, 3> v;
};

std::array<std::array<int, 2>, 3> face_corners(int i, int j, bool up)
{
    if (up) return {{{i, j}, {i + 1, j}, {i, j + 1}}};
    return {{{i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
}

// Largest edge-connected component of the given faces.
std::vector<int> largest_component(const std::vector<LatticeFace>& F, const std::vector<int>& alive)
{
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<int>> by_edge;
    for (int f : alive)
        for (int k = 0; k < 3; ++k) {
            auto a = F[f].v[k], b = F[f].v[(k + 1) % 3];
            by_edge[{std::min(a, b), std::max(a, b)}].push_back(f);
        }
    std::map<int, int> comp;
    std::vector<int> best;
    for (int f0 : alive) {
        if (comp.count(f0)) continue;
        std::vector<int> members{f0}, stack{f0};
        comp[f0] = f0;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                auto a = F[f].v[k], b = F[f].v[(k + 1) % 3];
                for (int g : by_edge[{std::min(a, b), std::max(a, b)}])
                    if (!comp.count(g)) {
                        comp[g] = f0;
                        members.push_back(g);
                        stack.push_back(g);
                    }
            }
        }
        if (members.size() > best.size()) best = std::move(members);
    }
    std::sort(best.begin(), best.end());
    return best;
}

// Drops every fan at a pinch vertex except the largest one. Returns true when something changed.
bool split_pinches(const std::vector<LatticeFace>& F, std::vector<int>& alive)
{
    std::map<std::int64_t, std::vector<int>> at;
    for (int f : alive)
        for (auto v : F[f].v) at[v].push_back(f);
    std::set<int> drop;
    for (auto& [v, fs] : at) {
        // fans: faces around v connected through edges that contain v
        std::map<int, int> fan;
        std::vector<std::vector<int>> fans;
        for (int f0 : fs) {
            if (fan.count(f0)) continue;
            fans.emplace_back();
            std::vector<int> stack{f0};
            fan[f0] = static_cast<int>(fans.size()) - 1;
            while (!stack.empty()) {
                int f = stack.back();
                stack.pop_back();
                fans.back().push_back(f);
                for (int g : fs) {
                    if (fan.count(g)) continue;
                    int shared = 0;
                    for (auto a : F[f].v)
                        for (auto b : F[g].v) shared += (a == b && a != v);
                    if (shared > 0) {
                        fan[g] = fan[f0];
                        stack.push_back(g);
                    }
                }
            }
        }
        if (fans.size() < 2) continue;
        std::size_t keep = 0;
        for (std::size_t k = 1; k < fans.size(); ++k)
            if (fans[k].size() > fans[keep].size()) keep = k;
        for (std::size_t k = 0; k < fans.size(); ++k)
            if (k != keep) drop.insert(fans[k].begin(), fans[k].end());
    }
    if (drop.empty()) return false;
    std::vector<int> rest;
    for (int f : alive)
        if (!drop.count(f)) rest.push_back(f);
    alive = std::move(rest);
    return true;
}

}  // namespace

// ---------------------------------------------------------------- cutout

cplx Cutout::lattice_point(int i, int j) const
{
    return origin + 2 * eps * cplx(i + 0.5 * j, 0.5 * kSqrt3 * j);
}

int Cutout::vertex_at(int i, int j) const
{
    auto it = vertex_of.find(lattice_key(i, j));
    return it == vertex_of.end() ? -1 : it->second;
}

int Cutout::locate(cplx z, std::array<double, 3>& bary) const
{
    cplx w = (z - origin) / (2 * eps);
    double fj = w.imag() / (0.5 * kSqrt3);
    double fi = w.real() - 0.5 * fj;
    const int i0 = static_cast<int>(std::floor(fi)), j0 = static_cast<int>(std::floor(fj));
    // the cell's own triangle first, then neighbors whose closure holds z (points on the carrier edge)
    int best = -1;
    double best_min = -kInf;
    for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
            for (bool up : {true, false}) {
                auto it = face_at.find(face_key(i0 + di, j0 + dj, up));
                if (it == face_at.end()) continue;
                double a = fi - (i0 + di), b = fj - (j0 + dj);
                std::array<double, 3> t = up ? std::array<double, 3>{1 - a - b, a, b}
                                             : std::array<double, 3>{1 - b, a + b - 1, 1 - a};
                double m = std::min({t[0], t[1], t[2]});
                if (m > best_min) {
                    best_min = m;
                    best = it->second;
                    bary = t;
                }
            }
    return best_min >= -1e-9 ? best : -1;
}

Cutout hex_cutout(const Polygon& domain_in, double eps, CutoutRule rule)
{
    if (domain_in.size() < 3) throw InvalidInput("domain needs at least 3 vertices");
    if (!(eps > 0) || !std::isfinite(eps)) throw InvalidInput("eps must be positive");
    Polygon P = domain_in;
    double A = signed_area(P);
    if (std::abs(A) <= 0) throw InvalidInput("domain has zero area");
    if (A < 0) std::reverse(P.begin(), P.end());

    Cutout out;
    out.eps = eps;
    out.origin = centroid(P);
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (const auto& p : P) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    const double h = kSqrt3 * eps;
    const int j_lo = static_cast<int>(std::floor((ymin - out.origin.imag()) / h)) - 1;
    const int j_hi = static_cast<int>(std::ceil((ymax - out.origin.imag()) / h)) + 1;
    const double span = (xmax - xmin) / (2 * eps) * (j_hi - j_lo + 1.0);
    if (span > 5e7) throw SizeBudgetExceeded("cutout would hold about " + std::to_string(span) + " lattice points");

    std::unordered_set<std::int64_t> keep;
    for (int j = j_lo; j <= j_hi; ++j) {
        int i_lo = static_cast<int>(std::floor((xmin - out.origin.real()) / (2 * eps) - 0.5 * j)) - 1;
        int i_hi = static_cast<int>(std::ceil((xmax - out.origin.real()) / (2 * eps) - 0.5 * j)) + 1;
        for (int i = i_lo; i <= i_hi; ++i) {
            cplx z = out.lattice_point(i, j);
            if (!inside(P, z) && boundary_distance(P, z) > 1e-12 * eps) continue;
            if (rule == CutoutRule::ClosedDisk && boundary_distance(P, z) < eps * (1 - 1e-12)) continue;
            keep.insert(lattice_key(i, j));
        }
    }

    std::vector<LatticeFace> F;
    for (auto k : keep) {
        int i = static_cast<int>((k >> 32) - (1LL << 30));
        int j = static_cast<int>((k & 0xffffffffLL) - (1LL << 30));
        for (bool up : {true, false}) {
            auto c = face_corners(i, j, up);
            LatticeFace lf{i, j, up, {}};
            bool ok = true;
            for (int m = 0; m < 3; ++m) {
                lf.v[m] = lattice_key(c[m][0], c[m][1]);
                ok = ok && keep.count(lf.v[m]);
            }
            if (ok) F.push_back(lf);
        }
    }
    std::sort(F.begin(), F.end(), [](const LatticeFace& a, const LatticeFace& b) {
        return std::tie(a.j, a.i, a.up) < std::tie(b.j, b.i, b.up);
    });
    if (F.empty()) throw TooCoarse("no lattice triangle fits inside the domain at eps = " + std::to_string(eps));

    std::vector<int> alive(F.size());
    for (std::size_t f = 0; f < F.size(); ++f) alive[f] = static_cast<int>(f);
    alive = largest_component(F, alive);
    while (split_pinches(F, alive)) alive = largest_component(F, alive);

    // vertices numbered row by row
    std::set<std::pair<int, int>> used;
    for (int f : alive)
        for (auto c : face_corners(F[f].i, F[f].j, F[f].up)) used.insert({c[1], c[0]});
    for (const auto& [j, i] : used) {
        out.vertex_of[lattice_key(i, j)] = static_cast<int>(out.ij.size());
        out.ij.push_back({i, j});
        out.points.push_back(out.lattice_point(i, j));
    }
    std::vector<Face> faces;
    for (int f : alive) {
        Face t;
        for (int m = 0; m < 3; ++m) t[m] = out.vertex_of.at(F[f].v[m]);
        out.face_at[face_key(F[f].i, F[f].j, F[f].up)] = static_cast<int>(faces.size());
        faces.push_back(t);
    }
    out.T = Triangulation(std::move(faces));
    if (out.T.kind() != SurfaceKind::Disk)
        throw TooCoarse("cutout is not a disk (" + to_string(out.T.kind()) + ")");
    return out;
}

// ---------------------------------------------------------------- riemann map

std::optional<cplx> DiscreteMap::operator()(cplx z) const
{
    std::array<double, 3> w{};
    int f = source.locate(z, w);
    if (f < 0) return std::nullopt;
    const Face& t = source.T.face(f);
    return w[0] * target[t[0]] + w[1] * target[t[1]] + w[2] * target[t[2]];
}

double DiscreteMap::boundary_tangency_error() const
{
    double e = 0;
    for (int v : source.T.boundary_vertices()) {
        const Circle& c = layout.circles[v];
        e = std::max(e, std::abs(std::abs(c.c) + c.r - 1));
    }
    return e;
}

int DiscreteMap::negative_triangles() const
{
    int n = 0;
    for (const auto& t : source.T.faces()) {
        cplx a = target[t[1]] - target[t[0]], b = target[t[2]] - target[t[0]];
        if ((std::conj(a) * b).imag() <= 0) ++n;
    }
    return n;
}

double DiscreteMap::max_distortion(cplx lo, cplx hi) const
{
    double worst = 1;
    for (const auto& t : source.T.faces()) {
        const auto& p = source.points;
        cplx g = (p[t[0]] + p[t[1]] + p[t[2]]) / 3.0;
        if (g.real() < lo.real() || g.real() > hi.real() || g.imag() < lo.imag() || g.imag() > hi.imag()) continue;
        // f(z) = alpha z + beta conj(z) on edge vectors
        cplx P1 = p[t[1]] - p[t[0]], P2 = p[t[2]] - p[t[0]];
        cplx Q1 = target[t[1]] - target[t[0]], Q2 = target[t[2]] - target[t[0]];
        cplx det = P1 * std::conj(P2) - P2 * std::conj(P1);
        cplx alpha = (Q1 * std::conj(P2) - Q2 * std::conj(P1)) / det;
        cplx beta = (P1 * Q2 - P2 * Q1) / det;
        double ka = std::abs(alpha), kb = std::abs(beta);
        double K = ka > kb ? (ka + kb) / (ka - kb) : kInf;
        worst = std::max(worst, K);
    }
    return worst;
}

DiscreteMap discrete_riemann_map(const Polygon& domain, double eps, cplx x, cplx y, const SolveOptions& opt,
                                 CutoutRule rule)
{
    if (x == y) throw InvalidInput("normalization points must differ");
    DiscreteMap m;
    m.eps = eps;
    m.source = hex_cutout(domain, eps, rule);
    const auto& pts = m.source.points;
    auto nearest = [&](cplx z) {
        int best = -1;
        double d = kInf;
        for (int v = 0; v < static_cast<int>(pts.size()); ++v)
            if (std::abs(pts[v] - z) < d) {
                d = std::abs(pts[v] - z);
                best = v;
            }
        return best;
    };
    m.u = nearest(x);
    m.v = nearest(y);
    if (m.u == m.v) throw TooCoarse("x and y fall on the same circle");
    if (m.source.T.is_boundary(m.u)) throw TooCoarse("x is not covered by an interior circle");

    auto sol = maximal_disk_label(m.source.T, {}, opt);
    m.solve = sol.report;
    LayoutOptions lo;
    lo.root_vertex = m.u;
    m.layout = layout_disk(m.source.T, {}, sol.label, lo);
    cplx rot = std::polar(1.0, -std::arg(m.layout.circles[m.v].c));
    for (auto& c : m.layout.circles) c.c *= rot;
    for (auto& c : m.layout.center) c *= rot;
    m.target.resize(pts.size());
    for (std::size_t v = 0; v < pts.size(); ++v) m.target[v] = m.layout.circles[v].c;
    m.target[m.u] = 0.0;
    return m;
}

// ---------------------------------------------------------------- shapes

namespace
{

using Mat3 = std::array<Vec3, 3>;

Vec3 mul(const Mat3& R, const Vec3& x)
{
    return {R[0][0] * x[0] + R[0][1] * x[1] + R[0][2] * x[2], R[1][0] * x[0] + R[1][1] * x[1] + R[1][2] * x[2],
            R[2][0] * x[0] + R[2][1] * x[1] + R[2][2] * x[2]};
}

// Rotation taking unit a to unit b.
Mat3 rotation_between(const Vec3& a, const Vec3& b)
{
    Vec3 k{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    double s = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    double c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    Mat3 R{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    if (s < 1e-15) {
        if (c > 0) return R;
        // half turn about any axis orthogonal to a
        Vec3 e = std::abs(a[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        double d = e[0] * a[0] + e[1] * a[1] + e[2] * a[2];
        Vec3 n{e[0] - d * a[0], e[1] - d * a[1], e[2] - d * a[2]};
        double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        for (auto& x : n) x /= nn;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) R[i][j] = 2 * n[i] * n[j] - (i == j ? 1 : 0);
        return R;
    }
    for (auto& x : k) x /= s;
    Mat3 Kx{{{0, -k[2], k[1]}, {k[2], 0, -k[0]}, {-k[1], k[0], 0}}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double k2 = 0;
            for (int m = 0; m < 3; ++m) k2 += Kx[i][m] * Kx[m][j];
            R[i][j] += s * Kx[i][j] + (1 - c) * k2;
        }
    return R;
}

double point_segment(const Vec3& p, const Vec3& a, const Vec3& b)
{
    Vec3 d{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    double L = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    double t = 0;
    if (L > 0) t = std::clamp(((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1] + (p[2] - a[2]) * d[2]) / L, 0.0, 1.0);
    double x = p[0] - a[0] - t * d[0], y = p[1] - a[1] - t * d[1], z = p[2] - a[2] - t * d[2];
    return std::sqrt(x * x + y * y + z * z);
}

double directed_hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int m)
{
    double h = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec3& p = a[i];
        const Vec3& q = a[(i + 1) % a.size()];
        for (int k = 0; k < m; ++k) {
            double t = static_cast<double>(k) / m;
            Vec3 z{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2])};
            double d = kInf;
            for (std::size_t j = 0; j < b.size(); ++j) d = std::min(d, point_segment(z, b[j], b[(j + 1) % b.size()]));
            h = std::max(h, d);
        }
    }
    return h;
}

}  // namespace

double polyline_hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int samples_per_segment)
{
    if (a.empty() || b.empty()) throw InvalidInput("empty polyline");
    int m = std::max(1, samples_per_segment);
    return std::max(directed_hausdorff(a, b, m), directed_hausdorff(b, a, m));
}

ShapeResult equilateral_shapes(const Triangulation& K, int n, const ShapeOptions& opt)
{
    if (n < 0) throw InvalidInput("refinement depth must be >= 0");
    const bool sphere = K.kind() == SurfaceKind::Sphere;
    if (!sphere && K.kind() != SurfaceKind::Disk) throw InvalidInput("equilateral_shapes needs a disk or a sphere");

    // predicted size before building anything
    long long V = K.num_vertices() + K.num_edges() + K.num_faces();
    long long F = 6LL * K.num_faces();
    long long E = V + F - K.euler_characteristic();
    for (int k = 0; k < n; ++k) {
        long long V2 = V + E, E2 = 2 * E + 3 * F, F2 = 4 * F;
        V = V2, E = E2, F = F2;
    }
    if (V > opt.max_vertices)
        throw SizeBudgetExceeded(std::to_string(V) + " vertices exceeds the budget of " +
                                 std::to_string(opt.max_vertices));

    ShapeResult out;
    out.depth = n;
    out.model = sphere ? Model::Sphere : Model::Disk;
    const int V0 = K.num_vertices(), E0 = K.num_edges();
    std::vector<std::vector<int>> paths(K.num_faces());
    for (int f = 0; f < K.num_faces(); ++f) {
        const Face& t = K.face(f);
        for (int k = 0; k < 3; ++k) {
            paths[f].push_back(t[k]);
            paths[f].push_back(V0 + K.edge_index(t[k], t[(k + 1) % 3]));
        }
    }
    Triangulation T = barycentric_subdivide(K).tri;
    for (int k = 0; k < n; ++k) {
        const int Vk = T.num_vertices();
        for (auto& path : paths) {
            std::vector<int> next;
            next.reserve(2 * path.size());
            for (std::size_t i = 0; i < path.size(); ++i) {
                next.push_back(path[i]);
                next.push_back(Vk + T.edge_index(path[i], path[(i + 1) % path.size()]));
            }
            path = std::move(next);
        }
        T = hex_refine(T).tri;
    }

    if (sphere) {
        out.anchor = 0;
        out.direction = K.flower(0)[0];
    } else if (!K.interior_vertices().empty()) {
        out.anchor = K.interior_vertices().front();
        out.direction = K.flower(out.anchor)[0];
    } else {
        out.anchor = V0 + E0;  // barycenter of face 0
        out.direction = K.face(0)[0];
    }

    std::vector<Vec3> p3(T.num_vertices());
    std::vector<cplx> p2(T.num_vertices());
    if (sphere) {
        SphereOptions so;
        so.solve = opt.solve;
        out.layout = sphere_pack(T, {}, so);
        // anchor to the south pole (the plane origin), direction onto the positive real axis
        Mat3 R = rotation_between(out.layout.circles[out.anchor].p, Vec3{0, 0, -1});
        Vec3 d = mul(R, out.layout.circles[out.direction].p);
        double th = -std::atan2(d[1], d[0]);
        Mat3 Rz{{{std::cos(th), -std::sin(th), 0}, {std::sin(th), std::cos(th), 0}, {0, 0, 1}}};
        for (int v = 0; v < T.num_vertices(); ++v) {
            auto& c = out.layout.circles[v];
            c.p = mul(Rz, mul(R, c.p));
            p3[v] = c.p;
            p2[v] = stereographic_inverse(c.p);
            out.layout.center[v] = p2[v];
        }
    } else {
        auto sol = maximal_disk_label(T, {}, opt.solve);
        LayoutOptions lo;
        lo.root_vertex = out.anchor;
        out.layout = layout_disk(T, {}, sol.label, lo);
        cplx rot = std::polar(1.0, -std::arg(out.layout.center[out.direction]));
        for (int v = 0; v < T.num_vertices(); ++v) {
            out.layout.circles[v].c *= rot;
            out.layout.center[v] *= rot;
            p2[v] = out.layout.center[v];
            p3[v] = {p2[v].real(), p2[v].imag(), 0.0};
        }
    }

    for (int f = 0; f < K.num_faces(); ++f) {
        FaceShape s;
        s.face = f;
        s.boundary = paths[f];
        for (int v : s.boundary) {
            s.points.push_back(p2[v]);
            s.points3.push_back(p3[v]);
        }
        out.faces.push_back(std::move(s));
    }
    out.refined = std::move(T);
    return out;
}

// ---------------------------------------------------------------- probes

namespace
{

void write_table(std::ostream& os, const std::vector<std::string>& cols, const std::vector<std::vector<double>>& rows)
{
    for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
    os << '\n';
    char buf[64];
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            auto res = std::to_chars(buf, buf + sizeof buf, r[k]);
            os << (k ? "," : "") << std::string_view(buf, res.ptr - buf);
        }
        os << '\n';
    }
}

// Min over interior vertices of (min neighbor radius) / (own radius) in the maximal layout.
double ring_ratio(const Triangulation& T)
{
    auto sol = maximal_disk_label(T);
    auto L = layout_disk(T, {}, sol.label);
    double c = kInf;
    for (int v : T.interior_vertices()) {
        double m = kInf;
        for (int w : T.flower(v)) m = std::min(m, L.circles[w].r);
        c = std::min(c, m / L.circles[v].r);
    }
    return c;
}

}  // namespace

void ProbeReport::write_csv(std::ostream& os) const { write_table(os, columns, rows); }
void ProbeReport::write_summary_csv(std::ostream& os) const { write_table(os, summary_columns, summary); }

bool ProbeReport::flag(const std::string& name) const
{
    for (const auto& [k, v] : flags)
        if (k == name) return v;
    throw InvalidInput("no flag named " + name);
}

ProbeReport ring_constant_probe(int d, int generations, int samples, std::uint64_t seed)
{
    ProbeReport rep;
    rep.kind = "ring";
    rep.columns = {"bound", "instance", "center_degree", "generations", "vertices", "ratio"};
    rep.summary_columns = {"d", "c_hat"};
    if (d < 4) {
        rep.notes.push_back("d < 4: no interior vertex of degree <= 3 survives in these disk families; skipped");
        rep.flags = {{"skipped", true}, {"positive", true}, {"non_increasing", true}};
        return rep;
    }
    if (generations < 1 || samples < 0) throw InvalidInput("generations >= 1 and samples >= 0 required");
    constexpr int kMaxVertices = 20000;
    std::mt19937_64 rng(seed);
    double running = kInf;
    bool positive = true, non_increasing = true;
    double prev = kInf;
    // instance kinds: 0 flower, 1 constant-degree ball, 2 random ball
    for (int b = 4; b <= d; ++b) {
        auto record = [&](int kind, int cdeg, int g, const Triangulation& T) {
            double c = ring_ratio(T);
            rep.rows.push_back({double(b), double(kind), double(cdeg), double(g), double(T.num_vertices()), c});
            running = std::min(running, c);
        };
        if (b < 6) {
            record(0, b, 1, cone_ball(b, 6, 1));
        } else {
            for (int g = 1; g <= generations; ++g) {
                auto T = constant_degree_ball(b, g);
                if (T.num_vertices() > kMaxVertices) break;
                record(1, b, g, T);
            }
            for (int s = 0; s < samples; ++s) {
                std::uniform_int_distribution<int> cd(4, b), od(6, b);
                int c0 = cd(rng);
                std::map<int, int> memo;
                auto deg = [&](int v) {
                    auto it = memo.find(v);
                    if (it != memo.end()) return it->second;
                    return memo[v] = od(rng);
                };
                Triangulation best;
                int gbest = 0;
                for (int g = 1; g <= generations; ++g) {
                    auto T = variable_degree_ball(c0, deg, g);
                    if (T.num_vertices() > kMaxVertices) break;
                    best = std::move(T);
                    gbest = g;
                }
                record(2, c0, gbest, best);
            }
        }
        rep.summary.push_back({double(b), running});
        positive = positive && running > 0;
        non_increasing = non_increasing && running <= prev;
        prev = running;
    }
    rep.flags = {{"skipped", false}, {"positive", positive}, {"non_increasing", non_increasing}};
    return rep;
}

ProbeReport hex_ratio_probe(int n_max, int samples, std::uint64_t seed)
{
    if (n_max < 2) throw InvalidInput("n_max >= 2 required");
    if (samples < 1) throw InvalidInput("samples >= 1 required");
    ProbeReport rep;
    rep.kind = "hexratio";
    rep.columns = {"n", "sample", "deviation"};
    rep.summary_columns = {"n", "c_n"};
    rep.notes.push_back("boundary radii uniform in [0.5, 2]; the exact ball gives c_n = 0 by symmetry");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.5, 2.0);
    std::vector<double> c(n_max + 1, 0.0);
    for (int n = 1; n <= n_max; ++n) {
        auto T = constant_degree_ball(6, n);
        for (int s = 0; s < samples; ++s) {
            PackingProblem P(T, Geometry::Euclidean);
            for (int v : T.boundary_vertices()) P.set_boundary(v, radius(rng));
            auto sol = solve_euclidean(P);
            double dev = 0;
            for (int w : T.flower(0)) dev = std::max(dev, std::abs(sol.label.r[w] / sol.label.r[0] - 1));
            rep.rows.push_back({double(n), double(s), dev});
            c[n] = std::max(c[n], dev);
        }
        rep.summary.push_back({double(n), c[n]});
    }
    bool strict = true;
    for (int n = 2; n <= n_max; ++n) strict = strict && c[n] < c[n - 1];
    rep.flags = {{"strictly_decreasing", strict}};
    if (n_max >= 6) rep.flags.push_back({"c6_below_c3", c[6] < c[3]});
    return rep;
}

}  // namespace katpack
