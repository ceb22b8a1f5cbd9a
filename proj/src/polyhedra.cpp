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
#include "katpack/polyhedra.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <set>

#include "katpack/error.hpp"

namespace katpack
{

namespace
{
constexpr double kPi = std::numbers::pi;

using DirMap = std::map<std::pair<int, int>, int>;  // directed edge -> face

DirMap directed_faces(const AbstractPolyhedron& P)
{
    DirMap m;
    for (std::size_t f = 0; f < P.faces.size(); ++f) {
        const auto& c = P.faces[f];
        for (std::size_t i = 0; i < c.size(); ++i) {
            auto key = std::make_pair(c[i], c[(i + 1) % c.size()]);
            if (!m.emplace(key, static_cast<int>(f)).second)
                throw NotPolyhedral("directed edge " + std::to_string(key.first) + "->" + std::to_string(key.second) +
                                    " appears twice");
        }
    }
    return m;
}

int successor(const std::vector<int>& cyc, int v)
{
    for (std::size_t i = 0; i < cyc.size(); ++i)
        if (cyc[i] == v) return cyc[(i + 1) % cyc.size()];
    return -1;
}

// Faces around v in rotation order.
std::vector<int> faces_around(const AbstractPolyhedron& P, const DirMap& dm, int v, int start)
{
    std::vector<int> out;
    int f = start;
    do {
        out.push_back(f);
        int w = successor(P.faces[f], v);
        auto it = dm.find({w, v});
        if (it == dm.end()) throw NotPolyhedral("edge " + std::to_string(v) + "-" + std::to_string(w) + " has one face");
        f = it->second;
        if (out.size() > P.faces.size()) throw NotPolyhedral("vertex link does not close");
    } while (f != start);
    return out;
}

std::vector<std::vector<int>> adjacency(const AbstractPolyhedron& P)
{
    std::vector<std::set<int>> s(P.num_vertices);
    for (const auto& c : P.faces)
        for (std::size_t i = 0; i < c.size(); ++i) {
            int a = c[i], b = c[(i + 1) % c.size()];
            s[a].insert(b);
            s[b].insert(a);
        }
    std::vector<std::vector<int>> out(P.num_vertices);
    for (int v = 0; v < P.num_vertices; ++v) out[v].assign(s[v].begin(), s[v].end());
    return out;
}
}  // namespace

std::vector<std::pair<int, int>> polyhedron_edges(const AbstractPolyhedron& P)
{
    std::vector<std::pair<int, int>> out;
    std::set<std::pair<int, int>> seen;
    for (const auto& c : P.faces)
        for (std::size_t i = 0; i < c.size(); ++i) {
            int a = c[i], b = c[(i + 1) % c.size()];
            auto k = std::minmax(a, b);
            if (seen.insert(k).second) out.push_back(k);
        }
    return out;
}

bool is_three_connected(const AbstractPolyhedron& P)
{
    const int V = P.num_vertices;
    if (V < 4) return false;
    auto adj = adjacency(P);
    std::vector<char> gone(V, 0), seen(V, 0);
    auto connected = [&]() {
        std::fill(seen.begin(), seen.end(), 0);
        int start = -1, count = 0, alive = 0;
        for (int v = 0; v < V; ++v)
            if (!gone[v]) {
                ++alive;
                if (start < 0) start = v;
            }
        std::vector<int> st{start};
        seen[start] = 1;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            ++count;
            for (int w : adj[v])
                if (!gone[w] && !seen[w]) {
                    seen[w] = 1;
                    st.push_back(w);
                }
        }
        return count == alive;
    };
    if (!connected()) return false;
    for (int u = 0; u < V; ++u)
        for (int v = u + 1; v < V; ++v) {
            gone[u] = gone[v] = 1;
            bool ok = connected();
            gone[u] = gone[v] = 0;
            if (!ok) return false;
        }
    return true;
}

void validate_polyhedron(const AbstractPolyhedron& P)
{
    const int V = P.num_vertices;
    if (V < 4 || P.faces.size() < 4) throw NotPolyhedral("too few vertices or faces");
    std::vector<int> first_face(V, -1);
    for (std::size_t f = 0; f < P.faces.size(); ++f) {
        const auto& c = P.faces[f];
        if (c.size() < 3) throw NotPolyhedral("face " + std::to_string(f) + " has fewer than 3 vertices");
        std::set<int> u(c.begin(), c.end());
        if (u.size() != c.size()) throw NotPolyhedral("face " + std::to_string(f) + " repeats a vertex");
        for (int v : c) {
            if (v < 0 || v >= V) throw NotPolyhedral("vertex out of range in face " + std::to_string(f));
            if (first_face[v] < 0) first_face[v] = static_cast<int>(f);
        }
    }
    for (int v = 0; v < V; ++v)
        if (first_face[v] < 0) throw NotPolyhedral("vertex " + std::to_string(v) + " is on no face");
    DirMap dm = directed_faces(P);
    for (const auto& [k, f] : dm)
        if (!dm.count({k.second, k.first}))
            throw NotPolyhedral("edge " + std::to_string(k.first) + "-" + std::to_string(k.second) + " has one face");
    std::vector<int> deg(V, 0);
    for (const auto& [k, f] : dm) ++deg[k.first];
    for (int v = 0; v < V; ++v)
        if (static_cast<int>(faces_around(P, dm, v, first_face[v]).size()) != deg[v])
            throw NotPolyhedral("link of vertex " + std::to_string(v) + " is not a single cycle");
    int E = static_cast<int>(dm.size()) / 2;
    if (V - E + static_cast<int>(P.faces.size()) != 2) throw NotPolyhedral("Euler characteristic is not 2");
    if (!is_three_connected(P)) throw NotPolyhedral("graph is not 3-connected");
}

AbstractPolyhedron dual(const AbstractPolyhedron& P)
{
    DirMap dm = directed_faces(P);
    std::vector<int> first_face(P.num_vertices, -1);
    for (std::size_t f = 0; f < P.faces.size(); ++f)
        for (int v : P.faces[f])
            if (first_face[v] < 0) first_face[v] = static_cast<int>(f);
    AbstractPolyhedron D;
    D.num_vertices = static_cast<int>(P.faces.size());
    for (int v = 0; v < P.num_vertices; ++v) D.faces.push_back(faces_around(P, dm, v, first_face[v]));
    return D;
}

namespace solids
{
AbstractPolyhedron tetrahedron() { return {4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}}}; }

AbstractPolyhedron octahedron()
{
    return {6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}, {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}}};
}

AbstractPolyhedron cube() { return dual(octahedron()); }

AbstractPolyhedron icosahedron()
{
    AbstractPolyhedron P;
    P.num_vertices = 12;
    auto u = [](int i) { return 1 + (i % 5); };
    auto l = [](int i) { return 6 + (i % 5); };
    for (int i = 0; i < 5; ++i) {
        P.faces.push_back({0, u(i), u(i + 1)});
        P.faces.push_back({u(i), l(i), u(i + 1)});
        P.faces.push_back({u(i + 1), l(i), l(i + 1)});
        P.faces.push_back({11, l(i + 1), l(i)});
    }
    return P;
}

AbstractPolyhedron dodecahedron() { return dual(icosahedron()); }

AbstractPolyhedron prism(int n)
{
    if (n < 3) throw InvalidInput("prism needs n >= 3");
    AbstractPolyhedron P;
    P.num_vertices = 2 * n;
    std::vector<int> bottom, top;
    for (int i = n - 1; i >= 0; --i) bottom.push_back(i);
    for (int i = 0; i < n; ++i) top.push_back(n + i);
    P.faces.push_back(bottom);
    P.faces.push_back(top);
    for (int i = 0; i < n; ++i) P.faces.push_back({i, (i + 1) % n, n + (i + 1) % n, n + i});
    return P;
}

AbstractPolyhedron truncate(const AbstractPolyhedron& P, const std::vector<int>& verts)
{
    validate_polyhedron(P);
    std::set<int> cut(verts.begin(), verts.end());
    int next_id = P.num_vertices;
    std::map<std::pair<int, int>, int> tv;  // (v, w) -> new vertex on edge vw near v
    auto t = [&](int v, int w) {
        auto it = tv.find({v, w});
        if (it != tv.end()) return it->second;
        return tv[{v, w}] = next_id++;
    };
    AbstractPolyhedron Q;
    std::map<int, int> next_around;  // new face edges t_vw -> t_vu
    std::map<int, int> owner;
    for (const auto& c : P.faces) {
        std::vector<int> nc;
        const int n = static_cast<int>(c.size());
        for (int i = 0; i < n; ++i) {
            int v = c[i];
            if (!cut.count(v)) {
                nc.push_back(v);
                continue;
            }
            int u = c[(i + n - 1) % n], w = c[(i + 1) % n];
            int a = t(v, u), b = t(v, w);
            nc.push_back(a);
            nc.push_back(b);
            next_around[b] = a;
            owner[b] = v;
        }
        Q.faces.push_back(nc);
    }
    for (int v : cut) {
        int start = -1;
        for (const auto& [b, o] : owner)
            if (o == v) {
                start = b;
                break;
            }
        if (start < 0) throw InvalidInput("vertex to truncate not found");
        std::vector<int> nf;
        int x = start;
        do {
            nf.push_back(x);
            x = next_around.at(x);
        } while (x != start);
        Q.faces.push_back(nf);
    }
    // renumber densely, dropping the cut vertices
    std::vector<int> map(next_id, -1);
    int k = 0;
    for (int v = 0; v < next_id; ++v)
        if (!(v < P.num_vertices && cut.count(v))) map[v] = k++;
    for (auto& f : Q.faces)
        for (int& v : f) v = map[v];
    Q.num_vertices = k;
    validate_polyhedron(Q);
    return Q;
}

AbstractPolyhedron truncate_all(const AbstractPolyhedron& P)
{
    std::vector<int> all(P.num_vertices);
    for (int v = 0; v < P.num_vertices; ++v) all[v] = v;
    return truncate(P, all);
}
}  // namespace solids

// ---------------------------------------------------------------- midscription

MidscribedMesh midscribe(const AbstractPolyhedron& P, const MidscribeOptions& opt)
{
    validate_polyhedron(P);
    StarComplex S = face_star_complex(P);
    SphereOptions so;
    so.v_inf = opt.v_inf;
    so.center = opt.center;
    LayoutResult L = sphere_pack(S.K, S.phi, so);

    const int V = P.num_vertices;
    MidscribedMesh M;
    M.faces = P.faces;
    for (int v = 0; v < V; ++v) {
        const Circle& C = L.circles[v];
        if (!(C.rho < kPi / 2)) throw LayoutInconsistent("vertex circle " + std::to_string(v) + " is not a small circle");
        double k = 1 / std::cos(C.rho);
        M.vertices.push_back({C.p[0] * k, C.p[1] * k, C.p[2] * k});
        M.vertex_circles.push_back(C);
    }
    for (std::size_t f = 0; f < P.faces.size(); ++f) {
        const Circle& C = L.circles[S.face_vertex(static_cast<int>(f))];
        M.face_circles.push_back(C);
        for (int v : P.faces[f]) {
            const Vec3& x = M.vertices[v];
            double d = C.p[0] * x[0] + C.p[1] * x[1] + C.p[2] * x[2] - std::cos(C.rho);
            M.max_planarity_error = std::max(M.max_planarity_error, std::abs(d));
        }
    }
    for (auto [a, b] : polyhedron_edges(P)) {
        EdgeTangency et;
        et.a = a;
        et.b = b;
        et.point = tangency_point_sphere(M.vertex_circles[a], M.vertex_circles[b]);
        const Vec3 &A = M.vertices[a], &B = M.vertices[b];
        Vec3 d{B[0] - A[0], B[1] - A[1], B[2] - A[2]};
        double dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        et.param = -(A[0] * d[0] + A[1] * d[1] + A[2] * d[2]) / dd;
        Vec3 c{A[0] + et.param * d[0], A[1] + et.param * d[1], A[2] + et.param * d[2]};
        et.distance = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        et.interior = et.param > 1e-9 && et.param < 1 - 1e-9;
        double err = std::abs(et.distance - 1);
        M.max_tangency_error = std::max(M.max_tangency_error, err);
        if (et.interior && err <= opt.tol) ++M.tangent_edges;
        M.edges.push_back(et);
    }
    return M;
}

void write_obj(std::ostream& os, const MidscribedMesh& M)
{
    os.precision(17);
    os << "# midscribed polyhedron, edges tangent to the unit sphere\n";
    for (const auto& v : M.vertices) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& f : M.faces) {
        os << 'f';
        for (int v : f) os << ' ' << v + 1;
        os << '\n';
    }
    for (const auto& e : M.edges)
        os << "# tangency " << e.a + 1 << ' ' << e.b + 1 << ' ' << e.point[0] << ' ' << e.point[1] << ' '
           << e.point[2] << '\n';
}

// ---------------------------------------------------------------- exact LP

namespace
{
struct LpRow {
    std::vector<std::pair<int, mpq_class>> a;
    int sense{0};  // -1: <=, 0: =, 1: >=
    mpq_class b;
};

struct LpSolution {
    bool feasible{false};
    mpq_class value;
    std::vector<mpq_class> x;
};

// Dense two-phase tableau simplex over the rationals; all variables >= 0, objective bounded.
LpSolution lp_maximize(int n, const std::vector<mpq_class>& c, std::vector<LpRow> rows)
{
    const int m = static_cast<int>(rows.size());
    for (auto& r : rows)
        if (r.b < 0) {
            for (auto& [j, v] : r.a) v = -v;
            r.b = -r.b;
            r.sense = -r.sense;
        }
    int nslack = 0, nart = 0;
    for (const auto& r : rows) {
        if (r.sense != 0) ++nslack;
        if (r.sense >= 0) ++nart;
    }
    const int ncol = n + nslack + nart, rhs = ncol;
    const int art0 = n + nslack;
    std::vector<std::vector<mpq_class>> T(m, std::vector<mpq_class>(ncol + 1));
    std::vector<int> basis(m);
    int si = n, ai = art0;
    for (int i = 0; i < m; ++i) {
        for (const auto& [j, v] : rows[i].a) T[i][j] += v;
        T[i][rhs] = rows[i].b;
        if (rows[i].sense == -1) {
            T[i][si] = 1;
            basis[i] = si++;
        } else {
            if (rows[i].sense == 1) T[i][si++] = -1;
            T[i][ai] = 1;
            basis[i] = ai++;
        }
    }

    std::vector<mpq_class> z(ncol + 1);
    std::vector<char> allowed(ncol, 1);

    auto pivot = [&](int r, int col) {
        mpq_class p = T[r][col];
        for (auto& x : T[r])
            if (sgn(x) != 0) x /= p;
        for (int i = 0; i < m; ++i) {
            if (i == r || sgn(T[i][col]) == 0) continue;
            mpq_class f = T[i][col];
            for (int j = 0; j <= ncol; ++j)
                if (sgn(T[r][j]) != 0) T[i][j] -= f * T[r][j];
        }
        if (sgn(z[col]) != 0) {
            mpq_class f = z[col];
            for (int j = 0; j <= ncol; ++j)
                if (sgn(T[r][j]) != 0) z[j] -= f * T[r][j];
        }
        basis[r] = col;
    };
    auto optimize = [&]() {
        int degenerate = 0;
        for (int guard = 0; guard < 100000; ++guard) {
            int col = -1;
            bool bland = degenerate > 20;
            for (int j = 0; j < ncol; ++j) {
                if (!allowed[j] || sgn(z[j]) >= 0) continue;
                if (col < 0 || (!bland && z[j] < z[col])) col = j;
                if (bland) break;
            }
            if (col < 0) return true;
            int r = -1;
            mpq_class best;
            for (int i = 0; i < m; ++i) {
                if (sgn(T[i][col]) <= 0) continue;
                mpq_class ratio = T[i][rhs] / T[i][col];
                if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r < 0) return false;  // unbounded
            degenerate = sgn(best) == 0 ? degenerate + 1 : 0;
            pivot(r, col);
        }
        return false;
    };

    // phase 1: maximize -sum(artificials)
    for (int j = art0; j < ncol; ++j) z[j] = 1;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= art0)
            for (int j = 0; j <= ncol; ++j) z[j] -= T[i][j];
    optimize();
    LpSolution sol;
    if (sgn(z[rhs]) != 0) return sol;  // infeasible
    std::vector<char> dead(m, 0);
    for (int i = 0; i < m; ++i) {
        if (basis[i] < art0) continue;
        int col = -1;
        for (int j = 0; j < art0 && col < 0; ++j)
            if (sgn(T[i][j]) != 0) col = j;
        if (col >= 0)
            pivot(i, col);
        else
            dead[i] = 1;  // redundant equality
    }
    for (int j = art0; j < ncol; ++j) allowed[j] = 0;

    // phase 2
    std::fill(z.begin(), z.end(), mpq_class(0));
    for (int j = 0; j < n; ++j) z[j] = -c[j];
    for (int i = 0; i < m; ++i) {
        if (dead[i] || sgn(z[basis[i]]) == 0) continue;
        mpq_class f = z[basis[i]];
        for (int j = 0; j <= ncol; ++j) z[j] -= f * T[i][j];
    }
    if (!optimize()) return sol;
    sol.feasible = true;
    sol.value = z[rhs];
    sol.x.assign(n, 0);
    for (int i = 0; i < m; ++i)
        if (!dead[i] && basis[i] < n) sol.x[basis[i]] = T[i][rhs];
    return sol;
}
}  // namespace

ScribabilityVerdict circumscribable_type(const AbstractPolyhedron& P, long budget)
{
    validate_polyhedron(P);
    auto edges = polyhedron_edges(P);
    const int E = static_cast<int>(edges.size()), V = P.num_vertices;
    std::map<std::pair<int, int>, int> eid;
    for (int e = 0; e < E; ++e) eid[edges[e]] = e;
    auto edge_of = [&](int a, int b) { return eid.at(std::minmax(a, b)); };
    std::set<std::vector<int>> face_sets;
    for (const auto& f : P.faces) {
        std::vector<int> s(f.begin(), f.end());
        std::sort(s.begin(), s.end());
        face_sets.insert(s);
    }
    auto adj = adjacency(P);

    // variables: y_e = x_e - t (E of them), tp, tn with t = tp - tn; labels in units of pi
    const int TP = E, TN = E + 1, n = E + 2;
    std::vector<mpq_class> c(n, 0);
    c[TP] = 1;
    c[TN] = -1;
    std::vector<LpRow> rows;
    for (int e = 0; e < E; ++e) rows.push_back({{{e, 1}, {TP, 2}, {TN, -2}}, -1, 1});
    for (const auto& f : P.faces) {
        LpRow r;
        for (std::size_t i = 0; i < f.size(); ++i) r.a.push_back({edge_of(f[i], f[(i + 1) % f.size()]), 1});
        int k = static_cast<int>(f.size());
        r.a.push_back({TP, k});
        r.a.push_back({TN, -k});
        r.sense = 0;
        r.b = 2;
        rows.push_back(r);
    }

    ScribabilityVerdict out;
    for (int round = 0; round < 1000; ++round) {
        LpSolution s = lp_maximize(n, c, rows);
        if (!s.feasible) throw NonConvergence("margin LP failed to solve");
        mpq_class t = s.value;
        out.margin = t.get_d();
        out.margin_exact = t.get_str();
        if (sgn(t) <= 0) {
            out.status = CheckStatus::Fail;
            out.face_level_infeasible = round == 0;
            out.message = out.face_level_infeasible ? "face equations admit no labels in (0, pi)"
                                                     : "circuit conditions admit no positive margin";
            return out;
        }
        std::vector<mpq_class> x(E);
        std::vector<double> xd(E);
        for (int e = 0; e < E; ++e) {
            x[e] = s.x[e] + t;
            xd[e] = x[e].get_d();
        }
        // circuits with label sum below 2 + t, found by a weight-pruned depth-first search
        const mpq_class bound = 2 + t;
        const double bound_d = bound.get_d() + 1e-9;
        std::vector<std::pair<mpq_class, std::vector<int>>> found;
        long nodes = 0;
        bool exhausted = false;
        std::vector<int> path;
        std::vector<char> on(V, 0);
        std::function<void(int, double)> dfs = [&](int s0, double w) {
            if (++nodes > budget) {
                exhausted = true;
                return;
            }
            int v = path.back();
            for (int u : adj[v]) {
                if (exhausted) return;
                double nw = w + xd[edge_of(v, u)];
                if (nw >= bound_d) continue;
                if (u == s0 && path.size() >= 3 && path[1] < path.back()) {
                    std::vector<int> key(path);
                    std::sort(key.begin(), key.end());
                    if (face_sets.count(key)) continue;
                    mpq_class sum = x[edge_of(v, u)];
                    for (std::size_t i = 0; i + 1 < path.size(); ++i) sum += x[edge_of(path[i], path[i + 1])];
                    if (sum < bound) found.push_back({sum, path});
                    continue;
                }
                if (u <= s0 || on[u]) continue;
                on[u] = 1;
                path.push_back(u);
                dfs(s0, nw);
                path.pop_back();
                on[u] = 0;
            }
        };
        for (int s0 = 0; s0 < V && !exhausted; ++s0) {
            path = {s0};
            on[s0] = 1;
            dfs(s0, 0.0);
            on[s0] = 0;
        }
        if (exhausted) {
            out.status = CheckStatus::Inconclusive;
            out.message = "circuit search budget exhausted";
            return out;
        }
        if (found.empty()) {
            out.status = CheckStatus::Pass;
            out.theta.resize(E);
            for (int e = 0; e < E; ++e) out.theta[e] = kPi * xd[e];
            out.message = "labels found with margin " + out.margin_exact + " pi";
            return out;
        }
        std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (found.size() > 50) found.resize(50);
        for (const auto& [sum, cyc] : found) {
            LpRow r;
            for (std::size_t i = 0; i < cyc.size(); ++i)
                r.a.push_back({edge_of(cyc[i], cyc[(i + 1) % cyc.size()]), 1});
            int k = static_cast<int>(cyc.size()) - 1;
            r.a.push_back({TP, k});
            r.a.push_back({TN, -k});
            r.sense = 1;
            r.b = 2;
            rows.push_back(r);
            ++out.circuits_added;
        }
    }
    out.status = CheckStatus::Inconclusive;
    out.message = "cut generation did not settle";
    return out;
}

ScribabilityVerdict inscribable_type(const AbstractPolyhedron& P, long budget)
{
    validate_polyhedron(P);
    return circumscribable_type(dual(P), budget);
}

}  // namespace katpack
