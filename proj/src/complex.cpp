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
#include "katpack/complex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "katpack/error.hpp"

namespace katpack
{

namespace
{
std::string face_str(int f, const Face& t)
{
    std::ostringstream os;
    os << "face " << f << " (" << t[0] << "," << t[1] << "," << t[2] << ")";
    return os.str();
}
}  // namespace

std::string to_string(SurfaceKind k)
{
    switch (k) {
        case SurfaceKind::Disk: return "disk";
        case SurfaceKind::Sphere: return "sphere";
        case SurfaceKind::Torus: return "torus";
        case SurfaceKind::ClosedGenus: return "closed";
        case SurfaceKind::Bordered: return "bordered";
    }
    return "?";
}

std::string to_string(CheckStatus s)
{
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

long long Triangulation::key(int u, int v, int n)
{
    if (u > v) std::swap(u, v);
    return static_cast<long long>(u) * n + v;
}

Triangulation::Triangulation(std::vector<Face> faces) : faces_(std::move(faces))
{
    if (faces_.empty()) throw InvalidInput("empty face list");
    int vmax = -1;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& t = faces_[f];
        for (int v : t) {
            if (v < 0) throw InvalidInput("negative vertex index in " + face_str(f, t));
            vmax = std::max(vmax, v);
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw NotSimplicial("repeated vertex in " + face_str(f, t));
    }
    nv_ = vmax + 1;
    std::vector<char> used(nv_, 0);
    for (const auto& t : faces_)
        for (int v : t) used[v] = 1;
    for (int v = 0; v < nv_; ++v)
        if (!used[v]) throw InvalidInput("vertex indices not dense: " + std::to_string(v) + " unused");

    {
        std::set<std::array<int, 3>> seen;
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            auto s = faces_[f];
            std::sort(s.begin(), s.end());
            if (!seen.insert(s).second) throw NotSimplicial("duplicate vertex set at " + face_str(f, faces_[f]));
        }
    }

    // directed edges -> face
    std::unordered_map<long long, int> directed;
    directed.reserve(faces_.size() * 3);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& t = faces_[f];
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            long long dk = static_cast<long long>(a) * nv_ + b;
            if (!directed.emplace(dk, static_cast<int>(f)).second)
                throw OrientationInconsistent("directed edge (" + std::to_string(a) + "," +
                                              std::to_string(b) + ") appears twice, second in " +
                                              face_str(f, t));
            long long uk = key(a, b, nv_);
            auto it = edge_of_.find(uk);
            int e;
            if (it == edge_of_.end()) {
                e = static_cast<int>(edges_.size());
                edge_of_.emplace(uk, e);
                edges_.push_back({std::min(a, b), std::max(a, b), -1, -1});
            } else {
                e = it->second;
            }
            auto& ed = edges_[e];
            int& slot = (a == ed.a) ? ed.left : ed.right;
            if (slot >= 0)
                throw NonManifold("edge (" + std::to_string(ed.a) + "," + std::to_string(ed.b) +
                                  ") in more than two faces");
            slot = static_cast<int>(f);
        }
    }

    // links: for each vertex, the link edges x->y of faces (v,x,y)
    std::vector<std::vector<std::pair<int, int>>> link(nv_);
    std::vector<std::vector<int>> link_face(nv_);
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& t = faces_[f];
        for (int k = 0; k < 3; ++k) {
            link[t[k]].emplace_back(t[(k + 1) % 3], t[(k + 2) % 3]);
            link_face[t[k]].push_back(static_cast<int>(f));
        }
    }
    flower_.assign(nv_, {});
    star_.assign(nv_, {});
    boundary_flag_.assign(nv_, 0);
    for (int v = 0; v < nv_; ++v) {
        const auto& L = link[v];
        std::unordered_map<int, int> next;  // x -> index of link edge starting at x
        std::unordered_map<int, int> indeg;
        for (std::size_t i = 0; i < L.size(); ++i) {
            next[L[i].first] = static_cast<int>(i);
            indeg[L[i].second]++;
        }
        int start = -1;
        int starts = 0;
        for (std::size_t i = 0; i < L.size(); ++i)
            if (!indeg.count(L[i].first)) {
                start = static_cast<int>(i);
                ++starts;
            }
        if (starts > 1)
            throw NonManifold("link of vertex " + std::to_string(v) + " is disconnected");
        bool closed = (start < 0);
        if (closed) start = 0;
        std::vector<int> fl, st;
        int cur = start;
        std::size_t steps = 0;
        fl.push_back(L[cur].first);
        while (true) {
            st.push_back(link_face[v][cur]);
            int y = L[cur].second;
            ++steps;
            auto it = next.find(y);
            if (closed) {
                if (y == L[start].first) break;
                if (it == next.end()) throw NonManifold("link of vertex " + std::to_string(v) + " broken");
            } else if (it == next.end()) {
                fl.push_back(y);
                break;
            }
            fl.push_back(y);
            cur = it->second;
            if (steps > L.size()) break;
        }
        if (steps != L.size())
            throw NonManifold("star of vertex " + std::to_string(v) + " is not a disk or half-disk");
        flower_[v] = std::move(fl);
        star_[v] = std::move(st);
        boundary_flag_[v] = closed ? 0 : 1;
        (closed ? interior_ : boundary_).push_back(v);
    }

    // connectivity through faces
    {
        std::vector<char> seen(faces_.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            for (int g : face_neighbors(f))
                if (g >= 0 && !seen[g]) {
                    seen[g] = 1;
                    ++count;
                    stack.push_back(g);
                }
        }
        if (count != faces_.size()) throw NonManifold("complex is not connected");
    }

    int chi = euler_characteristic();
    if (!boundary_.empty()) {
        kind_ = (chi == 1 && boundary_cycles().size() == 1) ? SurfaceKind::Disk : SurfaceKind::Bordered;
        genus_ = 0;
    } else if (chi == 2) {
        kind_ = SurfaceKind::Sphere;
    } else if (chi == 0) {
        kind_ = SurfaceKind::Torus;
        genus_ = 1;
    } else {
        kind_ = SurfaceKind::ClosedGenus;
        genus_ = (2 - chi) / 2;
    }
}

int Triangulation::edge_index(int u, int v) const
{
    if (u < 0 || v < 0 || u >= nv_ || v >= nv_) return -1;
    auto it = edge_of_.find(key(u, v, nv_));
    return it == edge_of_.end() ? -1 : it->second;
}

int Triangulation::corner(int f, int v) const
{
    const auto& t = faces_[f];
    for (int k = 0; k < 3; ++k)
        if (t[k] == v) return k;
    return -1;
}

std::array<int, 3> Triangulation::face_neighbors(int f) const
{
    std::array<int, 3> out{-1, -1, -1};
    const auto& t = faces_[f];
    for (int k = 0; k < 3; ++k) {
        int a = t[(k + 1) % 3], b = t[(k + 2) % 3];
        const auto& e = edges_[edge_index(a, b)];
        out[k] = (e.left == f) ? e.right : e.left;
    }
    return out;
}

std::vector<int> Triangulation::separating_edges() const
{
    std::vector<int> out;
    for (int e = 0; e < num_edges(); ++e) {
        const auto& ed = edges_[e];
        if (!ed.boundary() && is_boundary(ed.a) && is_boundary(ed.b)) out.push_back(e);
    }
    return out;
}

std::vector<std::vector<int>> Triangulation::boundary_cycles() const
{
    // boundary edge a->b as it appears in its face
    std::unordered_map<int, int> succ;
    for (const auto& e : edges_) {
        if (!e.boundary()) continue;
        if (e.left >= 0)
            succ[e.a] = e.b;
        else
            succ[e.b] = e.a;
    }
    std::vector<std::vector<int>> out;
    std::set<int> done;
    for (int v : boundary_) {
        if (done.count(v)) continue;
        std::vector<int> cyc;
        int c = v;
        while (!done.count(c)) {
            done.insert(c);
            cyc.push_back(c);
            c = succ.at(c);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

Triangulation build_from_faces(const std::vector<Face>& faces) { return Triangulation(faces); }

EulerReport euler_report(const Triangulation& T)
{
    EulerReport r;
    r.V = T.num_vertices();
    r.E = T.num_edges();
    r.F = T.num_faces();
    r.V_bd = static_cast<int>(T.boundary_vertices().size());
    r.V_int = r.V - r.V_bd;
    r.chi = r.V - r.E + r.F;
    switch (T.kind()) {
        case SurfaceKind::Disk: r.identity_holds = (r.F - 2 * r.V_int == r.V_bd - 2); break;
        case SurfaceKind::Sphere:
        case SurfaceKind::Torus:
        case SurfaceKind::ClosedGenus: r.identity_holds = (r.F - 2 * r.V == 4 * T.genus() - 4); break;
        case SurfaceKind::Bordered: r.identity_holds = false; break;
    }
    return r;
}

EdgeLabel EdgeLabel::constant(const Triangulation& T, Mode m, double x)
{
    EdgeLabel L;
    L.mode = m;
    L.values.assign(T.num_edges(), x);
    return L;
}

bool EdgeLabel::is_tangency() const
{
    for (std::size_t e = 0; e < values.size(); ++e)
        if (inversive(static_cast<int>(e)) != 1.0) return false;
    return true;
}

double EdgeLabel::inversive(int e) const
{
    if (values.empty()) return 1.0;
    double x = values[e];
    if (mode == Mode::Inversive) return x;
    if (x == 0.0) return 1.0;
    if (x == std::numbers::pi / 2) return 0.0;
    return std::cos(x);
}

double EdgeLabel::overlap(int e) const
{
    if (values.empty()) return 0.0;
    if (mode == Mode::Overlap) return values[e];
    return std::acos(std::clamp(values[e], -1.0, 1.0));
}

void EdgeLabel::validate(const Triangulation& T) const
{
    if (values.empty()) return;
    if (static_cast<int>(values.size()) != T.num_edges())
        throw InvalidInput("edge label has " + std::to_string(values.size()) + " values for " +
                           std::to_string(T.num_edges()) + " edges");
    for (std::size_t e = 0; e < values.size(); ++e) {
        double x = values[e];
        bool ok = (mode == Mode::Overlap) ? (x >= 0.0 && x <= std::numbers::pi / 2 + 1e-15) : (x > -1.0);
        if (!ok || !std::isfinite(x)) throw InvalidInput("edge label out of range on edge " + std::to_string(e));
    }
}

VertexRemoval remove_vertex_star(const Triangulation& K, int v)
{
    if (v < 0 || v >= K.num_vertices()) throw InvalidInput("vertex out of range");
    VertexRemoval out;
    out.to_new.assign(K.num_vertices(), -1);
    for (int u = 0; u < K.num_vertices(); ++u)
        if (u != v) {
            out.to_new[u] = static_cast<int>(out.to_old.size());
            out.to_old.push_back(u);
        }
    std::vector<Face> faces;
    for (const auto& t : K.faces()) {
        if (t[0] == v || t[1] == v || t[2] == v) continue;
        faces.push_back({out.to_new[t[0]], out.to_new[t[1]], out.to_new[t[2]]});
    }
    try {
        out.disk = Triangulation(std::move(faces));
    } catch (const Error& e) {
        throw ResultNotSimplicial(std::string("removing vertex ") + std::to_string(v) + ": " + e.what());
    }
    return out;
}

Subdivision hex_refine(const Triangulation& T)
{
    const int V = T.num_vertices();
    Subdivision s;
    s.parents.resize(V + T.num_edges());
    for (int v = 0; v < V; ++v) s.parents[v] = {v};
    for (int e = 0; e < T.num_edges(); ++e) s.parents[V + e] = {T.edge(e).a, T.edge(e).b};
    std::vector<Face> faces;
    faces.reserve(4 * T.num_faces());
    for (const auto& t : T.faces()) {
        int a = t[0], b = t[1], c = t[2];
        int ab = V + T.edge_index(a, b), bc = V + T.edge_index(b, c), ca = V + T.edge_index(c, a);
        faces.push_back({a, ab, ca});
        faces.push_back({ab, b, bc});
        faces.push_back({ca, bc, c});
        faces.push_back({ab, bc, ca});
    }
    s.tri = Triangulation(std::move(faces));
    return s;
}

Subdivision barycentric_subdivide(const Triangulation& T)
{
    const int V = T.num_vertices(), E = T.num_edges();
    Subdivision s;
    s.parents.resize(V + E + T.num_faces());
    for (int v = 0; v < V; ++v) s.parents[v] = {v};
    for (int e = 0; e < E; ++e) s.parents[V + e] = {T.edge(e).a, T.edge(e).b};
    for (int f = 0; f < T.num_faces(); ++f) {
        const auto& t = T.face(f);
        s.parents[V + E + f] = {t[0], t[1], t[2]};
    }
    std::vector<Face> faces;
    faces.reserve(6 * T.num_faces());
    for (int f = 0; f < T.num_faces(); ++f) {
        const auto& t = T.face(f);
        int c = V + E + f;
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            int m = V + T.edge_index(a, b);
            faces.push_back({a, m, c});
            faces.push_back({m, b, c});
        }
    }
    s.tri = Triangulation(std::move(faces));
    return s;
}

StarComplex face_star_complex(const AbstractPolyhedron& P)
{
    const int V = P.num_vertices;
    std::vector<Face> faces;
    for (std::size_t f = 0; f < P.faces.size(); ++f) {
        const auto& cyc = P.faces[f];
        if (cyc.size() < 3) throw NotPolyhedral("face " + std::to_string(f) + " has fewer than 3 vertices");
        int c = V + static_cast<int>(f);
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
            if (a < 0 || a >= V) throw NotPolyhedral("vertex out of range in face " + std::to_string(f));
            faces.push_back({a, b, c});
        }
    }
    StarComplex out;
    out.num_original = V;
    try {
        out.K = Triangulation(std::move(faces));
    } catch (const Error& e) {
        throw NotPolyhedral(e.what());
    }
    if (out.K.kind() != SurfaceKind::Sphere) throw NotPolyhedral("face cycles do not close up to a sphere");
    out.phi.mode = EdgeLabel::Mode::Overlap;
    out.phi.values.assign(out.K.num_edges(), 0.0);
    for (int e = 0; e < out.K.num_edges(); ++e) {
        const auto& ed = out.K.edge(e);
        if (ed.a >= V || ed.b >= V) out.phi.values[e] = std::numbers::pi / 2;
    }
    return out;
}

namespace
{
bool is_face(const Triangulation& T, int a, int b, int c)
{
    int e = T.edge_index(a, b);
    if (e < 0) return false;
    for (int f : {T.edge(e).left, T.edge(e).right}) {
        if (f < 0) continue;
        if (T.corner(f, c) >= 0) return true;
    }
    return false;
}

double phi_of(const Triangulation& T, const EdgeLabel& L, int u, int v)
{
    return L.overlap(T.edge_index(u, v));
}
}  // namespace

KatReport check_kat_conditions(const Triangulation& T, const EdgeLabel& phi)
{
    constexpr double pi = std::numbers::pi;
    constexpr double eps = 1e-12;
    KatReport r;
    const int V = T.num_vertices();
    auto adj = [&](int a, int b) { return T.edge_index(a, b) >= 0; };
    for (int a = 0; a < V; ++a)
        for (int b : T.flower(a)) {
            if (b <= a) continue;
            for (int c : T.flower(b)) {
                if (c <= b || !adj(a, c)) continue;
                double s = phi_of(T, phi, a, b) + phi_of(T, phi, b, c) + phi_of(T, phi, c, a);
                if (s >= pi - eps && !is_face(T, a, b, c)) r.bad_triangles.push_back({a, b, c});
            }
        }
    // 4-cycles a-b-c-d, a smallest, b < d to list each once
    for (int a = 0; a < V; ++a)
        for (int b : T.flower(a)) {
            if (b <= a) continue;
            for (int c : T.flower(b)) {
                if (c <= a || c == b) continue;
                for (int d : T.flower(c)) {
                    if (d <= a || d == b || d == c || d <= b || !adj(d, a)) continue;
                    double s = phi_of(T, phi, a, b) + phi_of(T, phi, b, c) + phi_of(T, phi, c, d) +
                               phi_of(T, phi, d, a);
                    if (std::abs(s - 2 * pi) > eps) continue;
                    // two adjacent faces: split along diagonal ac or bd
                    bool ok = (adj(a, c) && is_face(T, a, b, c) && is_face(T, a, c, d)) ||
                              (adj(b, d) && is_face(T, a, b, d) && is_face(T, b, c, d));
                    if (!ok) r.bad_quads.push_back({a, b, c, d});
                }
            }
        }
    r.tetrahedral_warning = (T.kind() == SurfaceKind::Sphere && V == 4);
    return r;
}

int BranchStructure::total_order() const
{
    int o = 0;
    for (const auto& p : points) o += p.order;
    return o;
}

std::vector<std::vector<int>> simple_cycles(const Triangulation& T, int max_len, std::size_t limit)
{
    std::vector<std::vector<int>> out;
    const int V = T.num_vertices();
    std::vector<char> on(V, 0);
    std::vector<int> path;
    bool stop = false;
    std::function<void(int, int)> dfs = [&](int s, int v) {
        if (stop) return;
        for (int w : T.flower(v)) {
            if (w == s && path.size() >= 3 && path[1] < path.back()) {
                out.push_back(path);
                if (limit && out.size() >= limit) {
                    stop = true;
                    return;
                }
                continue;
            }
            if (w <= s || on[w] || static_cast<int>(path.size()) >= max_len) continue;
            on[w] = 1;
            path.push_back(w);
            dfs(s, w);
            path.pop_back();
            on[w] = 0;
            if (stop) return;
        }
    };
    for (int s = 0; s < V && !stop; ++s) {
        path = {s};
        on[s] = 1;
        dfs(s, s);
        on[s] = 0;
    }
    return out;
}

BranchReport check_branch_structure(const Triangulation& T, const EdgeLabel& phi,
                                    const BranchStructure& beta, int cap)
{
    constexpr double pi = std::numbers::pi;
    BranchReport rep;
    if (beta.points.empty()) {
        rep.message = "no branch vertices";
        return rep;
    }
    std::vector<int> order(T.num_vertices(), 0);
    for (const auto& p : beta.points) {
        if (p.vertex < 0 || p.vertex >= T.num_vertices()) throw InvalidInput("branch vertex out of range");
        if (T.is_boundary(p.vertex))
            throw InvalidInput("branch vertex " + std::to_string(p.vertex) + " lies on the boundary");
        if (p.order < 1) throw InvalidInput("branch order must be >= 1");
        if (order[p.vertex]) throw InvalidInput("branch vertex listed twice");
        order[p.vertex] = p.order;
    }
    if (beta.v_inf >= 0) {
        if (beta.order_inf != beta.total_order())
            rep.message = "order at v_inf differs from the total branch order; ";
        for (const auto& p : beta.points)
            if (T.edge_index(p.vertex, beta.v_inf) >= 0) {
                rep.status = CheckStatus::Fail;
                rep.message += "branch vertex " + std::to_string(p.vertex) + " adjacent to v_inf; ";
            }
        if (beta.order_inf != beta.total_order()) rep.status = CheckStatus::Fail;
    }

    // Forbidden configuration: branch v with pi/2 edges to u and w, edge uw at 0,
    // and a common neighbor x != v of u and w joined by pi/2 edges.
    const double half = pi / 2, tiny = 1e-12;
    for (const auto& p : beta.points) {
        int v = p.vertex;
        for (int u : T.flower(v))
            for (int w : T.flower(v)) {
                if (u >= w) continue;
                int uw = T.edge_index(u, w);
                if (uw < 0 || std::abs(phi.overlap(uw)) > tiny) continue;
                if (std::abs(phi_of(T, phi, v, u) - half) > tiny || std::abs(phi_of(T, phi, v, w) - half) > tiny)
                    continue;
                for (int x : T.flower(u)) {
                    if (x == v || x == w || T.edge_index(x, w) < 0) continue;
                    if (beta.v_inf >= 0 && x != beta.v_inf) continue;
                    if (std::abs(phi_of(T, phi, u, x) - half) < tiny && std::abs(phi_of(T, phi, x, w) - half) < tiny) {
                        rep.forbidden.push_back({v, u, x, w});
                        rep.status = CheckStatus::Fail;
                    }
                }
            }
    }

    double min_gap = pi;
    for (int e = 0; e < T.num_edges(); ++e) min_gap = std::min(min_gap, pi - phi.overlap(e));
    const int O = beta.total_order();
    int needed = static_cast<int>(std::floor(2 * pi * (O + 1) / min_gap + 1e-9));
    int len = std::min(needed, cap);
    auto cycles = simple_cycles(T, len);
    rep.cycles_examined = cycles.size();

    // face adjacency used to split the faces by each cycle
    const int F = T.num_faces();
    std::vector<int> comp(F);
    for (const auto& cyc : cycles) {
        std::set<int> cut;
        double sum = 0;
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int e = T.edge_index(cyc[i], cyc[(i + 1) % cyc.size()]);
            cut.insert(e);
            sum += pi - phi.overlap(e);
        }
        std::fill(comp.begin(), comp.end(), -1);
        std::vector<int> sizes;
        for (int f0 = 0; f0 < F; ++f0) {
            if (comp[f0] >= 0) continue;
            int id = static_cast<int>(sizes.size());
            sizes.push_back(0);
            std::vector<int> st{f0};
            comp[f0] = id;
            while (!st.empty()) {
                int f = st.back();
                st.pop_back();
                ++sizes[id];
                auto nb = T.face_neighbors(f);
                const auto& t = T.face(f);
                for (int k = 0; k < 3; ++k) {
                    int g = nb[k];
                    if (g < 0 || comp[g] >= 0) continue;
                    if (cut.count(T.edge_index(t[(k + 1) % 3], t[(k + 2) % 3]))) continue;
                    comp[g] = id;
                    st.push_back(g);
                }
            }
        }
        if (sizes.size() < 2) continue;  // does not bound anything
        std::set<int> on_cycle(cyc.begin(), cyc.end());
        // order of branch vertices strictly inside each side
        std::vector<int> side_order(sizes.size(), 0);
        std::vector<int> first_branch_side(1, -1);
        for (const auto& p : beta.points) {
            if (on_cycle.count(p.vertex)) continue;
            int s = comp[T.star(p.vertex)[0]];
            side_order[s] += p.order;
            if (first_branch_side[0] < 0) first_branch_side[0] = s;
        }
        int best = 0;
        for (int s = 1; s < static_cast<int>(sizes.size()); ++s) {
            if (sizes[s] < sizes[best] || (sizes[s] == sizes[best] && s == first_branch_side[0])) best = s;
        }
        int o = side_order[best];
        if (o == 0) continue;
        if (!(sum > 2 * pi * (o + 1) + 1e-12)) {
            rep.status = CheckStatus::Fail;
            rep.violating_paths.push_back(cyc);
        }
    }
    if (rep.status == CheckStatus::Pass && needed > cap) {
        rep.status = CheckStatus::Inconclusive;
        rep.message += "CapExceeded: paths up to length " + std::to_string(needed) + " needed, cap " +
                       std::to_string(cap);
    }
    return rep;
}

Triangulation cone_ball(int center_degree, int d, int generations)
{
    return variable_degree_ball(center_degree, [d](int) { return d; }, generations);
}

Triangulation variable_degree_ball(int center_degree, const std::function<int(int)>& degree, int generations)
{
    if (center_degree < 3 || generations < 1) throw InvalidInput("cone_ball: degree >= 3 and generations >= 1");
    std::vector<Face> faces;
    std::vector<int> deg;
    deg.push_back(center_degree);
    std::vector<int> ring;
    for (int i = 0; i < center_degree; ++i) {
        ring.push_back(1 + i);
        deg.push_back(3);
    }
    for (int i = 0; i < center_degree; ++i) faces.push_back({0, ring[i], ring[(i + 1) % center_degree]});
    for (int g = 1; g < generations; ++g) {
        const int k = static_cast<int>(ring.size());
        std::vector<int> m(k), p(k + 1, 0);
        for (int i = 0; i < k; ++i) {
            const int d = degree(ring[i]);
            m[i] = d - deg[ring[i]];
            if (m[i] < 1) throw InvalidInput("cone_ball: degree " + std::to_string(d) + " too small to grow");
            p[i + 1] = p[i] + m[i] - 1;
        }
        const int N = p[k];
        if (N < 3) throw InvalidInput("cone_ball: new ring too short");
        const int base = static_cast<int>(deg.size());
        std::vector<int> next(N);
        for (int j = 0; j < N; ++j) {
            next[j] = base + j;
            deg.push_back(0);
        }
        auto w = [&](int pos) { return next[((pos % N) + N) % N]; };
        for (int i = 0; i < k; ++i) {
            int v = ring[i];
            for (int j = 0; j + 1 < m[i]; ++j) faces.push_back({v, w(p[i] + j), w(p[i] + j + 1)});
            // face on the old boundary edge (v_i, v_{i+1}) and their shared new vertex
            faces.push_back({ring[(i + 1) % k], v, w(p[i] + m[i] - 1)});
        }
        std::vector<std::set<int>> nb(deg.size());
        for (const auto& t : faces)
            for (int a = 0; a < 3; ++a) {
                nb[t[a]].insert(t[(a + 1) % 3]);
                nb[t[a]].insert(t[(a + 2) % 3]);
            }
        for (std::size_t v = 0; v < deg.size(); ++v) deg[v] = static_cast<int>(nb[v].size());
        ring = next;
    }
    return Triangulation(std::move(faces));
}

Triangulation constant_degree_ball(int d, int generations)
{
    if (d < 6) throw InvalidInput("constant_degree_ball requires d >= 6");
    return cone_ball(d, d, generations);
}

}  // namespace katpack
