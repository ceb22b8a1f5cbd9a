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
#include "katpack/typelab.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <set>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "katpack/error.hpp"

namespace katpack
{

// ---------------------------------------------------------------- graph

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : adj_(n)
{
    if (n < 0) throw InvalidInput("negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw InvalidInput("edge endpoint out of range");
        if (a == b) throw InvalidInput("self-loop at vertex " + std::to_string(a));
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second) continue;
        edges_.push_back({std::min(a, b), std::max(a, b)});
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }
}

Graph Graph::from_triangulation(const Triangulation& T)
{
    std::vector<std::pair<int, int>> e;
    for (const auto& ed : T.edges()) e.push_back({ed.a, ed.b});
    return Graph(T.num_vertices(), e);
}

Graph Graph::path(int edges)
{
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < edges; ++i) e.push_back({i, i + 1});
    return Graph(edges + 1, e);
}

Graph Graph::grid(int rows, int cols)
{
    std::vector<std::pair<int, int>> e;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c)});
        }
    return Graph(rows * cols, e);
}

bool Graph::connected() const
{
    if (adj_.empty()) return true;
    auto R = rings(0);
    std::size_t n = 0;
    for (const auto& r : R) n += r.size();
    return n == adj_.size();
}

std::vector<std::vector<int>> Graph::rings(int root) const
{
    std::vector<int> dist(adj_.size(), -1);
    std::vector<std::vector<int>> out{{root}};
    dist[root] = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::vector<int> next;
        for (int v : out[k])
            for (int w : adj_[v])
                if (dist[w] < 0) {
                    dist[w] = static_cast<int>(k) + 1;
                    next.push_back(w);
                }
        if (next.empty()) break;
        std::sort(next.begin(), next.end());
        out.push_back(std::move(next));
    }
    return out;
}

Graph Graph::without_edge(int e) const
{
    auto E = edges_;
    E.erase(E.begin() + e);
    return Graph(num_vertices(), E);
}

// ---------------------------------------------------------------- cp type

ProbeReport cp_type_probe(int d, int g_lo, int g_hi)
{
    if (d < 6) throw InvalidInput("cp_type_probe needs d >= 6");
    if (g_lo < 1 || g_hi < g_lo) throw InvalidInput("generation range must satisfy 1 <= g_lo <= g_hi");
    ProbeReport rep;
    rep.kind = "cptype";
    rep.columns = {"d", "generation", "vertices", "center_radius"};
    rep.summary_columns = rep.columns;
    std::vector<double> r;
    for (int g = g_lo; g <= g_hi; ++g) {
        auto T = constant_degree_ball(d, g);
        auto sol = maximal_disk_label(T);
        r.push_back(sol.label.r[0]);
        rep.rows.push_back({double(d), double(g), double(T.num_vertices()), r.back()});
    }
    rep.summary = rep.rows;
    bool non_increasing = true, strict = true;
    for (std::size_t k = 1; k < r.size(); ++k) {
        non_increasing = non_increasing && r[k] <= r[k - 1] + 1e-9;
        strict = strict && r[k] < r[k - 1];
    }
    bool hyperbolic = false;
    if (r.size() >= 2) {
        double last = std::abs(r.back() - r[r.size() - 2]) / r[r.size() - 2];
        hyperbolic = last < 0.02 && r.back() > 0.1 * r.front();
    }
    rep.flags = {{"non_increasing", non_increasing},
                 {"strictly_decreasing", strict},
                 {"hyperbolic_consistent", hyperbolic},
                 {"parabolic_consistent", !hyperbolic}};
    rep.notes.push_back("finite horizon: verdicts are consistent-with, not proofs");
    return rep;
}

// ---------------------------------------------------------------- resistance

namespace
{

void check_sets(const Graph& G, const std::vector<int>& A, const std::vector<int>& B, std::vector<int>& role)
{
    if (A.empty() || B.empty()) throw InvalidInput("source and sink sets must be nonempty");
    role.assign(G.num_vertices(), 0);
    for (int v : A) {
        if (v < 0 || v >= G.num_vertices()) throw InvalidInput("source vertex out of range");
        role[v] = 1;
    }
    for (int v : B) {
        if (v < 0 || v >= G.num_vertices()) throw InvalidInput("sink vertex out of range");
        if (role[v] == 1) throw InvalidInput("source and sink sets overlap at " + std::to_string(v));
        role[v] = 2;
    }
    // some sink reachable from the sources
    std::vector<char> seen(G.num_vertices(), 0);
    std::vector<int> stack(A.begin(), A.end());
    for (int v : A) seen[v] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (role[v] == 2) return;
        for (int w : G.neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    throw DisconnectedSets("no path joins the source and sink sets");
}

}  // namespace

double eel_between(const Graph& G, const std::vector<int>& sources, const std::vector<int>& sinks)
{
    std::vector<int> role;
    check_sets(G, sources, sinks, role);
    const int V = G.num_vertices();
    // unknowns: free vertices in a component that touches a terminal
    std::vector<int> idx(V, -1);
    {
        std::vector<char> seen(V, 0);
        std::vector<int> stack;
        for (int v = 0; v < V; ++v)
            if (role[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
        int n = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (!role[v]) idx[v] = n++;
            for (int w : G.neighbors(v))
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    int n = 0;
    for (int v = 0; v < V; ++v) n = std::max(n, idx[v] + 1);
    std::vector<double> phi(V, 0.0);
    for (int v = 0; v < V; ++v)
        if (role[v] == 1) phi[v] = 1.0;
    if (n > 0) {
        std::vector<Eigen::Triplet<double>> trip;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        for (int v = 0; v < V; ++v) {
            if (idx[v] < 0) continue;
            trip.emplace_back(idx[v], idx[v], static_cast<double>(G.degree(v)));
            for (int w : G.neighbors(v)) {
                if (idx[w] >= 0)
                    trip.emplace_back(idx[v], idx[w], -1.0);
                else if (role[w] == 1)
                    b[idx[v]] += 1.0;
            }
        }
        Eigen::SparseMatrix<double> L(n, n);
        L.setFromTriplets(trip.begin(), trip.end());
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg;
        cg.setTolerance(1e-12);
        cg.setMaxIterations(std::max(1000, 10 * n));
        cg.compute(L);
        Eigen::VectorXd x = cg.solve(b);
        if (cg.info() != Eigen::Success) throw NonConvergence("Laplacian solve did not reach 1e-12");
        for (int v = 0; v < V; ++v)
            if (idx[v] >= 0) phi[v] = x[idx[v]];
    }
    double current = 0;
    for (int s : sources)
        for (int w : G.neighbors(s))
            if (role[w] != 1) current += 1.0 - phi[w];
    return 1.0 / current;
}

// ---------------------------------------------------------------- vertex extremal length

namespace
{

// Shortest vertex-weighted path from the sources to the sinks; endpoints count.
std::pair<double, std::vector<int>> shortest_path(const Graph& G, const std::vector<int>& role,
                                                  const std::vector<double>& m)
{
    const int V = G.num_vertices();
    std::vector<double> dist(V, kInf);
    std::vector<int> prev(V, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int v = 0; v < V; ++v)
        if (role[v] == 1) {
            dist[v] = m[v];
            pq.push({dist[v], v});
        }
    int end = -1;
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        if (role[v] == 2) {
            end = v;
            break;
        }
        for (int w : G.neighbors(v)) {
            if (role[w] == 1) continue;
            double nd = d + m[w];
            if (nd < dist[w]) {
                dist[w] = nd;
                prev[w] = v;
                pq.push({nd, w});
            }
        }
    }
    std::vector<int> path;
    for (int v = end; v >= 0; v = prev[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return {dist[end], path};
}

}  // namespace

VelResult vel_between(const Graph& G, const std::vector<int>& sources, const std::vector<int>& sinks,
                      const VelOptions& opt)
{
    std::vector<int> role;
    check_sets(G, sources, sinks, role);
    const int V = G.num_vertices();
    VelResult out;
    std::vector<double> m(V, 0.0), lambda;
    // Hildreth's method on the dual of min |m|^2 subject to (path length) >= 1; m = sum lambda_i a_i stays >= 0
    auto relax = [&]() {
        for (int sweep = 0; sweep < 200000; ++sweep) {
            double change = 0;
            for (std::size_t i = 0; i < out.paths.size(); ++i) {
                const auto& P = out.paths[i];
                double len = 0;
                for (int v : P) len += m[v];
                double nl = std::max(0.0, lambda[i] + (1 - len) / static_cast<double>(P.size()));
                double dl = nl - lambda[i];
                if (dl != 0) {
                    for (int v : P) m[v] += dl;
                    lambda[i] = nl;
                    change = std::max(change, std::abs(dl));
                }
            }
            if (change < 1e-15) break;
        }
    };
    for (out.iterations = 0; out.iterations < opt.max_rounds; ++out.iterations) {
        auto [L, P] = shortest_path(G, role, m);
        double area = 0;
        for (double x : m) area += x * x;
        if (L > 0 && area > 0) {
            out.lower = std::max(out.lower, L * L / area);
            double dual = -0.5 * area;
            for (double l : lambda) dual += l;
            // the relaxation minimizes |m|^2 / 2, so any admissible metric has area >= 2 dual
            if (dual > 0) out.upper = out.upper > 0 ? std::min(out.upper, 0.5 / dual) : 0.5 / dual;
        }
        if (L >= 1 - opt.violation_tol && out.upper > 0 &&
            out.upper - out.lower <= opt.gap_tol * out.upper) {
            out.converged = true;
            break;
        }
        out.paths.push_back(P);
        lambda.push_back(0.0);
        relax();
    }
    auto [L, P] = shortest_path(G, role, m);
    (void)P;
    out.metric = m;
    if (L > 0)
        for (double& x : out.metric) x /= L;
    out.value = 0.5 * (out.lower + out.upper);
    return out;
}

// ---------------------------------------------------------------- random walks

double rw_escape(const Graph& G, int root, const std::vector<int>& boundary)
{
    if (root < 0 || root >= G.num_vertices()) throw InvalidInput("root out of range");
    if (std::find(boundary.begin(), boundary.end(), root) != boundary.end())
        throw InvalidInput("root lies on the boundary");
    return 1.0 / (G.degree(root) * eel_between(G, {root}, boundary));
}

MonteCarlo rw_escape_monte_carlo(const Graph& G, int root, const std::vector<int>& boundary, long walks,
                                 std::uint64_t seed)
{
    if (walks < 1) throw InvalidInput("walks >= 1 required");
    std::vector<char> stop(G.num_vertices(), 0);
    for (int b : boundary) stop[b] = 1;
    if (stop[root]) throw InvalidInput("root lies on the boundary");
    std::mt19937_64 rng(seed);
    long hits = 0;
    for (long k = 0; k < walks; ++k) {
        int v = root;
        do {
            const auto& nb = G.neighbors(v);
            v = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
        } while (v != root && !stop[v]);
        hits += stop[v];
    }
    MonteCarlo mc;
    mc.walks = walks;
    mc.estimate = static_cast<double>(hits) / walks;
    mc.stderr_ = std::sqrt(mc.estimate * (1 - mc.estimate) / walks);
    return mc;
}

// ---------------------------------------------------------------- witness

double VelWitness::length(const std::vector<int>& path) const
{
    double s = 0;
    for (int v : path) s += metric.at(v);
    return s;
}

VelWitness vel_witness(const Graph& G, const std::vector<std::vector<int>>& rings, double C, int first)
{
    if (first < 2) throw InvalidInput("rings start at n >= 2 so that log n > 0");
    if (!(C > 0)) throw InvalidInput("C must be positive");
    VelWitness w;
    w.first = first;
    w.C = C;
    w.metric.assign(G.num_vertices(), 0.0);
    std::vector<char> used(G.num_vertices(), 0);
    double area = 0, length = 0, bound = 0;
    for (std::size_t n = 0; n < rings.size(); ++n) {
        for (int v : rings[n]) {
            if (v < 0 || v >= G.num_vertices()) throw InvalidInput("ring vertex out of range");
            if (used[v]) throw InvalidInput("rings must be disjoint");
            used[v] = 1;
        }
        if (n >= 1 && rings[n].size() > C * n)
            throw CardinalityViolation("ring " + std::to_string(n) + " has " + std::to_string(rings[n].size()) +
                                       " vertices, more than C n = " + std::to_string(C * n));
        if (static_cast<int>(n) < first) continue;
        const double ln = std::log(static_cast<double>(n));
        const double mn = 1.0 / (n * ln);
        for (int v : rings[n]) w.metric[v] = mn;
        area += rings[n].size() * mn * mn;
        length += mn;
        bound += C / (n * ln * ln);
        w.area_partial.push_back(area);
        w.length_partial.push_back(length);
    }
    w.area_bound = bound;
    return w;
}

}  // namespace katpack
