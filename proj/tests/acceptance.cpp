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
// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "katpack/error.hpp"
#include "katpack/io.hpp"
#include "support.hpp"

using namespace katpack;
using katpack::testing::hex_flower;

namespace
{

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// ------------------------------------------------------------------ 1, 2

Outcome hex_flower_maximal()
{
    auto T = hex_flower();
    auto res = maximal_disk_label(T);
    auto L = layout_disk(T, {}, res.label);
    double err_r = std::abs(res.label.r[0] - std::log(2.0));
    double err_c = std::abs(L.circles[0].r - 1.0 / 3) + std::abs(L.circles[0].c);
    double err_p = 0;
    for (int v = 1; v <= 6; ++v)
        err_p = std::max({err_p, std::abs(L.circles[v].r - 1.0 / 3), std::abs(std::abs(L.circles[v].c) - 2.0 / 3)});
    return {err_r < 1e-8 && err_c < 1e-8 && err_p < 1e-8,
            fmt("|r-ln2| %.1e, center circle err %.1e, petal err %.1e", err_r, err_c, err_p)};
}

Outcome single_triangle()
{
    auto T = katpack::testing::single_triangle();
    auto res = maximal_disk_label(T);
    auto L = layout_disk(T, {}, res.label);
    // Descartes with curvatures k, k, k, -1: (3k - 1)^2 = 2 (3k^2 + 1), i.e. 3k^2 - 6k - 1 = 0
    const double k = (6 + std::sqrt(36.0 + 12.0)) / 6;
    const double oracle = 1 / k;
    double err = 0;
    for (const Circle& C : L.circles) err = std::max(err, std::abs(C.r - oracle));
    double err_area = std::abs(res.report.area - kPi);
    return {err < 1e-8 && err_area < 1e-9 && std::abs(oracle - (2 * std::sqrt(3.0) - 3)) < 1e-15,
            fmt("horocycle radius err %.1e, area err %.1e", err, err_area)};
}

// ------------------------------------------------------------------ 3, 4

PackingProblem random_problem(std::mt19937_64& rng)
{
    auto T = katpack::testing::random_disk(rng, 200);
    PackingProblem P(T, Geometry::Hyperbolic);
    std::uniform_real_distribution<double> R(0.5, 3.0);
    for (int v : T.boundary_vertices()) P.set_boundary(v, R(rng));
    return P;
}

Outcome uniqueness()
{
    std::mt19937_64 rng(3);
    const double tol = 1e-10;
    double worst = 0;
    for (int k = 0; k < 25; ++k) {
        auto P = random_problem(rng);
        SolveOptions a, b;
        a.tol = b.tol = tol;
        std::uniform_real_distribution<double> R(0.05, 4.0);
        std::vector<double> init(P.T.num_vertices());
        for (double& x : init) x = R(rng);
        b.initial = init;
        auto ra = solve(P, a), rb = solve(P, b);
        for (int v : P.free_vertices()) worst = std::max(worst, std::abs(ra.label.r[v] - rb.label.r[v]));
    }
    return {worst <= 10 * tol, fmt("25 complexes, max per-vertex difference %.1e (bound %.0e)", worst, 10 * tol)};
}

Outcome schwarz_pick()
{
    std::mt19937_64 rng(4);
    int vert = 0, face = 0;
    for (int k = 0; k < 50; ++k) {
        auto P = random_problem(rng);
        auto Q = P;
        for (int v : P.T.boundary_vertices()) Q.set_boundary(v, 2 * P.boundary_radius[v]);
        auto small = solve(P), big = solve(Q);
        auto cmp = schwarz_pick_compare(P, big.label, small.label, 1e-9);
        vert += cmp.vertex_violations;
        face += cmp.face_violations;
    }
    return {vert == 0 && face == 0, fmt("50 disks, vertex violations %.0f, face violations %.0f", vert, face)};
}

// ------------------------------------------------------------------ 5, 6

Outcome sphere_invariance()
{
    double worst = 0;
    for (const auto& P : {solids::tetrahedron(), solids::octahedron()}) {
        auto K = katpack::testing::closed_from(P);
        SphereOptions a, b;
        a.v_inf = K.num_vertices() - 1;
        b.v_inf = 0;
        auto La = sphere_pack(K, {}, a), Lb = sphere_pack(K, {}, b);
        for (int u = 0; u < K.num_vertices(); ++u)
            for (int v = u + 1; v < K.num_vertices(); ++v)
                worst = std::max(worst, std::abs(inversive_distance(La.circles[u], La.circles[v]) -
                                                 inversive_distance(Lb.circles[u], Lb.circles[v])));
    }
    return {worst < 1e-7, fmt("max pairwise inversive distance change %.1e", worst)};
}

Outcome inversive_cross_validation()
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> C(-3, 3), R(0.2, 2), U(-1, 1);
    auto random_circle = [&] { return Circle::plane({C(rng), C(rng)}, R(rng), rng() % 2 ? 1 : -1); };
    double methods = 0, invariance = 0, special = 0;
    for (int k = 0; k < 1000; ++k) {
        Circle a = random_circle(), b = random_circle();
        double I = inversive_distance(a, b, InvMethod::DeSitter);
        for (auto m : {InvMethod::Planar, InvMethod::Spherical, InvMethod::CrossRatio})
            methods = std::max(methods, std::abs(inversive_distance(a, b, m) - I));
    }
    for (int k = 0; k < 100; ++k) {
        MobiusMap M({U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)});
        Circle a = random_circle(), b = random_circle();
        double I = std::abs(inversive_distance(a, b));
        double J = std::abs(inversive_distance(apply_mobius(M, a), apply_mobius(M, b)));
        invariance = std::max(invariance, std::abs(I - J));
    }
    for (int k = 0; k < 100; ++k) {
        double r1 = R(rng), r2 = R(rng), t = 2 * kPi * U(rng);
        cplx c1{C(rng), C(rng)};
        Circle a = Circle::plane(c1, r1);
        Circle tangent = Circle::plane(c1 + (r1 + r2) * std::polar(1.0, t), r2);
        Circle ortho = Circle::plane(c1 + std::sqrt(r1 * r1 + r2 * r2) * std::polar(1.0, t), r2);
        for (auto m : {InvMethod::Planar, InvMethod::Spherical, InvMethod::CrossRatio, InvMethod::DeSitter}) {
            special = std::max(special, std::abs(inversive_distance(a, tangent, m) - 1));
            special = std::max(special, std::abs(inversive_distance(a, ortho, m)));
        }
    }
    return {methods < 1e-9 && invariance < 1e-9 && special < 1e-12,
            fmt("method spread %.1e, Mobius drift %.1e, tangent/orthogonal err %.1e", methods, invariance, special)};
}

// ------------------------------------------------------------------ 7, 8, 9

Outcome torus_k7()
{
    auto K = katpack::testing::k7_torus();
    auto res = solve_euclidean(PackingProblem(K, Geometry::Euclidean));
    double dev = 0;
    for (double r : res.label.r) dev = std::max(dev, std::abs(r - res.label.r[0]));
    auto L = layout_torus(K, {}, res.label);
    cplx tau = reduce_modulus(L.tau);
    double mod = std::abs(tau - std::polar(1.0, kPi / 3));
    return {dev < 1e-10 && L.closure_residual < 1e-8 && mod < 1e-6,
            fmt("label deviation %.1e, closure %.1e, |tau - e^{i pi/3}| %.1e", dev, L.closure_residual, mod)};
}

Outcome branched()
{
    BranchStructure beta;
    beta.points.push_back({0, 1});
    auto T5 = cone_ball(5, 6, 3);
    auto check5 = check_branch_structure(T5, {}, beta);
    auto P = PackingProblem::maximal(T5);
    P.apply_branching(beta);
    auto res = solve(P);
    double resid = max_residual(P, res.label);
    auto T4 = cone_ball(4, 6, 3);
    auto check4 = check_branch_structure(T4, {}, beta);
    return {check5.status == CheckStatus::Pass && resid < 1e-10 && check4.status == CheckStatus::Fail,
            "degree 5: " + to_string(check5.status) + fmt(", residual %.1e", resid) +
                "; degree 4: " + to_string(check4.status)};
}

// every subset of the free vertices, faces counted once
bool brute_force_feasible(const PackingProblem& P)
{
    auto fr = P.free_vertices();
    const int n = static_cast<int>(fr.size());
    for (long mask = 1; mask < (1L << n); ++mask) {
        std::set<int> faces;
        double theta = 0;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) {
                theta += P.target[fr[i]];
                for (int f : P.T.star(fr[i])) faces.insert(f);
            }
        if (kPi * faces.size() - theta <= 1e-12 * theta) return false;
    }
    return true;
}

Outcome schwarz_picard()
{
    std::mt19937_64 rng(9);
    // theta = pi deg at a single vertex
    int rejected = 0, tried = 0;
    for (int k = 0; k < 10; ++k) {
        auto T = katpack::testing::random_disk(rng, 40);
        auto P = PackingProblem::maximal(T);
        int v = T.interior_vertices()[rng() % T.interior_vertices().size()];
        P.set_target(v, kPi * T.degree(v));
        ++tried;
        rejected += schwarz_picard_feasibility(P).status == CheckStatus::Fail;
    }
    int agree = 0, total = 0, infeasible = 0;
    while (total < 60) {
        auto T = katpack::testing::random_disk(rng, 40);
        if (T.interior_vertices().size() > 12) continue;
        auto P = PackingProblem::maximal(T);
        // per-instance scale so both verdicts occur
        const double scale = std::uniform_real_distribution<double>(1.5, 4.5)(rng);
        std::uniform_real_distribution<double> U(0.9, 1.1);
        for (int v : T.interior_vertices()) P.set_target(v, std::min(scale * U(rng) * kPi, 0.999 * kPi * T.degree(v)));
        bool brute = brute_force_feasible(P);
        auto verdict = schwarz_picard_feasibility(P);
        agree += (verdict.status == CheckStatus::Pass) == brute && verdict.status != CheckStatus::Inconclusive;
        infeasible += !brute;
        ++total;
    }
    return {rejected == tried && agree == total && infeasible >= 10 && total - infeasible >= 10,
            fmt("pi*deg rejected %.0f/10; exhaustive agrees on %.0f/60 (%.0f infeasible)", rejected, agree, infeasible)};
}

// ------------------------------------------------------------------ 10, 11

Outcome cp_type()
{
    auto r6 = cp_type_probe(6, 3, 8), r7 = cp_type_probe(7, 3, 8);
    auto radius = [](const ProbeReport& r, int g) { return r.rows[g - 3][3]; };
    bool ok6 = r6.flag("strictly_decreasing") && radius(r6, 8) < 0.5 * radius(r6, 3);
    double rel7 = std::abs(radius(r7, 8) - radius(r7, 7)) / radius(r7, 7);
    bool ok7 = rel7 < 0.02 && radius(r7, 8) > 0.1 * radius(r7, 3);
    return {ok6 && ok7, fmt("G6 r8/r3 = %.3f; G7 change 7->8 = %.2f%%, r8/r3 = %.3f", radius(r6, 8) / radius(r6, 3),
                            100 * rel7, radius(r7, 8) / radius(r7, 3))};
}

// min area over edge metrics with every path from A to B of length >= 1, by enumeration
double brute_force_eel(const Graph& G, const std::vector<int>& A, const std::vector<int>& B)
{
    std::vector<std::vector<int>> paths;  // edge sets
    std::vector<char> on(G.num_vertices(), 0), in_b(G.num_vertices(), 0);
    for (int b : B) in_b[b] = 1;
    std::map<std::pair<int, int>, int> eid;
    for (int e = 0; e < G.num_edges(); ++e) eid[G.edges()[e]] = e;
    std::vector<int> stack;
    std::function<void(int)> dfs = [&](int v) {
        if (in_b[v]) {
            paths.push_back(stack);
            return;
        }
        on[v] = 1;
        for (int w : G.neighbors(v))
            if (!on[w]) {
                stack.push_back(eid[{std::min(v, w), std::max(v, w)}]);
                dfs(w);
                stack.pop_back();
            }
        on[v] = 0;
    };
    for (int a : A) dfs(a);
    // Hildreth on min |m|^2/2 subject to path sums >= 1
    std::vector<double> m(G.num_edges(), 0), lam(paths.size(), 0);
    for (int sweep = 0; sweep < 1000000; ++sweep) {
        double change = 0;
        for (std::size_t i = 0; i < paths.size(); ++i) {
            double len = 0;
            for (int e : paths[i]) len += m[e];
            double nl = std::max(0.0, lam[i] + (1 - len) / paths[i].size());
            for (int e : paths[i]) m[e] += nl - lam[i];
            change = std::max(change, std::abs(nl - lam[i]));
            lam[i] = nl;
        }
        if (change < 1e-16) break;
    }
    double area = 0;
    for (double x : m) area += x * x;
    return 1 / area;
}

Outcome eel_resistance()
{
    double path_err = 0;
    for (int n = 1; n <= 40; ++n) path_err = std::max(path_err, std::abs(eel_between(Graph::path(n), {0}, {n}) - n));
    auto grid = Graph::grid(3, 3);
    double grid_err = std::max(std::abs(eel_between(grid, {0}, {8}) - brute_force_eel(grid, {0}, {8})),
                               std::abs(eel_between(grid, {0, 3, 6}, {2, 5, 8}) - brute_force_eel(grid, {0, 3, 6}, {2, 5, 8})));
    std::mt19937_64 rng(11);
    int violations = 0, checks = 0;
    for (int k = 0; k < 100; ++k) {
        const int n = 8 + static_cast<int>(rng() % 8);
        std::vector<std::pair<int, int>> e;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (rng() % 100 < 35) e.push_back({a, b});
        Graph G(n, e);
        double r;
        try {
            r = eel_between(G, {0}, {n - 1});
        } catch (const DisconnectedSets&) {
            continue;
        }
        for (int j = 0; j < G.num_edges(); ++j) {
            try {
                ++checks;
                violations += eel_between(G.without_edge(j), {0}, {n - 1}) < r * (1 - 1e-12);
            } catch (const DisconnectedSets&) {
            }
        }
    }
    return {path_err < 1e-10 && grid_err < 1e-6 && violations == 0,
            fmt("path err %.1e, 3x3 grid vs brute force %.1e, Rayleigh violations %.0f", path_err, grid_err, violations) +
                " of " + std::to_string(checks)};
}

// ------------------------------------------------------------------ 12, 13

Outcome drm_convergence()
{
    Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const std::vector<cplx> samples{{0.3, 0.3}, {0.7, 0.3}, {0.7, 0.7}, {0.3, 0.7}, {0.6, 0.45}};
    std::vector<DiscreteMap> maps;
    double tangency = 0;
    int negative = 0;
    for (double eps : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        maps.push_back(discrete_riemann_map(square, eps, {0.5, 0.5}, {0.75, 0.5}));
        tangency = std::max(tangency, maps.back().boundary_tangency_error());
        negative += maps.back().negative_triangles();
    }
    std::vector<double> diff;
    for (std::size_t k = 0; k + 1 < maps.size(); ++k) {
        double d = 0;
        for (cplx z : samples) d = std::max(d, std::abs(*maps[k + 1](z) - *maps[k](z)));
        diff.push_back(d);
    }
    bool decreasing = diff[0] > diff[1] && diff[1] > diff[2];
    return {decreasing && tangency < 1e-6 && negative == 0,
            fmt("diffs %.4f > %.4f > %.4f", diff[0], diff[1], diff[2]) +
                fmt(", tangency err %.1e, negative triangles %.0f", tangency, negative)};
}

Outcome hex_ratio()
{
    auto rep = hex_ratio_probe(6);
    bool ok = true;
    std::string cs;
    for (std::size_t k = 1; k < rep.summary.size(); ++k) {
        if (k >= 2) ok = ok && rep.summary[k][1] < rep.summary[k - 1][1];
        cs += fmt("%.4f ", rep.summary[k][1]);
    }
    return {ok && rep.summary.size() == 6, "c_2..c_6 = " + cs};
}

// ------------------------------------------------------------------ 14, 15

Outcome midscribe_check()
{
    auto cube = midscribe(solids::cube());
    bool interior = true;
    for (const auto& e : cube.edges) interior = interior && e.interior;
    auto tet = midscribe(solids::tetrahedron());
    double spread = 0;
    for (const Vec3& v : tet.vertices) spread = std::max(spread, std::abs(std::hypot(v[0], v[1], v[2]) - std::sqrt(3.0)));
    for (const auto& e : tet.edges) {
        const Vec3 &a = tet.vertices[e.a], &b = tet.vertices[e.b];
        spread = std::max(spread, std::abs(std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]) - 2 * std::sqrt(2.0)));
    }
    return {cube.tangent_edges == 12 && cube.max_tangency_error < 1e-7 && interior && spread < 1e-6,
            fmt("cube %.0f/12 tangent, max err %.1e; tetrahedron off regular by %.1e", cube.tangent_edges,
                cube.max_tangency_error, spread)};
}

Outcome scribability()
{
    auto cut_cube = solids::truncate(solids::cube(), {0});
    auto trunc_dodeca = solids::truncate_all(solids::dodecahedron());
    bool ok = inscribable_type(cut_cube).status == CheckStatus::Fail &&
              circumscribable_type(trunc_dodeca).status == CheckStatus::Fail;
    std::string detail = "cut cube not inscribable, truncated dodecahedron not circumscribable";
    for (const auto& P : {solids::cube(), solids::octahedron(), solids::icosahedron()}) {
        ok = ok && inscribable_type(P).status == CheckStatus::Pass && circumscribable_type(P).status == CheckStatus::Pass;
    }
    return {ok, ok ? detail + "; cube, octahedron, icosahedron feasible" : "verdict mismatch"};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"hex flower maximal packing", hex_flower_maximal},
        {"single triangle maximal packing", single_triangle},
        {"boundary value uniqueness", uniqueness},
        {"Schwarz-Pick monotonicity", schwarz_pick},
        {"sphere packing Mobius invariance", sphere_invariance},
        {"inversive distance cross-validation", inversive_cross_validation},
        {"torus K7", torus_k7},
        {"branched packing", branched},
        {"Schwarz-Picard feasibility", schwarz_picard},
        {"CP-type probe", cp_type},
        {"EEL equals effective resistance", eel_resistance},
        {"discrete Riemann map convergence", drm_convergence},
        {"hexagonal packing ratios", hex_ratio},
        {"midscribed polyhedra", midscribe_check},
        {"scribability verdicts", scribability},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %2zu %-38s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), sec);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
