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
#include <cmath>
#include <random>

#include "doctest.h"
#include "katpack/error.hpp"
#include "katpack/solver.hpp"
#include "support.hpp"

using namespace katpack;
using namespace katpack::testing;
using doctest::Approx;

namespace
{

constexpr double kPi = 3.14159265358979323846;

PackingProblem random_finite(std::mt19937_64& rng, double lo = 0.5, double hi = 3.0)
{
    auto T = random_disk(rng, 150);
    PackingProblem P(T, Geometry::Hyperbolic);
    std::uniform_real_distribution<double> R(lo, hi);
    for (int v : T.boundary_vertices()) P.set_boundary(v, R(rng));
    return P;
}

// euclidean angle at a in the tangency triangle (a, b, c)
double euc_angle(double a, double b, double c)
{
    double x = b + c, y = a + b, z = a + c;
    return std::acos((y * y + z * z - x * x) / (2 * y * z));
}

double euc_sum(const Triangulation& T, const std::vector<double>& r, int v)
{
    double s = 0;
    for (int f : T.star(v)) {
        const Face& F = T.face(f);
        int k = T.corner(f, v);
        s += euc_angle(r[v], r[F[(k + 1) % 3]], r[F[(k + 2) % 3]]);
    }
    return s;
}

template <class F>
double bisect(F f, double lo, double hi)  // f decreasing, root in [lo, hi]
{
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("hyperbolic solves with known answers")
{
    auto flower = solve(PackingProblem::maximal(hex_flower()));
    CHECK(flower.label.r[0] == Approx(std::log(2.0)).epsilon(1e-12));
    auto tri = maximal_disk_label(single_triangle());
    for (double r : tri.label.r) CHECK(std::isinf(r));
    CHECK(tri.report.area == Approx(kPi).epsilon(1e-12));

    auto cone = PackingProblem::maximal(cone_ball(5, 6, 1));
    cone.set_target(0, 4 * kPi);
    auto res = solve(cone);
    CHECK(angle_sums(cone, res.label)[0] == Approx(4 * kPi).epsilon(1e-10));
}

TEST_CASE("euclidean solves with known answers")
{
    auto flower = solve(PackingProblem(hex_flower(), Geometry::Euclidean));
    CHECK(flower.label.r[0] == Approx(1).epsilon(1e-10));
    CHECK(angle_sum(hex_flower(), flower.label.native(), {}, 0) == Approx(2 * kPi).epsilon(1e-10));

    auto k7 = solve_euclidean(PackingProblem(k7_torus(), Geometry::Euclidean));
    for (double r : k7.label.r) CHECK(r == Approx(k7.label.r[0]).epsilon(1e-12));
}

TEST_CASE("two interior vertices against nested bisection")
{
    auto T = strip();
    PackingProblem P(T, Geometry::Euclidean);
    const double bd[] = {0.7, 1.9, 1.1, 0.4, 2.5, 1.3, 0.9};
    for (int v = 2; v <= 8; ++v) P.set_boundary(v, bd[v - 2]);
    auto res = solve(P);

    std::vector<double> r(9);
    for (int v = 2; v <= 8; ++v) r[v] = bd[v - 2];
    auto r1_given = [&](double r0) {
        r[0] = r0;
        return bisect([&](double r1) { r[1] = r1; return euc_sum(T, r, 1) - 2 * kPi; }, 1e-6, 1e3);
    };
    double r0 = bisect([&](double x) { r[1] = r1_given(x); r[0] = x; return euc_sum(T, r, 0) - 2 * kPi; }, 1e-6, 1e3);
    double r1 = r1_given(r0);
    CHECK(res.label.r[0] == Approx(r0).epsilon(1e-8));
    CHECK(res.label.r[1] == Approx(r1).epsilon(1e-8));
}

TEST_CASE("maximal labels shrink as the ball grows")
{
    auto g2 = maximal_disk_label(constant_degree_ball(7, 2)).label.r[0];
    auto g3 = maximal_disk_label(constant_degree_ball(7, 3)).label.r[0];
    CHECK(g2 > g3);
}

TEST_CASE("closed genus two surface")
{
    auto res = closed_surface_label(genus_two());
    CHECK(res.report.area == Approx(4 * kPi).epsilon(1e-7));
    CHECK(res.report.shortage <= res.report.residual * 11 + 1e-15);
    CHECK_THROWS_AS(closed_surface_label(k7_torus()), InvalidInput);
}

TEST_CASE("vertex-transitive closed surface gets a constant label")
{
    auto K = cyclic_k19();
    REQUIRE(K.kind() == SurfaceKind::ClosedGenus);
    CHECK(K.num_faces() == 114);
    auto res = closed_surface_label(K);
    // 18 equilateral faces per vertex: angle pi/9, and cosh 2r = cos a / (1 - cos a)
    const double a = kPi / 9;
    const double r = std::acosh(std::cos(a) / (1 - std::cos(a))) / 2;
    for (double x : res.label.r) CHECK(std::abs(x - r) < 1e-9);
    CHECK(res.report.area == Approx(2 * kPi * 38).epsilon(1e-7));
}

TEST_CASE("area minus shortage is (F - 2V) pi for any label")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> R(0.1, 3.0);
    for (const auto& K : {k7_torus(), genus_two()}) {
        PackingProblem P(K, Geometry::Hyperbolic);
        for (int trial = 0; trial < 20; ++trial) {
            PackingLabel L;
            L.geometry = Geometry::Hyperbolic;
            for (int v = 0; v < K.num_vertices(); ++v) L.r.push_back(R(rng));
            double A = 0, s = 0;
            for (double a : face_areas(K, {}, L)) A += a;
            for (double th : angle_sums(P, L)) s += 2 * kPi - th;
            CHECK(A - s == Approx((K.num_faces() - 2.0 * K.num_vertices()) * kPi).epsilon(1e-12));
        }
    }
}

TEST_CASE("Schwarz-Picard feasibility")
{
    auto patch = PackingProblem::maximal(constant_degree_ball(6, 2));
    auto ok = schwarz_picard_feasibility(patch);
    CHECK(ok.status == CheckStatus::Pass);
    CHECK(ok.min_margin > 0);
    auto bad = PackingProblem::maximal(hex_flower());
    bad.set_target(0, 6 * kPi);
    auto v = schwarz_picard_feasibility(bad);
    CHECK(v.status == CheckStatus::Fail);
    CHECK(v.witness == std::vector<int>{0});
    // the solver reports the collapsing set
    try {
        solve(bad);
        FAIL("expected Infeasible");
    } catch (const Infeasible& e) {
        CHECK(std::find(e.vertices.begin(), e.vertices.end(), 0) != e.vertices.end());
    }
}

TEST_CASE("superpacking check")
{
    PackingProblem P(hex_flower(), Geometry::Euclidean);
    PackingLabel L{Geometry::Euclidean, std::vector<double>(7, 1.0), -1};
    CHECK(superpacking_check(P, L));
    L.r[0] = 0.5;
    CHECK_FALSE(superpacking_check(P, L));
    L.r[0] = 100;
    CHECK(superpacking_check(P, L));
    auto H = PackingProblem::maximal(constant_degree_ball(6, 3));
    PackingLabel big{Geometry::Hyperbolic, std::vector<double>(H.T.num_vertices(), 10.0), -1};
    for (int v : H.T.boundary_vertices()) big.r[v] = kInf;
    CHECK(superpacking_check(H, big));
}

TEST_CASE("Schwarz-Pick comparisons")
{
    auto T = constant_degree_ball(6, 3);
    auto maxp = maximal_disk_label(T);
    PackingProblem five(T, Geometry::Hyperbolic);
    for (int v : T.boundary_vertices()) five.set_boundary(v, 5.0);
    auto fin = solve(five);
    auto cmp = schwarz_pick_compare(five, maxp.label, fin.label);
    CHECK(cmp.vertex_dominance);
    CHECK(cmp.area_dominance);
    auto same = schwarz_pick_compare(five, fin.label, fin.label);
    CHECK(same.identical);

    std::mt19937_64 rng(12);
    int bad = 0;
    for (int k = 0; k < 100; ++k) {
        auto T2 = random_disk(rng, 80);
        PackingProblem one(T2, Geometry::Hyperbolic), two(T2, Geometry::Hyperbolic);
        for (int v : T2.boundary_vertices()) {
            one.set_boundary(v, 1.0);
            two.set_boundary(v, 2.0);
        }
        auto c = schwarz_pick_compare(one, solve(two).label, solve(one).label);
        bad += !c.vertex_dominance || !c.area_dominance;
    }
    CHECK(bad == 0);
}

TEST_CASE("solutions do not depend on the starting label")
{
    std::mt19937_64 rng(13);
    for (int k = 0; k < 10; ++k) {
        auto P = random_finite(rng);
        SolveOptions hi, lo;
        hi.initial = std::vector<double>(P.T.num_vertices(), 10.0);
        lo.initial = std::vector<double>(P.T.num_vertices(), 0.1);
        auto a = solve(P, hi), b = solve(P, lo);
        for (int v : P.free_vertices()) CHECK(a.label.r[v] == Approx(b.label.r[v]).epsilon(1e-9));
    }
}

TEST_CASE("maximal packings have ideal polygon area")
{
    std::mt19937_64 rng(14);
    for (int k = 0; k < 10; ++k) {
        auto T = random_disk(rng, 150);
        auto res = maximal_disk_label(T);
        CHECK(res.report.area == Approx((T.boundary_vertices().size() - 2.0) * kPi).epsilon(1e-8));
        CHECK(res.report.superpacking);
        CHECK(res.report.residual <= 1e-10);
    }
}

TEST_CASE("raising one boundary radius never shrinks an interior radius")
{
    std::mt19937_64 rng(15);
    int bad = 0;
    for (int k = 0; k < 50; ++k) {
        auto P = random_finite(rng);
        auto Q = P;
        const auto& bd = P.T.boundary_vertices();
        int w = bd[rng() % bd.size()];
        Q.set_boundary(w, P.boundary_radius[w] * 1.5);
        auto a = solve(P), b = solve(Q);
        for (int v : P.free_vertices()) bad += b.label.r[v] < a.label.r[v] - 1e-9;
    }
    CHECK(bad == 0);
}

TEST_CASE("parallel Jacobi sweep matches the serial reference")
{
    std::mt19937_64 rng(16);
    auto P = random_finite(rng);
    SolveOptions serial, jacobi;
    serial.newton = false;
    jacobi.jacobi = true;
    jacobi.threads = 4;
    auto a = solve(P, serial), b = solve(P, jacobi);
    for (int v : P.free_vertices()) CHECK(a.label.r[v] == Approx(b.label.r[v]).epsilon(1e-8));
}

TEST_CASE("solver residual follows the requested tolerance")
{
    auto P = PackingProblem::maximal(constant_degree_ball(7, 4));
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        SolveOptions o;
        o.tol = tol;
        auto res = solve(P, o);
        CHECK(res.report.residual <= tol);
        CHECK(max_residual(P, res.label) <= tol);
    }
}

TEST_CASE("problem validation")
{
    PackingProblem P(hex_flower(), Geometry::Euclidean);
    P.set_boundary(1, kInf);
    CHECK_THROWS_AS(P.validate(), InvalidInput);
    auto Q = PackingProblem::maximal(hex_flower());
    Q.set_target(0, -1);
    CHECK_THROWS_AS(Q.validate(), InvalidInput);
}
