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
#include <numeric>
#include <random>

#include "doctest.h"
#include "katpack/error.hpp"
#include "katpack/layout.hpp"
#include "support.hpp"

using namespace katpack;
using namespace katpack::testing;
using doctest::Approx;

namespace
{

constexpr double kPi = 3.14159265358979323846;

// relative, since far-apart small circles have very large inversive distance
double max_inversive_change(const LayoutResult& a, const LayoutResult& b)
{
    double worst = 0;
    for (std::size_t u = 0; u < a.circles.size(); ++u)
        for (std::size_t v = u + 1; v < a.circles.size(); ++v)
        {
            double Ia = inversive_distance(a.circles[u], a.circles[v]);
            double Ib = inversive_distance(b.circles[u], b.circles[v]);
            worst = std::max(worst, std::abs(Ia - Ib) / std::max(1.0, std::abs(Ia)));
        }
    return worst;
}

}  // namespace

TEST_CASE("disk layouts of the hex flower and the single triangle")
{
    auto T = hex_flower();
    auto L = layout_disk(T, {}, maximal_disk_label(T).label);
    CHECK(std::abs(L.circles[0].c) < 1e-12);
    CHECK(L.circles[0].r == Approx(1.0 / 3).epsilon(1e-12));
    for (int v = 1; v <= 6; ++v) {
        CHECK(L.horocycle[v]);
        CHECK(std::abs(L.circles[v].c) == Approx(2.0 / 3).epsilon(1e-12));
    }
    auto tri = single_triangle();
    auto Lt = layout_disk(tri, {}, maximal_disk_label(tri).label);
    for (const Circle& C : Lt.circles) CHECK(C.r == Approx(2 * std::sqrt(3.0) - 3).epsilon(1e-12));
}

TEST_CASE("disk layouts do not depend on the root face")
{
    std::mt19937_64 rng(31);
    for (int k = 0; k < 5; ++k) {
        auto T = random_disk(rng, 150);
        auto lab = maximal_disk_label(T).label;
        LayoutOptions a, b;
        a.root_vertex = b.root_vertex = T.interior_vertices()[0];
        b.root_face = static_cast<int>(rng() % T.num_faces());
        auto La = layout_disk(T, {}, lab, a), Lb = layout_disk(T, {}, lab, b);
        double worst = 0;
        for (int v = 0; v < T.num_vertices(); ++v)
            worst = std::max(worst, std::abs(La.circles[v].c - Lb.circles[v].c) + std::abs(La.circles[v].r - Lb.circles[v].r));
        CHECK(worst < 1e-8);
        CHECK(max_inversive_change(La, Lb) < 1e-8);
        // normalization: root at the origin, its first neighbor on the positive real axis
        CHECK(std::abs(La.circles[a.root_vertex].c) < 1e-12);
        cplx first = La.circles[T.flower(a.root_vertex)[0]].c;
        CHECK(std::abs(first.imag()) < 1e-12);
        CHECK(first.real() > 0);
    }
}

TEST_CASE("horocycles are internally tangent to the unit circle")
{
    std::mt19937_64 rng(32);
    for (int k = 0; k < 10; ++k) {
        auto T = random_disk(rng, 200);
        auto L = layout_disk(T, {}, maximal_disk_label(T).label);
        for (int v : T.boundary_vertices()) CHECK(std::abs(std::abs(L.circles[v].c) + L.circles[v].r - 1) < 1e-8);
        CHECK(check_univalence(T, L).univalent);
    }
}

TEST_CASE("layout residual tracks the solver tolerance")
{
    auto T = constant_degree_ball(7, 4);
    double prev = kInf;
    for (double tol : {1e-6, 1e-8, 1e-10}) {
        SolveOptions o;
        o.tol = tol;
        o.newton = false;
        auto lab = maximal_disk_label(T, {}, o).label;
        LayoutOptions lo;
        lo.tol = tol;
        auto L = layout_disk(T, {}, lab, lo);
        CHECK(L.residual <= 100 * tol);
        CHECK(L.residual <= prev);
        prev = L.residual;
    }
}

TEST_CASE("plane layouts")
{
    auto T = hex_flower();
    PackingLabel eq{Geometry::Euclidean, std::vector<double>(7, 1.0), -1};
    auto L = layout_plane(T, {}, eq);
    CHECK(std::abs(L.center[0]) < 1e-12);
    for (int v = 1; v <= 6; ++v) {
        CHECK(std::abs(L.center[v]) == Approx(2).epsilon(1e-12));
        double turn = std::arg(L.center[v] / L.center[1]) / (kPi / 3);
        CHECK(std::abs(turn - std::round(turn)) < 1e-12);
    }
    Triangulation rh({{0, 1, 2}, {0, 2, 3}});
    auto R = layout_plane(rh, {}, PackingLabel{Geometry::Euclidean, std::vector<double>(4, 1.0), -1});
    CHECK(std::abs(R.center[0] - R.center[2]) == Approx(2).epsilon(1e-12));
    CHECK(std::abs(R.center[1] - R.center[3]) == Approx(2 * std::sqrt(3.0)).epsilon(1e-12));

    std::mt19937_64 rng(33);
    auto D = random_disk(rng, 150);
    PackingProblem P(D, Geometry::Euclidean);
    std::uniform_real_distribution<double> U(0.5, 2);
    for (int v : D.boundary_vertices()) P.set_boundary(v, U(rng));
    auto Lr = layout_plane(D, {}, solve(P).label);
    CHECK(Lr.residual < 1e-9);
}

TEST_CASE("torus layouts")
{
    auto K = k7_torus();
    auto lab = solve_euclidean(PackingProblem(K, Geometry::Euclidean)).label;
    auto L = layout_torus(K, {}, lab);
    CHECK(L.closure_residual < 1e-8);
    CHECK(std::abs(reduce_modulus(L.tau) - std::polar(1.0, kPi / 3)) < 1e-6);
    auto scaled = lab;
    for (double& r : scaled.r) r *= 2;
    auto L2 = layout_torus(K, {}, scaled);
    CHECK(std::abs(reduce_modulus(L2.tau) - reduce_modulus(L.tau)) < 1e-12);
    // relabeling the vertices changes generators, not the reduced modulus
    std::mt19937_64 rng(34);
    std::vector<int> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Face> faces;
    for (Face f : K.faces()) faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
    Triangulation Kp(faces);
    auto Lp = layout_torus(Kp, {}, solve_euclidean(PackingProblem(Kp, Geometry::Euclidean)).label);
    CHECK(std::abs(reduce_modulus(Lp.tau) - reduce_modulus(L.tau)) < 1e-8);
}

TEST_CASE("modulus reduction lands in the fundamental domain")
{
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> U(-3, 3), H(0.05, 3);
    for (int k = 0; k < 200; ++k) {
        cplx t = reduce_modulus({U(rng), H(rng)});
        CHECK(std::abs(t.real()) <= 0.5 + 1e-12);
        CHECK(std::abs(t) >= 1 - 1e-12);
        CHECK(t.imag() > 0);
    }
}

TEST_CASE("sphere packings of the tetrahedron and octahedron")
{
    auto tet = closed_from(solids::tetrahedron());
    auto L = sphere_pack(tet);
    CHECK(L.edge_residual < 1e-8);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) CHECK(inversive_distance(L.circles[u], L.circles[v]) == Approx(1).epsilon(1e-8));
    // centered configuration is the symmetric one: four congruent caps
    for (const Circle& C : L.circles) CHECK(C.rho == Approx(L.circles[0].rho).epsilon(1e-8));
    // caps centered at tetrahedral directions: half the angle arccos(-1/3)
    CHECK(L.circles[0].rho == Approx(std::acos(-1.0 / 3) / 2).epsilon(1e-8));

    auto oct = closed_from(solids::octahedron());
    auto Lo = sphere_pack(oct);
    int tangencies = 0;
    for (int u = 0; u < 6; ++u) {
        int touching = 0;
        for (int v = 0; v < 6; ++v) {
            if (u == v) continue;
            double I = inversive_distance(Lo.circles[u], Lo.circles[v]);
            if (oct.edge_index(u, v) >= 0) {
                CHECK(I == Approx(1).epsilon(1e-8));
                ++touching;
            } else {
                CHECK(I > 1 + 1e-6);  // antipodal caps are disjoint
            }
        }
        CHECK(touching == 4);
        tangencies += touching;
    }
    CHECK(tangencies == 24);
}

TEST_CASE("sphere packings agree up to Moebius maps for every point at infinity")
{
    auto ico = closed_from(solids::icosahedron());
    SphereOptions a, b;
    a.v_inf = 0;
    b.v_inf = 7;
    auto La = sphere_pack(ico, {}, a), Lb = sphere_pack(ico, {}, b);
    CHECK(La.edge_residual < 1e-8);
    CHECK(Lb.edge_residual < 1e-8);
    CHECK(max_inversive_change(La, Lb) < 1e-8);
}

TEST_CASE("univalence of maximal and wrapped packings")
{
    auto T = hex_flower();
    CHECK(check_univalence(T, layout_disk(T, {}, maximal_disk_label(T).label)).univalent);
    // a strip with tiny inner and large outer radii curls over itself
    auto K = band(12);
    PackingProblem P(K, Geometry::Hyperbolic);
    for (int v : K.boundary_vertices()) P.set_boundary(v, v <= 12 ? 0.05 : 5.0);
    auto L = layout_disk(K, {}, solve(P).label);
    auto U = check_univalence(K, L);
    CHECK(U.locally_univalent);
    CHECK_FALSE(U.univalent);
    CHECK_FALSE(U.overlaps.empty());
    CHECK(U.negative_faces == 0);
}

TEST_CASE("carrier mirrors the triangulation")
{
    auto T = constant_degree_ball(6, 2);
    auto L = layout_disk(T, {}, maximal_disk_label(T).label);
    auto C = carrier(T, L);
    CHECK(C.vertices.size() == static_cast<std::size_t>(T.num_vertices()));
    CHECK(C.faces.size() == static_cast<std::size_t>(T.num_faces()));
}
