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
#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "katpack/error.hpp"
#include "katpack/polyhedra.hpp"
#include "support.hpp"

using namespace katpack;
using namespace katpack::testing;

namespace
{

constexpr double kPi = 3.14159265358979323846;

std::set<std::array<int, 3>> canonical(const std::vector<Face>& faces)
{
    std::set<std::array<int, 3>> out;
    for (Face f : faces) {
        std::rotate(f.begin(), std::min_element(f.begin(), f.end()), f.end());
        out.insert(f);
    }
    return out;
}

}  // namespace

TEST_CASE("tetrahedron boundary is a sphere")
{
    auto T = closed_from(solids::tetrahedron());
    CHECK(T.kind() == SurfaceKind::Sphere);
    CHECK(T.num_vertices() == 4);
    CHECK(T.num_edges() == 6);
    CHECK(T.num_faces() == 4);
    CHECK(T.euler_characteristic() == 2);
}

TEST_CASE("hex flower is a disk with one interior vertex")
{
    auto T = hex_flower();
    CHECK(T.kind() == SurfaceKind::Disk);
    CHECK(T.interior_vertices() == std::vector<int>{0});
    CHECK(T.boundary_vertices().size() == 6);
    CHECK(T.degree(0) == 6);
    auto rep = euler_report(T);
    CHECK(rep.F - 2 * rep.V_int == 4);
    CHECK(rep.V_bd - 2 == 4);
    CHECK(rep.identity_holds);
}

TEST_CASE("malformed face lists are rejected")
{
    CHECK_THROWS_AS(Triangulation({{0, 1, 2}, {0, 2, 1}}), NotSimplicial);
    CHECK_THROWS_AS(Triangulation({{0, 0, 1}}), NotSimplicial);
    // two disks pinched at vertex 0
    CHECK_THROWS_AS(Triangulation({{0, 1, 2}, {0, 3, 4}}), NonManifold);
    // a third face on an edge necessarily repeats a direction
    CHECK_THROWS_AS(Triangulation({{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}), OrientationInconsistent);
    // two faces inducing the same direction on an edge
    CHECK_THROWS_AS(Triangulation({{0, 1, 2}, {0, 1, 3}}), OrientationInconsistent);
}

TEST_CASE("euler counts")
{
    auto tri = euler_report(single_triangle());
    CHECK(tri.F == 1);
    CHECK(tri.V_int == 0);
    CHECK(tri.V_bd == 3);
    CHECK(tri.identity_holds);
    auto k7 = euler_report(k7_torus());
    CHECK(k7.F == 14);
    CHECK(k7.V == 7);
    CHECK(k7.F - 2 * k7.V == 0);
    CHECK(k7_torus().kind() == SurfaceKind::Torus);
}

TEST_CASE("vertex removal on the regular solids")
{
    auto oct = remove_vertex_star(closed_from(solids::octahedron()), 0);
    CHECK(oct.disk.kind() == SurfaceKind::Disk);
    CHECK(oct.disk.boundary_vertices().size() == 4);
    CHECK(oct.disk.interior_vertices().size() == 1);
    auto ico = remove_vertex_star(closed_from(solids::icosahedron()), 3);
    CHECK(ico.disk.boundary_vertices().size() == 5);
    CHECK(ico.disk.interior_vertices().size() == 6);
    auto tet = remove_vertex_star(closed_from(solids::tetrahedron()), 2);
    CHECK(tet.disk.num_faces() == 1);
    CHECK(tet.disk.num_vertices() == 3);
}

TEST_CASE("removing a star and regluing it gives back the sphere")
{
    for (const auto& P : {solids::tetrahedron(), solids::octahedron(), solids::icosahedron()}) {
        auto K = closed_from(P);
        for (int v = 0; v < K.num_vertices(); ++v) {
            auto R = remove_vertex_star(K, v);
            std::vector<Face> faces;
            for (Face f : R.disk.faces()) faces.push_back({R.to_old[f[0]], R.to_old[f[1]], R.to_old[f[2]]});
            for (int f : K.star(v)) faces.push_back(K.face(f));
            CHECK(canonical(faces) == canonical(K.faces()));
        }
    }
}

TEST_CASE("hex refinement counts")
{
    auto t = hex_refine(single_triangle()).tri;
    CHECK(t.num_faces() == 4);
    CHECK(t.num_vertices() == 6);
    CHECK(t.num_edges() == 9);
    auto h = hex_refine(hex_flower()).tri;
    CHECK(h.num_faces() == 24);
    CHECK(h.num_vertices() == 19);
}

TEST_CASE("hex refinement closed-form counts on random complexes")
{
    std::mt19937_64 rng(21);
    for (int k = 0; k < 1000; ++k) {
        Triangulation T = k % 3 == 0 ? random_disk(rng, 40) : k % 3 == 1 ? closed_from(solids::icosahedron()) : k7_torus();
        if (k % 3 != 0) {
            std::vector<Face> faces = T.faces();
            if (k % 3 == 1)
                for (int i = 0; i < 5; ++i) try_flip(faces, static_cast<int>(rng() % faces.size()), static_cast<int>(rng() % 3));
            T = Triangulation(faces);
        }
        auto R = hex_refine(T).tri;
        REQUIRE(R.num_vertices() == T.num_vertices() + T.num_edges());
        REQUIRE(R.num_edges() == 2 * T.num_edges() + 3 * T.num_faces());
        REQUIRE(R.num_faces() == 4 * T.num_faces());
        REQUIRE(R.euler_characteristic() == T.euler_characteristic());
    }
}

TEST_CASE("barycentric subdivision")
{
    CHECK(barycentric_subdivide(single_triangle()).tri.num_faces() == 6);
    CHECK(barycentric_subdivide(closed_from(solids::tetrahedron())).tri.num_faces() == 24);
    auto k = barycentric_subdivide(k7_torus()).tri;
    CHECK(k.num_faces() == 84);
    CHECK(k.euler_characteristic() == 0);
}

TEST_CASE("face star complexes")
{
    auto cube = face_star_complex(solids::cube());
    CHECK(cube.K.num_vertices() == 14);
    CHECK(cube.K.num_faces() == 24);
    auto tet = face_star_complex(solids::tetrahedron());
    CHECK(tet.K.num_vertices() == 8);
    CHECK(tet.K.num_faces() == 12);
    auto prism = face_star_complex(solids::prism(3));
    CHECK(prism.K.num_vertices() == 11);
    CHECK(prism.K.num_faces() == 18);
}

TEST_CASE("KAT edge-label conditions")
{
    for (const auto& P : {solids::tetrahedron(), solids::octahedron(), solids::icosahedron()}) {
        auto K = closed_from(P);
        CHECK(check_kat_conditions(K, EdgeLabel::constant(K, EdgeLabel::Mode::Overlap, 0.0)).ok());
    }
    auto oct = closed_from(solids::octahedron());
    auto rep = check_kat_conditions(oct, EdgeLabel::constant(oct, EdgeLabel::Mode::Overlap, kPi / 2));
    CHECK(rep.bad_quads.size() == 3);
    auto ico = closed_from(solids::icosahedron());
    CHECK(check_kat_conditions(ico, EdgeLabel::constant(ico, EdgeLabel::Mode::Overlap, kPi / 3)).ok());
    CHECK(check_kat_conditions(closed_from(solids::tetrahedron()), {}).tetrahedral_warning);
}

TEST_CASE("KAT verdicts do not depend on vertex labels")
{
    std::mt19937_64 rng(5);
    for (const auto& P : {solids::octahedron(), solids::icosahedron()}) {
        auto K = closed_from(P);
        for (double phi : {0.0, kPi / 3, kPi / 2}) {
            auto base = check_kat_conditions(K, EdgeLabel::constant(K, EdgeLabel::Mode::Overlap, phi));
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<int> perm(K.num_vertices());
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                std::vector<Face> faces;
                for (Face f : K.faces()) faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
                Triangulation Kp(faces);
                auto rep = check_kat_conditions(Kp, EdgeLabel::constant(Kp, EdgeLabel::Mode::Overlap, phi));
                CHECK(rep.bad_triangles.size() == base.bad_triangles.size());
                CHECK(rep.bad_quads.size() == base.bad_quads.size());
            }
        }
    }
}

TEST_CASE("branch structure inequality at the branch vertex")
{
    BranchStructure beta;
    beta.points.push_back({0, 1});
    CHECK(check_branch_structure(cone_ball(5, 6, 2), {}, beta).status == CheckStatus::Pass);
    CHECK(check_branch_structure(cone_ball(4, 6, 2), {}, beta).status == CheckStatus::Fail);
    CHECK(check_branch_structure(hex_flower(), {}, BranchStructure{}).status == CheckStatus::Pass);
}

TEST_CASE("constant degree balls")
{
    auto g1 = constant_degree_ball(6, 1);
    CHECK(canonical(g1.faces()).size() == 6);
    CHECK(g1.num_vertices() == 7);
    CHECK(g1.interior_vertices().size() == 1);
    CHECK(constant_degree_ball(6, 2).num_vertices() == 19);
    for (int g = 1; g <= 6; ++g) CHECK(constant_degree_ball(6, g).num_vertices() == 1 + 3 * g * (g + 1));
    auto g7 = constant_degree_ball(7, 2);
    for (int v : g7.interior_vertices()) CHECK(g7.degree(v) == 7);
    CHECK_THROWS_AS(constant_degree_ball(5, 2), InvalidInput);
}

TEST_CASE("face list round trip")
{
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
        auto T = random_disk(rng, 120);
        auto U = build_from_faces(T.faces());
        CHECK(canonical(U.faces()) == canonical(T.faces()));
        CHECK(U.num_edges() == T.num_edges());
        CHECK(U.boundary_vertices() == T.boundary_vertices());
    }
}

TEST_CASE("separating edges are reported")
{
    // two triangles sharing an edge whose endpoints are both on the boundary
    Triangulation T({{0, 1, 2}, {0, 2, 3}});
    auto sep = T.separating_edges();
    REQUIRE(sep.size() == 1);
    auto e = T.edge(sep[0]);
    CHECK(std::min(e.a, e.b) == 0);
    CHECK(std::max(e.a, e.b) == 2);
    CHECK(hex_flower().separating_edges().empty());
}

TEST_CASE("simple cycles of the octahedron")
{
    auto oct = closed_from(solids::octahedron());
    auto cycles = simple_cycles(oct, 3);
    CHECK(cycles.size() == 8);  // every 3-cycle bounds a face
    std::size_t quads = 0;
    for (const auto& c : simple_cycles(oct, 4)) quads += c.size() == 4;
    CHECK(quads == 15);
}
