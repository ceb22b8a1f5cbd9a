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
#include <sstream>

#include "doctest.h"
#include "katpack/error.hpp"
#include "katpack/io.hpp"
#include "katpack/layout.hpp"
#include "support.hpp"

using namespace katpack;
using doctest::Approx;

namespace
{

const std::string kData = KATPACK_TEST_DATA;

PackingProblem parse(const std::string& text)
{
    std::istringstream is(text);
    return read_problem(is);
}

std::string error_of(const std::string& text)
{
    try {
        parse(text);
    } catch (const InvalidInput& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("problem documents in both formats")
{
    auto a = read_problem_file(kData + "/hex_flower.json");
    auto b = read_problem_file(kData + "/hex_flower.txt");
    CHECK(a.T.num_vertices() == 7);
    CHECK(a.T.faces() == b.T.faces());
    auto P = parse(R"({"faces": [[0,1,2],[0,2,3],[0,3,4],[0,4,5],[0,5,6],[0,6,1]],
                       "boundary_radii": [[1, 2.5], [2, "inf"]], "targets": [[0, 6.0]]})");
    CHECK(P.geometry == Geometry::Hyperbolic);
    CHECK(P.boundary_radius[1] == 2.5);
    CHECK(std::isinf(P.boundary_radius[2]));
    CHECK(P.target[0] == 6.0);
    CHECK(parse(R"({"faces": [[0,1,2]], "geometry": "euclidean"})").geometry == Geometry::Euclidean);
    CHECK(error_of(R"({"faces": [[0,1,2]], "geometry": "euclidean", "boundary_radii": [[0, "inf"]]})").size() > 0);
}

TEST_CASE("reader errors name the offending field")
{
    CHECK(error_of(R"({"faces": [[0,1,2],[0,2]]})").find("faces[1]") != std::string::npos);
    CHECK(error_of(R"({"nofaces": 1})").find("faces") != std::string::npos);
    CHECK(error_of(R"({"faces": [[0,1,2]], "geometry": "elliptic"})").find("geometry") != std::string::npos);
    CHECK(error_of(R"({"faces": [[0,1,2],[0,2,3],[0,3,4],[0,4,5],[0,5,6],[0,6,1]], "boundary_radii": [[0, 1]]})")
              .find("boundary_radii[0]") != std::string::npos);
    CHECK(error_of(R"({"faces": [[0,1,2]], "targets": [[0]]})").find("targets[0]") != std::string::npos);
    CHECK(error_of("{\"faces\": [[0,1,2]").size() > 0);
    CHECK(error_of("0 1 2\n0 2 x\n").find("line 2") != std::string::npos);
    CHECK_THROWS_AS(read_problem_file(kData + "/malformed_face.json"), InvalidInput);
    CHECK_THROWS_AS(read_problem_file(kData + "/does_not_exist.json"), InvalidInput);
}

TEST_CASE("labels round trip and keep the superpacking property")
{
    std::mt19937_64 rng(51);
    auto T = testing::random_disk(rng, 120);
    auto P = PackingProblem::maximal(T);
    auto sol = solve(P);
    std::stringstream ss;
    write_label(ss, sol.label, sol.report);
    auto back = read_label(ss);
    CHECK(back.geometry == sol.label.geometry);
    REQUIRE(back.r.size() == sol.label.r.size());
    for (std::size_t v = 0; v < back.r.size(); ++v) {
        if (std::isinf(sol.label.r[v]))
            CHECK(std::isinf(back.r[v]));
        else
            CHECK(back.r[v] == sol.label.r[v]);
    }
    CHECK(superpacking_check(P, back));
}

TEST_CASE("circles round trip exactly")
{
    for (const Circle& C : {Circle::plane({0.25, -1.5}, 0.125), Circle::plane({1, 2}, 3, -1),
                            Circle::line({0, 1}, 2.5), Circle::sphere({0, 0.6, 0.8}, 0.7)}) {
        Circle D = circle_from_json(circle_json(C));
        CHECK(D.kind == C.kind);
        CHECK(D.o == C.o);
        CHECK(D.c == C.c);
        CHECK(D.r == C.r);
        CHECK(D.p == C.p);
        CHECK(D.rho == C.rho);
        CHECK(D.n == C.n);
        CHECK(D.t == C.t);
    }
    CHECK_THROWS_AS(circle_from_json(R"({"kind": "ellipse"})"), InvalidInput);
}

TEST_CASE("layouts round trip")
{
    auto T = testing::hex_flower();
    auto L = layout_disk(T, {}, maximal_disk_label(T).label);
    std::stringstream ss;
    write_layout(ss, T, L);
    auto F = read_layout(ss);
    CHECK(F.faces == T.faces());
    CHECK(F.layout.model == Model::Disk);
    REQUIRE(F.layout.circles.size() == L.circles.size());
    for (std::size_t v = 0; v < L.circles.size(); ++v) {
        CHECK(F.layout.circles[v].c == L.circles[v].c);
        CHECK(F.layout.circles[v].r == L.circles[v].r);
        CHECK(F.layout.horocycle[v] == L.horocycle[v]);
    }

    auto oct = testing::closed_from(solids::octahedron());
    auto S = sphere_pack(oct);
    std::stringstream s2;
    write_layout(s2, oct, S);
    auto G = read_layout(s2);
    CHECK(G.layout.model == Model::Sphere);
    for (std::size_t v = 0; v < S.circles.size(); ++v) CHECK(G.layout.circles[v].p == S.circles[v].p);

    std::stringstream bad(R"({"model": "disk", "faces": [[0,1,2]], "circles": []})");
    CHECK_THROWS_AS(read_layout(bad), InvalidInput);
}

TEST_CASE("output is deterministic")
{
    auto run = [] {
        std::mt19937_64 rng(52);
        auto T = testing::random_disk(rng, 150);
        auto L = layout_disk(T, {}, maximal_disk_label(T).label);
        std::stringstream ss;
        write_layout(ss, T, L);
        return ss.str() + render_svg(LayoutFile{T.faces(), L});
    };
    CHECK(run() == run());
}

TEST_CASE("graphs, polygons and polyhedra from files and names")
{
    auto oct = read_polyhedron("octahedron");
    CHECK(oct.num_vertices == 6);
    CHECK(read_polyhedron("prism5").num_vertices == 10);
    CHECK(read_polyhedron("truncated-tetrahedron").num_vertices == 12);
    CHECK(read_polyhedron("cube-cut").num_vertices == 10);
    CHECK(read_polyhedron(kData + "/octahedron.txt").faces.size() == 8);
    CHECK_THROWS_AS(read_polyhedron("rhombus"), InvalidInput);
    auto K = read_complex_file(kData + "/k7_torus.txt");
    CHECK(K.kind() == SurfaceKind::Torus);
}

namespace
{

int count(const std::string& s, const std::string& what)
{
    int n = 0;
    for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("rendered figures")
{
    auto T = testing::hex_flower();
    auto disk = render_svg({T.faces(), layout_disk(T, {}, maximal_disk_label(T).label)});
    CHECK(count(disk, "<circle") == 8);  // seven circles and the unit circle
    RenderOptions bare;
    bare.frame = false;
    CHECK(count(render_svg({T.faces(), layout_disk(T, {}, maximal_disk_label(T).label)}, bare), "<circle") == 7);

    // torus: the fundamental copy and its eight neighbors, plus the period parallelogram
    auto K = testing::k7_torus();
    auto L = layout_torus(K, {}, solve_euclidean(PackingProblem(K, Geometry::Euclidean)).label);
    auto torus = render_svg({K.faces(), L});
    CHECK(count(torus, "<circle") == 9 * 7);
    CHECK(count(torus, "<path") == 1);

    // sphere: two hemispheres side by side
    auto oct = testing::closed_from(solids::octahedron());
    auto sphere = render_svg({oct.faces(), sphere_pack(oct)});
    CHECK(sphere.find("width=\"1000\" height=\"500\"") != std::string::npos);
    CHECK(count(sphere, "<path") > 0);
}
