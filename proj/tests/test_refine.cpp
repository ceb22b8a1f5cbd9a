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
#include <cmath>

#include "doctest.h"
#include "katpack/error.hpp"
#include "katpack/refine.hpp"
#include "support.hpp"

using namespace katpack;
using doctest::Approx;

namespace
{

constexpr double kPi = 3.14159265358979323846;

const Polygon kSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

Polygon unit_disk(int n)
{
    Polygon p;
    for (int k = 0; k < n; ++k) p.push_back(std::polar(1.0, 2 * kPi * k / n));
    return p;
}

double segment_distance(cplx p, cplx a, cplx b)
{
    cplx d = b - a;
    double t = std::clamp(std::real((p - a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

std::vector<Vec3> lift(const std::vector<cplx>& pts)
{
    std::vector<Vec3> out;
    for (cplx z : pts) out.push_back({z.real(), z.imag(), 0});
    return out;
}

}  // namespace

TEST_CASE("hex cutouts")
{
    auto C = hex_cutout(kSquare, 0.25, CutoutRule::Center);
    CHECK(C.T.num_vertices() > 0);
    CHECK(C.T.kind() == SurfaceKind::Disk);
    for (int v : C.T.interior_vertices()) CHECK(C.T.flower(v).size() == 6);
    // lattice aligned through the centroid
    CHECK(C.vertex_at(0, 0) >= 0);
    CHECK(std::abs(C.points[C.vertex_at(0, 0)] - cplx(0.5, 0.5)) < 1e-12);
    // neighbors are 2 eps apart
    for (int v = 0; v < C.T.num_vertices(); ++v)
        for (int w : C.T.flower(v)) CHECK(std::abs(C.points[v] - C.points[w]) == Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(hex_cutout(kSquare, 10), TooCoarse);
}

TEST_CASE("cutout counts match the lattice density")
{
    const double eps = 1.0 / 8;
    const double cell = std::sqrt(3.0) / 2 * (2 * eps) * (2 * eps);
    auto disk = unit_disk(512);
    // centers anywhere in the disk, versus whole circles inside it (radius 1 - eps)
    double centered = kPi / cell, closed = kPi * (1 - eps) * (1 - eps) / cell;
    int nc = hex_cutout(disk, eps, CutoutRule::Center).T.num_vertices();
    int nd = hex_cutout(disk, eps, CutoutRule::ClosedDisk).T.num_vertices();
    CHECK(std::abs(nc - centered) < 0.2 * centered);
    CHECK(std::abs(nd - closed) < 0.2 * closed);
    CHECK(nd < nc);
}

TEST_CASE("discrete Riemann map normalization and symmetry")
{
    auto m = discrete_riemann_map(kSquare, 1.0 / 16, {0.5, 0.5}, {0.75, 0.5});
    CHECK(std::abs(*m({0.5, 0.5})) < 1e-12);
    cplx fy = *m({0.75, 0.5});
    CHECK(std::abs(fy.imag()) < 1e-12);
    CHECK(fy.real() > 0);
    CHECK_FALSE(m({1.5, 0.5}).has_value());
    CHECK(m.boundary_tangency_error() < 1e-6);
    CHECK(m.negative_triangles() == 0);

    // the square and the normalization are symmetric about y = 1/2, so f(conj z) = conj f(z)
    auto m32 = discrete_riemann_map(kSquare, 1.0 / 32, {0.5, 0.5}, {0.75, 0.5});
    double asym = 0;
    for (cplx z : {cplx(0.3, 0.3), cplx(0.6, 0.2), cplx(0.8, 0.4), cplx(0.45, 0.1)}) {
        cplx mirror(z.real(), 1 - z.imag());
        asym = std::max(asym, std::abs(*m32(mirror) - std::conj(*m32(z))));
    }
    CHECK(asym < 0.02);
}

TEST_CASE("discrete Riemann map distortion decreases under refinement")
{
    // at eps = 1/8 no face centroid falls in the box
    double prev = kInf;
    for (double eps : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        auto m = discrete_riemann_map(kSquare, eps, {0.5, 0.5}, {0.75, 0.5});
        double d = m.max_distortion({0.3, 0.3}, {0.7, 0.7});
        CHECK(d >= 1);
        CHECK(d < prev);
        prev = d;
    }
    CHECK_THROWS_AS(discrete_riemann_map(kSquare, 1.0 / 4, {0.5, 0.5}, {0.52, 0.5}), TooCoarse);
}

TEST_CASE("equilateral shapes of a hex patch are nearly straight triangles")
{
    auto K = constant_degree_ball(6, 3);
    auto S = equilateral_shapes(K, 2);
    int checked = 0;
    for (const auto& F : S.faces) {
        auto f = K.face(F.face);
        if (f[0] != 0 && f[1] != 0 && f[2] != 0) continue;
        ++checked;
        int k = static_cast<int>(F.points.size()) / 3;
        cplx A = F.points[0], B = F.points[k], C = F.points[2 * k];
        double s = std::min({std::abs(B - A), std::abs(C - B), std::abs(A - C)});
        CHECK(std::max({std::abs(B - A), std::abs(C - B), std::abs(A - C)}) / s < 1.01);
        for (cplx p : F.points)
            CHECK(std::min({segment_distance(p, A, B), segment_distance(p, B, C), segment_distance(p, C, A)}) < 0.01 * s);
    }
    CHECK(checked == 6);
}

TEST_CASE("single triangle shapes are ideal and mirror symmetric")
{
    auto K = testing::single_triangle();
    for (int n : {1, 2}) {
        auto S = equilateral_shapes(K, n);
        REQUIRE(S.faces.size() == 1);
        const auto& F = S.faces[0];
        int k = static_cast<int>(F.points.size()) / 3;
        for (int c = 0; c < 3; ++c) CHECK(std::abs(F.points[c * k]) == Approx(1).epsilon(1e-9));
        std::vector<cplx> mirrored;
        for (cplx z : F.points) mirrored.push_back(std::conj(z));
        CHECK(polyline_hausdorff(lift(F.points), lift(mirrored)) < 1e-3);
    }
}

TEST_CASE("shapes converge under refinement")
{
    auto K = constant_degree_ball(7, 1);
    std::vector<ShapeResult> S;
    for (int n : {1, 2, 3}) S.push_back(equilateral_shapes(K, n));
    double d12 = polyline_hausdorff(S[0].faces[0].points3, S[1].faces[0].points3);
    double d23 = polyline_hausdorff(S[1].faces[0].points3, S[2].faces[0].points3);
    CHECK(d23 < d12);
}

TEST_CASE("ring constant probe")
{
    auto skip = ring_constant_probe(3, 2, 2);
    CHECK(skip.flag("skipped"));
    CHECK(skip.summary.empty());

    auto rep = ring_constant_probe(7, 3, 4, 5);
    CHECK_FALSE(rep.flag("skipped"));
    CHECK(rep.flag("positive"));
    CHECK(rep.flag("non_increasing"));
    REQUIRE(rep.summary.size() == 4);
    // the summary is the running minimum over the rows
    for (const auto& s : rep.summary) {
        double m = kInf;
        for (const auto& r : rep.rows)
            if (r[0] <= s[0]) m = std::min(m, r[5]);
        CHECK(s[1] == m);
        CHECK(s[1] > 0);
    }
}

TEST_CASE("hex ratio probe")
{
    auto rep = hex_ratio_probe(4, 8, 3);
    REQUIRE(rep.summary.size() == 4);
    CHECK(rep.flag("strictly_decreasing"));
    for (const auto& r : rep.rows) CHECK(r[2] >= 0);
    CHECK_THROWS_AS(hex_ratio_probe(1), InvalidInput);
    // reproducible for a fixed seed
    CHECK(hex_ratio_probe(3, 4, 9).rows == hex_ratio_probe(3, 4, 9).rows);
}
