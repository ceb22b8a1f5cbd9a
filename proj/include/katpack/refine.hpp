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
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "katpack/layout.hpp"

namespace katpack
{

using Polygon = std::vector<cplx>;

/** Hex lattice cut to a domain. Vertex v sits at lattice point ij[v]. */
struct Cutout {
    Triangulation T;
    std::vector<cplx> points;
    std::vector<std::array<int, 2>> ij;
    cplx origin{};
    double eps{0};

    cplx lattice_point(int i, int j) const;
    /** Face containing z with barycentric weights (corner order of the face), or -1. */
    int locate(cplx z, std::array<double, 3>& bary) const;
    /** Vertex at lattice point (i, j), or -1. */
    int vertex_at(int i, int j) const;

    // keyed by (i, j, up/down)
    std::unordered_map<std::int64_t, int> face_at;
    std::unordered_map<std::int64_t, int> vertex_of;
};

/** ClosedDisk keeps circles lying in the domain; Center keeps circles centered in it. */
enum class CutoutRule { ClosedDisk, Center };

/**
 * Penny packing of radius eps cut to the polygon, lattice aligned with the
 * x-axis through the polygon's centroid. Keeps the largest face component
 * with pinch vertices split off.
 */
Cutout hex_cutout(const Polygon& domain, double eps, CutoutRule rule = CutoutRule::ClosedDisk);

struct DiscreteMap {
    Cutout source;
    SolveReport solve;
    LayoutResult layout;         // normalized: u at 0, v on the positive axis
    std::vector<cplx> target;    // euclidean centers in the unit disk
    int u{-1}, v{-1};
    double eps{0};

    /** Piecewise-affine value, empty outside the source carrier. */
    std::optional<cplx> operator()(cplx z) const;
    /** Max | |c| + r - 1 | over boundary circles. */
    double boundary_tangency_error() const;
    /** Image triangles with non-positive signed area. */
    int negative_triangles() const;
    /** Max ratio of singular values of the per-face affine map over faces with centroid in the box. */
    double max_distortion(cplx lo, cplx hi) const;
};

DiscreteMap discrete_riemann_map(const Polygon& domain, double eps, cplx x, cplx y,
                                 const SolveOptions& opt = {}, CutoutRule rule = CutoutRule::ClosedDisk);

struct FaceShape {
    int face{-1};                  // face of the input complex
    std::vector<int> boundary;     // refined vertices around the face, starting at its first corner
    std::vector<cplx> points;      // disk: hyperbolic centers; sphere: stereographic image
    std::vector<Vec3> points3;     // disk: (x, y, 0); sphere: cap centers
};

struct ShapeResult {
    Model model{Model::Disk};
    int depth{0};
    Triangulation refined;
    LayoutResult layout;
    std::vector<FaceShape> faces;
    int anchor{-1}, direction{-1};
};

struct ShapeOptions {
    int max_vertices{200000};
    SolveOptions solve;
};

/**
 * Barycentric subdivision followed by n hex refinements, packed maximally
 * (disk) or on the sphere. Shapes are rotated so the anchor vertex sits at the
 * origin (south pole on the sphere) and the direction vertex on the positive
 * real axis, which makes depths comparable.
 */
ShapeResult equilateral_shapes(const Triangulation& K, int n, const ShapeOptions& opt = {});

/** Symmetric Hausdorff distance between two closed polylines, segments sampled densely. */
double polyline_hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b, int samples_per_segment = 8);

struct ProbeReport {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // raw samples
    std::vector<std::string> summary_columns;
    std::vector<std::vector<double>> summary;  // one row per parameter point
    std::vector<std::pair<std::string, bool>> flags;
    std::vector<std::string> notes;

    void write_csv(std::ostream& os) const;
    void write_summary_csv(std::ostream& os) const;
    bool flag(const std::string& name) const;
};

/**
 * Ring constant estimate for interior degree at most d. The instance family
 * for d contains every instance used for smaller bounds, so the running
 * minimum is a lower bound over a growing family. d < 4 is skipped.
 */
ProbeReport ring_constant_probe(int d, int generations, int samples, std::uint64_t seed = 1);

/**
 * c_n over euclidean packings of the n-generation hex ball whose boundary
 * radii are drawn from [0.5, 2]; the exact ball gives c_n = 0.
 */
ProbeReport hex_ratio_probe(int n_max, int samples = 16, std::uint64_t seed = 1);

}  // namespace katpack
