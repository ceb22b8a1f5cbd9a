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

#include <iosfwd>
#include <string>
#include <vector>

#include "katpack/polyhedra.hpp"
#include "katpack/refine.hpp"
#include "katpack/typelab.hpp"

namespace katpack
{

// Readers throw InvalidInput naming the offending field or line. Infinite
// radii are written as the string "inf".

/** JSON problem document, or plain text with one face per line. */
PackingProblem read_problem(std::istream& is, Geometry fallback = Geometry::Hyperbolic);
PackingProblem read_problem_file(const std::string& path, Geometry fallback = Geometry::Hyperbolic);
/** Face list only, accepting either format. */
Triangulation read_complex_file(const std::string& path);

void write_label(std::ostream& os, const PackingLabel& L, const SolveReport& rep);
PackingLabel read_label(std::istream& is);

std::string circle_json(const Circle& C);
Circle circle_from_json(const std::string& text);

struct LayoutFile {
    std::vector<Face> faces;
    LayoutResult layout;
};
void write_layout(std::ostream& os, const Triangulation& T, const LayoutResult& L);
LayoutFile read_layout(std::istream& is);
/** Sphere caps as OBJ points (cap centers) with the radius in a comment. */
void write_sphere_obj(std::ostream& os, const Triangulation& T, const LayoutResult& L);

/** Source lattice and image centers on the same faces. */
void write_paired_mesh(std::ostream& os, const DiscreteMap& F);
void write_shapes(std::ostream& os, const ShapeResult& S);

/** Edge list as JSON {"n": N, "edges": [[a,b],...]} or text "a b" lines. */
Graph read_graph_file(const std::string& path);
/** Polygon as JSON {"polygon": [[x,y],...]} or text "x y" lines. */
Polygon read_polygon_file(const std::string& path);
/** Polyhedron as JSON {"faces": [[...],...]}, text face lines, or a solid name. */
AbstractPolyhedron read_polyhedron(const std::string& path_or_name);

struct RenderOptions {
    int size{1000};
    double stroke{1.0};
    bool carrier{false};
    bool frame{true};  // unit circle (disk), fundamental domain (torus), horizon (sphere)
};
/**
 * Deterministic SVG. Disk layouts map the unit disk onto the viewport;
 * plane and torus layouts are fitted to their bounding box; sphere layouts
 * show the two hemispheres side by side in orthographic view.
 */
std::string render_svg(const LayoutFile& F, const RenderOptions& opt = {});

}  // namespace katpack
