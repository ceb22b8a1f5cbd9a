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

#include "katpack/complex.hpp"
#include "katpack/geom.hpp"
#include "katpack/layout.hpp"

namespace katpack
{

/** Throws NotPolyhedral unless P is a consistently oriented, 3-connected spherical map. */
void validate_polyhedron(const AbstractPolyhedron& P);
bool is_three_connected(const AbstractPolyhedron& P);
/** Undirected edges (a < b) in first-seen order. */
std::vector<std::pair<int, int>> polyhedron_edges(const AbstractPolyhedron& P);
/** Face f of P becomes vertex f of the dual. */
AbstractPolyhedron dual(const AbstractPolyhedron& P);

namespace solids
{
AbstractPolyhedron tetrahedron();
AbstractPolyhedron octahedron();
AbstractPolyhedron cube();
AbstractPolyhedron icosahedron();
AbstractPolyhedron dodecahedron();
AbstractPolyhedron prism(int n);
/** Cut off each listed vertex by a new face. */
AbstractPolyhedron truncate(const AbstractPolyhedron& P, const std::vector<int>& vertices);
AbstractPolyhedron truncate_all(const AbstractPolyhedron& P);
}  // namespace solids

struct EdgeTangency {
    int a{-1}, b{-1};
    Vec3 point{};       // tangency point of the two vertex circles
    double distance{0};  // distance from the origin to the segment
    double param{0};     // closest point parameter along a -> b
    bool interior{false};
};

struct MidscribedMesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<int>> faces;
    std::vector<EdgeTangency> edges;
    double max_tangency_error{0};
    double max_planarity_error{0};
    int tangent_edges{0};  // edges passing the tangency certificate
    std::vector<Circle> vertex_circles;
    std::vector<Circle> face_circles;
};

struct MidscribeOptions {
    int v_inf{-1};
    double tol{1e-7};  // tangency certificate tolerance
    bool center{true};
};

MidscribedMesh midscribe(const AbstractPolyhedron& P, const MidscribeOptions& opt = {});
void write_obj(std::ostream& os, const MidscribedMesh& M);

struct ScribabilityVerdict {
    CheckStatus status{CheckStatus::Inconclusive};  // Pass = feasible, Fail = infeasible
    bool face_level_infeasible{false};
    std::vector<double> theta;                       // witness labels (radians) when feasible
    double margin{0};                                // optimal margin, in units of pi
    std::string margin_exact;                        // the same as an exact fraction
    int circuits_added{0};
    std::string message;
};

/**
 * Edge labels in (0, pi) summing to 2 pi around every face and to more than 2 pi
 * on every other simple circuit. Solved exactly: maximize the common margin t
 * over rationals, adding violated circuits as cuts. Feasible iff t > 0.
 */
ScribabilityVerdict circumscribable_type(const AbstractPolyhedron& P, long search_budget = 20'000'000);
ScribabilityVerdict inscribable_type(const AbstractPolyhedron& P, long search_budget = 20'000'000);

}  // namespace katpack
