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
#include <vector>

#include "katpack/solver.hpp"

namespace katpack
{

enum class Model { Disk, Plane, Torus, Sphere };
std::string to_string(Model m);

struct LayoutResult {
    Model model{Model::Disk};
    /**
     * Disk: hyperbolic center, or the ideal tangency point of a horocycle.
     * Plane/torus: euclidean center. Sphere: cap center.
     */
    std::vector<cplx> center;
    std::vector<Circle> circles;  // plane circles (disk, plane, torus) or sphere caps
    std::vector<char> horocycle;
    /** Max mismatch of center plus radius when a vertex is reached twice. */
    double residual{0};

    // torus only
    std::vector<std::array<cplx, 3>> face_positions;  // developed copy of every face
    cplx hol_a{}, hol_b{};
    cplx tau{};
    double closure_residual{0};

    // sphere only: max |<X_u, X_v> - I_uv| over edges
    double edge_residual{0};
};

struct LayoutOptions {
    double tol{1e-8};      // LayoutInconsistent above 100 tol
    int root_face{-1};     // face placed first; -1 picks one containing the normalization vertex
    int root_vertex{-1};   // normalized to the origin; -1 picks the smallest finite-radius vertex
};

LayoutResult layout_disk(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& label,
                         const LayoutOptions& opt = {});
LayoutResult layout_plane(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& label,
                          const LayoutOptions& opt = {});
LayoutResult layout_torus(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& label,
                          const LayoutOptions& opt = {});

/** Reduce a modulus to |Re tau| <= 1/2, |tau| >= 1, boundary points taken with Re tau >= 0. */
cplx reduce_modulus(cplx tau);

struct SphereOptions {
    int v_inf{-1};  // vertex sent to the exterior of the unit circle; -1 = last vertex
    SolveOptions solve;
    double newton_tol{1e-13};
    /** Lorentz-normalize so the tangency points have centroid 0. */
    bool center{true};
};

/**
 * Packing of a triangulated sphere. Tangency data at v_inf goes through a maximal
 * disk packing of the complement; other overlap data is reached by continuation
 * from the tangency packing in Lorentz space.
 */
LayoutResult sphere_pack(const Triangulation& K, const EdgeLabel& phi = {}, const SphereOptions& opt = {});

/** Lorentz map of a circle configuration (acts on de Sitter vectors). */
using Lorentz = std::array<std::array<double, 4>, 4>;
/** Boost sending the given tangency points to centroid 0; identity if already centered. */
Lorentz centering_boost(const std::vector<Vec3>& points);
Circle apply_lorentz(const Lorentz& L, const Circle& sphere_cap);

/** Point where two tangent circles touch (sphere or plane circles). */
Vec3 tangency_point_sphere(const Circle& a, const Circle& b);

struct Carrier {
    std::vector<cplx> vertices;  // centers (disk: hyperbolic centers)
    std::vector<Face> faces;
};

struct UnivalenceReport {
    bool locally_univalent{true};
    bool univalent{true};
    int negative_faces{0};
    std::vector<int> wrapped_vertices;           // interior vertices whose petals wind more than once
    std::vector<std::pair<int, int>> overlaps;   // non-adjacent pairs with overlapping open disks
};

Carrier carrier(const Triangulation& T, const LayoutResult& L);
UnivalenceReport check_univalence(const Triangulation& T, const LayoutResult& L, double tol = 1e-9);

}  // namespace katpack
