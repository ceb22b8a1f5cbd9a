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

#include <optional>
#include <string>
#include <vector>

#include "katpack/complex.hpp"
#include "katpack/geom.hpp"

namespace katpack
{

/**
 * Boundary-value data for a packing. Boundary vertices carry a fixed radius
 * (kInf for a horocycle), interior vertices a target angle sum, cusps are
 * interior vertices pinned at infinite radius with target 0.
 */
struct PackingProblem {
    Triangulation T;
    Geometry geometry{Geometry::Hyperbolic};
    EdgeLabel phi;
    std::vector<double> boundary_radius;  // read at boundary vertices only
    std::vector<double> target;           // read at free vertices only
    std::vector<char> cusp;
    int unit_vertex{-1};  // euclidean normalization vertex, torus only

    PackingProblem() = default;
    PackingProblem(Triangulation tri, Geometry g, EdgeLabel labels = {});

    /** Hyperbolic problem with every boundary radius infinite. */
    static PackingProblem maximal(const Triangulation& T, EdgeLabel labels = {});
    /** Same boundary radius everywhere. */
    static PackingProblem uniform(const Triangulation& T, Geometry g, double boundary_r, EdgeLabel labels = {});

    void set_boundary(int v, double r) { boundary_radius[v] = r; }
    void set_target(int v, double theta) { target[v] = theta; }
    void set_cusp(int v);
    /** Target 2 pi (o + 1) at each branch vertex. */
    void apply_branching(const BranchStructure& beta);

    bool is_free(int v) const { return !T.is_boundary(v) && !cusp[v]; }
    std::vector<int> free_vertices() const;
    void validate() const;
};

struct PackingLabel {
    Geometry geometry{Geometry::Hyperbolic};
    std::vector<double> r;  // kInf allowed in hyperbolic labels
    int unit_vertex{-1};

    NativeLabel native() const;
    static PackingLabel from_native(const NativeLabel& x);
};

struct SolveOptions {
    double tol{1e-10};
    long max_sweeps{1'000'000};
    /** Jacobi sweeps, parallel over vertices when OpenMP is available. */
    bool jacobi{false};
    int threads{1};
    /**
     * Interleave global Newton steps with the sweeps (serial mode only). A step
     * is accepted only when it keeps the iterate a superpacking and lowers the
     * residual, so the solve still approaches from above.
     */
    bool newton{true};
    /** Starting radii for free vertices; defaults to s = 1/2 (hyperbolic) or r = 1. */
    std::optional<std::vector<double>> initial;
};

struct SolveReport {
    long iterations{0};
    double residual{0};
    /** Hyperbolic area of the carrier (euclidean area for euclidean labels). */
    double area{0};
    /** Sum over free vertices of 2 pi - angle sum. */
    double shortage{0};
    bool superpacking{false};
    std::vector<int> separating_edges;
};

struct SolveResult {
    PackingLabel label;
    SolveReport report;
};

SolveResult solve_hyperbolic(const PackingProblem& P, const SolveOptions& opt = {});
SolveResult solve_euclidean(const PackingProblem& P, const SolveOptions& opt = {});
SolveResult solve(const PackingProblem& P, const SolveOptions& opt = {});

SolveResult maximal_disk_label(const Triangulation& T, const EdgeLabel& phi = {}, const SolveOptions& opt = {});
/** Hyperbolic label of a closed surface of genus >= 2, all angle sums 2 pi. */
SolveResult closed_surface_label(const Triangulation& K, const EdgeLabel& phi = {}, const SolveOptions& opt = {});

/** Angle sums of every vertex under a label. */
std::vector<double> angle_sums(const PackingProblem& P, const PackingLabel& L);
double max_residual(const PackingProblem& P, const PackingLabel& L);

/** True iff every free vertex has angle sum <= target (+ slack). */
bool superpacking_check(const PackingProblem& P, const PackingLabel& L, double slack = 1e-13);

struct FeasibilityVerdict {
    CheckStatus status{CheckStatus::Pass};
    std::vector<int> witness;  // a set with pi F_V - theta(V) <= 0
    double min_margin{0};
    std::size_t sets_examined{0};
    std::string message;
};

/**
 * Tests pi F_V - theta(V) > 0 over connected sets V of free vertices.
 * Exhaustive when the free vertex count is at most exhaustive_cap; otherwise
 * only singletons, connected components and BFS balls are tried.
 */
FeasibilityVerdict schwarz_picard_feasibility(const PackingProblem& P, int exhaustive_cap = 20);

struct PickComparison {
    bool vertex_dominance{true};  // r >= r' everywhere
    bool area_dominance{true};    // A_r(f) >= A_r'(f) on every face
    int vertex_violations{0};
    int face_violations{0};
    std::vector<int> equal_vertices;  // free vertices with r = r' within tol
    bool identical{false};
    /** Equality at one free vertex forces equality everywhere. */
    bool rigidity_consistent{true};
};

PickComparison schwarz_pick_compare(const PackingProblem& P, const PackingLabel& r, const PackingLabel& rp,
                                    double tol = 1e-9);

/** Per-face hyperbolic areas. */
std::vector<double> face_areas(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& L);

}  // namespace katpack
