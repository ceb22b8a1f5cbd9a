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
#include <cstddef>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace katpack
{

using Face = std::array<int, 3>;

enum class SurfaceKind { Disk, Sphere, Torus, ClosedGenus, Bordered };

std::string to_string(SurfaceKind k);

/** Unordered edge a < b with the faces on either side (-1 when absent). */
struct Edge {
    int a{-1};
    int b{-1};
    int left{-1};   // face containing the directed edge a->b
    int right{-1};  // face containing b->a
    bool boundary() const { return left < 0 || right < 0; }
};

/**
 * Oriented simplicial triangulation of a connected surface.
 *
 * Immutable once built. Edges, stars and flowers are derived from the face
 * triples; the face list keeps the order it was given in.
 */
class Triangulation
{
public:
    Triangulation() = default;
    explicit Triangulation(std::vector<Face> faces);

    int num_vertices() const { return nv_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }

    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int f) const { return faces_[f]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }

    /** Index of edge {u,v}, or -1. */
    int edge_index(int u, int v) const;

    bool is_boundary(int v) const { return boundary_flag_[v] != 0; }
    const std::vector<int>& boundary_vertices() const { return boundary_; }
    const std::vector<int>& interior_vertices() const { return interior_; }

    /**
     * Neighbors of v in counterclockwise order. For a boundary vertex the
     * list runs from one boundary neighbor to the other.
     */
    const std::vector<int>& flower(int v) const { return flower_[v]; }
    /** Incident faces; star(v)[i] has corners v, flower(v)[i], flower(v)[i+1]. */
    const std::vector<int>& star(int v) const { return star_[v]; }
    int degree(int v) const { return static_cast<int>(flower_[v].size()); }

    /** Position of v inside face f (0..2). */
    int corner(int f, int v) const;

    SurfaceKind kind() const { return kind_; }
    int euler_characteristic() const { return nv_ - num_edges() + num_faces(); }
    /** Genus of the closed surface (0 for bordered ones). */
    int genus() const { return genus_; }

    /** Interior edges whose two endpoints both lie on the boundary. */
    std::vector<int> separating_edges() const;
    /** Boundary cycles, each oriented with the surface on its left. */
    std::vector<std::vector<int>> boundary_cycles() const;
    /** Faces adjacent across each edge of f (edge opposite corner k), -1 on boundary. */
    std::array<int, 3> face_neighbors(int f) const;

private:
    static long long key(int u, int v, int n);

    int nv_{0};
    std::vector<Face> faces_;
    std::vector<Edge> edges_;
    std::unordered_map<long long, int> edge_of_;
    std::vector<char> boundary_flag_;
    std::vector<int> boundary_;
    std::vector<int> interior_;
    std::vector<std::vector<int>> flower_;
    std::vector<std::vector<int>> star_;
    SurfaceKind kind_{SurfaceKind::Disk};
    int genus_{0};
};

Triangulation build_from_faces(const std::vector<Face>& faces);

struct EulerReport {
    int V{0}, E{0}, F{0}, V_int{0}, V_bd{0}, chi{0};
    /** Disk: F - 2 V_int = V_bd - 2. Closed genus g: F - 2V = 4g - 4. */
    bool identity_holds{false};
};

EulerReport euler_report(const Triangulation& T);

/** Per-edge overlap angle or inversive distance. Empty values means tangency. */
struct EdgeLabel {
    enum class Mode { Overlap, Inversive };
    Mode mode{Mode::Overlap};
    std::vector<double> values;

    static EdgeLabel tangency() { return {}; }
    static EdgeLabel constant(const Triangulation& T, Mode m, double x);

    bool is_tangency() const;
    /** Inversive distance carried by edge e (cos of the overlap angle in overlap mode). */
    double inversive(int e) const;
    /** Overlap angle; only meaningful in overlap mode or for I in [-1,1]. */
    double overlap(int e) const;
    void validate(const Triangulation& T) const;
};

struct VertexRemoval {
    Triangulation disk;
    std::vector<int> to_old;  // new index -> old index
    std::vector<int> to_new;  // old index -> new index, -1 for the removed vertex
};

VertexRemoval remove_vertex_star(const Triangulation& K, int v);

/** A refined complex plus, for every new vertex, the old vertices it averages. */
struct Subdivision {
    Triangulation tri;
    std::vector<std::vector<int>> parents;
};

/** Midpoint subdivision: one new vertex per edge, each face split in four. */
Subdivision hex_refine(const Triangulation& T);
Subdivision barycentric_subdivide(const Triangulation& T);

/** Polyhedral face cycles, counterclockwise seen from outside. */
struct AbstractPolyhedron {
    int num_vertices{0};
    std::vector<std::vector<int>> faces;
};

struct StarComplex {
    Triangulation K;
    EdgeLabel phi;
    int num_original{0};  // vertices 0..num_original-1 are those of P
    /** Vertex of K that stars face f of P. */
    int face_vertex(int f) const { return num_original + f; }
};

StarComplex face_star_complex(const AbstractPolyhedron& P);

struct KatReport {
    std::vector<std::array<int, 3>> bad_triangles;
    std::vector<std::array<int, 4>> bad_quads;
    bool tetrahedral_warning{false};
    bool ok() const { return bad_triangles.empty() && bad_quads.empty(); }
};

KatReport check_kat_conditions(const Triangulation& T, const EdgeLabel& phi);

struct BranchPoint {
    int vertex{-1};
    int order{1};
};

struct BranchStructure {
    std::vector<BranchPoint> points;
    int v_inf{-1};
    int order_inf{0};
    int total_order() const;
};

enum class CheckStatus { Pass, Fail, Inconclusive };
std::string to_string(CheckStatus s);

struct BranchReport {
    CheckStatus status{CheckStatus::Pass};
    std::vector<std::vector<int>> violating_paths;
    std::vector<std::array<int, 4>> forbidden;  // (v, u, x, w) as in the scan
    std::size_t cycles_examined{0};
    std::string message;
};

/**
 * Closed edge paths of length L can only violate the branch inequality when
 * L * min(pi - phi) <= 2 pi (o + 1), so enumeration up to that length is
 * exhaustive. `cap` bounds the length actually enumerated.
 */
BranchReport check_branch_structure(const Triangulation& T, const EdgeLabel& phi,
                                    const BranchStructure& beta, int cap = 12);

/** Combinatorial ball around vertex 0 with g rings; center degree c, others d. */
Triangulation cone_ball(int center_degree, int d, int generations);
/**
 * Same construction with a per-vertex target degree, queried once for each
 * vertex when its ring becomes interior. Targets below 6 may fail to grow.
 */
Triangulation variable_degree_ball(int center_degree, const std::function<int(int)>& degree, int generations);
Triangulation constant_degree_ball(int d, int generations);

/** Simple cycles of length 3..max_len, each listed once (smallest vertex first). */
std::vector<std::vector<int>> simple_cycles(const Triangulation& T, int max_len,
                                            std::size_t limit = 0);

}  // namespace katpack
