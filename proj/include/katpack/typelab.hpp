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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "katpack/refine.hpp"

namespace katpack
{

/** Finite simple undirected graph. */
class Graph
{
public:
    Graph() = default;
    Graph(int n, const std::vector<std::pair<int, int>>& edges);
    static Graph from_triangulation(const Triangulation& T);
    static Graph path(int edges);
    static Graph grid(int rows, int cols);

    int num_vertices() const { return static_cast<int>(adj_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool connected() const;
    /** Graph distance layers around root: rings[n] holds the vertices at distance n. */
    std::vector<std::vector<int>> rings(int root) const;
    Graph without_edge(int e) const;

private:
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

/**
 * Center radius of the maximal packing of the d-regular ball for each
 * generation in [g_lo, g_hi]. Radii never increase; the trend is reported as
 * consistent with a parabolic or a hyperbolic limit.
 */
ProbeReport cp_type_probe(int d, int g_lo, int g_hi);

/** Effective resistance between two vertex sets, unit resistors. */
double eel_between(const Graph& G, const std::vector<int>& sources, const std::vector<int>& sinks);

struct VelResult {
    double value{0};  // midpoint of the bracket
    double lower{0};  // from an admissible metric
    double upper{0};  // from the dual of the path constraints found
    bool converged{false};
    std::vector<double> metric;           // optimal vertex metric, scaled admissible
    std::vector<std::vector<int>> paths;  // constraint paths generated
    int iterations{0};
};

struct VelOptions {
    double violation_tol{1e-8};
    double gap_tol{1e-4};  // relative
    int max_rounds{2000};
};

/**
 * Vertex extremal length of the source-sink path family: 1 / min sum m(v)^2
 * over metrics giving every path (endpoints included) length >= 1.
 */
VelResult vel_between(const Graph& G, const std::vector<int>& sources, const std::vector<int>& sinks,
                      const VelOptions& opt = {});

/** Probability that a walk from root reaches the boundary before returning. */
double rw_escape(const Graph& G, int root, const std::vector<int>& boundary);

struct MonteCarlo {
    double estimate{0};
    double stderr_{0};
    long walks{0};
};
MonteCarlo rw_escape_monte_carlo(const Graph& G, int root, const std::vector<int>& boundary, long walks,
                                 std::uint64_t seed = 1);

/** Metric 1/(n log n) on ring n >= first, with partial sums bounding its area and crossing length. */
struct VelWitness {
    int first{2};
    double C{0};
    std::vector<double> metric;        // per vertex, 0 off the rings used
    std::vector<double> area_partial;  // sum over rings first..n of |V_n| m_n^2
    std::vector<double> length_partial;  // sum over rings first..n of m_n
    double area_bound{0};              // C * sum 1/(n log^2 n) up to the horizon

    /** m-length of a vertex path. */
    double length(const std::vector<int>& path) const;
};

VelWitness vel_witness(const Graph& G, const std::vector<std::vector<int>>& rings, double C, int first = 2);

}  // namespace katpack
