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

// Fixtures shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "katpack/complex.hpp"
#include "katpack/polyhedra.hpp"

namespace katpack::testing
{

inline Triangulation hex_flower()
{
    std::vector<Face> f;
    for (int i = 1; i <= 6; ++i) f.push_back({0, i, i % 6 + 1});
    return Triangulation(f);
}

inline Triangulation single_triangle() { return Triangulation({{0, 1, 2}}); }

inline Triangulation k7_torus()
{
    std::vector<Face> f;
    for (int i = 0; i < 7; ++i) {
        f.push_back({i, (i + 1) % 7, (i + 3) % 7});
        f.push_back({i, (i + 3) % 7, (i + 2) % 7});
    }
    return Triangulation(f);
}

/** Connected sum of two K7 tori along a face: genus 2, 11 vertices. */
inline Triangulation genus_two()
{
    std::vector<Face> a, f;
    for (int i = 0; i < 7; ++i) {
        a.push_back({i, (i + 1) % 7, (i + 3) % 7});
        a.push_back({i, (i + 3) % 7, (i + 2) % 7});
    }
    // second copy with reversed orientation; vertices 0, 1, 3 are shared
    const int map[7] = {0, 1, 7, 3, 8, 9, 10};
    for (std::size_t k = 1; k < a.size(); ++k) f.push_back(a[k]);
    for (std::size_t k = 1; k < a.size(); ++k) f.push_back({map[a[k][0]], map[a[k][2]], map[a[k][1]]});
    return Triangulation(f);
}

/** Two adjacent interior vertices 0 (degree 5) and 1 (degree 6); boundary 2..8. */
inline Triangulation strip()
{
    const int b0 = 2, b1 = 3, b2 = 4, b3 = 5, b4 = 6, b5 = 7, b6 = 8;
    return Triangulation({{0, 1, b0}, {0, b0, b1}, {0, b1, b2}, {0, b2, b3}, {0, b3, 1},
                          {1, b3, b4}, {1, b4, b5}, {1, b5, b6}, {1, b6, b0}});
}

/**
 * Neighborly triangulation of the genus-20 surface on Z_19: six orbits of
 * triangles under translation, so every vertex looks the same.
 */
inline Triangulation cyclic_k19()
{
    const int base[6][2] = {{1, 2}, {18, 15}, {17, 12}, {3, 6}, {4, 8}, {14, 13}};
    std::vector<Face> f;
    for (const auto& b : base)
        for (int s = 0; s < 19; ++s) f.push_back({s, (s + b[0]) % 19, (s + b[0] + b[1]) % 19});
    return Triangulation(f);
}

/** Three rows of n + 1 vertices; the middle row is interior except at the ends. */
inline Triangulation band(int n)
{
    std::vector<Face> f;
    auto B = [](int i) { return i; };
    auto M = [n](int i) { return n + 1 + i; };
    auto T = [n](int i) { return 2 * n + 2 + i; };
    for (int i = 0; i < n; ++i) {
        f.push_back({B(i), B(i + 1), M(i)});
        f.push_back({M(i), B(i + 1), M(i + 1)});
        f.push_back({M(i), M(i + 1), T(i)});
        f.push_back({T(i), M(i + 1), T(i + 1)});
    }
    return Triangulation(f);
}

inline Triangulation closed_from(const AbstractPolyhedron& P)
{
    std::vector<Face> f;
    for (const auto& face : P.faces) f.push_back({face[0], face[1], face[2]});
    return Triangulation(f);
}

/** Flip the edge opposite corner k of face f when that keeps a simplicial disk. */
inline bool try_flip(std::vector<Face>& faces, int f, int k)
{
    Triangulation T(faces);
    int g = T.face_neighbors(f)[k];
    if (g < 0) return false;
    const Face F = faces[f];
    const int c = F[k], a = F[(k + 1) % 3], b = F[(k + 2) % 3];
    int d = -1;
    for (int v : faces[g])
        if (v != a && v != b) d = v;
    if (d == c || T.edge_index(c, d) >= 0 || T.degree(a) < 4 || T.degree(b) < 4) return false;
    faces[f] = {c, a, d};
    faces[g] = {c, d, b};
    return true;
}

/** Random disk: variable-degree ball, then random edge flips; at most max_vertices vertices. */
inline Triangulation random_disk(std::mt19937_64& rng, int max_vertices = 200)
{
    for (;;) {
        std::vector<int> deg;
        auto degree = [&](int v) {
            while (static_cast<int>(deg.size()) <= v) deg.push_back(6 + static_cast<int>(rng() % 2));
            return deg[v];
        };
        int gens = 2 + static_cast<int>(rng() % 3);
        Triangulation T = variable_degree_ball(5 + static_cast<int>(rng() % 3), degree, gens);
        if (T.num_vertices() > max_vertices || T.num_vertices() < 8) continue;
        std::vector<Face> faces = T.faces();
        int flips = static_cast<int>(faces.size()) / 4;
        for (int i = 0; i < flips; ++i)
            try_flip(faces, static_cast<int>(rng() % faces.size()), static_cast<int>(rng() % 3));
        return Triangulation(faces);
    }
}

}  // namespace katpack::testing
