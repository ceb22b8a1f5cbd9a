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
#include "katpack/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "katpack/error.hpp"

namespace katpack
{

using json = nlohmann::json;

namespace
{

std::ifstream open_in(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw InvalidInput("cannot open " + path);
    return is;
}

std::string slurp(std::istream& is)
{
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& s)
{
    auto p = s.find_first_not_of(" \t\r\n");
    return p != std::string::npos && s[p] == '{';
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

double number(const json& j, const std::string& where)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string() && (j == "inf" || j == "Infinity")) return kInf;
    throw InvalidInput(where + ": expected a number or \"inf\"");
}

int index(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) throw InvalidInput(where + ": expected an integer");
    return j.get<int>();
}

const json& array_field(const json& doc, const char* key)
{
    const json& a = doc.at(key);
    if (!a.is_array()) throw InvalidInput(std::string(key) + ": expected an array");
    return a;
}

json radius_json(double r) { return std::isinf(r) ? json("inf") : json(r); }

// the point at infinity (a sphere pole under projection) is written as ["inf", "inf"]
json point_json(cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return json::array({"inf", "inf"});
    return json::array({z.real(), z.imag()});
}

cplx point_from(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2) throw InvalidInput(where + ": expected [x, y]");
    return {number(j[0], where), number(j[1], where)};
}

std::vector<Face> faces_from_json(const json& doc)
{
    if (!doc.contains("faces")) throw InvalidInput("missing field \"faces\"");
    const json& a = array_field(doc, "faces");
    std::vector<Face> faces;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const std::string where = "faces[" + std::to_string(k) + "]";
        if (!a[k].is_array() || a[k].size() != 3) throw InvalidInput(where + ": expected three vertex indices");
        Face f;
        for (int i = 0; i < 3; ++i) {
            f[i] = index(a[k][i], where);
            if (f[i] < 0) throw InvalidInput(where + ": negative vertex index");
        }
        faces.push_back(f);
    }
    return faces;
}

std::vector<Face> faces_from_text(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    std::vector<Face> faces;
    for (int ln = 1; std::getline(is, line); ++ln) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::vector<long> vals;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stol(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw InvalidInput("line " + std::to_string(ln) + " (face " + std::to_string(faces.size()) +
                                   "): not an integer: " + tok);
            }
        }
        if (vals.empty()) continue;
        if (vals.size() != 3 || *std::min_element(vals.begin(), vals.end()) < 0)
            throw InvalidInput("line " + std::to_string(ln) + " (face " + std::to_string(faces.size()) +
                               "): expected three non-negative vertex indices");
        faces.push_back({int(vals[0]), int(vals[1]), int(vals[2])});
    }
    return faces;
}

Geometry geometry_from(const std::string& s)
{
    if (s == "hyperbolic") return Geometry::Hyperbolic;
    if (s == "euclidean") return Geometry::Euclidean;
    throw InvalidInput("geometry: expected \"hyperbolic\" or \"euclidean\", got \"" + s + "\"");
}

json circle_to(const Circle& C)
{
    switch (C.kind) {
        case Circle::Kind::Plane:
            return {{"kind", "plane"}, {"c", point_json(C.c)}, {"r", C.r}, {"o", C.o}};
        case Circle::Kind::Sphere:
            return {{"kind", "sphere"}, {"p", {C.p[0], C.p[1], C.p[2]}}, {"rho", C.rho}, {"o", C.o}};
        case Circle::Kind::Line:
            return {{"kind", "line"}, {"n", point_json(C.n)}, {"t", C.t}, {"o", C.o}};
    }
    return {};
}

Circle circle_from(const json& j, const std::string& where)
{
    if (!j.is_object() || !j.contains("kind")) throw InvalidInput(where + ": expected a circle object");
    const std::string kind = j.at("kind").get<std::string>();
    int o = j.value("o", 1);
    if (o != 1 && o != -1) throw InvalidInput(where + ".o: expected +1 or -1");
    if (kind == "plane") return Circle::plane(point_from(j.at("c"), where + ".c"), number(j.at("r"), where + ".r"), o);
    if (kind == "line") return Circle::line(point_from(j.at("n"), where + ".n"), number(j.at("t"), where + ".t"), o);
    if (kind == "sphere") {
        const json& p = j.at("p");
        if (!p.is_array() || p.size() != 3) throw InvalidInput(where + ".p: expected [x, y, z]");
        return Circle::sphere({number(p[0], where), number(p[1], where), number(p[2], where)},
                              number(j.at("rho"), where + ".rho"), o);
    }
    throw InvalidInput(where + ".kind: unknown circle kind \"" + kind + "\"");
}

Model model_from(const std::string& s)
{
    for (Model m : {Model::Disk, Model::Plane, Model::Torus, Model::Sphere})
        if (to_string(m) == s) return m;
    throw InvalidInput("model: unknown layout model \"" + s + "\"");
}

// Rethrow library lookups on missing keys as input errors.
template <class F>
auto guarded(F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("schema error: ") + e.what());
    }
}

}  // namespace

// ---------------------------------------------------------------- problems

PackingProblem read_problem(std::istream& is, Geometry fallback)
{
    const std::string text = slurp(is);
    if (!looks_like_json(text)) {
        PackingProblem P(build_from_faces(faces_from_text(text)), fallback);
        P.validate();
        return P;
    }
    return guarded([&] {
        const json doc = parse_json(text);
        Triangulation T = build_from_faces(faces_from_json(doc));
        const int V = T.num_vertices();
        auto vertex = [&](const json& j, const std::string& where) {
            int v = index(j, where);
            if (v < 0 || v >= V) throw InvalidInput(where + ": vertex " + std::to_string(v) + " out of range");
            return v;
        };
        Geometry g = doc.contains("geometry") ? geometry_from(doc.at("geometry").get<std::string>()) : fallback;

        EdgeLabel phi;
        if (doc.contains("edge_labels")) {
            const json& el = doc.at("edge_labels");
            std::string mode = el.value("mode", "overlap");
            EdgeLabel::Mode m;
            if (mode == "overlap")
                m = EdgeLabel::Mode::Overlap;
            else if (mode == "inversive")
                m = EdgeLabel::Mode::Inversive;
            else
                throw InvalidInput("edge_labels.mode: expected \"overlap\" or \"inversive\"");
            phi = EdgeLabel::constant(T, m, m == EdgeLabel::Mode::Overlap ? 0.0 : 1.0);
            const json& vals = array_field(el, "values");
            for (std::size_t k = 0; k < vals.size(); ++k) {
                const std::string where = "edge_labels.values[" + std::to_string(k) + "]";
                if (!vals[k].is_array() || vals[k].size() != 3) throw InvalidInput(where + ": expected [i, j, x]");
                int a = vertex(vals[k][0], where), b = vertex(vals[k][1], where);
                int e = T.edge_index(a, b);
                if (e < 0) throw InvalidInput(where + ": {" + std::to_string(a) + "," + std::to_string(b) + "} is not an edge");
                phi.values[e] = number(vals[k][2], where);
            }
        }
        PackingProblem P(std::move(T), g, std::move(phi));

        if (doc.contains("boundary_radii")) {
            const json& a = array_field(doc, "boundary_radii");
            for (std::size_t k = 0; k < a.size(); ++k) {
                const std::string where = "boundary_radii[" + std::to_string(k) + "]";
                if (!a[k].is_array() || a[k].size() != 2) throw InvalidInput(where + ": expected [i, r]");
                int v = vertex(a[k][0], where);
                if (!P.T.is_boundary(v)) throw InvalidInput(where + ": vertex " + std::to_string(v) + " is interior");
                P.set_boundary(v, number(a[k][1], where));
            }
        }
        if (doc.contains("targets")) {
            const json& a = array_field(doc, "targets");
            for (std::size_t k = 0; k < a.size(); ++k) {
                const std::string where = "targets[" + std::to_string(k) + "]";
                if (!a[k].is_array() || a[k].size() != 2) throw InvalidInput(where + ": expected [i, theta]");
                P.set_target(vertex(a[k][0], where), number(a[k][1], where));
            }
        }
        if (doc.contains("branch")) {
            BranchStructure beta;
            const json& a = array_field(doc, "branch");
            for (std::size_t k = 0; k < a.size(); ++k) {
                const std::string where = "branch[" + std::to_string(k) + "]";
                if (!a[k].is_array() || a[k].size() != 2) throw InvalidInput(where + ": expected [i, order]");
                beta.points.push_back({vertex(a[k][0], where), index(a[k][1], where)});
            }
            P.apply_branching(beta);
        }
        if (doc.contains("cusps")) {
            const json& a = array_field(doc, "cusps");
            for (std::size_t k = 0; k < a.size(); ++k) P.set_cusp(vertex(a[k], "cusps[" + std::to_string(k) + "]"));
        }
        if (doc.contains("unit_vertex")) P.unit_vertex = vertex(doc.at("unit_vertex"), "unit_vertex");
        P.validate();
        return P;
    });
}

PackingProblem read_problem_file(const std::string& path, Geometry fallback)
{
    auto is = open_in(path);
    return read_problem(is, fallback);
}

Triangulation read_complex_file(const std::string& path)
{
    auto is = open_in(path);
    const std::string text = slurp(is);
    if (!looks_like_json(text)) return build_from_faces(faces_from_text(text));
    return guarded([&] { return build_from_faces(faces_from_json(parse_json(text))); });
}

// ---------------------------------------------------------------- labels

void write_label(std::ostream& os, const PackingLabel& L, const SolveReport& rep)
{
    json radii = json::array();
    for (double r : L.r) radii.push_back(radius_json(r));
    json doc = {{"geometry", to_string(L.geometry)},
                {"radii", radii},
                {"report",
                 {{"iterations", rep.iterations},
                  {"residual", rep.residual},
                  {"area", rep.area},
                  {"shortage", rep.shortage},
                  {"superpacking", rep.superpacking},
                  {"separating_edges", rep.separating_edges}}}};
    if (L.unit_vertex >= 0) doc["unit_vertex"] = L.unit_vertex;
    os << doc.dump(2) << '\n';
}

PackingLabel read_label(std::istream& is)
{
    return guarded([&] {
        const json doc = parse_json(slurp(is));
        PackingLabel L;
        L.geometry = geometry_from(doc.at("geometry").get<std::string>());
        const json& a = array_field(doc, "radii");
        for (std::size_t k = 0; k < a.size(); ++k) {
            double r = number(a[k], "radii[" + std::to_string(k) + "]");
            if (!(r > 0) || (std::isinf(r) && L.geometry == Geometry::Euclidean))
                throw InvalidInput("radii[" + std::to_string(k) + "]: radius must be positive");
            L.r.push_back(r);
        }
        L.unit_vertex = doc.value("unit_vertex", -1);
        return L;
    });
}

// ---------------------------------------------------------------- circles and layouts

std::string circle_json(const Circle& C) { return circle_to(C).dump(); }

Circle circle_from_json(const std::string& text)
{
    return guarded([&] { return circle_from(parse_json(text), "circle"); });
}

void write_layout(std::ostream& os, const Triangulation& T, const LayoutResult& L)
{
    json faces = json::array(), centers = json::array(), circles = json::array(), horo = json::array();
    for (const Face& f : T.faces()) faces.push_back({f[0], f[1], f[2]});
    for (cplx z : L.center) centers.push_back(point_json(z));
    for (const Circle& C : L.circles) circles.push_back(circle_to(C));
    for (char h : L.horocycle) horo.push_back(h != 0);
    json doc = {{"model", to_string(L.model)}, {"faces", faces},       {"centers", centers},
                {"circles", circles},          {"horocycle", horo},    {"residual", L.residual}};
    if (L.model == Model::Torus) {
        doc["holonomy"] = {point_json(L.hol_a), point_json(L.hol_b)};
        doc["tau"] = point_json(L.tau);
        doc["closure_residual"] = L.closure_residual;
    }
    if (L.model == Model::Sphere) doc["edge_residual"] = L.edge_residual;
    os << doc.dump(2) << '\n';
}

LayoutFile read_layout(std::istream& is)
{
    return guarded([&] {
        const json doc = parse_json(slurp(is));
        LayoutFile F;
        F.faces = faces_from_json(doc);
        LayoutResult& L = F.layout;
        L.model = model_from(doc.at("model").get<std::string>());
        const json& c = array_field(doc, "circles");
        for (std::size_t k = 0; k < c.size(); ++k) L.circles.push_back(circle_from(c[k], "circles[" + std::to_string(k) + "]"));
        if (doc.contains("centers")) {
            const json& a = array_field(doc, "centers");
            for (std::size_t k = 0; k < a.size(); ++k) L.center.push_back(point_from(a[k], "centers[" + std::to_string(k) + "]"));
        }
        if (doc.contains("horocycle"))
            for (const json& h : array_field(doc, "horocycle")) L.horocycle.push_back(h.get<bool>() ? 1 : 0);
        L.residual = doc.value("residual", 0.0);
        if (L.model == Model::Torus) {
            const json& h = array_field(doc, "holonomy");
            if (h.size() != 2) throw InvalidInput("holonomy: expected two translations");
            L.hol_a = point_from(h[0], "holonomy[0]");
            L.hol_b = point_from(h[1], "holonomy[1]");
            if (doc.contains("tau")) L.tau = point_from(doc.at("tau"), "tau");
        }
        int V = 0;
        for (const Face& f : F.faces) V = std::max(V, *std::max_element(f.begin(), f.end()) + 1);
        if (static_cast<int>(L.circles.size()) != V)
            throw InvalidInput("circles: expected " + std::to_string(V) + " entries, got " + std::to_string(L.circles.size()));
        return F;
    });
}

void write_sphere_obj(std::ostream& os, const Triangulation& T, const LayoutResult& L)
{
    char buf[160];
    os << "# sphere packing: cap centers, one per vertex; cap radius and orientation in comments\n";
    for (std::size_t v = 0; v < L.circles.size(); ++v) {
        const Circle& C = L.circles[v];
        std::snprintf(buf, sizeof buf, "v %.12g %.12g %.12g\n# cap %zu rho %.12g o %d\n", C.p[0], C.p[1], C.p[2], v,
                      C.rho, C.o);
        os << buf;
    }
    for (const Edge& e : T.edges()) os << "l " << e.a + 1 << ' ' << e.b + 1 << '\n';
}

// ---------------------------------------------------------------- refine outputs

void write_paired_mesh(std::ostream& os, const DiscreteMap& F)
{
    json faces = json::array(), src = json::array(), dst = json::array(), radii = json::array();
    for (const Face& f : F.source.T.faces()) faces.push_back({f[0], f[1], f[2]});
    for (cplx z : F.source.points) src.push_back(point_json(z));
    for (cplx z : F.target) dst.push_back(point_json(z));
    for (const Circle& C : F.layout.circles) radii.push_back(C.r);
    json doc = {{"eps", F.eps},
                {"u", F.u},
                {"v", F.v},
                {"faces", faces},
                {"source", src},
                {"target", dst},
                {"target_radii", radii},
                {"boundary_tangency_error", F.boundary_tangency_error()},
                {"negative_triangles", F.negative_triangles()},
                {"solve", {{"iterations", F.solve.iterations}, {"residual", F.solve.residual}}}};
    os << doc.dump(2) << '\n';
}

void write_shapes(std::ostream& os, const ShapeResult& S)
{
    json faces = json::array();
    for (const FaceShape& fs : S.faces) {
        json pts = json::array(), pts3 = json::array();
        for (cplx z : fs.points) pts.push_back(point_json(z));
        for (const Vec3& p : fs.points3) pts3.push_back({p[0], p[1], p[2]});
        faces.push_back({{"face", fs.face}, {"boundary", fs.boundary}, {"points", pts}, {"points3", pts3}});
    }
    json doc = {{"model", to_string(S.model)},
                {"depth", S.depth},
                {"vertices", S.refined.num_vertices()},
                {"anchor", S.anchor},
                {"direction", S.direction},
                {"faces", faces}};
    os << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------- graphs, polygons, polyhedra

Graph read_graph_file(const std::string& path)
{
    auto is = open_in(path);
    const std::string text = slurp(is);
    std::vector<std::pair<int, int>> edges;
    int n = -1, top = 0;
    if (looks_like_json(text)) {
        guarded([&] {
            const json doc = parse_json(text);
            const json& a = array_field(doc, "edges");
            for (std::size_t k = 0; k < a.size(); ++k) {
                const std::string where = "edges[" + std::to_string(k) + "]";
                if (!a[k].is_array() || a[k].size() != 2) throw InvalidInput(where + ": expected [a, b]");
                edges.push_back({index(a[k][0], where), index(a[k][1], where)});
            }
            if (doc.contains("n")) n = index(doc.at("n"), "n");
            return 0;
        });
    } else {
        std::istringstream ss(text);
        std::string line;
        for (int ln = 1; std::getline(ss, line); ++ln) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::string first;
            if (!(ls >> first)) continue;
            if (first == "n") {
                if (!(ls >> n)) throw InvalidInput("line " + std::to_string(ln) + ": expected vertex count after n");
                continue;
            }
            int a = 0, b = 0;
            std::istringstream fs(first);
            if (!(fs >> a) || !(ls >> b))
                throw InvalidInput("line " + std::to_string(ln) + ": expected two vertex indices");
            edges.push_back({a, b});
        }
    }
    for (auto [a, b] : edges) top = std::max({top, a + 1, b + 1});
    return Graph(n < 0 ? top : n, edges);
}

Polygon read_polygon_file(const std::string& path)
{
    auto is = open_in(path);
    const std::string text = slurp(is);
    Polygon P;
    if (looks_like_json(text)) {
        guarded([&] {
            const json doc = parse_json(text);
            const json& a = array_field(doc, "polygon");
            for (std::size_t k = 0; k < a.size(); ++k) P.push_back(point_from(a[k], "polygon[" + std::to_string(k) + "]"));
            return 0;
        });
    } else {
        std::istringstream ss(text);
        std::string line;
        for (int ln = 1; std::getline(ss, line); ++ln) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            double x, y;
            if (!(ls >> x)) continue;
            if (!(ls >> y)) throw InvalidInput("line " + std::to_string(ln) + ": expected x y");
            P.push_back({x, y});
        }
    }
    if (P.size() < 3) throw InvalidInput("polygon needs at least three vertices");
    return P;
}

AbstractPolyhedron read_polyhedron(const std::string& spec)
{
    AbstractPolyhedron P;
    if (std::filesystem::exists(spec)) {
        auto is = open_in(spec);
        const std::string text = slurp(is);
        if (looks_like_json(text)) {
            guarded([&] {
                const json doc = parse_json(text);
                const json& a = array_field(doc, "faces");
                for (std::size_t k = 0; k < a.size(); ++k) {
                    std::vector<int> f;
                    for (const json& v : a[k]) f.push_back(index(v, "faces[" + std::to_string(k) + "]"));
                    P.faces.push_back(f);
                }
                return 0;
            });
        } else {
            std::istringstream ss(text);
            std::string line;
            while (std::getline(ss, line)) {
                std::istringstream ls(line);
                std::vector<int> f;
                int v;
                while (ls >> v) f.push_back(v);
                if (!f.empty()) P.faces.push_back(f);
            }
        }
        for (const auto& f : P.faces)
            for (int v : f) P.num_vertices = std::max(P.num_vertices, v + 1);
        validate_polyhedron(P);
        return P;
    }
    // named solids; "truncated-X" truncates every vertex, "X-cut" truncates vertex 0
    std::string name = spec;
    int mode = 0;
    if (name.rfind("truncated-", 0) == 0) {
        name = name.substr(10);
        mode = 1;
    } else if (name.size() > 4 && name.compare(name.size() - 4, 4, "-cut") == 0) {
        name.resize(name.size() - 4);
        mode = 2;
    }
    if (name == "tetrahedron")
        P = solids::tetrahedron();
    else if (name == "octahedron")
        P = solids::octahedron();
    else if (name == "cube")
        P = solids::cube();
    else if (name == "icosahedron")
        P = solids::icosahedron();
    else if (name == "dodecahedron")
        P = solids::dodecahedron();
    else if (name.rfind("prism", 0) == 0 && name.size() > 5)
        P = solids::prism(std::stoi(name.substr(5)));
    else
        throw InvalidInput("no such file or solid: " + spec);
    if (mode == 1) P = solids::truncate_all(P);
    if (mode == 2) P = solids::truncate(P, {0});
    return P;
}

// ---------------------------------------------------------------- SVG

namespace
{

class Svg
{
public:
    Svg(int w, int h, double stroke) : stroke_(stroke)
    {
        put("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n", w, h, w, h);
        put("<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", w, h);
    }
    void circle(double x, double y, double r, const char* color)
    {
        put("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.3f\"/>\n", x, y, r,
            color, stroke_);
    }
    void polyline(const std::vector<std::pair<double, double>>& p, bool closed, const char* color, double width)
    {
        if (p.size() < 2) return;
        out_ += "<path d=\"";
        for (std::size_t i = 0; i < p.size(); ++i) put("%c%.3f %.3f", i ? 'L' : 'M', p[i].first, p[i].second);
        put("%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.3f\"/>\n", closed ? "Z" : "", color, width);
    }
    std::string finish() { return out_ + "</svg>\n"; }
    double stroke() const { return stroke_; }

private:
    template <class... A>
    void put(const char* fmt, A... a)
    {
        char buf[256];
        std::snprintf(buf, sizeof buf, fmt, a...);
        out_ += buf;
    }
    std::string out_;
    double stroke_;
};

std::vector<std::pair<int, int>> face_edges(const std::vector<Face>& faces)
{
    std::vector<std::pair<int, int>> e;
    for (const Face& f : faces)
        for (int k = 0; k < 3; ++k) e.push_back({std::min(f[k], f[(k + 1) % 3]), std::max(f[k], f[(k + 1) % 3])});
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

std::string render_flat(const LayoutFile& F, const RenderOptions& opt)
{
    const LayoutResult& L = F.layout;
    const bool torus = L.model == Model::Torus;
    std::vector<cplx> shifts{0.0};
    if (torus)
        for (int m = -1; m <= 1; ++m)
            for (int n = -1; n <= 1; ++n)
                if (m || n) shifts.push_back(double(m) * L.hol_a + double(n) * L.hol_b);

    double scale = opt.size / 2.0, ox = opt.size / 2.0, oy = opt.size / 2.0;
    if (L.model != Model::Disk) {
        double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
        for (cplx s : shifts)
            for (const Circle& C : L.circles) {
                if (C.kind != Circle::Kind::Plane) continue;
                x0 = std::min(x0, C.c.real() + s.real() - C.r);
                x1 = std::max(x1, C.c.real() + s.real() + C.r);
                y0 = std::min(y0, C.c.imag() + s.imag() - C.r);
                y1 = std::max(y1, C.c.imag() + s.imag() + C.r);
            }
        if (!(x1 > x0) || !(y1 > y0)) throw InvalidInput("layout has no drawable circles");
        scale = 0.95 * opt.size / std::max(x1 - x0, y1 - y0);
        ox = opt.size / 2.0 - scale * (x0 + x1) / 2;
        oy = opt.size / 2.0 + scale * (y0 + y1) / 2;
    }
    auto px = [&](cplx z) { return std::pair{ox + scale * z.real(), oy - scale * z.imag()}; };

    Svg svg(opt.size, opt.size, opt.stroke);
    if (opt.frame && L.model == Model::Disk) svg.circle(ox, oy, scale, "gray");
    if (opt.frame && torus) {
        cplx o = L.circles.empty() ? cplx(0.0) : L.circles[0].c;
        svg.polyline({px(o), px(o + L.hol_a), px(o + L.hol_a + L.hol_b), px(o + L.hol_b)}, true, "gray", opt.stroke);
    }
    for (cplx s : shifts)
        for (const Circle& C : L.circles) {
            if (C.kind != Circle::Kind::Plane) continue;
            auto [x, y] = px(C.c + s);
            svg.circle(x, y, scale * C.r, s == 0.0 ? "black" : "silver");
        }
    if (opt.carrier && L.center.size() == L.circles.size())
        for (auto [a, b] : face_edges(F.faces))
            if (!torus) svg.polyline({px(L.center[a]), px(L.center[b])}, false, "steelblue", 0.5 * opt.stroke);
    return svg.finish();
}

std::string render_sphere(const LayoutFile& F, const RenderOptions& opt)
{
    const int W = opt.size, H = opt.size / 2;
    const double R = 0.48 * H;
    const double cx[2] = {W / 4.0, 3 * W / 4.0}, cy = H / 2.0;
    Svg svg(W, H, opt.stroke);
    if (opt.frame)
        for (double x : cx) svg.circle(x, cy, R, "gray");
    // left: upper hemisphere seen from above; right: lower hemisphere seen from below
    auto project = [&](int side, const Vec3& X) {
        return std::pair{cx[side] + R * (side ? -X[0] : X[0]), cy - R * X[1]};
    };
    const int N = 128;
    for (const Circle& C : F.layout.circles) {
        if (C.kind != Circle::Kind::Sphere) continue;
        Vec3 p = C.p;
        Vec3 a = std::abs(p[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
        Vec3 u{p[1] * a[2] - p[2] * a[1], p[2] * a[0] - p[0] * a[2], p[0] * a[1] - p[1] * a[0]};
        double nu = std::hypot(u[0], u[1], u[2]);
        for (double& x : u) x /= nu;
        Vec3 w{p[1] * u[2] - p[2] * u[1], p[2] * u[0] - p[0] * u[2], p[0] * u[1] - p[1] * u[0]};
        std::vector<Vec3> ring(N);
        for (int k = 0; k < N; ++k) {
            double t = 2 * M_PI * k / N;
            for (int i = 0; i < 3; ++i)
                ring[k][i] = std::cos(C.rho) * p[i] + std::sin(C.rho) * (std::cos(t) * u[i] + std::sin(t) * w[i]);
        }
        for (int side = 0; side < 2; ++side) {
            auto visible = [&](int k) { return side == 0 ? ring[k % N][2] >= 0 : ring[k % N][2] <= 0; };
            int start = 0;
            while (start < N && visible(start)) ++start;
            if (start == N) {  // whole circle visible
                std::vector<std::pair<double, double>> pts;
                for (int k = 0; k < N; ++k) pts.push_back(project(side, ring[k]));
                svg.polyline(pts, true, "black", opt.stroke);
                continue;
            }
            std::vector<std::pair<double, double>> run;
            for (int k = start; k <= start + N; ++k) {
                if (visible(k)) {
                    run.push_back(project(side, ring[k % N]));
                } else {
                    svg.polyline(run, false, "black", opt.stroke);
                    run.clear();
                }
            }
            svg.polyline(run, false, "black", opt.stroke);
        }
    }
    return svg.finish();
}

}  // namespace

std::string render_svg(const LayoutFile& F, const RenderOptions& opt)
{
    if (opt.size < 16) throw InvalidInput("render size must be at least 16");
    if (!(opt.stroke > 0)) throw InvalidInput("stroke width must be positive");
    return F.layout.model == Model::Sphere ? render_sphere(F, opt) : render_flat(F, opt);
}

}  // namespace katpack
