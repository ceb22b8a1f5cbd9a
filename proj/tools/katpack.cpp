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
// katpack command-line front end. Machine output goes to -o or stdout, logs to stderr.
// Exit codes: 0 ok, 1 input error, 2 infeasible data, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "katpack/error.hpp"
#include "katpack/io.hpp"

using namespace katpack;
using json = nlohmann::json;

namespace
{

struct Common {
    double tol{1e-10};
    long max_sweeps{1'000'000};
    int threads{1};
    std::uint64_t seed{0};
    std::string out;
};

void emit(const std::string& path, const std::function<void(std::ostream&)>& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot write " + path);
    write(os);
    if (!os) throw InvalidInput("write failed for " + path);
}

SolveOptions solve_options(const Common& c)
{
    SolveOptions o;
    o.tol = c.tol;
    o.max_sweeps = c.max_sweeps;
    o.threads = c.threads;
    o.jacobi = c.threads > 1;
    return o;
}

cplx parse_point(const std::string& s)
{
    double x, y;
    char comma;
    std::istringstream is(s);
    if (!(is >> x >> comma >> y) || comma != ',') throw InvalidInput("expected a point \"x,y\", got \"" + s + "\"");
    return {x, y};
}

std::vector<int> parse_ints(const std::string& s)
{
    std::vector<int> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    if (out.empty()) throw InvalidInput("expected a comma-separated vertex list");
    return out;
}

std::string read_text(const std::string& path_or_text)
{
    std::ifstream is(path_or_text);
    if (!is) return path_or_text;
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void report_csv(const ProbeReport& rep, bool raw, const std::string& out)
{
    emit(out, [&](std::ostream& os) { raw ? rep.write_csv(os) : rep.write_summary_csv(os); });
    for (const auto& [name, value] : rep.flags) std::cerr << rep.kind << ": " << name << " = " << value << '\n';
    for (const auto& n : rep.notes) std::cerr << rep.kind << ": " << n << '\n';
}

json verdict_json(const ScribabilityVerdict& v)
{
    return {{"status", to_string(v.status)},
            {"face_level_infeasible", v.face_level_infeasible},
            {"margin", v.margin},
            {"margin_exact", v.margin_exact},
            {"witness", v.theta},
            {"circuits_added", v.circuits_added},
            {"message", v.message}};
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"katpack: circle packings, discrete conformal maps and type probes"};
    app.require_subcommand(1);
    Common c;
    if (const char* env = std::getenv("KATPACK_TOL")) {
        try {
            c.tol = std::stod(env);
        } catch (const std::exception&) {
            std::cerr << "KATPACK_TOL is not a number: " << env << '\n';
            return 1;
        }
    }
    auto common = [&](CLI::App* s, bool solver) {
        s->add_option("-o,--output", c.out, "output path (default stdout)");
        if (!solver) return;
        s->add_option("--tol", c.tol, "solver tolerance (default 1e-10 or KATPACK_TOL)")->check(CLI::PositiveNumber);
        s->add_option("--max-sweeps", c.max_sweeps, "iteration cap")->check(CLI::PositiveNumber);
        s->add_option("--threads", c.threads, "threads > 1 switch to the Jacobi sweep")->check(CLI::PositiveNumber);
    };
    std::function<int()> run;

    // pack
    std::string input, label_out, report_out, geometry = "hyperbolic";
    auto* pack = app.add_subcommand("pack", "solve a packing problem (JSON or face list)");
    pack->add_option("input", input, "problem file")->required();
    pack->add_option("--report", report_out, "write the solve report JSON here");
    pack->add_option("--geometry", geometry, "geometry for plain face lists")
        ->check(CLI::IsMember({"hyperbolic", "euclidean"}));
    common(pack, true);
    pack->callback([&] {
        run = [&] {
            auto P = read_problem_file(input, geometry == "euclidean" ? Geometry::Euclidean : Geometry::Hyperbolic);
            auto feas = schwarz_picard_feasibility(P);
            if (feas.status == CheckStatus::Fail) {
                json w = {{"status", "infeasible"}, {"witness", feas.witness}, {"message", feas.message}};
                emit(report_out.empty() ? c.out : report_out, [&](std::ostream& os) { os << w.dump(2) << '\n'; });
                throw Infeasible(feas.message, feas.witness);
            }
            auto res = solve(P, solve_options(c));
            emit(c.out, [&](std::ostream& os) { write_label(os, res.label, res.report); });
            if (!report_out.empty())
                emit(report_out, [&](std::ostream& os) {
                    json r = {{"iterations", res.report.iterations}, {"residual", res.report.residual},
                              {"area", res.report.area},             {"shortage", res.report.shortage},
                              {"superpacking", res.report.superpacking}, {"separating_edges", res.report.separating_edges}};
                    os << r.dump(2) << '\n';
                });
            std::cerr << "pack: " << res.report.iterations << " sweeps, residual " << res.report.residual << '\n';
            return 0;
        };
    });

    // maxpack
    auto* maxpack = app.add_subcommand("maxpack", "maximal packing of a disk complex, laid out in the unit disk");
    maxpack->add_option("input", input, "complex file")->required();
    maxpack->add_option("--label", label_out, "also write the label JSON here");
    common(maxpack, true);
    maxpack->callback([&] {
        run = [&] {
            auto T = read_complex_file(input);
            auto res = maximal_disk_label(T, {}, solve_options(c));
            auto L = layout_disk(T, {}, res.label);
            emit(c.out, [&](std::ostream& os) { write_layout(os, T, L); });
            if (!label_out.empty()) emit(label_out, [&](std::ostream& os) { write_label(os, res.label, res.report); });
            std::cerr << "maxpack: residual " << res.report.residual << ", layout residual " << L.residual << '\n';
            return 0;
        };
    });

    // sphere
    int v_inf = -1;
    std::string obj_out;
    auto* sphere = app.add_subcommand("sphere", "packing of a closed sphere complex on the unit sphere");
    sphere->add_option("input", input, "complex file")->required();
    sphere->add_option("--vinf", v_inf, "vertex placed outside the unit circle before projection");
    sphere->add_option("--obj", obj_out, "also write cap centers as OBJ");
    common(sphere, true);
    sphere->callback([&] {
        run = [&] {
            auto K = read_complex_file(input);
            SphereOptions so;
            so.v_inf = v_inf;
            so.solve = solve_options(c);
            auto L = sphere_pack(K, {}, so);
            emit(c.out, [&](std::ostream& os) { write_layout(os, K, L); });
            if (!obj_out.empty()) emit(obj_out, [&](std::ostream& os) { write_sphere_obj(os, K, L); });
            std::cerr << "sphere: edge residual " << L.edge_residual << '\n';
            return 0;
        };
    });

    // torus
    auto* torus = app.add_subcommand("torus", "flat packing of a closed torus complex");
    torus->add_option("input", input, "complex file")->required();
    common(torus, true);
    torus->callback([&] {
        run = [&] {
            auto K = read_complex_file(input);
            auto res = solve_euclidean(PackingProblem(K, Geometry::Euclidean), solve_options(c));
            auto L = layout_torus(K, {}, res.label);
            emit(c.out, [&](std::ostream& os) { write_layout(os, K, L); });
            std::cerr << "torus: tau " << L.tau.real() << (L.tau.imag() < 0 ? "" : "+") << L.tau.imag()
                      << "i, closure " << L.closure_residual << '\n';
            return 0;
        };
    });

    // drm
    std::string domain = "square", xs = "0.5,0.5", ys = "0.75,0.5", rule = "closed";
    double eps = 1.0 / 16;
    auto* drm = app.add_subcommand("drm", "discrete Riemann map of a polygon onto the unit disk");
    drm->add_option("--domain", domain, "polygon file, or square (unit square)");
    drm->add_option("--eps", eps, "lattice circle radius")->check(CLI::PositiveNumber);
    drm->add_option("--x", xs, "point sent to 0, as x,y");
    drm->add_option("--y", ys, "point sent to the positive axis, as x,y");
    drm->add_option("--rule", rule, "cutout rule (default closed: whole circle inside the domain)")->check(CLI::IsMember({"closed", "center"}));
    common(drm, true);
    drm->callback([&] {
        run = [&] {
            Polygon P = domain == "square" ? Polygon{{0, 0}, {1, 0}, {1, 1}, {0, 1}} : read_polygon_file(domain);
            auto F = discrete_riemann_map(P, eps, parse_point(xs), parse_point(ys), solve_options(c),
                                          rule == "closed" ? CutoutRule::ClosedDisk : CutoutRule::Center);
            emit(c.out, [&](std::ostream& os) { write_paired_mesh(os, F); });
            std::cerr << "drm: " << F.source.T.num_vertices() << " circles, tangency error "
                      << F.boundary_tangency_error() << '\n';
            return 0;
        };
    });

    // shapes
    int depth = 2;
    auto* shapes = app.add_subcommand("shapes", "equilateral face shapes after n hex refinements");
    shapes->add_option("input", input, "complex file (disk or sphere)")->required();
    shapes->add_option("--depth", depth, "hex refinement depth")->check(CLI::NonNegativeNumber);
    common(shapes, true);
    shapes->callback([&] {
        run = [&] {
            ShapeOptions so;
            so.solve = solve_options(c);
            auto S = equilateral_shapes(read_complex_file(input), depth, so);
            emit(c.out, [&](std::ostream& os) { write_shapes(os, S); });
            return 0;
        };
    });

    // probe
    auto* probe = app.add_subcommand("probe", "type and extremal length probes");
    probe->require_subcommand(1);
    int d = 6, g_lo = 3, g_hi = 8, n_max = 6, samples = 16, generations = 4;
    long walks = 0;
    bool raw = false;
    std::string graph, sources, sinks, boundary;
    int root = 0;
    auto* cptype = probe->add_subcommand("cptype", "center radius of G_d balls across generations");
    cptype->add_option("--d", d, "vertex degree")->check(CLI::Range(6, 1000));
    cptype->add_option("--glo", g_lo, "first generation");
    cptype->add_option("--ghi", g_hi, "last generation");
    auto* hexratio = probe->add_subcommand("hexratio", "hexagonal ratio constants c_n");
    hexratio->add_option("--n", n_max, "largest generation")->check(CLI::PositiveNumber);
    hexratio->add_option("--samples", samples, "perturbed boundaries per n")->check(CLI::PositiveNumber);
    auto* ring = probe->add_subcommand("ring", "ring constant estimates for degree bound d");
    ring->add_option("--d", d, "degree bound");
    ring->add_option("--generations", generations, "largest ball generation");
    ring->add_option("--samples", samples, "random instances per bound");
    auto* eel = probe->add_subcommand("eel", "edge extremal length between vertex sets");
    auto* vel = probe->add_subcommand("vel", "vertex extremal length between vertex sets");
    auto* rw = probe->add_subcommand("rw", "escape probability of the simple random walk");
    for (auto* s : {eel, vel, rw}) s->add_option("--graph", graph, "edge list file")->required();
    for (auto* s : {eel, vel}) {
        s->add_option("--sources", sources, "comma-separated vertices")->required();
        s->add_option("--sinks", sinks, "comma-separated vertices")->required();
    }
    rw->add_option("--root", root, "start vertex");
    rw->add_option("--boundary", boundary, "comma-separated absorbing vertices")->required();
    rw->add_option("--walks", walks, "also estimate by this many simulated walks");
    for (auto* s : {cptype, hexratio, ring, eel, vel, rw}) {
        s->add_option("-o,--output", c.out, "output path (default stdout)");
        s->add_option("--seed", c.seed, "seed for randomized probes (default 0)");
    }
    for (auto* s : {cptype, hexratio, ring}) s->add_flag("--raw", raw, "one CSV row per sample instead of the summary");
    cptype->callback([&] { run = [&] { report_csv(cp_type_probe(d, g_lo, g_hi), raw, c.out); return 0; }; });
    hexratio->callback([&] { run = [&] { report_csv(hex_ratio_probe(n_max, samples, c.seed), raw, c.out); return 0; }; });
    ring->callback([&] { run = [&] { report_csv(ring_constant_probe(d, generations, samples, c.seed), raw, c.out); return 0; }; });
    eel->callback([&] {
        run = [&] {
            double r = eel_between(read_graph_file(graph), parse_ints(sources), parse_ints(sinks));
            emit(c.out, [&](std::ostream& os) { os << json{{"eel", r}}.dump(2) << '\n'; });
            return 0;
        };
    });
    vel->callback([&] {
        run = [&] {
            auto r = vel_between(read_graph_file(graph), parse_ints(sources), parse_ints(sinks));
            json j = {{"vel", r.value}, {"lower", r.lower}, {"upper", r.upper}, {"converged", r.converged},
                      {"rounds", r.iterations}, {"metric", r.metric}};
            emit(c.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
            if (!r.converged) throw NonConvergence("duality gap not closed");
            return 0;
        };
    });
    rw->callback([&] {
        run = [&] {
            auto G = read_graph_file(graph);
            auto bd = parse_ints(boundary);
            json j = {{"escape", rw_escape(G, root, bd)}};
            if (walks > 0) {
                auto mc = rw_escape_monte_carlo(G, root, bd, walks, c.seed);
                j["monte_carlo"] = {{"estimate", mc.estimate}, {"stderr", mc.stderr_}, {"walks", mc.walks}};
            }
            emit(c.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
            return 0;
        };
    });

    // midscribe
    std::string obj_path;
    auto* mid_cmd = app.add_subcommand("midscribe", "edges tangent to the unit sphere");
    mid_cmd->add_option("input", input, "polyhedron file or solid name (cube, truncated-cube, cube-cut, prism5)")
        ->required();
    mid_cmd->add_option("--obj", obj_path, "OBJ output (default stdout)");
    mid_cmd->add_option("--report", report_out, "tangency report JSON (default stderr)");
    mid_cmd->callback([&] {
        run = [&] {
            auto M = katpack::midscribe(read_polyhedron(input));
            emit(obj_path, [&](std::ostream& os) { write_obj(os, M); });
            json edges = json::array();
            for (const auto& e : M.edges)
                edges.push_back({{"a", e.a}, {"b", e.b}, {"distance", e.distance}, {"param", e.param}, {"interior", e.interior}});
            json r = {{"tangent_edges", M.tangent_edges},
                      {"edges", M.edges.size()},
                      {"max_tangency_error", M.max_tangency_error},
                      {"max_planarity_error", M.max_planarity_error},
                      {"per_edge", edges}};
            if (report_out.empty())
                std::cerr << "midscribe: " << M.tangent_edges << "/" << M.edges.size() << " edges tangent, max error "
                          << M.max_tangency_error << '\n';
            else
                emit(report_out, [&](std::ostream& os) { os << r.dump(2) << '\n'; });
            return M.tangent_edges == static_cast<int>(M.edges.size()) ? 0 : 3;
        };
    });

    // scribable
    std::string kind = "both";
    auto* scribable = app.add_subcommand("scribable", "circumscribable and inscribable type verdicts");
    scribable->add_option("input", input, "polyhedron file or solid name")->required();
    scribable->add_option("--kind", kind, "which verdict")->check(CLI::IsMember({"circumscribable", "inscribable", "both"}));
    common(scribable, false);
    scribable->callback([&] {
        run = [&] {
            auto P = read_polyhedron(input);
            json j;
            if (kind != "inscribable") j["circumscribable"] = verdict_json(circumscribable_type(P));
            if (kind != "circumscribable") j["inscribable"] = verdict_json(inscribable_type(P));
            emit(c.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
            return 0;
        };
    });

    // invdist
    std::string c1, c2, method = "desitter";
    auto* invdist = app.add_subcommand("invdist", "inversive distance of two circles given as JSON");
    invdist->add_option("c1", c1, "circle JSON or file")->required();
    invdist->add_option("c2", c2, "circle JSON or file")->required();
    invdist->add_option("--method", method, "formula")->check(CLI::IsMember({"planar", "spherical", "crossratio", "desitter"}));
    invdist->callback([&] {
        run = [&] {
            InvMethod m = method == "planar"      ? InvMethod::Planar
                          : method == "spherical" ? InvMethod::Spherical
                          : method == "crossratio" ? InvMethod::CrossRatio
                                                   : InvMethod::DeSitter;
            double I = inversive_distance(circle_from_json(read_text(c1)), circle_from_json(read_text(c2)), m);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g\n", I);
            std::cout << buf;
            return 0;
        };
    });

    // render
    RenderOptions ro;
    bool no_frame = false;
    auto* render = app.add_subcommand("render", "SVG of a layout JSON");
    render->add_option("input", input, "layout file")->required();
    render->add_option("--size", ro.size, "viewport width in pixels");
    render->add_option("--stroke", ro.stroke, "stroke width");
    render->add_flag("--carrier", ro.carrier, "draw carrier edges");
    render->add_flag("--no-frame", no_frame, "omit the unit circle / fundamental domain");
    common(render, false);
    render->callback([&] {
        run = [&] {
            ro.frame = !no_frame;
            std::ifstream is(input);
            if (!is) throw InvalidInput("cannot open " + input);
            auto F = read_layout(is);
            std::string svg = render_svg(F, ro);
            emit(c.out, [&](std::ostream& os) { os << svg; });
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        return run ? run() : 0;
    } catch (const Infeasible& e) {
        std::cerr << e.what() << "\nwitness set:";
        for (int v : e.vertices) std::cerr << ' ' << v;
        std::cerr << '\n';
        return 2;
    } catch (const NonConvergence& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const LayoutInconsistent& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
