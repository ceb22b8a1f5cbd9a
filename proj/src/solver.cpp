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
#include "katpack/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <set>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "katpack/error.hpp"

namespace katpack
{

namespace
{
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

// One corner of a face at a given vertex, with the three inversive distances.
struct Corner {
    int b, c;
    double Iab, Iac, Ibc;
};

std::vector<std::vector<Corner>> build_corners(const Triangulation& T, const EdgeLabel& phi)
{
    std::vector<std::vector<Corner>> out(T.num_vertices());
    for (int f = 0; f < T.num_faces(); ++f) {
        const auto& t = T.face(f);
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3], c = t[(k + 2) % 3];
            out[a].push_back({b, c, phi.inversive(T.edge_index(a, b)), phi.inversive(T.edge_index(a, c)),
                              phi.inversive(T.edge_index(b, c))});
        }
    }
    return out;
}

// Sum of (pi - opposite overlap): the angle sum approached as the vertex radius shrinks to 0.
double angle_sup(const std::vector<Corner>& cs)
{
    double s = 0;
    for (const auto& c : cs) s += std::acos(std::clamp(-c.Ibc, -1.0, 1.0));
    return s;
}

class Engine
{
public:
    Engine(const PackingProblem& P) : P_(P), g_(P.geometry), corners_(build_corners(P.T, P.phi))
    {
        free_ = P.free_vertices();
        index_.assign(P.T.num_vertices(), -1);
        for (std::size_t i = 0; i < free_.size(); ++i) index_[free_[i]] = static_cast<int>(i);
    }

    // Angle sum at v with its own variable replaced by xv; optionally d(theta)/d(variable).
    double theta(int v, const std::vector<double>& x, double xv, double* deriv = nullptr) const
    {
        double sum = 0, d = 0;
        if (g_ == Geometry::Hyperbolic) {
            if (xv <= 0.0) {
                if (deriv) *deriv = 0;
                return 0.0;
            }
            for (const auto& c : corners_[v]) {
                sum += face_angle_s(xv, x[c.b], x[c.c], c.Iab, c.Iac, c.Ibc);
                if (deriv) d += face_angle_s_deriv(xv, x[c.b], x[c.c], c.Iab, c.Iac, c.Ibc);
            }
        } else {
            for (const auto& c : corners_[v]) {
                sum += face_angle_euc(xv, x[c.b], x[c.c], c.Iab, c.Iac, c.Ibc);
                if (deriv) d += face_angle_euc_deriv(xv, x[c.b], x[c.c], c.Iab, c.Iac, c.Ibc);
            }
            d *= xv;  // derivative in log r
        }
        if (deriv) *deriv = d;
        return sum;
    }

    // Hyperbolic update: smallest s >= x[v] with theta <= target, as close as possible.
    double update_hyperbolic(int v, const std::vector<double>& x, double inner) const
    {
        const double t = P_.target[v];
        double lo = x[v], hi = 1.0;
        double d = 0;
        double g = theta(v, x, lo, &d) - t;
        if (g >= -inner) return lo;
        double s = lo;
        for (int it = 0; it < 200; ++it) {
            double sn = (d > 0) ? s - g / d : -1;
            if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
            double dn = 0;
            double gn = theta(v, x, sn, &dn) - t;
            if (gn <= 0) {
                lo = sn;
                if (gn >= -inner) return lo;
            } else {
                hi = sn;
                if (gn < inner && dn > 0) {
                    // step just past the root so the accepted value stays on the superpacking side
                    double c = sn - 2 * gn / dn - 4e-16;
                    if (c > lo) {
                        double gc = theta(v, x, c) - t;
                        if (gc <= 0) {
                            lo = c;
                            if (gc >= -inner) return lo;
                        } else {
                            hi = c;
                        }
                    }
                }
            }
            if (hi - lo <= 4e-16) return lo;
            s = sn;
            g = gn;
            d = dn;
        }
        return lo;
    }

    // Euclidean update in u = log r; theta decreases in r.
    double update_euclidean(int v, const std::vector<double>& x, double inner) const
    {
        const double t = P_.target[v];
        auto G = [&](double u, double* d) { return theta(v, x, std::exp(u), d) - t; };
        double u = std::log(x[v]);
        double d = 0;
        double g = G(u, &d);
        if (std::abs(g) <= inner) return x[v];
        double lo, hi;  // g(lo) > 0 > g(hi)
        if (g > 0) {
            lo = u;
            double step = 1;
            hi = u + step;
            while (G(hi, nullptr) > 0) {
                lo = hi;
                step *= 2;
                hi += step;
                if (step > 1e3) throw Infeasible("angle target unreachable at vertex " + std::to_string(v), {v});
            }
        } else {
            hi = u;
            double step = 1;
            lo = u - step;
            while (G(lo, nullptr) < 0) {
                hi = lo;
                step *= 2;
                lo -= step;
                if (step > 1e3) throw Infeasible("angle target unreachable at vertex " + std::to_string(v), {v});
            }
        }
        u = std::clamp(u, lo, hi);
        for (int it = 0; it < 200; ++it) {
            double un = (d < 0) ? u - g / d : lo - 1;
            if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
            g = G(un, &d);
            u = un;
            if (std::abs(g) <= inner) break;
            if (g > 0)
                lo = un;
            else
                hi = un;
            if (hi - lo <= 1e-15 * std::max(1.0, std::abs(u))) break;
        }
        return std::exp(u);
    }

    double update(int v, const std::vector<double>& x, double inner) const
    {
        return g_ == Geometry::Hyperbolic ? update_hyperbolic(v, x, inner) : update_euclidean(v, x, inner);
    }

    double residual(const std::vector<double>& x) const
    {
        double r = 0;
        for (int v : free_) r = std::max(r, std::abs(theta(v, x, x[v]) - P_.target[v]));
        return r;
    }

    bool superpacking(const std::vector<double>& x, double slack) const
    {
        for (int v : free_)
            if (theta(v, x, x[v]) > P_.target[v] + slack) return false;
        return true;
    }

    /**
     * One global Newton step in log variables, aimed a margin below the
     * targets. Backtracks until the step keeps a hyperbolic iterate a
     * superpacking and lowers the residual; returns false if none does.
     */
    bool newton_step(std::vector<double>& x, double& res, double tol) const
    {
        const int n = static_cast<int>(free_.size());
        if (n == 0) return false;
        const bool hyp = g_ == Geometry::Hyperbolic;
        const double margin = hyp ? std::max(0.25 * tol, 0.01 * res) : 0.0;
        const double h = 1e-6;
        // variables are log r in both geometries; hyperbolic x holds s = exp(-r)
        auto to_x = [&](double r) { return hyp ? std::exp(-r) : r; };
        auto to_r = [&](double xv) { return hyp ? -std::log(xv) : xv; };
        auto angle = [&](double a, double b, double c, const Corner& k) {
            return hyp ? face_angle_s(a, b, c, k.Iab, k.Iac, k.Ibc) : face_angle_euc(a, b, c, k.Iab, k.Iac, k.Ibc);
        };
        std::vector<Eigen::Triplet<double>> trip;
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            const int v = free_[i];
            double sum = 0;
            for (const auto& k : corners_[v]) {
                const double xs[3] = {x[v], x[k.b], x[k.c]};
                sum += angle(xs[0], xs[1], xs[2], k);
                const int ids[3] = {v, k.b, k.c};
                for (int m = 0; m < 3; ++m) {
                    const int j = index_[ids[m]];
                    if (j < 0) continue;
                    double p[3] = {xs[0], xs[1], xs[2]}, q[3] = {xs[0], xs[1], xs[2]};
                    const double r = to_r(xs[m]);
                    p[m] = to_x(r * std::exp(h));
                    q[m] = to_x(r * std::exp(-h));
                    trip.emplace_back(i, j, (angle(p[0], p[1], p[2], k) - angle(q[0], q[1], q[2], k)) / (2 * h));
                }
            }
            rhs[i] = P_.target[v] - margin - sum;
        }
        Eigen::SparseMatrix<double> J(n, n);
        J.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) return false;
        Eigen::VectorXd dt = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !dt.allFinite()) return false;

        std::vector<double> y = x;
        double alpha = 1;
        for (int tries = 0; tries < 12; ++tries, alpha *= 0.5) {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                const int v = free_[i];
                double xi = to_x(to_r(x[v]) * std::exp(alpha * std::clamp(dt[i], -5.0, 5.0)));
                ok = hyp ? (xi > 0 && xi < 1) : (xi > 0 && std::isfinite(xi));
                y[v] = xi;
            }
            if (!ok) continue;
            if (hyp && !superpacking(y, 0.0)) continue;
            double r = residual(y);
            if (r < res) {
                x.swap(y);
                res = r;
                return true;
            }
        }
        return false;
    }

    const std::vector<int>& free() const { return free_; }
    const std::vector<Corner>& corners(int v) const { return corners_[v]; }

private:
    const PackingProblem& P_;
    Geometry g_;
    std::vector<std::vector<Corner>> corners_;
    std::vector<int> free_;
    std::vector<int> index_;
};

// Upfront necessary conditions: singletons and whole connected components of free vertices.
void precheck(const PackingProblem& P, const Engine& E)
{
    for (int v : E.free()) {
        if (P.target[v] >= angle_sup(E.corners(v)))
            throw Infeasible("target at vertex " + std::to_string(v) + " is not below its supremum angle sum", {v});
    }
    if (P.geometry != Geometry::Hyperbolic) return;
    FeasibilityVerdict fv = schwarz_picard_feasibility(P, 0);
    if (fv.status == CheckStatus::Fail) throw Infeasible(fv.message, fv.witness);
}

void fill_report(const PackingProblem& P, const PackingLabel& L, SolveReport& rep)
{
    auto th = angle_sums(P, L);
    rep.shortage = 0;
    rep.residual = 0;
    for (int v : P.free_vertices()) {
        rep.shortage += kTwoPi - th[v];
        rep.residual = std::max(rep.residual, std::abs(th[v] - P.target[v]));
    }
    rep.area = 0;
    if (P.geometry == Geometry::Hyperbolic) {
        for (double a : face_areas(P.T, P.phi, L)) rep.area += a;
    } else {
        for (int f = 0; f < P.T.num_faces(); ++f) {
            const auto& t = P.T.face(f);
            auto I = [&](int a, int b) { return P.phi.inversive(P.T.edge_index(a, b)); };
            double a = edge_length(Geometry::Euclidean, L.r[t[1]], L.r[t[2]], I(t[1], t[2]));
            double b = edge_length(Geometry::Euclidean, L.r[t[0]], L.r[t[2]], I(t[0], t[2]));
            double c = edge_length(Geometry::Euclidean, L.r[t[0]], L.r[t[1]], I(t[0], t[1]));
            double s = 0.5 * (a + b + c);
            rep.area += std::sqrt(std::max(0.0, s * (s - a) * (s - b) * (s - c)));
        }
    }
    rep.superpacking = superpacking_check(P, L);
    if (P.T.kind() == SurfaceKind::Disk) rep.separating_edges = P.T.separating_edges();
}

std::vector<int> smallest_radius_set(const std::vector<double>& x, const std::vector<int>& fr, Geometry g)
{
    std::vector<int> out;
    for (int v : fr) {
        bool tiny = g == Geometry::Hyperbolic ? x[v] > 1 - 1e-9 : x[v] < 1e-9;
        if (tiny) out.push_back(v);
    }
    return out;
}

SolveResult run(const PackingProblem& P, const SolveOptions& opt)
{
    P.validate();
    if (!(opt.tol > 0)) throw InvalidInput("tolerance must be positive");
    Engine E(P);
    precheck(P, E);

    const int V = P.T.num_vertices();
    const bool hyp = P.geometry == Geometry::Hyperbolic;
    const bool torus = !hyp && P.T.kind() == SurfaceKind::Torus;
    const int unit = torus ? (P.unit_vertex >= 0 ? P.unit_vertex : 0) : -1;

    std::vector<double> x(V);
    for (int v = 0; v < V; ++v) {
        if (P.T.is_boundary(v))
            x[v] = hyp ? s_from_r(P.boundary_radius[v]) : P.boundary_radius[v];
        else if (P.cusp[v])
            x[v] = 0.0;
    }
    for (int v : E.free()) {
        if (opt.initial) {
            double r = (*opt.initial)[v];
            x[v] = hyp ? s_from_r(r) : r;
        } else {
            x[v] = hyp ? 0.5 : 1.0;
        }
        if (hyp && !(x[v] > 0 && x[v] < 1)) throw InvalidInput("initial hyperbolic radius must be finite and positive");
        if (!hyp && !(x[v] > 0 && std::isfinite(x[v]))) throw InvalidInput("initial radius must be positive");
    }

    if (hyp) {
        // start from above: shrink s on free vertices until every angle sum is below target
        int halvings = 0;
        while (!E.superpacking(x, 0.0)) {
            for (int v : E.free()) x[v] *= 0.5;
            if (++halvings > 200) throw NonConvergence("could not reach a superpacking start");
        }
    }

    const double inner = opt.tol * 1e-2;
    const auto& fr = E.free();
    SolveResult out;
    double res = E.residual(x);
    double checkpoint = res;
    long sweep = 0;
    std::vector<double> next;
    const bool use_newton = opt.newton && !opt.jacobi && !torus;
    int cooldown = 0;

#ifdef _OPENMP
    int threads = std::max(1, opt.threads);
#endif
    while (res > opt.tol) {
        if (sweep >= opt.max_sweeps)
            throw NonConvergence("iteration cap of " + std::to_string(opt.max_sweeps) + " sweeps reached, residual " +
                                 std::to_string(res));
        ++sweep;
        if (opt.jacobi) {
            next = x;
            const long n = static_cast<long>(fr.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
            for (long i = 0; i < n; ++i) next[fr[i]] = E.update(fr[i], x, inner);
            x.swap(next);
        } else {
            for (int v : fr) x[v] = E.update(v, x, inner);
        }
        if (torus) {
            double k = 1.0 / x[unit];
            for (double& r : x) r *= k;
        }
        res = E.residual(x);
        if (use_newton && res > opt.tol) {
            if (cooldown > 0)
                --cooldown;
            else if (!E.newton_step(x, res, opt.tol))
                cooldown = 20;
        }

        if (sweep % 100 == 0) {
            auto tiny = smallest_radius_set(x, fr, P.geometry);
            bool stalled = checkpoint - res < 1e-16;
            if (!tiny.empty() && (stalled || hyp)) {
                double worst = 0;
                for (int v : fr) worst = std::max(worst, hyp ? x[v] : -x[v]);
                bool collapsed = hyp ? worst > 1 - 1e-12 : -worst < 1e-12;
                if (collapsed || stalled) throw Infeasible("radii collapse to zero", tiny);
            }
            checkpoint = res;
        }
    }

    NativeLabel nl{P.geometry, x};
    out.label = PackingLabel::from_native(nl);
    for (int v = 0; v < V; ++v)
        if (P.T.is_boundary(v)) out.label.r[v] = P.boundary_radius[v];  // bit-equal boundary data
    out.label.unit_vertex = unit;
    out.report.iterations = sweep;
    fill_report(P, out.label, out.report);
    return out;
}
}  // namespace

// ---------------------------------------------------------------- problem

PackingProblem::PackingProblem(Triangulation tri, Geometry g, EdgeLabel labels)
    : T(std::move(tri)), geometry(g), phi(std::move(labels))
{
    const int V = T.num_vertices();
    boundary_radius.assign(V, g == Geometry::Hyperbolic ? kInf : 1.0);
    target.assign(V, kTwoPi);
    cusp.assign(V, 0);
}

PackingProblem PackingProblem::maximal(const Triangulation& T, EdgeLabel labels)
{
    return PackingProblem(T, Geometry::Hyperbolic, std::move(labels));
}

PackingProblem PackingProblem::uniform(const Triangulation& T, Geometry g, double boundary_r, EdgeLabel labels)
{
    PackingProblem P(T, g, std::move(labels));
    for (int v : T.boundary_vertices()) P.boundary_radius[v] = boundary_r;
    return P;
}

void PackingProblem::set_cusp(int v)
{
    if (T.is_boundary(v)) throw InvalidInput("cusp vertex " + std::to_string(v) + " lies on the boundary");
    cusp[v] = 1;
}

void PackingProblem::apply_branching(const BranchStructure& beta)
{
    for (const auto& b : beta.points) {
        if (b.vertex < 0 || b.vertex >= T.num_vertices() || T.is_boundary(b.vertex))
            throw InvalidInput("branch vertex must be interior");
        target[b.vertex] = kTwoPi * (b.order + 1);
    }
}

std::vector<int> PackingProblem::free_vertices() const
{
    std::vector<int> out;
    for (int v = 0; v < T.num_vertices(); ++v)
        if (is_free(v)) out.push_back(v);
    return out;
}

void PackingProblem::validate() const
{
    const int V = T.num_vertices();
    if (static_cast<int>(boundary_radius.size()) != V || static_cast<int>(target.size()) != V ||
        static_cast<int>(cusp.size()) != V)
        throw InvalidInput("problem arrays do not match the vertex count");
    phi.validate(T);
    for (int e = 0; e < T.num_edges() && !phi.values.empty(); ++e)
        if (phi.inversive(e) < 0) throw InvalidInput("overlap beyond pi/2 on edge " + std::to_string(e));
    if (T.kind() == SurfaceKind::Bordered) throw InvalidInput("bordered surfaces other than disks are not supported");
    for (int v : T.boundary_vertices()) {
        double r = boundary_radius[v];
        if (!(r > 0)) throw InvalidInput("boundary radius at vertex " + std::to_string(v) + " must be positive");
        if (geometry == Geometry::Euclidean && !std::isfinite(r))
            throw InvalidInput("euclidean boundary radii must be finite");
    }
    for (int v = 0; v < V; ++v) {
        if (cusp[v] && geometry == Geometry::Euclidean) throw InvalidInput("euclidean problems have no cusps");
        if (is_free(v) && !(target[v] > 0 && std::isfinite(target[v])))
            throw InvalidInput("target at vertex " + std::to_string(v) + " must be positive");
    }
    if (geometry == Geometry::Euclidean && T.kind() != SurfaceKind::Disk && T.kind() != SurfaceKind::Torus)
        throw InvalidInput("euclidean solving needs a disk or a torus");
}

NativeLabel PackingLabel::native() const
{
    NativeLabel n{geometry, r};
    if (geometry == Geometry::Hyperbolic)
        for (double& x : n.x) x = s_from_r(x);
    return n;
}

PackingLabel PackingLabel::from_native(const NativeLabel& x)
{
    PackingLabel L;
    L.geometry = x.geometry;
    L.r = x.x;
    if (x.geometry == Geometry::Hyperbolic)
        for (double& v : L.r) v = r_from_s(v);
    return L;
}

// ---------------------------------------------------------------- solving

SolveResult solve_hyperbolic(const PackingProblem& P, const SolveOptions& opt)
{
    if (P.geometry != Geometry::Hyperbolic) throw InvalidInput("solve_hyperbolic needs a hyperbolic problem");
    return run(P, opt);
}

SolveResult solve_euclidean(const PackingProblem& P, const SolveOptions& opt)
{
    if (P.geometry != Geometry::Euclidean) throw InvalidInput("solve_euclidean needs a euclidean problem");
    return run(P, opt);
}

SolveResult solve(const PackingProblem& P, const SolveOptions& opt) { return run(P, opt); }

SolveResult maximal_disk_label(const Triangulation& T, const EdgeLabel& phi, const SolveOptions& opt)
{
    if (T.kind() != SurfaceKind::Disk) throw InvalidInput("maximal packing needs a disk triangulation");
    return run(PackingProblem::maximal(T, phi), opt);
}

SolveResult closed_surface_label(const Triangulation& K, const EdgeLabel& phi, const SolveOptions& opt)
{
    if (!K.boundary_vertices().empty()) throw InvalidInput("closed surface expected");
    if (K.num_faces() - 2 * K.num_vertices() <= 0) throw InvalidInput("closed surface of genus >= 2 expected");
    return run(PackingProblem(K, Geometry::Hyperbolic, phi), opt);
}

std::vector<double> angle_sums(const PackingProblem& P, const PackingLabel& L)
{
    NativeLabel n = L.native();
    std::vector<double> out(P.T.num_vertices());
    for (int v = 0; v < P.T.num_vertices(); ++v) out[v] = angle_sum(P.T, n, P.phi, v);
    return out;
}

double max_residual(const PackingProblem& P, const PackingLabel& L)
{
    auto th = angle_sums(P, L);
    double r = 0;
    for (int v : P.free_vertices()) r = std::max(r, std::abs(th[v] - P.target[v]));
    return r;
}

bool superpacking_check(const PackingProblem& P, const PackingLabel& L, double slack)
{
    auto th = angle_sums(P, L);
    for (int v : P.free_vertices())
        if (th[v] > P.target[v] + slack) return false;
    return true;
}

std::vector<double> face_areas(const Triangulation& T, const EdgeLabel& phi, const PackingLabel& L)
{
    NativeLabel n = L.native();
    std::vector<double> out(T.num_faces());
    for (int f = 0; f < T.num_faces(); ++f)
        out[f] = face_area_hyperbolic(face_corner_angle(T, n, phi, f, 0), face_corner_angle(T, n, phi, f, 1),
                                      face_corner_angle(T, n, phi, f, 2));
    return out;
}

// ---------------------------------------------------------------- feasibility

FeasibilityVerdict schwarz_picard_feasibility(const PackingProblem& P, int exhaustive_cap)
{
    const Triangulation& T = P.T;
    const int V = T.num_vertices();
    std::vector<int> fr = P.free_vertices();
    std::vector<char> is_free(V, 0);
    for (int v : fr) is_free[v] = 1;

    FeasibilityVerdict out;
    out.min_margin = kInf;
    std::vector<int> face_count(T.num_faces(), 0);
    int faces_met = 0;
    double theta_sum = 0;
    std::vector<int> current;

    auto add = [&](int v) {
        current.push_back(v);
        theta_sum += P.target[v];
        for (int f : T.star(v))
            if (face_count[f]++ == 0) ++faces_met;
    };
    auto remove = [&](int v) {
        current.pop_back();
        theta_sum -= P.target[v];
        for (int f : T.star(v))
            if (--face_count[f] == 0) --faces_met;
    };
    auto examine = [&]() {
        ++out.sets_examined;
        double m = kPi * faces_met - theta_sum;
        if (m < out.min_margin) out.min_margin = m;
        if (m <= 1e-12 * std::max(1.0, theta_sum) && out.status != CheckStatus::Fail) {
            out.status = CheckStatus::Fail;
            out.witness = current;
            std::sort(out.witness.begin(), out.witness.end());
        }
    };
    auto examine_set = [&](const std::vector<int>& S) {
        for (int v : S) add(v);
        examine();
        for (auto it = S.rbegin(); it != S.rend(); ++it) remove(*it);
    };

    auto free_nbrs = [&](int v) {
        std::vector<int> out_n;
        for (int w : T.flower(v))
            if (is_free[w]) out_n.push_back(w);
        return out_n;
    };

    const bool exhaustive = static_cast<int>(fr.size()) <= exhaustive_cap;
    if (exhaustive) {
        // every connected set exactly once: grow from its smallest vertex, extension
        // candidates are neighbors of the newest vertex outside the closed neighborhood of the set
        std::vector<int> nbhd(V, 0);  // how many set members have w in their closed neighborhood
        std::function<void(int, std::vector<int>)> extend = [&](int root, std::vector<int> ext) {
            examine();
            while (!ext.empty()) {
                int w = ext.back();
                ext.pop_back();
                std::vector<int> next = ext;
                for (int u : free_nbrs(w))
                    if (u > root && nbhd[u] == 0) next.push_back(u);
                add(w);
                nbhd[w]++;
                for (int u : free_nbrs(w)) nbhd[u]++;
                extend(root, next);
                nbhd[w]--;
                for (int u : free_nbrs(w)) nbhd[u]--;
                remove(w);
            }
        };
        for (int v : fr) {
            add(v);
            nbhd[v]++;
            for (int u : free_nbrs(v)) nbhd[u]++;
            std::vector<int> ext;
            for (int u : free_nbrs(v))
                if (u > v) ext.push_back(u);
            extend(v, ext);
            nbhd[v]--;
            for (int u : free_nbrs(v)) nbhd[u]--;
            remove(v);
        }
        if (out.status == CheckStatus::Fail)
            out.message = "set violates pi F_V - theta(V) > 0";
        else
            out.message = "all " + std::to_string(out.sets_examined) + " connected sets pass";
        return out;
    }

    // heuristic search: singletons, components, BFS balls
    for (int v : fr) examine_set({v});
    std::vector<int> comp(V, -1);
    int nc = 0;
    for (int v : fr) {
        if (comp[v] >= 0) continue;
        std::vector<int> S{v};
        comp[v] = nc;
        for (std::size_t i = 0; i < S.size(); ++i)
            for (int u : free_nbrs(S[i]))
                if (comp[u] < 0) {
                    comp[u] = nc;
                    S.push_back(u);
                }
        examine_set(S);
        ++nc;
    }
    if (exhaustive_cap > 0) {
        for (int v : fr) {
            std::vector<int> dist(V, -1);
            std::vector<int> S{v};
            dist[v] = 0;
            for (std::size_t i = 0; i < S.size(); ++i) {
                if (dist[S[i]] >= 3) continue;
                for (int u : free_nbrs(S[i]))
                    if (dist[u] < 0) {
                        dist[u] = dist[S[i]] + 1;
                        S.push_back(u);
                    }
            }
            examine_set(S);
        }
    }
    if (out.status == CheckStatus::Fail) {
        out.message = "set violates pi F_V - theta(V) > 0";
    } else {
        out.status = CheckStatus::Inconclusive;
        out.message = "too many free vertices for exhaustive search; no violation among " +
                      std::to_string(out.sets_examined) + " sampled sets";
    }
    return out;
}

// ---------------------------------------------------------------- comparison

PickComparison schwarz_pick_compare(const PackingProblem& P, const PackingLabel& r, const PackingLabel& rp, double tol)
{
    PickComparison c;
    const bool hyp = r.geometry == Geometry::Hyperbolic;
    auto key = [&](double x) { return hyp ? -s_from_r(x) : x; };  // monotone in r, finite at infinity
    bool all_equal = true;
    for (int v = 0; v < P.T.num_vertices(); ++v) {
        double a = key(r.r[v]), b = key(rp.r[v]);
        if (a < b - tol) {
            c.vertex_dominance = false;
            ++c.vertex_violations;
        }
        bool eq = std::abs(a - b) <= tol;
        if (!eq) all_equal = false;
        if (eq && P.is_free(v)) c.equal_vertices.push_back(v);
    }
    if (hyp) {
        auto A = face_areas(P.T, P.phi, r), B = face_areas(P.T, P.phi, rp);
        for (std::size_t f = 0; f < A.size(); ++f)
            if (A[f] < B[f] - tol) {
                c.area_dominance = false;
                ++c.face_violations;
            }
    }
    c.identical = all_equal;
    c.rigidity_consistent = c.equal_vertices.empty() || c.identical;
    return c;
}

}  // namespace katpack
