#pragma once

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcmc/config.hpp"
#include "tcmc/geometry.hpp"
#include "tcmc/mesh_export.hpp"

namespace tcmc {

// One classified singular curve: chained parameter-plane points with their
// reports and the surface-space polyline.
struct SingularCurve {
    std::vector<SingularityReport> points;
    Polyline polyline;
};

// Everything `run` produces besides the files themselves.
struct RunReport {
    std::string config_echo;
    Family family = Family::Pair;
    std::array<int, 6> cell_counts{};
    int total_points = 0;
    int rank_le1_points = 0;     // finite samples with sv-ratio <= rank tol
    int finite_points = 0;
    std::vector<SingularCurve> curves;
    double max_cmc_error = 0.0;
    double max_null_violation = 0.0;
    double max_orth_violation = 0.0;
    double max_birkhoff_residual = 0.0;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;

    int singular_point_count() const {
        int n = 0;
        for (const auto& c : curves) n += static_cast<int>(c.points.size());
        return n;
    }
};

struct RunFlags {
    int grid_na = 0, grid_nb = 0;          // 0 = keep config
    double lambda = 0.0;                   // 0 = keep config
    std::string format = "obj";            // obj | ply | csv
    std::string out_dir = ".";
    bool json_report = false;
};

namespace detail {

// Interior big-cell invariant checks on the computed grid: null coordinates,
// normal orthogonality, finite-difference mean curvature against H.
inline void field_invariants(const FrameField& f, RunReport& rep) {
    const GridSpec& g = f.grid;
    for (const auto& p : f.pts) {
        if (p.cell.stratum == Stratum::BigCell)
            rep.max_birkhoff_residual = std::max(rep.max_birkhoff_residual, p.cell.residual);
        if (!p.finite) continue;
        ++rep.finite_points;
        if (df_sv_ratio(p, f.uv) <= Tolerances::global().rank) ++rep.rank_le1_points;
    }
    // lightlike-coordinate derivative checks need (x, y) steps; on a (u, v)
    // grid both x and y move with each index, handled via fx, fy directly
    for (int j = 2; j + 2 < g.nb; ++j)
        for (int i = 2; i + 2 < g.na; ++i) {
            const PointSample& p = f.at(i, j);
            if (p.cell.stratum != Stratum::BigCell || !p.has_N) continue;
            const double fx2 = eucl_ip(p.fx, p.fx), fy2 = eucl_ip(p.fy, p.fy);
            if (fx2 > 0 && fy2 > 0) {
                rep.max_null_violation =
                    std::max(rep.max_null_violation,
                             std::max(std::abs(mink_ip(p.fx, p.fx)) / fx2,
                                      std::abs(mink_ip(p.fy, p.fy)) / fy2));
                rep.max_orth_violation =
                    std::max(rep.max_orth_violation,
                             std::max(std::abs(mink_ip(p.fx, p.N)) / std::sqrt(fx2),
                                      std::abs(mink_ip(p.fy, p.N)) / std::sqrt(fy2)));
            }
            // f_xy = d/dx (f_y). On (x,y) grids that is the i-stencil of fy;
            // on (u,v) grids d/dx = (d/du + d/dv)/2 needs both stencils.
            bool ok = true;
            for (int d = -2; d <= 2; ++d)
                ok = ok && f.at(i + d, j).finite &&
                     f.at(i + d, j).cell.stratum == Stratum::BigCell &&
                     (!f.uv || (f.at(i, j + d).finite &&
                                f.at(i, j + d).cell.stratum == Stratum::BigCell));
            if (!ok) continue;
            auto stencil_i = [&](auto field_of) {
                return (field_of(f.at(i - 2, j)) - 8.0 * field_of(f.at(i - 1, j)) +
                        8.0 * field_of(f.at(i + 1, j)) - field_of(f.at(i + 2, j))) *
                       (1.0 / (12.0 * g.step_a()));
            };
            auto stencil_j = [&](auto field_of) {
                return (field_of(f.at(i, j - 2)) - 8.0 * field_of(f.at(i, j - 1)) +
                        8.0 * field_of(f.at(i, j + 1)) - field_of(f.at(i, j + 2))) *
                       (1.0 / (12.0 * g.step_b()));
            };
            auto fy_of = [](const PointSample& q) { return q.fy; };
            const MinkVec fxy = f.uv ? (stencil_i(fy_of) + stencil_j(fy_of)) * 0.5
                                     : stencil_i(fy_of);
            const double den = mink_ip(p.fx, p.fy);
            if (std::abs(den) < 1e-12) continue;
            const double Hfd = mink_ip(fxy, p.N) / den;
            rep.max_cmc_error = std::max(rep.max_cmc_error, std::abs(Hfd - f.H));
        }
}

// chain unordered curve points into polylines by nearest-neighbor growth
inline std::vector<std::vector<CurvePoint>> chain_curves(std::vector<CurvePoint> pts,
                                                         double step) {
    std::vector<std::vector<CurvePoint>> chains;
    std::vector<bool> used(pts.size(), false);
    const double reach2 = 9.0 * step * step;
    for (size_t seed = 0; seed < pts.size(); ++seed) {
        if (used[seed]) continue;
        std::vector<CurvePoint> chain{pts[seed]};
        used[seed] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (int end = 0; end < 2; ++end) {
                const CurvePoint& tip = end == 0 ? chain.back() : chain.front();
                size_t best = pts.size();
                double bestd = reach2;
                for (size_t k = 0; k < pts.size(); ++k) {
                    if (used[k]) continue;
                    const double da = pts[k].a - tip.a, db = pts[k].b - tip.b;
                    const double d2 = da * da + db * db;
                    if (d2 < bestd) {
                        bestd = d2;
                        best = k;
                    }
                }
                if (best < pts.size()) {
                    used[best] = true;
                    if (end == 0)
                        chain.push_back(pts[best]);
                    else
                        chain.insert(chain.begin(), pts[best]);
                    grew = true;
                }
            }
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

inline nlohmann::json report_json(const RunReport& r) {
    nlohmann::json j;
    j["family"] = family_name(r.family);
    j["config"] = r.config_echo;
    j["grid"] = {{"total_points", r.total_points},
                 {"finite_points", r.finite_points},
                 {"rank_le1_points", r.rank_le1_points}};
    nlohmann::json cells;
    const char* names[6] = {"BigCell", "P1", "Pm1", "P2", "Pm2", "Deeper"};
    for (int i = 0; i < 6; ++i) cells[names[i]] = r.cell_counts[static_cast<size_t>(i)];
    j["cells"] = cells;
    j["invariants"] = {{"max_cmc_error", r.max_cmc_error},
                       {"max_null_violation", r.max_null_violation},
                       {"max_orth_violation", r.max_orth_violation},
                       {"max_birkhoff_residual", r.max_birkhoff_residual}};
    j["warnings"] = r.warnings;
    j["outputs"] = r.outputs;
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : r.curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : c.points) {
            pts.push_back({{"a", p.a},
                           {"b", p.b},
                           {"type", sing_type_name(p.type)},
                           {"class", p.klass},
                           {"front", p.is_front},
                           {"nondegenerate", p.nondegenerate},
                           {"eta", {p.eta(0), p.eta(1)}},
                           {"tau", p.tau},
                           {"tau_prime", p.tau_prime},
                           {"det_gamma_eta", p.det_gamma_eta},
                           {"det_gamma_eta_prime", p.det_gamma_eta_prime},
                           {"dchi", {p.dchi_a, p.dchi_b}},
                           {"s", p.s},
                           {"t", p.t},
                           {"theta_prime", p.theta_p}});
        }
        curves.push_back({{"points", pts}});
    }
    j["singular_curves"] = curves;
    return j;
}

} // namespace detail

inline std::string report_summary(const RunReport& r) {
    std::ostringstream out;
    out << "family: " << family_name(r.family) << "\n";
    const char* names[6] = {"BigCell", "P1", "Pm1", "P2", "Pm2", "Deeper"};
    out << "cells:";
    for (int i = 0; i < 6; ++i)
        if (r.cell_counts[static_cast<size_t>(i)])
            out << " " << names[i] << "=" << r.cell_counts[static_cast<size_t>(i)];
    out << " (of " << r.total_points << ")\n";
    out << "finite samples: " << r.finite_points << ", rank<=1 samples: " << r.rank_le1_points
        << "\n";
    out << "invariants: cmc_err=" << r.max_cmc_error << " null=" << r.max_null_violation
        << " orth=" << r.max_orth_violation << " birkhoff=" << r.max_birkhoff_residual << "\n";
    int idx = 0;
    for (const auto& c : r.curves) {
        out << "singular curve " << idx++ << ": " << c.points.size() << " points";
        if (!c.points.empty()) {
            out << " [types:";
            for (const auto& p : c.points) out << " " << sing_type_name(p.type);
            out << "]";
        }
        out << "\n";
    }
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    for (const auto& o : r.outputs) out << "wrote: " << o << "\n";
    return out.str();
}

// Execute one config end to end: build the model, sample the grid, extract
// and classify the singular set, run the invariant checks, write mesh +
// report files.
inline RunReport run(const Config& cfg_in, const RunFlags& flags) {
    Config cfg = cfg_in;
    if (flags.grid_na > 0) cfg.na = flags.grid_na;
    if (flags.grid_nb > 0) cfg.nb = flags.grid_nb;
    if (flags.lambda != 0.0) cfg.lambda = flags.lambda;

    RunReport rep;
    rep.config_echo = cfg.raw.empty() ? print_config(cfg) : cfg.raw;
    rep.family = cfg.family;

    const BuiltModel built = build_model(cfg);
    for (const auto& w : built.validation.warnings) rep.warnings.push_back(w);

    GridSpec g;
    g.A = cfg.A;
    g.B = cfg.B;
    g.na = cfg.na;
    g.nb = cfg.nb;
    const FrameField field = build_grid(*built.model, g);
    rep.cell_counts = field.cell_counts();
    rep.total_points = static_cast<int>(field.pts.size());
    detail::field_invariants(field, rep);

    // singular set: detect, chain, classify (numeric path; symbolic data-eta
    // and agreement check when Cauchy data is available)
    const auto pts = singular_points_on_grid(field);
    const double step = std::max(g.step_a(), g.step_b());
    for (auto& chain : detail::chain_curves(pts, step)) {
        SingularCurve curve;
        for (const CurvePoint& cp : chain) {
            std::function<Eigen::Vector2d(double, double)> data_eta;
            if (built.data && built.model->uv_coords())
                data_eta = [d = *built.data](double, double v) {
                    return Eigen::Vector2d(d.s(v), -d.t(v));
                };
            SingularityReport r = classify_point(*built.model, cp, data_eta);
            if (built.data && built.model->uv_coords()) {
                const SingularityReport sym = predict_type(*built.data, cp.b);
                r.s = sym.s;
                r.t = sym.t;
                r.theta_p = sym.theta_p;
                r.s_p = sym.s_p;
                r.t_p = sym.t_p;
                if (sym.type != r.type)
                    rep.warnings.push_back("classifier disagreement at v=" + std::to_string(cp.b) +
                                           ": symbolic " + sing_type_name(sym.type) +
                                           " vs numeric " + sing_type_name(r.type));
            }
            const PointSample s = built.model->at(cp.a, cp.b);
            if (s.finite) curve.polyline.points.push_back(s.f);
            curve.points.push_back(std::move(r));
        }
        rep.curves.push_back(std::move(curve));
    }

    namespace fs = std::filesystem;
    fs::create_directories(flags.out_dir);
    std::vector<Polyline> polylines;
    for (const auto& c : rep.curves)
        if (c.polyline.points.size() > 1) polylines.push_back(c.polyline);

    const std::string base = (fs::path(flags.out_dir) / "surface").string();
    if (flags.format == "obj") {
        export_obj(field, polylines, base + ".obj");
        rep.outputs.push_back(base + ".obj");
    } else if (flags.format == "ply") {
        export_ply(field, polylines, base + ".ply");
        rep.outputs.push_back(base + ".ply");
    } else if (flags.format == "csv") {
        export_csv(field, base + ".csv");
        rep.outputs.push_back(base + ".csv");
    } else {
        throw ValidationError("unknown mesh format '" + flags.format + "'");
    }
    if (flags.json_report) {
        const std::string rpath = (fs::path(flags.out_dir) / "report.json").string();
        std::ofstream out(rpath);
        if (!out) throw IOError("cannot write " + rpath);
        out << detail::report_json(rep).dump(2) << "\n";
        rep.outputs.push_back(rpath);
    }
    return rep;
}

} // namespace tcmc
