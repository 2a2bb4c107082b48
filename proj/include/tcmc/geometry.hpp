#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tcmc/frame.hpp"
#include "tcmc/minkowski.hpp"

namespace tcmc {

enum class SingType { CuspidalEdge, Swallowtail, CuspidalCrossCap, ClassIEdge, Degenerate, FoldOther };

inline const char* sing_type_name(SingType t) {
    switch (t) {
        case SingType::CuspidalEdge: return "cuspidal edge";
        case SingType::Swallowtail: return "swallowtail";
        case SingType::CuspidalCrossCap: return "cuspidal cross cap";
        case SingType::ClassIEdge: return "cuspidal edge (class I)";
        case SingType::Degenerate: return "degenerate";
        case SingType::FoldOther: return "fold/other";
    }
    return "?";
}

// Classification of one singular point together with the evidence it was
// decided on. Class I points live on the big cell (non-lightlike Euclidean
// normal), class II points on the P1 boundary (lightlike normal).
struct SingularityReport {
    double a = 0.0, b = 0.0; // location in pipeline coordinates
    SingType type = SingType::Degenerate;
    int klass = 0; // 1 or 2
    bool is_front = false;
    bool nondegenerate = false;
    Eigen::Vector2d eta{0.0, 0.0}; // null direction in pipeline coordinates
    double det_gamma_eta = kNaN, det_gamma_eta_prime = kNaN;
    double tau = kNaN, tau_prime = kNaN;
    double dchi_a = kNaN, dchi_b = kNaN;
    // symbolic evidence (filled by the Cauchy predictor)
    double s = kNaN, t = kNaN, theta_p = kNaN, s_p = kNaN, t_p = kNaN;
    std::string note;
};

namespace detail {

// 4th-order central first derivative from samples at -2h..2h.
inline double d1_5pt(double m2, double m1, double p1, double p2, double h) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

inline MinkVec d1_5pt(const MinkVec& m2, const MinkVec& m1, const MinkVec& p1,
                      const MinkVec& p2, double h) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) * (1.0 / (12.0 * h));
}

} // namespace detail

// Euclidean unit normal from a big-cell frame: Ad_{e0} Ad_F(e2), normalized.
inline MinkVec euclidean_normal(const Eigen::Matrix2d& F) {
    const MinkVec v = ad_e0(ad(F, kE2));
    return v * (1.0 / eucl_norm(v));
}

// Euclidean unit normal near the P1 boundary, from the shifted frame
// W = Y G_+^{-1} and the pivot c_{-1}: continuous across the singular set
// (the sign(c_{-1}) correction is absorbed). Lightlike exactly at c_{-1}=0.
inline MinkVec euclidean_normal(const Eigen::Matrix2d& W, double c_m1, double lambda) {
    const MinkVec v = ad_e0(ad(W, MinkVec{lambda, -lambda, c_m1}));
    return v * (1.0 / eucl_norm(v));
}

// Derivatives of f in pipeline coordinates: (f_u, f_v) = (fx - fy, fx + fy)
// for (u, v) pipelines, (fx, fy) otherwise.
inline std::pair<MinkVec, MinkVec> df_pipeline(const PointSample& s, bool uv) {
    if (uv) return {s.fx - s.fy, s.fx + s.fy};
    return {s.fx, s.fy};
}

// Null direction at a rank-1 point: unit kernel vector of df from its SVD.
// Sign convention: second component <= 0, ties broken toward positive first
// component. Throws RankZero if df vanishes entirely.
inline Eigen::Vector2d null_direction(const PointSample& s, bool uv,
                                      const Tolerances& tol = Tolerances::global()) {
    const auto [fa, fb] = df_pipeline(s, uv);
    Eigen::Matrix<double, 3, 2> J;
    J.col(0) = fa.components();
    J.col(1) = fb.components();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(J, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(0) <= tol.zero) throw RankZero("df vanishes: no null direction");
    if (sv(1) / sv(0) > std::sqrt(tol.rank))
        throw RankZero("df has full rank: no null direction");
    Eigen::Vector2d eta = svd.matrixV().col(1);
    if (eta(1) > tol.zero || (std::abs(eta(1)) <= tol.zero && eta(0) < 0.0)) eta = -eta;
    return eta;
}

// Ratio sigma2/sigma1 of df; <= tol.rank means rank <= 1.
inline double df_sv_ratio(const PointSample& s, bool uv) {
    const auto [fa, fb] = df_pipeline(s, uv);
    Eigen::Matrix<double, 3, 2> J;
    J.col(0) = fa.components();
    J.col(1) = fb.components();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(J);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) return 0.0;
    return sv(1) / sv(0);
}

// chi and its gradient by 4th-order stencils of pipeline probes.
inline double chi_at(const SurfaceModel& m, double a, double b) { return m.at(a, b).chi; }

inline Eigen::Vector2d chi_gradient(const SurfaceModel& m, double a, double b, double h) {
    const double da = detail::d1_5pt(chi_at(m, a - 2 * h, b), chi_at(m, a - h, b),
                                     chi_at(m, a + h, b), chi_at(m, a + 2 * h, b), h);
    const double db = detail::d1_5pt(chi_at(m, a, b - 2 * h), chi_at(m, a, b - h),
                                     chi_at(m, a, b + h), chi_at(m, a, b + 2 * h), h);
    return {da, db};
}

// Transverse field of the cross-cap test: Z = Ad_{Y G_+^{-1}}(-2 e2 - c_{-1}(e1 + e0)),
// orthogonal to the Euclidean normal and transverse to df along the singular
// curve. Only defined where the shifted factorization ran.
inline MinkVec cross_cap_Z(const PointSample& s) {
    if (!s.has_shift) throw Error("cross_cap_Z needs shifted-factorization data");
    return ad(s.W, MinkVec{-s.c_m1, -s.c_m1, -2.0});
}

// tau(x) = < n_E, dZ(eta) >_E along the singular curve; eta is the caller's
// choice of null field (its scale multiplies tau).
inline double tau_at(const SurfaceModel& m, double a, double b, const Eigen::Vector2d& eta,
                     double h) {
    auto Z = [&](double aa, double bb) { return cross_cap_Z(m.at(aa, bb)); };
    const MinkVec Za = detail::d1_5pt(Z(a - 2 * h, b), Z(a - h, b), Z(a + h, b), Z(a + 2 * h, b), h);
    const MinkVec Zb = detail::d1_5pt(Z(a, b - 2 * h), Z(a, b - h), Z(a, b + h), Z(a, b + 2 * h), h);
    const MinkVec dZ = eta(0) * Za + eta(1) * Zb;
    return eucl_ip(m.at(a, b).nE, dZ);
}

// Rank of the Legendrian lift differential d(f, n_E) via singular values of
// the stacked 6x2 Jacobian (pipeline coordinates, 4th-order stencils).
inline bool front_test(const SurfaceModel& m, double a, double b, double h,
                       const Tolerances& tol = Tolerances::global()) {
    auto smp = [&](double aa, double bb) { return m.at(aa, bb); };
    const PointSample am2 = smp(a - 2 * h, b), am1 = smp(a - h, b), ap1 = smp(a + h, b),
                      ap2 = smp(a + 2 * h, b);
    const PointSample bm2 = smp(a, b - 2 * h), bm1 = smp(a, b - h), bp1 = smp(a, b + h),
                      bp2 = smp(a, b + 2 * h);
    const MinkVec fa = detail::d1_5pt(am2.f, am1.f, ap1.f, ap2.f, h);
    const MinkVec fb = detail::d1_5pt(bm2.f, bm1.f, bp1.f, bp2.f, h);
    const MinkVec na = detail::d1_5pt(am2.nE, am1.nE, ap1.nE, ap2.nE, h);
    const MinkVec nb = detail::d1_5pt(bm2.nE, bm1.nE, bp1.nE, bp2.nE, h);
    Eigen::Matrix<double, 6, 2> L;
    L.col(0) << fa.t, fa.x1, fa.x2, na.t, na.x1, na.x2;
    L.col(1) << fb.t, fb.x1, fb.x2, nb.t, nb.x1, nb.x2;
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 2>> svd(L);
    const auto& sv = svd.singularValues();
    return sv(0) > 0.0 && sv(1) / sv(0) > tol.rank;
}

// A singular curve through the parameter domain: points plus unit tangents.
struct CurvePoint {
    double a = 0.0, b = 0.0;
    Eigen::Vector2d tangent{0.0, 1.0};
};

// Numeric classifier for a non-degenerate singular point. The data_eta
// callback, when given, supplies the (scaled) null field used for tau and
// det(gamma', eta); otherwise the unit SVD field is used and only the
// zero/nonzero pattern of those scalars is meaningful.
inline SingularityReport
classify_point(const SurfaceModel& m, const CurvePoint& cp,
               const std::function<Eigen::Vector2d(double, double)>& data_eta = {},
               const Tolerances& tol = Tolerances::global()) {
    SingularityReport rep;
    rep.a = cp.a;
    rep.b = cp.b;
    const double h = tol.fd_step;
    const PointSample center = m.at(cp.a, cp.b);
    rep.klass = (center.cell.stratum == Stratum::P1) ? 2 : 1;

    const Eigen::Vector2d grad = chi_gradient(m, cp.a, cp.b, h);
    rep.dchi_a = grad(0);
    rep.dchi_b = grad(1);
    double chi_scale = std::abs(center.chi);
    for (double d : {-2 * h, -h, h, 2 * h}) {
        chi_scale = std::max(chi_scale, std::abs(m.at(cp.a + d, cp.b).chi));
        chi_scale = std::max(chi_scale, std::abs(m.at(cp.a, cp.b + d).chi));
    }
    rep.nondegenerate = grad.norm() * h > tol.rank * std::max(chi_scale, 1e-300);
    if (!rep.nondegenerate) {
        rep.type = SingType::Degenerate;
        rep.note = "dchi vanishes";
        return rep;
    }

    Eigen::Vector2d eta;
    try {
        eta = null_direction(center, m.uv_coords(), tol);
    } catch (const RankZero& e) {
        rep.type = SingType::Degenerate;
        rep.note = e.what();
        return rep;
    }
    rep.eta = eta;

    // null field along the curve, aligned for continuity
    auto eta_on_curve = [&](double a, double b, const Eigen::Vector2d& ref) {
        Eigen::Vector2d v = null_direction(m.at(a, b), m.uv_coords(), tol);
        if (v.dot(ref) < 0.0) v = -v;
        return v;
    };
    const bool have_data = static_cast<bool>(data_eta);
    auto eta_field = [&](double a, double b, const Eigen::Vector2d& ref) {
        return have_data ? data_eta(a, b) : eta_on_curve(a, b, ref);
    };

    const Eigen::Vector2d eta0 = have_data ? data_eta(cp.a, cp.b) : eta;
    rep.det_gamma_eta = cp.tangent(0) * eta0(1) - cp.tangent(1) * eta0(0);

    rep.is_front = front_test(m, cp.a, cp.b, h, tol);

    // curve parameterized along its tangent; derivative of det(gamma', eta)
    auto det_along = [&](double param) {
        const double a = cp.a + param * cp.tangent(0);
        const double b = cp.b + param * cp.tangent(1);
        const Eigen::Vector2d v = eta_field(a, b, eta0);
        return cp.tangent(0) * v(1) - cp.tangent(1) * v(0);
    };
    rep.det_gamma_eta_prime = detail::d1_5pt(det_along(-2 * h), det_along(-h), det_along(h),
                                             det_along(2 * h), h);

    if (rep.is_front) {
        const double transverse_scale = std::max(1.0, eta0.norm());
        if (std::abs(rep.det_gamma_eta) > tol.agreement * transverse_scale) {
            rep.type = (rep.klass == 1) ? SingType::ClassIEdge : SingType::CuspidalEdge;
            return rep;
        }
        if (std::abs(rep.det_gamma_eta_prime) > tol.agreement * transverse_scale) {
            rep.type = SingType::Swallowtail;
            return rep;
        }
        rep.type = SingType::FoldOther;
        rep.note = "front with eta parallel to the curve and vanishing derivative";
        return rep;
    }

    // not a front: cuspidal cross cap iff eta transverse, tau = 0, tau' != 0
    if (center.has_shift) {
        auto tau_along = [&](double param) {
            const double a = cp.a + param * cp.tangent(0);
            const double b = cp.b + param * cp.tangent(1);
            return tau_at(m, a, b, eta_field(a, b, eta0), h);
        };
        rep.tau = tau_along(0.0);
        rep.tau_prime = detail::d1_5pt(tau_along(-2 * h), tau_along(-h), tau_along(h),
                                       tau_along(2 * h), h);
        const double tscale = std::max(1.0, eta0.norm());
        if (std::abs(rep.det_gamma_eta) > tol.agreement * tscale &&
            std::abs(rep.tau) <= tol.agreement * tscale &&
            std::abs(rep.tau_prime) > tol.agreement * tscale) {
            rep.type = SingType::CuspidalCrossCap;
            return rep;
        }
    }
    rep.type = SingType::Degenerate;
    rep.note = "not a front; cross-cap test failed";
    return rep;
}

// Zero set of chi on a computed grid: on-node zeros plus sign-change
// crossings along both grid directions, with linearly interpolated locations.
// Tangents come from the grid gradient of chi (the curve runs orthogonal to
// grad chi), normalized to positive b-component where possible. Duplicates
// from the two scan directions are merged.
inline std::vector<CurvePoint> singular_points_on_grid(const FrameField& f,
                                                       const Tolerances& tol = Tolerances::global()) {
    std::vector<CurvePoint> out;
    const GridSpec& g = f.grid;
    auto chi_ok = [&](const PointSample& p) { return p.finite && std::isfinite(p.chi); };
    // chi can span many orders of magnitude across a grid (the conformal
    // factor grows exponentially), so zero tests compare against the local
    // neighborhood, not a global scale
    auto local_scale = [&](int i, int j) {
        double s = 0.0;
        for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            const int ii = i + di, jj = j + dj;
            if (ii < 0 || ii >= g.na || jj < 0 || jj >= g.nb) continue;
            const PointSample& q = f.at(ii, jj);
            if (chi_ok(q)) s = std::max(s, std::abs(q.chi));
        }
        return s > 0.0 ? s : 1.0;
    };

    auto grad_at = [&](int i, int j) -> Eigen::Vector2d {
        auto chi = [&](int ii, int jj) {
            const PointSample& p = f.at(std::clamp(ii, 0, g.na - 1), std::clamp(jj, 0, g.nb - 1));
            return chi_ok(p) ? p.chi : 0.0;
        };
        const double ha = std::max(g.step_a(), 1e-12), hb = std::max(g.step_b(), 1e-12);
        const double da = (chi(i + 1, j) - chi(i - 1, j)) /
                          ((std::min(i + 1, g.na - 1) - std::max(i - 1, 0)) * ha);
        const double db = (chi(i, j + 1) - chi(i, j - 1)) /
                          ((std::min(j + 1, g.nb - 1) - std::max(j - 1, 0)) * hb);
        return {da, db};
    };
    auto tangent_at = [&](int i, int j) -> Eigen::Vector2d {
        const Eigen::Vector2d grad = grad_at(i, j);
        Eigen::Vector2d t{-grad(1), grad(0)};
        if (t.norm() < 1e-14) return {0.0, 1.0};
        t.normalize();
        if (t(1) < 0.0 || (t(1) == 0.0 && t(0) < 0.0)) t = -t;
        return t;
    };
    auto push_unique = [&](CurvePoint cp) {
        const double tol_a = 0.5 * std::max(g.step_a(), 1e-12);
        const double tol_b = 0.5 * std::max(g.step_b(), 1e-12);
        for (const auto& q : out)
            if (std::abs(q.a - cp.a) <= tol_a && std::abs(q.b - cp.b) <= tol_b) return;
        out.push_back(cp);
    };

    for (int j = 0; j < g.nb; ++j)
        for (int i = 0; i < g.na; ++i) {
            const PointSample& p0 = f.at(i, j);
            if (!chi_ok(p0)) continue;
            const double scale = local_scale(i, j);
            if (std::abs(p0.chi) <= tol.zero * scale) {
                push_unique({p0.a, p0.b, tangent_at(i, j)});
                continue;
            }
            if (i + 1 < g.na) {
                const PointSample& p1 = f.at(i + 1, j);
                if (chi_ok(p1) && std::abs(p1.chi) > tol.zero * scale && p0.chi * p1.chi < 0.0) {
                    const double w = p0.chi / (p0.chi - p1.chi);
                    push_unique({p0.a + w * (p1.a - p0.a), p0.b, tangent_at(i, j)});
                }
            }
            if (j + 1 < g.nb) {
                const PointSample& p1 = f.at(i, j + 1);
                if (chi_ok(p1) && std::abs(p1.chi) > tol.zero * scale && p0.chi * p1.chi < 0.0) {
                    const double w = p0.chi / (p0.chi - p1.chi);
                    push_unique({p0.a, p0.b + w * (p1.b - p0.b), tangent_at(i, j)});
                }
            }
        }
    return out;
}

} // namespace tcmc
