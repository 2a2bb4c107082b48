#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcmc/loop_series.hpp"
#include "tcmc/minkowski.hpp"

namespace tcmc {

// Result of a left-normalized Birkhoff factorization Phi = minus * plus with
// minus(infinity) = I (support in degrees <= 0, degree-0 coefficient I) and
// plus supported in degrees >= 0.
struct BirkhoffFactors {
    LoopSeries minus;
    LoopSeries plus;
    double residual = 0.0;  // inf-norm of minus*plus - Phi (exact product)
    double condition = 1.0; // condition estimate of the linear solve
};

enum class Stratum { BigCell, P1, Pm1, P2, Pm2, Deeper };

inline const char* stratum_name(Stratum s) {
    switch (s) {
        case Stratum::BigCell: return "BigCell";
        case Stratum::P1: return "P1";
        case Stratum::Pm1: return "Pm1";
        case Stratum::P2: return "P2";
        case Stratum::Pm2: return "Pm2";
        case Stratum::Deeper: return "Deeper";
    }
    return "?";
}

// Stratum of a loop plus the diagnostic scalars of the shifted factorization
// that identified it: c_minus1 is the (2,1) degree -1 entry of the shifted
// minus factor, b_minus1 the (1,2) one.
struct CellClass {
    Stratum stratum = Stratum::Deeper;
    double c_minus1 = 0.0;
    double b_minus1 = 0.0;
    double residual = 0.0;
    double condition = 0.0;
};

namespace detail {

// Scalar Laurent series helpers on plain coefficient vectors indexed k+N.
inline std::vector<cplx> entry_series(const LoopSeries& a, int i, int j) {
    std::vector<cplx> v(static_cast<size_t>(2 * a.order() + 1));
    for (int k = -a.order(); k <= a.order(); ++k)
        v[static_cast<size_t>(k + a.order())] = a.coeff(k)(i, j);
    return v;
}

// Determinant of a series supported in degrees <= 0, truncated to [-N, 0].
inline std::vector<cplx> det_minus_series(const LoopSeries& w) {
    const int N = w.order();
    std::vector<cplx> d(static_cast<size_t>(N + 1), cplx(0.0)); // index m <-> degree -m
    for (int i = -N; i <= 0; ++i) {
        for (int j = -N; j <= 0; ++j) {
            const int k = i + j;
            if (k < -N) continue;
            const Mat2c& A = w.coeff(i);
            const Mat2c& B = w.coeff(j);
            d[static_cast<size_t>(-k)] += A(0, 0) * B(1, 1) - A(0, 1) * B(1, 0);
        }
    }
    return d;
}

// Reciprocal of a degree<=0 scalar series with nonzero constant term.
inline std::vector<cplx> reciprocal_minus(const std::vector<cplx>& d) {
    std::vector<cplx> r(d.size(), cplx(0.0));
    r[0] = 1.0 / d[0];
    for (size_t m = 1; m < d.size(); ++m) {
        cplx acc(0.0);
        for (size_t i = 1; i <= m; ++i) acc += d[i] * r[m - i];
        r[m] = -acc / d[0];
    }
    return r;
}

// Inverse of W = I + sum_{k>=1} C_k lambda^{-k} (support <= 0, unit constant
// term): adj(W) * 1/det(W), truncated to [-N, 0].
inline LoopSeries invert_minus(const LoopSeries& w) {
    const int N = w.order();
    const LoopSeries adj = w.adjugate();
    const std::vector<cplx> rec = reciprocal_minus(det_minus_series(w));
    LoopSeries r(N);
    r.add_tail(w.tail_mass());
    for (int i = -N; i <= 0; ++i) {
        for (size_t m = 0; m < rec.size(); ++m) {
            const int k = i - static_cast<int>(m);
            if (k < -N) break;
            r.coeff(k) += adj.coeff(i) * rec[m];
        }
    }
    return r;
}

} // namespace detail

namespace detail {

// Rank-revealing minimum-norm solve with iterative refinement. The truncated
// Toeplitz system is legitimately rank-deficient whenever unknowns at the
// deepest degrees only touch product coefficients below the truncated
// equation range (their true values are negligible at this order); those
// directions get zero. Refinement keeps the coefficient error near machine
// precision even at condition ~1e4-1e6, which the reconstruction residual of
// near-boundary factorizations (factor norms >> 1) would otherwise amplify.
// Returns the solution and a condition estimate from the retained triangular
// diagonal.
inline std::pair<Eigen::VectorXcd, double> minnorm_solve(const Eigen::MatrixXcd& M,
                                                         const Eigen::VectorXcd& r) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
    cod.setThreshold(1e-12);
    cod.compute(M);
    const Eigen::Index rank = cod.rank();
    double cond = 1.0;
    if (rank > 0) {
        const auto& T = cod.matrixQTZ();
        const double dmax = std::abs(T(0, 0));
        const double dmin = std::abs(T(rank - 1, rank - 1));
        cond = (dmin > 0.0 && std::isfinite(dmax / dmin))
                   ? dmax / dmin
                   : std::numeric_limits<double>::infinity();
    }
    Eigen::VectorXcd x = cod.solve(r);
    for (int it = 0; it < 2; ++it) {
        const Eigen::VectorXcd resid = r - M * x;
        if (!resid.allFinite() || resid.norm() <= 1e-30) break;
        x += cod.solve(resid);
    }
    return {x, cond};
}

} // namespace detail

// Left-normalized Birkhoff factorization by a direct linear solve.
//
// Writing minus^{-1} = I + sum_{k=1}^{N} C_k lambda^{-k}, the requirement that
// minus^{-1} * Phi has no coefficients in degrees -1..-N is a block-Toeplitz
// system, linear in the C_k. The twisting makes the two rows of the C_k
// independent and leaves exactly one live scalar per (row, degree) slot, so
// the 2Nx2N block system splits into two NxN scalar systems.
//
// Throws OffBigCell when the solve is unstable past the tolerance table's
// factor_condition or the exact reconstruction residual exceeds
// factor_residual (off-big-cell input makes the system inconsistent, which
// lands in the residual).
inline BirkhoffFactors factor_left(const LoopSeries& Phi,
                                   const Tolerances& tol = Tolerances::global()) {
    const int N = Phi.order();
    {
        const double dr = Phi.det_residual();
        if (!(dr <= tol.det_precondition))
            throw DetDrift(dr);
    }

    double neg_mass = 0.0;
    for (int k = -N; k < 0; ++k) neg_mass = std::max(neg_mass, Phi.coeff(k).cwiseAbs().maxCoeff());

    BirkhoffFactors out;
    out.minus = LoopSeries::identity(N);
    out.condition = 1.0;

    LoopSeries W = LoopSeries::identity(N);
    if (neg_mass > 0.0 && N > 0) {
        Eigen::MatrixXcd M0(N, N), M1(N, N);
        Eigen::VectorXcd r0(N), r1(N);
        for (int r = 0; r < N; ++r) {
            const int j = -(r + 1);
            const bool jeven = ((j % 2) == 0);
            const int col0 = jeven ? 0 : 1; // live column of row 0 at degree j
            const int col1 = jeven ? 1 : 0; // live column of row 1 at degree j
            r0(r) = -Phi.coeff(j)(0, col0);
            r1(r) = -Phi.coeff(j)(1, col1);
            for (int c = 0; c < N; ++c) {
                const int k = c + 1;
                const int jk = j + k;
                const bool keven = ((k % 2) == 0);
                if (jk < -N || jk > N) {
                    M0(r, c) = 0.0;
                    M1(r, c) = 0.0;
                    continue;
                }
                M0(r, c) = Phi.coeff(jk)(keven ? 0 : 1, col0);
                M1(r, c) = Phi.coeff(jk)(keven ? 1 : 0, col1);
            }
        }
        const auto [x, cond0] = detail::minnorm_solve(M0, r0);
        const auto [y, cond1] = detail::minnorm_solve(M1, r1);
        out.condition = std::max(cond0, cond1);
        if (!x.allFinite() || !y.allFinite()) throw OffBigCell(out.condition, -1.0);
        for (int k = 1; k <= N; ++k) {
            Mat2c& C = W.coeff(-k);
            if (k % 2 == 0) {
                C(0, 0) = x(k - 1);
                C(1, 1) = y(k - 1);
            } else {
                C(0, 1) = x(k - 1);
                C(1, 0) = y(k - 1);
            }
        }
    }

    // plus = degrees >= 0 of W * Phi (the solve zeroed degrees -1..-N).
    const LoopSeries WPhi = multiply(W, Phi);
    out.plus = LoopSeries(N);
    for (int k = 0; k <= N; ++k) out.plus.coeff(k) = WPhi.coeff(k);
    out.plus.add_tail(Phi.tail_mass());
    out.minus = detail::invert_minus(W);

    const LoopSeries recon = multiply(out.minus, out.plus); // support within [-N, N]: exact
    out.residual = (recon - Phi).max_abs();
    // the acceptance gate is relative to the data magnitude: for |Phi| >> 1
    // the roundoff floor of the reconstruction sits at |Phi|*eps, above any
    // absolute threshold (coincides with the absolute gate on O(1) data)
    const double scale = std::max(1.0, Phi.max_abs());
    if (!(out.residual <= tol.factor_residual * scale) ||
        !(out.condition <= tol.factor_condition))
        throw OffBigCell(out.condition, out.residual);
    return out;
}

// factor_left applied to omega_k^{-1} * Phi. Exposes the small-cell pivots
// (c_{-1}, b_{-1}) of the shifted minus factor through the returned factors.
inline BirkhoffFactors shifted_factor(int k, const LoopSeries& Phi,
                                      const Tolerances& tol = Tolerances::global()) {
    const LoopSeries wk = LoopSeries::omega(k, Phi.order());
    return factor_left(multiply(wk.adjugate(), Phi), tol);
}

inline double minus_c_m1(const BirkhoffFactors& f) {
    return f.minus.coeff(-1)(1, 0).real();
}
inline double minus_b_m1(const BirkhoffFactors& f) {
    return f.minus.coeff(-1)(0, 1).real();
}

namespace detail {

// Small-cell signature of the shifted minus factor G_-: the scalar whose
// vanishing keeps omega_k * G_- out of the big cell.
inline double cell_pivot(int k, const LoopSeries& gm) {
    const double c1 = std::abs(gm.coeff(-1)(1, 0));
    const double b1 = std::abs(gm.coeff(-1)(0, 1));
    auto at = [&](int deg, int i, int j) {
        return gm.in_range(deg) ? gm.coeff(deg)(i, j) : cplx(0.0);
    };
    switch (k) {
        case 1: return c1;
        case -1: return b1;
        case 2: {
            const cplx det = at(-2, 0, 0) * at(-1, 0, 1) - at(0, 0, 0) * at(-3, 0, 1);
            return std::min(b1, std::abs(det));
        }
        case -2: {
            const cplx det = at(-2, 1, 1) * at(-1, 1, 0) - at(0, 1, 1) * at(-3, 1, 0);
            return std::min(c1, std::abs(det));
        }
        default: return 0.0;
    }
}

} // namespace detail

// Stratum detection. Tries the plain factorization first (success => big
// cell), then the shifted factorizations for k = 1, -1, 2, -2 in order of
// increasing codimension; the first one that solves AND shows the vanishing
// pivot signature names the stratum. Deeper is a valid answer, not an error.
inline CellClass detect_cell(const LoopSeries& Phi,
                             const Tolerances& tol = Tolerances::global()) {
    CellClass cc;
    try {
        const BirkhoffFactors f = factor_left(Phi, tol);
        cc.stratum = Stratum::BigCell;
        cc.residual = f.residual;
        cc.condition = f.condition;
        cc.c_minus1 = minus_c_m1(f);
        cc.b_minus1 = minus_b_m1(f);
        return cc;
    } catch (const OffBigCell&) {
    }
    static const int ks[4] = {1, -1, 2, -2};
    static const Stratum ss[4] = {Stratum::P1, Stratum::Pm1, Stratum::P2, Stratum::Pm2};
    for (int i = 0; i < 4; ++i) {
        try {
            const BirkhoffFactors f = shifted_factor(ks[i], Phi, tol);
            const double scale = std::max(1.0, f.minus.max_abs());
            if (detail::cell_pivot(ks[i], f.minus) <= tol.cell_pivot * scale) {
                cc.stratum = ss[i];
                cc.residual = f.residual;
                cc.condition = f.condition;
                cc.c_minus1 = minus_c_m1(f);
                cc.b_minus1 = minus_b_m1(f);
                return cc;
            }
        } catch (const OffBigCell&) {
        }
    }
    cc.stratum = Stratum::Deeper;
    return cc;
}

// Closed-form factorizations of omega_{+-1} * H_- (the "switch" identities),
// used as independent oracles against factor_left. When the pivot vanishes
// the product sits on the small cell and the middle-term form
// omega_k H = middle_left * omega_k is returned instead.
struct SwitchResult {
    bool small_cell = false;
    BirkhoffFactors factors;  // valid when !small_cell (normalized)
    LoopSeries middle_left;   // valid when small_cell
    int k = 0;
};

namespace detail {

// series -> series shifted by s in degree, truncated into [-N, N]; positive
// junk above `maxdeg` must cancel and is checked against `scale`.
inline void add_shifted_entry(LoopSeries& dst, int di, int dj, const LoopSeries& src,
                              int si, int sj, int shift, cplx factor) {
    const int N = dst.order();
    for (int k = -src.order(); k <= src.order(); ++k) {
        const cplx v = factor * src.coeff(k)(si, sj);
        if (v == cplx(0.0)) continue;
        const int kk = k + shift;
        if (kk < -N || kk > N) {
            dst.add_tail(std::abs(v));
            continue;
        }
        dst.coeff(kk)(di, dj) += v;
    }
}

// Zero out positive-degree coefficients of a minus-factor candidate; they are
// cancellation dust of magnitude ~ulps when the construction is valid.
inline void enforce_minus_support(LoopSeries& m, double scale) {
    for (int k = 1; k <= m.order(); ++k) {
        const double mag = m.coeff(k).cwiseAbs().maxCoeff();
        if (mag > 1e-10 * std::max(1.0, scale))
            throw Error("switch factor has unexpected positive-degree mass " +
                        std::to_string(mag));
        m.coeff(k).setZero();
    }
}

inline BirkhoffFactors normalize_pair(LoopSeries minus_raw, LoopSeries plus_raw,
                                      const LoopSeries& target) {
    // minus(infinity) is the degree-0 coefficient once positive degrees vanish
    const Mat2c K = minus_raw.coeff(0);
    Mat2c Kinv;
    Kinv << 1.0 / K(0, 0), 0.0, 0.0, 1.0 / K(1, 1);
    BirkhoffFactors f;
    const int N = minus_raw.order();
    f.minus = LoopSeries(N);
    f.plus = LoopSeries(N);
    for (int k = -N; k <= 0; ++k) f.minus.coeff(k) = minus_raw.coeff(k) * Kinv;
    for (int k = 0; k <= N; ++k) f.plus.coeff(k) = K * plus_raw.coeff(k);
    f.residual = (multiply(f.minus, f.plus) - target).max_abs();
    f.condition = std::max(std::abs(K(0, 0) / K(1, 1)), std::abs(K(1, 1) / K(0, 0)));
    return f;
}

} // namespace detail

inline SwitchResult switch_formula(int k, const LoopSeries& H,
                                   const Tolerances& tol = Tolerances::global()) {
    if (k != 1 && k != -1) throw Error("switch_formula handles k = +-1 only");
    const int N = H.order();
    SwitchResult res;
    res.k = k;
    const LoopSeries target = multiply(LoopSeries::omega(k, N), H);
    const double scale = std::max(1.0, H.max_abs());

    const cplx a0 = H.coeff(0)(0, 0), d0 = H.coeff(0)(1, 1);
    const cplx cm1 = H.coeff(-1)(1, 0), bm1 = H.coeff(-1)(0, 1);

    if (k == 1) {
        if (std::abs(cm1) <= tol.cell_pivot * scale) {
            // omega_1 H = [[d, -l^2 c],[-l^-2 b, a]] * omega_1
            LoopSeries M(N);
            detail::add_shifted_entry(M, 0, 0, H, 1, 1, 0, 1.0);
            detail::add_shifted_entry(M, 0, 1, H, 1, 0, 2, -1.0);
            detail::add_shifted_entry(M, 1, 0, H, 0, 1, -2, -1.0);
            detail::add_shifted_entry(M, 1, 1, H, 0, 0, 0, 1.0);
            res.small_cell = true;
            res.middle_left = M;
            return res;
        }
        const cplx u0 = d0 / cm1;
        LoopSeries mr(N), pr(N);
        detail::add_shifted_entry(mr, 0, 0, H, 1, 0, 1, 1.0);        // l c
        detail::add_shifted_entry(mr, 0, 1, H, 1, 1, 1, 1.0);        // l d
        detail::add_shifted_entry(mr, 0, 1, H, 1, 0, 2, -u0);        // -u0 l^2 c
        detail::add_shifted_entry(mr, 1, 0, H, 0, 0, -1, -1.0);      // -l^-1 a
        detail::add_shifted_entry(mr, 1, 1, H, 0, 0, 0, u0);         // u0 a
        detail::add_shifted_entry(mr, 1, 1, H, 0, 1, -1, -1.0);      // -l^-1 b
        detail::enforce_minus_support(mr, scale * std::abs(u0));
        pr.coeff(0) = Mat2c::Identity();
        pr.coeff(1)(0, 1) = u0;
        res.factors = detail::normalize_pair(mr, pr, target);
        return res;
    }

    // k == -1
    if (std::abs(bm1) <= tol.cell_pivot * scale) {
        // omega_-1 H = [[d, -l^-2 c],[-l^2 b, a]] * omega_-1
        LoopSeries M(N);
        detail::add_shifted_entry(M, 0, 0, H, 1, 1, 0, 1.0);
        detail::add_shifted_entry(M, 0, 1, H, 1, 0, -2, -1.0);
        detail::add_shifted_entry(M, 1, 0, H, 0, 1, 2, -1.0);
        detail::add_shifted_entry(M, 1, 1, H, 0, 0, 0, 1.0);
        res.small_cell = true;
        res.middle_left = M;
        return res;
    }
    const cplx v0 = a0 / bm1;
    LoopSeries mr(N), pr(N);
    detail::add_shifted_entry(mr, 0, 0, H, 1, 0, -1, 1.0);           // l^-1 c
    detail::add_shifted_entry(mr, 0, 0, H, 1, 1, 0, -v0);            // -v0 d
    detail::add_shifted_entry(mr, 0, 1, H, 1, 1, -1, 1.0);           // l^-1 d
    detail::add_shifted_entry(mr, 1, 0, H, 0, 0, 1, -1.0);           // -l a
    detail::add_shifted_entry(mr, 1, 0, H, 0, 1, 2, v0);             // v0 l^2 b
    detail::add_shifted_entry(mr, 1, 1, H, 0, 1, 1, -1.0);           // -l b
    detail::enforce_minus_support(mr, scale * std::abs(v0));
    pr.coeff(0) = Mat2c::Identity();
    pr.coeff(1)(1, 0) = v0;
    res.factors = detail::normalize_pair(mr, pr, target);
    return res;
}

// Closed-form factorization of omega_2 * H_-, valid when b_{-1} != 0 and
// a_{-2} b_{-1} - a_0 b_{-3} != 0. Returned in the left-normalized
// convention of factor_left.
inline BirkhoffFactors switch_formula_omega2(const LoopSeries& H,
                                             const Tolerances& tol = Tolerances::global()) {
    const int N = H.order();
    auto at = [&](int deg, int i, int j) {
        return H.in_range(deg) ? H.coeff(deg)(i, j) : cplx(0.0);
    };
    const cplx a0 = at(0, 0, 0), am2 = at(-2, 0, 0);
    const cplx bm1 = at(-1, 0, 1), bm3 = at(-3, 0, 1);
    const cplx den = am2 * bm1 - a0 * bm3;
    const double scale = std::max(1.0, H.max_abs());
    if (std::abs(bm1) <= tol.cell_pivot * scale || std::abs(den) <= tol.cell_pivot * scale)
        throw OffBigCell(std::numeric_limits<double>::infinity(), -1.0);

    LoopSeries gplus(N);
    gplus.coeff(0) = Mat2c::Identity();
    gplus.coeff(2)(0, 0) = a0 * bm1 / den;
    gplus.coeff(1)(0, 1) = bm1 * bm1 / den;
    gplus.coeff(1)(1, 0) = a0 / bm1;
    // det(gplus) == 1 identically, so the adjugate is the exact inverse
    const LoopSeries target = multiply(LoopSeries::omega(2, N), H);
    LoopSeries gminus = multiply(target, gplus.adjugate());
    detail::enforce_minus_support(gminus, scale * std::abs(bm1 * bm1 / den) + scale);
    return detail::normalize_pair(gminus, gplus, target);
}

inline BirkhoffFactors switch_formula_omega_m2(const LoopSeries& H,
                                               const Tolerances& tol = Tolerances::global()) {
    // omega_{-2} = Ad_{e1} omega_2 and Ad_{e1} swaps both index pairs, so the
    // k = -2 identity is the conjugated k = 2 one.
    const Eigen::Matrix2d e1 = basis_e1();
    const BirkhoffFactors f = switch_formula_omega2(H.conjugated(e1), tol);
    BirkhoffFactors out;
    out.minus = f.minus.conjugated(e1);
    out.plus = f.plus.conjugated(e1);
    out.residual = f.residual;
    out.condition = f.condition;
    return out;
}

} // namespace tcmc
