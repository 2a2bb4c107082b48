#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <thread>
#include <utility>
#include <vector>

#include "tcmc/birkhoff.hpp"
#include "tcmc/loop_series.hpp"
#include "tcmc/minkowski.hpp"
#include "tcmc/ode.hpp"
#include "tcmc/potentials.hpp"

namespace tcmc {

// Sym-formula point: (1/2H) * (2 lambda dG/dlambda G^{-1} - Ad_G(e2)) at a
// nonzero real lambda. Base-point subtraction is the caller's business.
inline MinkVec sym_point(const LoopSeries& G, double lambda0, double H) {
    if (lambda0 == 0.0) throw ValidationError("sym_point needs lambda != 0");
    if (H == 0.0) throw ValidationError("sym_point needs H != 0");
    const auto [V, D] = G.eval_and_dlambda(lambda0);
    const Mat2c Vinv = V.inverse();
    static const Mat2c e2c = basis_e2().cast<cplx>();
    const Mat2c S = 2.0 * lambda0 * D * Vinv - V * e2c * Vinv;
    return from_matrix(S.real()) * (1.0 / (2.0 * H));
}

// Scalars of the coordinate frame attached to a regular admissible frame.
struct FrameScalars {
    double c1 = 0.0, b2 = 0.0;
    int eps1 = 1, eps2 = 1;
    double eomega = 0.0; // e^omega, with eps1*eps2*e^omega = -4 c1 b2 / H^2
    double rho = 1.0;    // |b2/c1|^(1/4)
    Eigen::Matrix2d T = Eigen::Matrix2d::Identity(); // diag(rho, 1/rho)
};

inline FrameScalars coordinate_frame_data(double c1, double b2, double H,
                                          const Tolerances& tol = Tolerances::global()) {
    if (std::abs(c1) <= tol.zero || std::abs(b2) <= tol.zero)
        throw NotRegular("coordinate frame undefined where c1 or b2 vanishes");
    FrameScalars s;
    s.c1 = c1;
    s.b2 = b2;
    s.eps1 = c1 > 0 ? 1 : -1;
    s.eps2 = b2 > 0 ? -1 : 1;
    s.eomega = std::abs(4.0 * c1 * b2 / (H * H));
    s.rho = std::pow(std::abs(b2 / c1), 0.25);
    s.T << s.rho, 0, 0, 1.0 / s.rho;
    return s;
}

// Overload extracting c1 = [A_1]_{21}, b2 = [A_{-1}]_{12} from the (U, V)
// parts of an admissible-frame Maurer-Cartan form.
inline FrameScalars coordinate_frame_data(const LoopSeries& U, const LoopSeries& V, double H,
                                          const Tolerances& tol = Tolerances::global()) {
    return coordinate_frame_data(U.coeff(1)(1, 0).real(), V.coeff(-1)(0, 1).real(), H, tol);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Everything the pipelines know about one parameter point.
struct PointSample {
    double a = 0.0, b = 0.0; // pipeline coordinates ((x,y) or (u,v))
    double x = 0.0, y = 0.0; // lightlike coordinates
    CellClass cell;
    bool finite = false;     // f (and derived data) defined here
    MinkVec f, fx, fy;       // fx, fy in the lightlike (x, y) directions
    MinkVec N;               // Minkowski normal; absent (NaN) at boundary cells
    MinkVec nE;              // Euclidean unit normal
    bool has_N = false;
    double chi = kNaN;
    double c1 = kNaN, b2 = kNaN, eomega = kNaN, rho = kNaN;
    int eps1 = 0, eps2 = 0;
    double c_m1 = kNaN, A0 = kNaN; // shifted-factorization data when available
    bool has_shift = false;
    Eigen::Matrix2d W = Eigen::Matrix2d::Identity(); // frame at lambda for Ad probes
    double blowup_mag = 0.0;
};

struct GridSpec {
    Interval A, B;
    int na = 201, nb = 201;
    double a(int i) const { return na == 1 ? A.lo : A.lo + (A.hi - A.lo) * i / (na - 1); }
    double b(int j) const { return nb == 1 ? B.lo : B.lo + (B.hi - B.lo) * j / (nb - 1); }
    double step_a() const { return na > 1 ? (A.hi - A.lo) / (na - 1) : 0.0; }
    double step_b() const { return nb > 1 ? (B.hi - B.lo) / (nb - 1) : 0.0; }
};

class SurfaceModel {
  public:
    virtual ~SurfaceModel() = default;
    virtual PointSample at(double a, double b) const = 0;
    virtual bool uv_coords() const = 0;
    virtual double H() const = 0;
    virtual double lambda() const = 0;
    // Loop-level access (used by the parallel-surface wrapper and by oracles).
    virtual LoopSeries phi(double a, double b) const = 0;
    virtual LoopSeries yframe(double a, double b) const = 0;
};

namespace detail {

inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int nthreads = static_cast<int>(std::min<unsigned>(hw, 16));
    if (n < 4 || nthreads < 2) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

// Shared fill-in of a big-cell sample from the plain factorization
// F = Y * plus^{-1}. c1 and dl are the frame scalars [psi^X_1]_{21}(x) and
// [psi^Y_{-1}]_{12}(y) of the generating potentials.
inline void fill_plain_bigcell(PointSample& s, const LoopSeries& Y,
                               const BirkhoffFactors& f, double c1, double dl,
                               double lambda, double H) {
    const LoopSeries F = multiply(Y, f.plus.adjugate());
    const double h0 = f.plus.coeff(0)(0, 0).real();
    const double b2 = h0 * h0 * dl;
    s.finite = true;
    s.f = sym_point(F, lambda, H);
    const Eigen::Matrix2d Fl = eval_real(F, lambda);
    s.W = Fl;
    s.fx = (lambda * c1 / H) * ad(Fl, MinkVec{1, 1, 0});
    s.fy = (b2 / (lambda * H)) * ad(Fl, MinkVec{1, -1, 0});
    s.N = ad(Fl, kE2);
    s.has_N = true;
    const MinkVec dir = ad_e0(s.N);
    s.nE = dir * (1.0 / eucl_norm(dir));
    s.chi = eucl_ip(cross(s.fx, s.fy), s.nE);
    s.c1 = c1;
    s.b2 = b2;
    try {
        const FrameScalars fs = coordinate_frame_data(c1, b2, H);
        s.eomega = fs.eomega;
        s.rho = fs.rho;
        s.eps1 = fs.eps1;
        s.eps2 = fs.eps2;
    } catch (const NotRegular&) {
    }
}

// Fill-in of a sample from the shifted factorization of Phi~ = G_- G_+ with
// Phi = omega_1 Phi~. Valid on the big cell AND through the P1 boundary;
// everything here is smooth in c_{-1}, with the sign-corrected Euclidean
// normal baked in.
inline void fill_shifted(PointSample& s, const LoopSeries& Y, const BirkhoffFactors& g,
                         double c1, double dl, double lambda, double H) {
    const double c = minus_c_m1(g);
    const double A0 = g.plus.coeff(0)(0, 0).real();
    const LoopSeries W = multiply(Y, g.plus.adjugate());
    s.finite = true;
    s.has_shift = true;
    s.c_m1 = c;
    s.A0 = A0;
    s.f = sym_point(W, lambda, H);
    const Eigen::Matrix2d Wl = eval_real(W, lambda);
    s.W = Wl;
    const MinkVec vx{c * c + lambda * lambda, c * c - lambda * lambda, 2.0 * lambda * c};
    s.fx = (lambda * c1 / H) * ad(Wl, vx);
    s.fy = (A0 * A0 * dl / (lambda * H)) * ad(Wl, MinkVec{1, -1, 0});
    const MinkVec u{lambda, -lambda, c};
    const MinkVec w = ad(Wl, u);
    const MinkVec dir = ad_e0(w);
    s.nE = dir * (1.0 / eucl_norm(dir));
    if (std::abs(c) > 1e-300) {
        s.N = w * (1.0 / c);
        s.has_N = true;
    }
    s.chi = eucl_ip(cross(s.fx, s.fy), s.nE);
    s.c1 = c1;
    s.b2 = c * c * A0 * A0 * dl;
    try {
        const FrameScalars fs = coordinate_frame_data(s.c1, s.b2, H);
        s.eomega = fs.eomega;
        s.rho = fs.rho;
        s.eps1 = fs.eps1;
        s.eps2 = fs.eps2;
    } catch (const NotRegular&) {
    }
}

inline double stratum_pivot_mag(const CellClass& cc) {
    switch (cc.stratum) {
        case Stratum::P1: return std::abs(cc.c_minus1);
        case Stratum::Pm1: return std::abs(cc.b_minus1);
        default: return std::min(std::abs(cc.c_minus1), std::abs(cc.b_minus1));
    }
}

} // namespace detail

struct DalembertOptions {
    double H = 1.0;
    double lambda = 1.0;
    int order = 24;
    double ode_step = 2e-3;
    double base_x = 0.0, base_y = 0.0;
};

struct ShiftedOptions {
    double H = 1.0;
    double lambda = 1.0;
    int order = 24;
    double ode_step = 2e-3;
    double base_a = 0.0, base_b = 0.0;
};

// d'Alembert construction: integrate the two axis ODEs of a potential pair,
// form Phi = X^{-1}(x) Y(y) pointwise, split on the big cell and push the
// frame through the Sym formula. Off-big-cell points carry their cell class
// as data; P1 points get the extended (shifted-route) surface value.
class DalembertSurface final : public SurfaceModel {
  public:
    using Options = DalembertOptions;

    DalembertSurface(PotentialPair pair, Options opt = Options())
        : pair_(std::move(pair)), opt_(opt) {
        const auto rep = pair_.validate();
        if (!rep.ok) throw ValidationError("invalid potential pair: " + rep.errors.front());
        const int N = opt.order;
        auto steps = [&](double len) {
            return std::max(2, static_cast<int>(std::ceil(std::max(len, 1e-6) / opt.ode_step)));
        };
        auto reach = [](double from, double to) {
            // keep a nonempty integration range on each side of the base
            return std::abs(to - from) > 1e-9 ? to : to + (to >= from ? 1e-3 : -1e-3);
        };
        // both axes integrate from the base point outward
        const double xhi = reach(opt.base_x, pair_.Ix.hi), xlo = reach(opt.base_x, pair_.Ix.lo);
        const double yhi = reach(opt.base_y, pair_.Iy.hi), ylo = reach(opt.base_y, pair_.Iy.lo);
        X_ = AxisFrame([p = pair_, N](double x) { return p.x_form(x, N); }, opt.base_x, xhi,
                       steps(xhi - opt.base_x), LoopSeries::identity(N));
        Xlo_ = AxisFrame([p = pair_, N](double x) { return p.x_form(x, N); }, opt.base_x, xlo,
                         steps(opt.base_x - xlo), LoopSeries::identity(N));
        Y_ = AxisFrame([p = pair_, N](double y) { return p.y_form(y, N); }, opt.base_y, yhi,
                       steps(yhi - opt.base_y), LoopSeries::identity(N));
        Ylo_ = AxisFrame([p = pair_, N](double y) { return p.y_form(y, N); }, opt.base_y, ylo,
                         steps(opt.base_y - ylo), LoopSeries::identity(N));
        base_raw_ = raw_at(opt.base_x, opt.base_y).f;
        base_ready_ = true;
    }

    PointSample at(double x, double y) const override {
        PointSample s = raw_at(x, y);
        if (base_ready_ && s.finite) s.f = s.f - base_raw_;
        return s;
    }

    bool uv_coords() const override { return false; }
    double H() const override { return opt_.H; }
    double lambda() const override { return opt_.lambda; }

    LoopSeries phi(double x, double y) const override {
        return multiply(inverse(eval_x(x)), eval_y(y));
    }
    LoopSeries yframe(double, double y) const override { return eval_y(y); }

    // extended frame F = Y plus^{-1} as a loop (big-cell points)
    LoopSeries frame_loop(double x, double y) const {
        const LoopSeries Y = eval_y(y);
        const BirkhoffFactors f = factor_left(multiply(inverse(eval_x(x)), Y));
        return multiply(Y, f.plus.adjugate());
    }

    const PotentialPair& pair() const { return pair_; }

  private:
    LoopSeries eval_x(double x) const { return x >= opt_.base_x ? X_.eval(x) : Xlo_.eval(x); }
    LoopSeries eval_y(double y) const { return y >= opt_.base_y ? Y_.eval(y) : Ylo_.eval(y); }

    PointSample raw_at(double x, double y) const {
        PointSample s;
        s.a = s.x = x;
        s.b = s.y = y;
        const LoopSeries Y = eval_y(y);
        const LoopSeries Phi = multiply(inverse(eval_x(x)), Y);
        const double c1 = pair_.beta(x);
        const double dl = pair_.gamma(y);
        try {
            const BirkhoffFactors f = factor_left(Phi);
            s.cell = CellClass{Stratum::BigCell, minus_c_m1(f), minus_b_m1(f), f.residual,
                               f.condition};
            detail::fill_plain_bigcell(s, Y, f, c1, dl, opt_.lambda, opt_.H);
            return s;
        } catch (const OffBigCell&) {
        }
        s.cell = detect_cell(Phi);
        if (s.cell.stratum == Stratum::P1) {
            const BirkhoffFactors g = shifted_factor(1, Phi);
            detail::fill_shifted(s, Y, g, c1, dl, opt_.lambda, opt_.H);
        } else {
            s.blowup_mag = 1.0 / std::max(detail::stratum_pivot_mag(s.cell), 1e-300);
        }
        return s;
    }

    PotentialPair pair_;
    Options opt_;
    AxisFrame X_, Xlo_, Y_, Ylo_;
    MinkVec base_raw_;
    bool base_ready_ = false;
};

// Shifted construction shared by the singular potential (one axis map used
// for both variables, grid in (u,v)) and the characteristic pair (two axis
// maps, grid in (x,y)). Phi = omega_1 X~^{-1}(x) Y(y); the surface comes from
// the factorization of Phi~ = X~^{-1} Y, which stays in the big cell across
// the singular set.
class ShiftedSurface final : public SurfaceModel {
  public:
    using Options = ShiftedOptions;

    static ShiftedSurface from_singular(const SingularPotential& sp, Interval Ju, Interval Jv,
                                        Options opt = Options()) {
        const auto rep = sp.validate();
        if (!rep.ok) throw ValidationError("invalid singular potential: " + rep.errors.front());
        const int N = opt.order;
        // one axis map covering every x = v+u and y = v-u the grid can ask for
        const double pad = std::max(std::abs(Ju.lo), std::abs(Ju.hi));
        Interval J{Jv.lo - pad, Jv.hi + pad};
        CoeffFn A = [sp, N](double t) { return sp.form(t, N); };
        ShiftedSurface m(opt, /*uv=*/true);
        m.c1fn_ = [sp](double x) { return sp.c1_scalar(x); };
        m.dlfn_ = [sp](double y) { return sp.delta_scalar(y); };
        m.build_axes(A, J, A, J, opt);
        m.finish_base();
        return m;
    }

    static ShiftedSurface from_characteristic(const CharSingularPair& cp, Options opt = Options()) {
        const auto rep = cp.validate();
        if (!rep.ok) throw ValidationError("invalid characteristic pair: " + rep.errors.front());
        const int N = opt.order;
        CoeffFn Ax = [cp, N](double t) { return cp.x_form(t, N); };
        CoeffFn Ay = [cp, N](double t) { return cp.y_form(t, N); };
        ShiftedSurface m(opt, /*uv=*/false);
        m.c1fn_ = [cp](double x) { return cp.c1_scalar(x); };
        m.dlfn_ = [cp](double y) { return cp.delta_scalar(y); };
        m.build_axes(Ax, cp.Jx, Ay, cp.Jy, opt);
        m.finish_base();
        return m;
    }

    PointSample at(double a, double b) const override {
        PointSample s = raw_at(a, b);
        if (base_ready_ && s.finite) s.f = s.f - base_raw_;
        return s;
    }

    bool uv_coords() const override { return uv_; }
    double H() const override { return opt_.H; }
    double lambda() const override { return opt_.lambda; }

    LoopSeries phi(double a, double b) const override {
        const auto [x, y] = to_xy(a, b);
        const LoopSeries pt = multiply(inverse(eval_x(x)), eval_y(y));
        return multiply(LoopSeries::omega(1, pt.order()), pt);
    }
    LoopSeries yframe(double a, double b) const override {
        return eval_y(to_xy(a, b).second);
    }

    LoopSeries phi_tilde(double a, double b) const {
        const auto [x, y] = to_xy(a, b);
        return multiply(inverse(eval_x(x)), eval_y(y));
    }
    // factors of Phi~ = G_- G_+ (throws OffBigCell when unavailable)
    BirkhoffFactors shifted_factors(double a, double b) const {
        return factor_left(phi_tilde(a, b));
    }
    // frame of the shifted route, W = Y G_+^{-1}, as a loop
    LoopSeries wframe(double a, double b) const {
        const auto [x, y] = to_xy(a, b);
        const LoopSeries Y = eval_y(y);
        const BirkhoffFactors g = factor_left(multiply(inverse(eval_x(x)), Y));
        return multiply(Y, g.plus.adjugate());
    }

  private:
    explicit ShiftedSurface(Options opt, bool uv) : opt_(opt), uv_(uv) {}

    std::pair<double, double> to_xy(double a, double b) const {
        return uv_ ? std::make_pair(b + a, b - a) : std::make_pair(a, b);
    }

    void build_axes(const CoeffFn& Ax, Interval Jx, const CoeffFn& Ay, Interval Jy,
                    const Options& opt) {
        const int N = opt.order;
        auto steps = [&](double len) {
            return std::max(2, static_cast<int>(std::ceil(std::max(len, 1e-6) / opt.ode_step)));
        };
        const double xhi = std::max(Jx.hi, 1e-3), xlo = std::min(Jx.lo, -1e-3);
        const double yhi = std::max(Jy.hi, 1e-3), ylo = std::min(Jy.lo, -1e-3);
        Xhi_ = AxisFrame(Ax, 0.0, xhi, steps(xhi), LoopSeries::identity(N));
        Xlo_ = AxisFrame(Ax, 0.0, xlo, steps(-xlo), LoopSeries::identity(N));
        Yhi_ = AxisFrame(Ay, 0.0, yhi, steps(yhi), LoopSeries::identity(N));
        Ylo_ = AxisFrame(Ay, 0.0, ylo, steps(-ylo), LoopSeries::identity(N));
    }

    void finish_base() {
        base_raw_ = raw_at(opt_.base_a, opt_.base_b).f;
        base_ready_ = true;
    }

    LoopSeries eval_x(double x) const { return x >= 0.0 ? Xhi_.eval(x) : Xlo_.eval(x); }
    LoopSeries eval_y(double y) const { return y >= 0.0 ? Yhi_.eval(y) : Ylo_.eval(y); }

    PointSample raw_at(double a, double b) const {
        PointSample s;
        s.a = a;
        s.b = b;
        const auto [x, y] = to_xy(a, b);
        s.x = x;
        s.y = y;
        const LoopSeries Y = eval_y(y);
        const LoopSeries PhiT = multiply(inverse(eval_x(x)), Y);
        const LoopSeries Phi = multiply(LoopSeries::omega(1, PhiT.order()), PhiT);
        const double c1 = c1fn_(x);
        const double dl = dlfn_(y);

        // cell class is decided by the plain factorization of Phi
        bool plain_ok = false;
        BirkhoffFactors plain;
        try {
            plain = factor_left(Phi);
            plain_ok = true;
            s.cell = CellClass{Stratum::BigCell, minus_c_m1(plain), minus_b_m1(plain),
                               plain.residual, plain.condition};
        } catch (const OffBigCell& e) {
            s.cell.residual = e.residual;
            s.cell.condition = e.condition;
        }

        try {
            const BirkhoffFactors g = factor_left(PhiT);
            detail::fill_shifted(s, Y, g, c1, dl, opt_.lambda, opt_.H);
            if (!plain_ok) {
                const double scale = std::max(1.0, g.minus.max_abs());
                if (std::abs(s.c_m1) <= Tolerances::global().cell_pivot * scale) {
                    s.cell.stratum = Stratum::P1;
                    s.cell.c_minus1 = s.c_m1;
                    s.cell.b_minus1 = minus_b_m1(g);
                    s.cell.residual = g.residual;
                    s.cell.condition = g.condition;
                } else {
                    // borderline: the shifted pivot says big cell but the plain
                    // solve was rejected; report the full probe
                    s.cell = detect_cell(Phi);
                }
            }
            return s;
        } catch (const OffBigCell&) {
        }

        if (plain_ok) {
            detail::fill_plain_bigcell(s, Y, plain, c1, dl, opt_.lambda, opt_.H);
            return s;
        }
        s.cell = detect_cell(Phi);
        s.blowup_mag = 1.0 / std::max(detail::stratum_pivot_mag(s.cell), 1e-300);
        return s;
    }

    Options opt_;
    bool uv_;
    std::function<double(double)> c1fn_, dlfn_;
    AxisFrame Xhi_, Xlo_, Yhi_, Ylo_;
    MinkVec base_raw_;
    bool base_ready_ = false;
};

// Parallel surface: conjugate every frame by e1. Strata map to their
// negatives (P1 points of the base become Pm1 blow-up points), so the wrapper
// only constructs surface values on the big cell and records blow-up
// diagnostics elsewhere.
class ParallelSurface final : public SurfaceModel {
  public:
    ParallelSurface(std::shared_ptr<const SurfaceModel> base, double base_a, double base_b)
        : base_(std::move(base)) {
        PointSample b0 = raw_at(base_a, base_b);
        if (!b0.finite)
            throw ValidationError("parallel-surface base point must lie on the big cell");
        base_raw_ = b0.f;
        base_ready_ = true;
    }

    PointSample at(double a, double b) const override {
        PointSample s = raw_at(a, b);
        if (base_ready_ && s.finite) s.f = s.f - base_raw_;
        return s;
    }

    bool uv_coords() const override { return base_->uv_coords(); }
    double H() const override { return base_->H(); }
    double lambda() const override { return base_->lambda(); }

    LoopSeries phi(double a, double b) const override {
        return base_->phi(a, b).conjugated(basis_e1());
    }
    LoopSeries yframe(double a, double b) const override {
        return base_->yframe(a, b).conjugated(basis_e1());
    }

  private:
    PointSample raw_at(double a, double b) const {
        PointSample s;
        s.a = a;
        s.b = b;
        const LoopSeries Phi = phi(a, b);
        const LoopSeries Y = yframe(a, b);
        try {
            const BirkhoffFactors f = factor_left(Phi);
            s.cell = CellClass{Stratum::BigCell, minus_c_m1(f), minus_b_m1(f), f.residual,
                               f.condition};
            const LoopSeries F = multiply(Y, f.plus.adjugate());
            s.finite = true;
            s.f = sym_point(F, base_->lambda(), base_->H());
            const Eigen::Matrix2d Fl = eval_real(F, base_->lambda());
            s.W = Fl;
            s.N = ad(Fl, kE2);
            s.has_N = true;
            const MinkVec dir = ad_e0(s.N);
            s.nE = dir * (1.0 / eucl_norm(dir));
            return s;
        } catch (const OffBigCell&) {
        }
        s.cell = detect_cell(Phi);
        s.blowup_mag = 1.0 / std::max(detail::stratum_pivot_mag(s.cell), 1e-300);
        return s;
    }

    std::shared_ptr<const SurfaceModel> base_;
    MinkVec base_raw_;
    bool base_ready_ = false;
};

// Per-grid-point record of a constructed surface.
struct FrameField {
    GridSpec grid;
    bool uv = false;
    double H = 1.0, lambda = 1.0;
    std::vector<PointSample> pts;

    const PointSample& at(int i, int j) const {
        return pts[static_cast<size_t>(j) * static_cast<size_t>(grid.na) + static_cast<size_t>(i)];
    }
    std::array<int, 6> cell_counts() const {
        std::array<int, 6> c{};
        for (const auto& p : pts) c[static_cast<size_t>(p.cell.stratum)]++;
        return c;
    }
};

// Pure parallel map over grid points; deterministic (each point writes its
// own slot).
inline FrameField build_grid(const SurfaceModel& m, const GridSpec& g) {
    FrameField f;
    f.grid = g;
    f.uv = m.uv_coords();
    f.H = m.H();
    f.lambda = m.lambda();
    f.pts.resize(static_cast<size_t>(g.na) * static_cast<size_t>(g.nb));
    detail::parallel_for(g.nb, [&](int j) {
        for (int i = 0; i < g.na; ++i)
            f.pts[static_cast<size_t>(j) * static_cast<size_t>(g.na) + static_cast<size_t>(i)] =
                m.at(g.a(i), g.b(j));
    });
    return f;
}

inline FrameField parallel_surface(std::shared_ptr<const SurfaceModel> base, const GridSpec& g,
                                   double base_a, double base_b) {
    const ParallelSurface p(std::move(base), base_a, base_b);
    return build_grid(p, g);
}

} // namespace tcmc
