#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "tcmc/loop_series.hpp"

namespace tcmc {

using CoeffFn = std::function<LoopSeries(double)>;

namespace detail {

// One classical RK4 step for the right-invariant matrix ODE X' = X A(t),
// carried out in truncated loop coefficients.
inline LoopSeries rk4_step(const LoopSeries& X, const CoeffFn& A, double t, double h) {
    const LoopSeries A0 = A(t);
    const LoopSeries Ah = A(t + 0.5 * h);
    const LoopSeries A1 = A(t + h);
    const LoopSeries k1 = multiply(X, A0);
    const LoopSeries k2 = multiply(X + (0.5 * h) * k1, Ah);
    const LoopSeries k3 = multiply(X + (0.5 * h) * k2, Ah);
    const LoopSeries k4 = multiply(X + h * k3, A1);
    return X + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace detail

// Loop-group-valued solution of X' = X A(t) on an interval, sampled on a
// uniform grid. Off-node values are recovered by re-integrating from the
// nearest stored node with refined substeps, so eval() is usable as a dense
// solution for finite-difference probes.
class AxisFrame {
  public:
    AxisFrame() = default;

    AxisFrame(CoeffFn A, double t0, double t1, int steps, LoopSeries init,
              const Tolerances& tol = Tolerances::global())
        : A_(std::move(A)), t0_(t0), t1_(t1), n_(steps), tol_(&tol) {
        if (steps < 2) throw ValidationError("integrate_loop_ode needs steps >= 2");
        h_ = (t1 - t0) / steps;
        samples_.reserve(static_cast<size_t>(steps) + 1);
        samples_.push_back(std::move(init));
        for (int i = 0; i < steps; ++i) {
            LoopSeries next = detail::rk4_step(samples_.back(), A_, t0_ + i * h_, h_);
            if (next.tail_mass() > tol.tail_overflow) throw TailOverflow(next.tail_mass());
            max_drift_ = std::max(max_drift_, next.det_residual());
            samples_.push_back(std::move(next));
        }
    }

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    double step() const { return h_; }
    int steps() const { return n_; }
    double max_det_drift() const { return max_drift_; }

    const LoopSeries& node(int i) const { return samples_[static_cast<size_t>(i)]; }

    // Dense evaluation. Integrates from the nearest node; local error is
    // O((h/nsub)^5) per substep and negligible against the stored solution.
    LoopSeries eval(double t) const {
        const double pos = (t - t0_) / h_;
        int i = static_cast<int>(std::lround(pos));
        i = std::max(0, std::min(n_, i));
        const double ti = t0_ + i * h_;
        double dt = t - ti;
        if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t))) return samples_[static_cast<size_t>(i)];
        const int nsub = std::max(2, static_cast<int>(std::ceil(std::abs(dt) / h_)) * 2);
        LoopSeries X = samples_[static_cast<size_t>(i)];
        const double hs = dt / nsub;
        for (int s = 0; s < nsub; ++s) X = detail::rk4_step(X, A_, ti + s * hs, hs);
        return X;
    }

  private:
    CoeffFn A_;
    double t0_ = 0.0, t1_ = 1.0, h_ = 1.0;
    int n_ = 0;
    const Tolerances* tol_ = nullptr;
    std::vector<LoopSeries> samples_;
    double max_drift_ = 0.0;
};

// Spec-facing wrapper: integrate a loop-algebra-valued 1-form A(t) dt from a
// given initial frame.
inline AxisFrame integrate_loop_ode(CoeffFn A, double t0, double t1, int steps,
                                    LoopSeries init,
                                    const Tolerances& tol = Tolerances::global()) {
    return AxisFrame(std::move(A), t0, t1, steps, std::move(init), tol);
}

} // namespace tcmc
