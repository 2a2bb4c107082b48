#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcmc/errors.hpp"
#include "tcmc/tolerances.hpp"

namespace tcmc {

using Mat2c = Eigen::Matrix2cd;
using cplx = std::complex<double>;

// Truncated 2x2 matrix Laurent series in the loop parameter lambda: the
// computational stand-in for elements of the twisted loop group
// Lambda SL(2,C)_sigma and its Lie algebra.
//
// Coefficients are stored densely for degrees k in [-N, N]. The sigma-twisting
// (conjugation by diag(1,-1) at -lambda) means diagonal entries live in even
// degrees and off-diagonal entries in odd degrees; all constructors here
// produce twisted data and all arithmetic preserves the parity exactly.
//
// tail_mass upper-bounds the mass of coefficients dropped by truncation over
// the life of the value. Operations accumulate it; nothing is raised.
class LoopSeries {
  public:
    LoopSeries() : LoopSeries(0) {}

    explicit LoopSeries(int order)
        : order_(order), c_(2 * order + 1, Mat2c::Zero()) {}

    static LoopSeries identity(int order) {
        LoopSeries s(order);
        s.coeff(0) = Mat2c::Identity();
        return s;
    }

    // Middle-term matrices of the Birkhoff stratification:
    //   omega_k = diag(lambda^k, lambda^-k)            (k even)
    //   omega_k = [[0, lambda^k],[-lambda^-k, 0]]      (k odd)
    // omega_0 is the identity.
    static LoopSeries omega(int k, int order) {
        LoopSeries s(order);
        const int a = std::abs(k);
        if (a > order) throw Error("omega degree exceeds truncation order");
        if (k % 2 == 0) {
            s.coeff(k)(0, 0) = 1.0;
            s.coeff(-k)(1, 1) = 1.0;
        } else {
            s.coeff(k)(0, 1) = 1.0;
            s.coeff(-k)(1, 0) = -1.0;
        }
        return s;
    }

    int order() const { return order_; }
    double tail_mass() const { return tail_; }
    void add_tail(double t) { tail_ += t; }

    const Mat2c& coeff(int k) const { return c_[static_cast<size_t>(k + order_)]; }
    Mat2c& coeff(int k) { return c_[static_cast<size_t>(k + order_)]; }
    bool in_range(int k) const { return k >= -order_ && k <= order_; }

    // Max absolute entry over all stored coefficients.
    double max_abs() const {
        double m = 0.0;
        for (const auto& c : c_)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(c(i, j)));
        return m;
    }

    // Sum of Frobenius norms; used for tail propagation bounds.
    double mass() const {
        double m = 0.0;
        for (const auto& c : c_) m += c.norm();
        return m + tail_;
    }

    bool is_real(double tol) const {
        for (const auto& c : c_)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    if (std::abs(c(i, j).imag()) > tol) return false;
        return true;
    }

    LoopSeries truncated(int new_order) const {
        LoopSeries r(new_order);
        r.tail_ = tail_;
        for (int k = -order_; k <= order_; ++k) {
            if (k >= -new_order && k <= new_order)
                r.coeff(k) = coeff(k);
            else
                r.tail_ += coeff(k).norm();
        }
        return r;
    }

    // Entry-wise adjugate: [[d,-b],[-c,a]] per coefficient. Exact inverse of
    // the series when det == 1 identically.
    LoopSeries adjugate() const {
        LoopSeries r(order_);
        r.tail_ = tail_;
        for (int k = -order_; k <= order_; ++k) {
            const Mat2c& m = coeff(k);
            r.coeff(k) << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        }
        return r;
    }

    // Conjugation by a constant invertible matrix (Ad_g), per coefficient.
    LoopSeries conjugated(const Eigen::Matrix2d& g) const {
        const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
        Eigen::Matrix2d ginv;
        ginv << g(1, 1) / det, -g(0, 1) / det, -g(1, 0) / det, g(0, 0) / det;
        LoopSeries r(order_);
        r.tail_ = tail_;
        for (int k = -order_; k <= order_; ++k) r.coeff(k) = g * coeff(k) * ginv;
        return r;
    }

    Mat2c eval(cplx lambda) const {
        Mat2c v = Mat2c::Zero();
        cplx lp = 1.0;
        // positive and zero powers
        for (int k = 0; k <= order_; ++k) {
            v += coeff(k) * lp;
            lp *= lambda;
        }
        cplx ln = 1.0 / lambda;
        for (int k = 1; k <= order_; ++k) {
            v += coeff(-k) * ln;
            ln /= lambda;
        }
        return v;
    }
    Mat2c eval(double lambda) const { return eval(cplx(lambda, 0.0)); }

    // (value, d/dlambda) at a nonzero real lambda; exact on the truncation.
    std::pair<Mat2c, Mat2c> eval_and_dlambda(double lambda) const {
        Mat2c v = Mat2c::Zero(), d = Mat2c::Zero();
        for (int k = -order_; k <= order_; ++k) {
            const double p = std::pow(lambda, k);
            v += coeff(k) * p;
            if (k != 0) d += coeff(k) * (k * p / lambda);
        }
        return {v, d};
    }

    // Max |det(eval(+-1)) - 1|.
    double det_residual() const {
        double r = 0.0;
        for (double l : {1.0, -1.0}) r = std::max(r, std::abs(eval(l).determinant() - 1.0));
        return r;
    }

    LoopSeries& operator+=(const LoopSeries& o);
    LoopSeries& operator-=(const LoopSeries& o);
    LoopSeries& scale(cplx s);

  private:
    int order_;
    std::vector<Mat2c> c_;
    double tail_ = 0.0;
};

inline LoopSeries& LoopSeries::operator+=(const LoopSeries& o) {
    if (o.order_ > order_) {
        LoopSeries grown = truncated(o.order_);
        *this = grown;
    }
    for (int k = -o.order_; k <= o.order_; ++k) coeff(k) += o.coeff(k);
    tail_ += o.tail_;
    return *this;
}

inline LoopSeries& LoopSeries::operator-=(const LoopSeries& o) {
    if (o.order_ > order_) *this = truncated(o.order_);
    for (int k = -o.order_; k <= o.order_; ++k) coeff(k) -= o.coeff(k);
    tail_ += o.tail_;
    return *this;
}

inline LoopSeries& LoopSeries::scale(cplx s) {
    for (int k = -order_; k <= order_; ++k) coeff(k) *= s;
    tail_ *= std::abs(s);
    return *this;
}

inline LoopSeries operator+(LoopSeries a, const LoopSeries& b) { a += b; return a; }
inline LoopSeries operator-(LoopSeries a, const LoopSeries& b) { a -= b; return a; }
inline LoopSeries operator*(LoopSeries a, cplx s) { a.scale(s); return a; }
inline LoopSeries operator*(cplx s, LoopSeries a) { a.scale(s); return a; }

// Cauchy product truncated to [-N, N] with N = max of the input orders.
// Dropped cross terms are accounted into tail_mass, as is the interaction of
// the inputs' own tails. Twisting parity is preserved exactly (sums of
// parity-clean products are parity-clean).
inline LoopSeries multiply(const LoopSeries& a, const LoopSeries& b) {
    const int N = std::max(a.order(), b.order());
    LoopSeries r(N);

    std::vector<double> na(static_cast<size_t>(2 * a.order() + 1));
    std::vector<double> nb(static_cast<size_t>(2 * b.order() + 1));
    for (int i = -a.order(); i <= a.order(); ++i)
        na[static_cast<size_t>(i + a.order())] = a.coeff(i).norm();
    for (int j = -b.order(); j <= b.order(); ++j)
        nb[static_cast<size_t>(j + b.order())] = b.coeff(j).norm();

    double dropped = 0.0;
    for (int i = -a.order(); i <= a.order(); ++i) {
        if (na[static_cast<size_t>(i + a.order())] == 0.0) continue;
        for (int j = -b.order(); j <= b.order(); ++j) {
            if (nb[static_cast<size_t>(j + b.order())] == 0.0) continue;
            const int k = i + j;
            if (k >= -N && k <= N)
                r.coeff(k) += a.coeff(i) * b.coeff(j);
            else
                dropped += na[static_cast<size_t>(i + a.order())] * nb[static_cast<size_t>(j + b.order())];
        }
    }
    r.add_tail(dropped + a.tail_mass() * b.mass() + b.tail_mass() * (a.mass() - a.tail_mass()));
    return r;
}

// Adjugate inverse. Exact when det == 1 as a series; the precondition is
// checked through the det residual at lambda = +-1.
inline LoopSeries inverse(const LoopSeries& a,
                          const Tolerances& tol = Tolerances::global()) {
    const double dr = a.det_residual();
    if (!(dr <= tol.det_precondition)) throw DetDrift(dr);
    return a.adjugate();
}

struct StructureReport {
    double parity_violation = 0.0; // max entry mass in wrong-parity slots
    double max_imag = 0.0;         // only filled when real_form requested
    double det_residual = 0.0;     // max |det(eval(+-1)) - 1|
    double trace_violation = 0.0;  // max |tr coeff| (algebra check)
};

// Pure diagnostic: reports how far a series is from the twisted (and
// optionally real-form) structure. Never throws.
inline StructureReport check_structure(const LoopSeries& a, bool real_form = false) {
    StructureReport rep;
    for (int k = -a.order(); k <= a.order(); ++k) {
        const Mat2c& c = a.coeff(k);
        const bool even = ((k % 2) == 0);
        // wrong-parity slots: diagonal for odd k, off-diagonal for even k
        const double viol =
            even ? std::max(std::abs(c(0, 1)), std::abs(c(1, 0)))
                 : std::max(std::abs(c(0, 0)), std::abs(c(1, 1)));
        rep.parity_violation = std::max(rep.parity_violation, viol);
        rep.trace_violation = std::max(rep.trace_violation, std::abs(c(0, 0) + c(1, 1)));
        if (real_form)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    rep.max_imag = std::max(rep.max_imag, std::abs(c(i, j).imag()));
    }
    rep.det_residual = a.det_residual();
    return rep;
}

// Real part of eval at a real lambda; guards against stray imaginary mass.
inline Eigen::Matrix2d eval_real(const LoopSeries& a, double lambda,
                                 const Tolerances& tol = Tolerances::global()) {
    Mat2c v = a.eval(lambda);
    double im = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) im = std::max(im, std::abs(v(i, j).imag()));
    if (im > 1e3 * tol.reality * std::max(1.0, v.norm()))
        throw ValidationError("loop evaluation has non-real mass " + std::to_string(im));
    return v.real();
}

} // namespace tcmc
