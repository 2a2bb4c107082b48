#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcmc/loop_series.hpp"
#include "tcmc/poly.hpp"

namespace tcmc {

struct Interval {
    double lo = -1.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Extra finitely supported lambda^degree term of a potential; parity of the
// degree dictates which entries may be populated (diagonal for even, off-
// diagonal for odd).
struct ExtraTerm {
    int degree = 0;
    PolyFn e11, e12, e21, e22;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool degenerate_everywhere = false; // singular potential with beta1 == 0
    bool regular = true;                // no zeros of the regularity functions
    void fail(std::string msg) {
        ok = false;
        errors.push_back(std::move(msg));
    }
};

namespace detail {

// first-order-zero check: every located root must have nonvanishing derivative
inline void check_first_order_zeros(const PolyFn& f, const Interval& J,
                                    const std::string& name, ValidationReport& rep) {
    const PolyFn df = f.derivative();
    for (double r : f.roots_in(J.lo, J.hi)) {
        if (std::abs(df(r)) <= 1e-9)
            rep.fail(name + " has a zero of order > 1 near " + std::to_string(r));
    }
}

inline void fill_term(LoopSeries& s, const ExtraTerm& t, double point) {
    if (!s.in_range(t.degree)) {
        s.add_tail(std::abs(t.e11(point)) + std::abs(t.e12(point)) + std::abs(t.e21(point)) +
                   std::abs(t.e22(point)));
        return;
    }
    Mat2c& c = s.coeff(t.degree);
    c(0, 0) += t.e11(point);
    c(0, 1) += t.e12(point);
    c(1, 0) += t.e21(point);
    c(1, 1) += t.e22(point);
}

inline void validate_extra_parity(const std::vector<ExtraTerm>& terms,
                                  const std::string& which, ValidationReport& rep) {
    for (const auto& t : terms) {
        const bool even = (t.degree % 2) == 0;
        const bool bad = even ? (!t.e12.is_zero() || !t.e21.is_zero())
                              : (!t.e11.is_zero() || !t.e22.is_zero());
        if (bad)
            rep.fail(which + " extra term at degree " + std::to_string(t.degree) +
                     " violates the twisting parity");
    }
}

} // namespace detail

// Potential pair (psi^X, psi^Y): the top coefficient of psi^X is
// lambda * [[0, alpha],[beta, 0]] dx, the bottom coefficient of psi^Y is
// lambda^{-1} * [[0, gamma],[delta, 0]] dy; finitely many extra terms with
// degrees <= 1 (x side) resp. >= -1 (y side) may be attached.
struct PotentialPair {
    PolyFn alpha, beta;   // functions of x
    PolyFn gamma, delta;  // functions of y
    std::vector<ExtraTerm> x_extra, y_extra;
    Interval Ix, Iy;

    // Semi-regularity: beta and gamma never vanish simultaneously on the
    // working rectangle (each function lives on its own axis, so simultaneous
    // vanishing means both have some root), and all zeros are first order.
    ValidationReport validate() const {
        ValidationReport rep;
        const bool beta_zeros = !beta.roots_in(Ix.lo, Ix.hi).empty();
        const bool gamma_zeros = !gamma.roots_in(Iy.lo, Iy.hi).empty();
        if (beta.is_zero() && gamma.is_zero())
            rep.fail("beta and gamma vanish simultaneously (both identically zero)");
        else if (beta_zeros && gamma_zeros)
            rep.fail("beta and gamma vanish simultaneously on the working rectangle");
        if (beta.is_zero() || gamma.is_zero())
            rep.fail("identically vanishing regularity function is not semi-regular");
        detail::check_first_order_zeros(beta, Ix, "beta", rep);
        detail::check_first_order_zeros(gamma, Iy, "gamma", rep);
        for (const auto& t : x_extra)
            if (t.degree > 1) rep.fail("psi^X extra term above degree 1");
        for (const auto& t : y_extra)
            if (t.degree < -1) rep.fail("psi^Y extra term below degree -1");
        detail::validate_extra_parity(x_extra, "psi^X", rep);
        detail::validate_extra_parity(y_extra, "psi^Y", rep);
        rep.regular = !beta_zeros && !gamma_zeros;
        return rep;
    }

    LoopSeries x_form(double x, int order) const {
        LoopSeries s(order);
        s.coeff(1)(0, 1) = alpha(x);
        s.coeff(1)(1, 0) = beta(x);
        for (const auto& t : x_extra) detail::fill_term(s, t, x);
        return s;
    }
    LoopSeries y_form(double y, int order) const {
        LoopSeries s(order);
        s.coeff(-1)(0, 1) = gamma(y);
        s.coeff(-1)(1, 0) = delta(y);
        for (const auto& t : y_extra) detail::fill_term(s, t, y);
        return s;
    }
};

// Singular potential
//   [[-alpha0, -gamma1 l^3 - gamma_m1 l - gamma_m3 l^-1],
//    [-beta1 l^-1, alpha0]] dv.
// Regular where gamma1 and gamma_m3 are nonzero (zeros at most first order);
// non-degenerate where beta1 is nonzero.
struct SingularPotential {
    PolyFn alpha0, beta1, gamma1, gamma_m1, gamma_m3;
    Interval J;

    ValidationReport validate() const {
        ValidationReport rep;
        if (beta1.is_zero()) {
            rep.degenerate_everywhere = true;
            rep.warnings.push_back("beta1 vanishes identically: potential degenerate everywhere");
        }
        const bool g1z = gamma1.is_zero() || !gamma1.roots_in(J.lo, J.hi).empty();
        const bool g3z = gamma_m3.is_zero() || !gamma_m3.roots_in(J.lo, J.hi).empty();
        rep.regular = !g1z && !g3z;
        if (!rep.regular)
            rep.warnings.push_back("gamma1 or gamma_m3 vanishes somewhere: potential not regular there");
        if (!gamma1.is_zero()) detail::check_first_order_zeros(gamma1, J, "gamma1", rep);
        if (!gamma_m3.is_zero()) detail::check_first_order_zeros(gamma_m3, J, "gamma_m3", rep);
        return rep;
    }

    LoopSeries form(double v, int order) const {
        LoopSeries s(order);
        s.coeff(0)(0, 0) = -alpha0(v);
        s.coeff(0)(1, 1) = alpha0(v);
        s.coeff(3)(0, 1) = -gamma1(v);
        s.coeff(1)(0, 1) = -gamma_m1(v);
        s.coeff(-1)(0, 1) = -gamma_m3(v);
        s.coeff(-1)(1, 0) = -beta1(v);
        return s;
    }

    // Lightlike-coordinate potential pair represented by this data:
    // psi^X = omega_1 psi omega_1^{-1}, psi^Y = psi. The (2,1) top-degree
    // entry of psi^X is gamma1 and the (1,2) bottom-degree entry of psi^Y is
    // -gamma_m3; these drive the coordinate-frame scalars.
    double c1_scalar(double x) const { return gamma1(x); }
    double delta_scalar(double y) const { return -gamma_m3(y); }
};

// Characteristic singular potential pair
//   psi~^X = [[-alpha0, -gamma_m1 l - gamma1 l^3],[0, alpha0]] dx,
//   psi^Y  = [[0, delta l^-1],[sigma l^-1, 0]] dy (+ optional higher terms).
struct CharSingularPair {
    PolyFn alpha0, gamma1, gamma_m1; // functions of x
    PolyFn delta, sigma;             // functions of y
    std::vector<ExtraTerm> y_extra;  // degrees >= 0
    Interval Jx, Jy;

    ValidationReport validate() const {
        ValidationReport rep;
        const bool g1z = gamma1.is_zero() || !gamma1.roots_in(Jx.lo, Jx.hi).empty();
        const bool dz = delta.is_zero() || !delta.roots_in(Jy.lo, Jy.hi).empty();
        if (g1z && dz) rep.fail("gamma1 and delta vanish simultaneously: not semi-regular");
        rep.regular = !g1z && !dz;
        if (std::abs(sigma(0.0)) <= 1e-12)
            rep.warnings.push_back("sigma(0) = 0: potential degenerate (DegeneracyWarning)");
        for (const auto& t : y_extra)
            if (t.degree < 0) rep.fail("psi^Y extra term below degree 0");
        detail::validate_extra_parity(y_extra, "psi^Y", rep);
        return rep;
    }

    LoopSeries x_form(double x, int order) const {
        LoopSeries s(order);
        s.coeff(0)(0, 0) = -alpha0(x);
        s.coeff(0)(1, 1) = alpha0(x);
        s.coeff(1)(0, 1) = -gamma_m1(x);
        s.coeff(3)(0, 1) = -gamma1(x);
        return s;
    }
    LoopSeries y_form(double y, int order) const {
        LoopSeries s(order);
        s.coeff(-1)(0, 1) = delta(y);
        s.coeff(-1)(1, 0) = sigma(y);
        for (const auto& t : y_extra) detail::fill_term(s, t, y);
        return s;
    }

    double c1_scalar(double x) const { return gamma1(x); }
    double delta_scalar(double y) const { return delta(y); }
};

} // namespace tcmc
