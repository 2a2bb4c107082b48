#pragma once

#include <cmath>
#include <string>

#include "tcmc/geometry.hpp"
#include "tcmc/poly.hpp"
#include "tcmc/potentials.hpp"

namespace tcmc {

// Geometric Cauchy data along a prescribed lightlike singular curve:
//   f_v = s(v) (-e0 + cos(theta) e1 + sin(theta) e2),
//   f_u = t(v) (-e0 + cos(theta) e1 + sin(theta) e2),
// with theta(0) = 0 and s, t never vanishing simultaneously. In the
// characteristic case t is the constant t0.
struct CauchyData {
    PolyFn s, t, theta;
    double H = 1.0;
    Interval J{-1.0, 1.0};

    ValidationReport validate() const {
        ValidationReport rep;
        if (theta(0.0) != 0.0) rep.fail("theta(0) must vanish (ambient normalization)");
        if (H == 0.0) rep.fail("H must be nonzero");
        // simultaneous vanishing of s and t
        for (double r : s.roots_in(J.lo, J.hi))
            if (std::abs(t(r)) <= 1e-12) rep.fail("s and t vanish together near " + std::to_string(r));
        if (s.is_zero() && t.is_zero()) rep.fail("s and t vanish together (both zero)");
        // degenerate data: surface stays singular along the whole curve
        const PolyFn tp = theta.derivative();
        const bool smt = (s - t).is_zero() || (s + t).is_zero();
        if (smt || tp.is_zero())
            rep.warnings.push_back("DegenerateData: s == +-t or theta' == 0 on the interval");
        return rep;
    }
};

// The unique singular potential solving the non-characteristic singular
// geometric Cauchy problem for the given data:
//   alpha0 = 0, beta1 = -theta'/2, gamma1 = -H(s+t)/2,
//   gamma_m1 = theta'/2 + H t, gamma_m3 = H(s-t)/2.
inline SingularPotential noncharacteristic_potential(const CauchyData& data) {
    const auto rep = data.validate();
    if (!rep.ok) throw ValidationError("invalid Cauchy data: " + rep.errors.front());
    const PolyFn tp = data.theta.derivative();
    SingularPotential sp;
    sp.alpha0 = PolyFn::constant(0.0);
    sp.beta1 = tp * -0.5;
    sp.gamma1 = (data.s + data.t) * (-0.5 * data.H);
    sp.gamma_m1 = tp * 0.5 + data.t * data.H;
    sp.gamma_m3 = (data.s - data.t) * (0.5 * data.H);
    sp.J = data.J;
    return sp;
}

// Most general solution of the characteristic singular geometric Cauchy
// problem: theta == 0, alpha0 == 0, gamma1 = -sH, gamma_m1 = sH; delta is
// constrained by delta(0) = -t0 H, sigma is free, with sigma(0) != 0 as the
// non-degeneracy condition.
inline CharSingularPair characteristic_pair(const PolyFn& s, double t0, const PolyFn& delta,
                                            const PolyFn& sigma, double H,
                                            Interval Jx = {-1.0, 1.0}, Interval Jy = {-1.0, 1.0}) {
    if (H == 0.0) throw ValidationError("H must be nonzero");
    if (std::abs(delta(0.0) + t0 * H) > 1e-12)
        throw ValidationError("characteristic data needs delta(0) = -t0*H");
    CharSingularPair cp;
    cp.alpha0 = PolyFn::constant(0.0);
    cp.gamma1 = s * (-H);
    cp.gamma_m1 = s * H;
    cp.delta = delta;
    cp.sigma = sigma;
    cp.Jx = Jx;
    cp.Jy = Jy;
    return cp;
}

// Symbolic singularity type at v0 by exact polynomial evaluation of the
// classification criteria:
//   cuspidal edge       <=> s(v0) != 0 and t(v0) != 0,
//   swallowtail         <=> s(v0) = 0, s'(v0) != 0, t(v0) != 0,
//   cuspidal cross cap  <=> t(v0) = 0, t'(v0) != 0, s(v0) != 0,
// all under the non-degeneracy preconditions theta'(v0) != 0, s(v0) != +-t(v0).
inline SingularityReport predict_type(const CauchyData& data, double v0) {
    SingularityReport rep;
    rep.a = 0.0;
    rep.b = v0;
    rep.klass = 2;
    const double s = data.s(v0), t = data.t(v0);
    const double sp = data.s.derivative()(v0), tp = data.t.derivative()(v0);
    const double thp = data.theta.derivative()(v0);
    const double thpp = data.theta.derivative().derivative()(v0);
    rep.s = s;
    rep.t = t;
    rep.s_p = sp;
    rep.t_p = tp;
    rep.theta_p = thp;
    rep.eta = {s, -t};
    rep.det_gamma_eta = -s;
    rep.det_gamma_eta_prime = -sp;
    rep.tau = -std::sqrt(2.0) * t * thp;
    rep.tau_prime = -std::sqrt(2.0) * (tp * thp + t * thpp);
    rep.is_front = std::abs(t) > 1e-12;
    rep.nondegenerate = std::abs(thp) > 1e-12 && std::abs(s - t) > 1e-12 && std::abs(s + t) > 1e-12;
    // dchi/du = -4 sqrt(2) beta1 gamma1 gamma_m3 / H^2 with the builder's
    // coefficients: -sqrt(2) theta' (s^2 - t^2) / 2
    rep.dchi_a = -std::sqrt(2.0) * thp * (s * s - t * t) / 2.0;
    rep.dchi_b = 0.0;

    if (!rep.nondegenerate) {
        rep.type = SingType::Degenerate;
        rep.note = "precondition failed: theta' = 0 or s = +-t";
        return rep;
    }
    const bool sz = std::abs(s) <= 1e-12, tz = std::abs(t) <= 1e-12;
    if (!sz && !tz) {
        rep.type = SingType::CuspidalEdge;
    } else if (sz && !tz) {
        rep.type = (std::abs(sp) > 1e-12) ? SingType::Swallowtail : SingType::FoldOther;
        if (rep.type == SingType::FoldOther) rep.note = "higher-order zero of s";
    } else { // tz && !sz (simultaneous zero excluded by validation)
        rep.type = (std::abs(tp) > 1e-12) ? SingType::CuspidalCrossCap : SingType::Degenerate;
        if (rep.type == SingType::Degenerate) rep.note = "higher-order zero of t: not a front";
    }
    return rep;
}

} // namespace tcmc
