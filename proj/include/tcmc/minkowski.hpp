#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace tcmc {

// sl(2,R) is identified with Lorentz-Minkowski 3-space via the orthonormal
// basis
//   e0 = [[0,-1],[1,0]],  e1 = [[0,1],[1,0]],  e2 = [[-1,0],[0,1]],
// with <X,Y>_L = tr(XY)/2 and <e0,e0>_L = -1. A vector t*e0 + x1*e1 + x2*e2
// corresponds to the trace-free matrix [[-x2, -t+x1],[t+x1, x2]].
struct MinkVec {
    double t = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;

    MinkVec() = default;
    MinkVec(double t_, double x1_, double x2_) : t(t_), x1(x1_), x2(x2_) {}

    MinkVec operator+(const MinkVec& o) const { return {t + o.t, x1 + o.x1, x2 + o.x2}; }
    MinkVec operator-(const MinkVec& o) const { return {t - o.t, x1 - o.x1, x2 - o.x2}; }
    MinkVec operator-() const { return {-t, -x1, -x2}; }
    MinkVec operator*(double s) const { return {t * s, x1 * s, x2 * s}; }
    MinkVec& operator+=(const MinkVec& o) { t += o.t; x1 += o.x1; x2 += o.x2; return *this; }

    Eigen::Vector3d components() const { return {t, x1, x2}; }
};

inline MinkVec operator*(double s, const MinkVec& v) { return v * s; }

inline const MinkVec kE0{1, 0, 0};
inline const MinkVec kE1{0, 1, 0};
inline const MinkVec kE2{0, 0, 1};

// Lorentzian inner product, signature (-,+,+).
inline double mink_ip(const MinkVec& a, const MinkVec& b) {
    return -a.t * b.t + a.x1 * b.x1 + a.x2 * b.x2;
}

// Euclidean inner product on the underlying R^3.
inline double eucl_ip(const MinkVec& a, const MinkVec& b) {
    return a.t * b.t + a.x1 * b.x1 + a.x2 * b.x2;
}

inline double eucl_norm(const MinkVec& a) { return std::sqrt(eucl_ip(a, a)); }

// Standard cross product in the (e0,e1,e2) frame:
// e0 x e1 = e2, e1 x e2 = e0, e2 x e0 = e1. Agrees with -Ad_{e0}[A,B]/2 in the
// matrix picture.
inline MinkVec cross(const MinkVec& a, const MinkVec& b) {
    return {a.x1 * b.x2 - a.x2 * b.x1,
            a.x2 * b.t - a.t * b.x2,
            a.t * b.x1 - a.x1 * b.t};
}

inline Eigen::Matrix2d basis_e0() { return (Eigen::Matrix2d() << 0, -1, 1, 0).finished(); }
inline Eigen::Matrix2d basis_e1() { return (Eigen::Matrix2d() << 0, 1, 1, 0).finished(); }
inline Eigen::Matrix2d basis_e2() { return (Eigen::Matrix2d() << -1, 0, 0, 1).finished(); }

inline Eigen::Matrix2d to_matrix(const MinkVec& v) {
    Eigen::Matrix2d m;
    m << -v.x2, -v.t + v.x1, v.t + v.x1, v.x2;
    return m;
}

// Inverse of to_matrix; exact on trace-free input (uses both off-diagonal
// entries, ignores any trace part).
inline MinkVec from_matrix(const Eigen::Matrix2d& m) {
    return {0.5 * (m(1, 0) - m(0, 1)), 0.5 * (m(1, 0) + m(0, 1)), m(1, 1)};
}

// Ad_g(v) = g V g^{-1} for invertible g (the det division makes this exact
// for frames that are only numerically unimodular).
inline MinkVec ad(const Eigen::Matrix2d& g, const MinkVec& v) {
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    Eigen::Matrix2d ginv;
    ginv << g(1, 1) / det, -g(0, 1) / det, -g(1, 0) / det, g(0, 0) / det;
    return from_matrix(g * to_matrix(v) * ginv);
}

// Ad_{e0} fixes e0 and negates e1, e2.
inline MinkVec ad_e0(const MinkVec& v) { return {v.t, -v.x1, -v.x2}; }

// Matrix commutator in the MinkVec picture.
inline MinkVec bracket(const MinkVec& a, const MinkVec& b) {
    Eigen::Matrix2d m = to_matrix(a) * to_matrix(b) - to_matrix(b) * to_matrix(a);
    return from_matrix(m);
}

} // namespace tcmc
