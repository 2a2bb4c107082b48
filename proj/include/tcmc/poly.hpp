#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace tcmc {

// Real polynomial in one variable, coefficients lowest degree first.
// Evaluation is plain Horner; differentiation is the exact shift-and-scale.
class PolyFn {
  public:
    PolyFn() : c_{0.0} {}
    explicit PolyFn(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0.0);
    }
    static PolyFn constant(double v) { return PolyFn({v}); }

    const std::vector<double>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    double operator()(double x) const {
        double v = 0.0;
        for (size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
        return v;
    }

    PolyFn derivative() const {
        if (c_.size() <= 1) return PolyFn();
        std::vector<double> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
        return PolyFn(std::move(d));
    }

    bool is_zero() const {
        for (double v : c_)
            if (v != 0.0) return false;
        return true;
    }

    PolyFn operator+(const PolyFn& o) const {
        std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return PolyFn(std::move(r));
    }
    PolyFn operator-(const PolyFn& o) const { return *this + (o * -1.0); }
    PolyFn operator*(double s) const {
        std::vector<double> r = c_;
        for (double& v : r) v *= s;
        return PolyFn(std::move(r));
    }
    PolyFn operator*(const PolyFn& o) const {
        std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return PolyFn(std::move(r));
    }

    bool operator==(const PolyFn& o) const { return c_ == o.c_; }

    // Roots inside [a, b], located by a sign-change scan plus bisection.
    // Dense enough for the desk-scale polynomial data this library handles.
    std::vector<double> roots_in(double a, double b, int scan = 1000) const {
        std::vector<double> roots;
        double prev = (*this)(a);
        if (prev == 0.0) roots.push_back(a);
        for (int i = 1; i <= scan; ++i) {
            const double x = a + (b - a) * i / scan;
            const double cur = (*this)(x);
            if (cur == 0.0) {
                roots.push_back(x);
            } else if (prev * cur < 0.0) {
                double lo = a + (b - a) * (i - 1) / scan, hi = x;
                double flo = (*this)(lo);
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = (*this)(mid);
                    if (fm == 0.0) { lo = hi = mid; break; }
                    if (flo * fm < 0.0) hi = mid;
                    else { lo = mid; flo = fm; }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev = cur;
        }
        return roots;
    }

    // "17 significant digits" text form; parse(print) round-trips bit-exactly.
    std::string to_string() const {
        std::string s;
        char buf[64];
        for (size_t i = 0; i < c_.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", c_[i]);
            if (i) s += ' ';
            s += buf;
        }
        return s;
    }

  private:
    std::vector<double> c_;
};

} // namespace tcmc
