#pragma once

#include <stdexcept>
#include <string>

namespace tcmc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Determinant residual of a loop exceeds the adjugate-inverse precondition;
// usually means the truncation order is too small for the data.
struct DetDrift : Error {
    double residual;
    explicit DetDrift(double r)
        : Error("loop determinant residual " + std::to_string(r) + " exceeds tolerance"),
          residual(r) {}
};

// Left Birkhoff factorization rejected: the loop is (numerically) outside the
// big cell. Carries the condition estimate and reconstruction residual of the
// attempted solve.
struct OffBigCell : Error {
    double condition;
    double residual;
    OffBigCell(double cond, double resid)
        : Error("loop is off the Birkhoff big cell (condition " + std::to_string(cond) +
                ", residual " + std::to_string(resid) + ")"),
          condition(cond), residual(resid) {}
};

// Truncation tail of a loop series grew past the hard limit during a pipeline
// stage; the truncation order cannot represent the data.
struct TailOverflow : Error {
    double tail;
    explicit TailOverflow(double t)
        : Error("loop series tail mass " + std::to_string(t) + " exceeds overflow limit"),
          tail(t) {}
};

// Coordinate-frame data requested at a point where c1 or b2 vanishes.
struct NotRegular : Error {
    using Error::Error;
};

// df vanishes entirely at a point where a rank-1 null direction was requested.
struct RankZero : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IOError : Error {
    using Error::Error;
};

} // namespace tcmc
