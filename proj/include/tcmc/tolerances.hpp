#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "tcmc/errors.hpp"

namespace tcmc {

// Central tolerance table. All numeric thresholds used by the library live
// here. Every field can be overridden by pointing the TCMC_TOLERANCES
// environment variable at a file of "name = value" lines.
struct Tolerances {
    double parity = 1e-12;            // twisting violation after construction
    double reality = 1e-12;           // max |Im| for real-form loops
    double trace = 1e-12;             // trace-free check for algebra elements
    double det_precondition = 1e-6;   // adjugate-inverse precondition on det residual
    double factor_residual = 1e-9;    // accepted Birkhoff reconstruction error
    double factor_condition = 1e8;    // accepted condition estimate of the solve
    double cell_pivot = 1e-6;         // small-cell signature threshold (relative)
    double tail_warn = 1e-8;          // warn when a series tail grows past this
    double tail_overflow = 1e-6;      // hard failure for pipeline tails
    double unimodular_drift = 1e-8;   // axis-frame sample det drift
    double rank = 1e-6;               // singular-value ratio for rank decisions
    double zero = 1e-8;               // generic scalar zero test
    double agreement = 1e-5;          // symbolic vs numeric classifier agreement
    double fd_step = 1e-3;            // classifier stencil step (4th-order central)

    static const Tolerances& global();
};

namespace detail {

inline void apply_override(Tolerances& t, const std::string& name, double value) {
    if (name == "parity") t.parity = value;
    else if (name == "reality") t.reality = value;
    else if (name == "trace") t.trace = value;
    else if (name == "det_precondition") t.det_precondition = value;
    else if (name == "factor_residual") t.factor_residual = value;
    else if (name == "factor_condition") t.factor_condition = value;
    else if (name == "cell_pivot") t.cell_pivot = value;
    else if (name == "tail_warn") t.tail_warn = value;
    else if (name == "tail_overflow") t.tail_overflow = value;
    else if (name == "unimodular_drift") t.unimodular_drift = value;
    else if (name == "rank") t.rank = value;
    else if (name == "zero") t.zero = value;
    else if (name == "agreement") t.agreement = value;
    else if (name == "fd_step") t.fd_step = value;
    else throw ParseError("unknown tolerance name '" + name + "'");
}

inline Tolerances load_global() {
    Tolerances t;
    const char* path = std::getenv("TCMC_TOLERANCES");
    if (!path) return t;
    std::ifstream in(path);
    if (!in) throw IOError(std::string("cannot open tolerance override file ") + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name, eq;
        double value;
        if (!(ls >> name)) continue;
        if (!(ls >> eq >> value) || eq != "=")
            throw ParseError("bad tolerance override line: " + line);
        apply_override(t, name, value);
    }
    return t;
}

} // namespace detail

inline const Tolerances& Tolerances::global() {
    static const Tolerances t = detail::load_global();
    return t;
}

} // namespace tcmc
