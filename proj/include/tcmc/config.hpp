#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tcmc/cauchy.hpp"
#include "tcmc/frame.hpp"
#include "tcmc/potentials.hpp"

namespace tcmc {

enum class Family { Pair, Singular, Cauchy, Characteristic, CauchyCharacteristic };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Pair: return "pair";
        case Family::Singular: return "singular";
        case Family::Cauchy: return "cauchy";
        case Family::Characteristic: return "characteristic";
        case Family::CauchyCharacteristic: return "cauchy.characteristic";
    }
    return "?";
}

// One surface construction: the potential-family section plus the numeric
// knobs shared by every pipeline. The config file is line-oriented
// "key = values" under a single [section] naming the family; coefficients are
// decimal literals, lowest degree first, evaluated in binary64.
struct Config {
    Family family = Family::Pair;
    PotentialPair pair;
    SingularPotential singular;
    CharSingularPair charpair;
    CauchyData cauchy;
    PolyFn char_s;   // cauchy.characteristic data
    double t0 = 0.0;

    double H = 1.0;
    double lambda = 1.0;
    double ode_step = 2e-3;
    int order = 24;
    Interval A{-1.0, 1.0}, B{-1.0, 1.0}; // pipeline coordinates (x,y) or (u,v)
    int na = 201, nb = 201;

    std::string raw; // original text, echoed into reports
};

namespace detail {

struct KV {
    std::string key;
    std::vector<double> values;
    int line = 0;
    bool used = false;
};

inline std::vector<double> parse_numbers(const std::string& s, int line) {
    std::vector<double> out;
    const char* p = s.c_str();
    char* end = nullptr;
    while (*p) {
        while (*p == ' ' || *p == '\t' || *p == ',') ++p;
        if (!*p) break;
        const double v = std::strtod(p, &end);
        if (end == p)
            throw ParseError("line " + std::to_string(line) + ": bad number near '" +
                             std::string(p) + "'");
        out.push_back(v);
        p = end;
    }
    return out;
}

class Section {
  public:
    explicit Section(std::vector<KV> kvs) : kvs_(std::move(kvs)) {}

    bool has(const std::string& key) const {
        for (const auto& kv : kvs_)
            if (kv.key == key) return true;
        return false;
    }
    std::optional<std::vector<double>> maybe(const std::string& key) {
        for (auto& kv : kvs_)
            if (kv.key == key) {
                kv.used = true;
                return kv.values;
            }
        return std::nullopt;
    }
    PolyFn poly(const std::string& key, PolyFn fallback) {
        auto v = maybe(key);
        return v ? PolyFn(*v) : fallback;
    }
    PolyFn require_poly(const std::string& key) {
        auto v = maybe(key);
        if (!v) throw ParseError("missing required key '" + key + "'");
        return PolyFn(*v);
    }
    double scalar(const std::string& key, double fallback) {
        auto v = maybe(key);
        if (!v) return fallback;
        if (v->size() != 1)
            throw ParseError("key '" + key + "' expects one value");
        return (*v)[0];
    }
    Interval interval(const std::string& key, Interval fallback) {
        auto v = maybe(key);
        if (!v) return fallback;
        if (v->size() != 2 || (*v)[0] >= (*v)[1])
            throw ParseError("key '" + key + "' expects 'lo hi' with lo < hi");
        return {(*v)[0], (*v)[1]};
    }
    void check_all_used() const {
        for (const auto& kv : kvs_)
            if (!kv.used)
                throw ParseError("line " + std::to_string(kv.line) + ": unknown key '" +
                                 kv.key + "'");
    }
    std::vector<ExtraTerm> extra_terms(const std::string& prefix) {
        std::vector<ExtraTerm> out;
        for (auto& kv : kvs_) {
            if (kv.key.rfind(prefix, 0) != 0) continue;
            kv.used = true;
            const int deg = std::stoi(kv.key.substr(prefix.size()));
            if (kv.values.size() != 4)
                throw ParseError("line " + std::to_string(kv.line) +
                                 ": extra term expects 4 constants (e11 e12 e21 e22)");
            ExtraTerm t;
            t.degree = deg;
            t.e11 = PolyFn::constant(kv.values[0]);
            t.e12 = PolyFn::constant(kv.values[1]);
            t.e21 = PolyFn::constant(kv.values[2]);
            t.e22 = PolyFn::constant(kv.values[3]);
            out.push_back(std::move(t));
        }
        return out;
    }

  private:
    std::vector<KV> kvs_;
};

inline void parse_common(Section& sec, Config& c, const char* akey, const char* bkey) {
    c.H = sec.scalar("H", 1.0);
    if (c.H == 0.0) throw ParseError("H must be nonzero");
    c.lambda = sec.scalar("lambda", 1.0);
    if (c.lambda == 0.0) throw ParseError("lambda must be nonzero");
    c.ode_step = sec.scalar("ode_step", 2e-3);
    c.order = static_cast<int>(sec.scalar("order", 24));
    const Interval both = sec.interval("interval", Interval{-1.0, 1.0});
    c.A = sec.interval(akey, both);
    c.B = sec.interval(bkey, both);
    if (auto g = sec.maybe("grid")) {
        if (g->size() != 2) throw ParseError("grid expects 'na nb'");
        c.na = static_cast<int>((*g)[0]);
        c.nb = static_cast<int>((*g)[1]);
        if (c.na < 2 || c.nb < 2) throw ParseError("grid needs at least 2 points per axis");
    }
}

} // namespace detail

inline Config parse_config_text(const std::string& text) {
    std::istringstream in(text);
    std::string line, section;
    std::vector<detail::KV> kvs;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto notspace = [](char ch) { return ch != ' ' && ch != '\t' && ch != '\r'; };
        while (!line.empty() && !notspace(line.back())) line.pop_back();
        size_t start = 0;
        while (start < line.size() && !notspace(line[start])) ++start;
        line.erase(0, start);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": malformed section header");
            if (!section.empty())
                throw ParseError("line " + std::to_string(lineno) +
                                 ": one config describes one surface (extra section)");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = values'");
        std::string key = line.substr(0, eq);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ParseError("line " + std::to_string(lineno) + ": key before any section");
        kvs.push_back({key, detail::parse_numbers(line.substr(eq + 1), lineno), lineno, false});
    }
    if (section.empty()) throw ParseError("config has no [section]");

    Config c;
    c.raw = text;
    detail::Section sec(std::move(kvs));
    const PolyFn one = PolyFn::constant(1.0);
    const PolyFn zero = PolyFn::constant(0.0);

    if (section == "pair") {
        c.family = Family::Pair;
        detail::parse_common(sec, c, "interval_x", "interval_y");
        c.pair.alpha = sec.poly("alpha", one);
        c.pair.beta = sec.poly("beta", one);
        c.pair.gamma = sec.poly("gamma", one);
        c.pair.delta = sec.poly("delta", one);
        c.pair.x_extra = sec.extra_terms("x_extra_");
        c.pair.y_extra = sec.extra_terms("y_extra_");
        c.pair.Ix = c.A;
        c.pair.Iy = c.B;
    } else if (section == "singular") {
        c.family = Family::Singular;
        detail::parse_common(sec, c, "interval_u", "interval_v");
        c.singular.alpha0 = sec.poly("alpha0", zero);
        c.singular.beta1 = sec.require_poly("beta1");
        c.singular.gamma1 = sec.require_poly("gamma1");
        c.singular.gamma_m1 = sec.poly("gamma_m1", zero);
        c.singular.gamma_m3 = sec.require_poly("gamma_m3");
        c.singular.J = c.B;
    } else if (section == "cauchy") {
        c.family = Family::Cauchy;
        detail::parse_common(sec, c, "interval_u", "interval_v");
        c.cauchy.s = sec.require_poly("s");
        c.cauchy.t = sec.require_poly("t");
        c.cauchy.theta = sec.poly("theta", zero);
        c.cauchy.H = c.H;
        c.cauchy.J = c.B;
    } else if (section == "characteristic") {
        c.family = Family::Characteristic;
        detail::parse_common(sec, c, "interval_x", "interval_y");
        c.charpair.alpha0 = sec.poly("alpha0", zero);
        c.charpair.gamma1 = sec.require_poly("gamma1");
        c.charpair.gamma_m1 = sec.poly("gamma_m1", zero);
        c.charpair.delta = sec.require_poly("delta");
        c.charpair.sigma = sec.require_poly("sigma");
        c.charpair.y_extra = sec.extra_terms("y_extra_");
        c.charpair.Jx = c.A;
        c.charpair.Jy = c.B;
    } else if (section == "cauchy.characteristic") {
        c.family = Family::CauchyCharacteristic;
        detail::parse_common(sec, c, "interval_x", "interval_y");
        c.char_s = sec.require_poly("s");
        {
            auto t = sec.maybe("t");
            if (t) {
                if (t->size() != 1)
                    throw ValidationError(
                        "characteristic data requires constant t (supply 't0 = ...')");
                c.t0 = (*t)[0];
            } else {
                c.t0 = sec.scalar("t0", 0.0);
            }
        }
        c.charpair.delta = sec.require_poly("delta");
        c.charpair.sigma = sec.require_poly("sigma");
        c.charpair.Jx = c.A;
        c.charpair.Jy = c.B;
    } else {
        throw ParseError("unknown section [" + section + "]");
    }
    sec.check_all_used();
    return c;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void emit_poly(std::ostringstream& out, const char* key, const PolyFn& p) {
    out << key << " = " << p.to_string() << "\n";
}

} // namespace detail

// Canonical text form; parse(print(c)) reproduces every coefficient bit-exactly.
inline std::string print_config(const Config& c) {
    std::ostringstream out;
    out << "[" << family_name(c.family) << "]\n";
    switch (c.family) {
        case Family::Pair:
            detail::emit_poly(out, "alpha", c.pair.alpha);
            detail::emit_poly(out, "beta", c.pair.beta);
            detail::emit_poly(out, "gamma", c.pair.gamma);
            detail::emit_poly(out, "delta", c.pair.delta);
            for (const auto& t : c.pair.x_extra)
                out << "x_extra_" << t.degree << " = " << detail::fmt(t.e11(0)) << " "
                    << detail::fmt(t.e12(0)) << " " << detail::fmt(t.e21(0)) << " "
                    << detail::fmt(t.e22(0)) << "\n";
            for (const auto& t : c.pair.y_extra)
                out << "y_extra_" << t.degree << " = " << detail::fmt(t.e11(0)) << " "
                    << detail::fmt(t.e12(0)) << " " << detail::fmt(t.e21(0)) << " "
                    << detail::fmt(t.e22(0)) << "\n";
            break;
        case Family::Singular:
            detail::emit_poly(out, "alpha0", c.singular.alpha0);
            detail::emit_poly(out, "beta1", c.singular.beta1);
            detail::emit_poly(out, "gamma1", c.singular.gamma1);
            detail::emit_poly(out, "gamma_m1", c.singular.gamma_m1);
            detail::emit_poly(out, "gamma_m3", c.singular.gamma_m3);
            break;
        case Family::Cauchy:
            detail::emit_poly(out, "s", c.cauchy.s);
            detail::emit_poly(out, "t", c.cauchy.t);
            detail::emit_poly(out, "theta", c.cauchy.theta);
            break;
        case Family::Characteristic:
            detail::emit_poly(out, "alpha0", c.charpair.alpha0);
            detail::emit_poly(out, "gamma1", c.charpair.gamma1);
            detail::emit_poly(out, "gamma_m1", c.charpair.gamma_m1);
            detail::emit_poly(out, "delta", c.charpair.delta);
            detail::emit_poly(out, "sigma", c.charpair.sigma);
            break;
        case Family::CauchyCharacteristic:
            detail::emit_poly(out, "s", c.char_s);
            out << "t0 = " << detail::fmt(c.t0) << "\n";
            detail::emit_poly(out, "delta", c.charpair.delta);
            detail::emit_poly(out, "sigma", c.charpair.sigma);
            break;
    }
    out << "H = " << detail::fmt(c.H) << "\n";
    out << "lambda = " << detail::fmt(c.lambda) << "\n";
    out << "ode_step = " << detail::fmt(c.ode_step) << "\n";
    out << "order = " << c.order << "\n";
    const bool uv = (c.family == Family::Singular || c.family == Family::Cauchy);
    out << (uv ? "interval_u" : "interval_x") << " = " << detail::fmt(c.A.lo) << " "
        << detail::fmt(c.A.hi) << "\n";
    out << (uv ? "interval_v" : "interval_y") << " = " << detail::fmt(c.B.lo) << " "
        << detail::fmt(c.B.hi) << "\n";
    out << "grid = " << c.na << " " << c.nb << "\n";
    return out.str();
}

// The model behind a config, plus the symbolic Cauchy data when the family
// provides it and the validation outcome of the potential.
struct BuiltModel {
    std::shared_ptr<SurfaceModel> model;
    std::optional<CauchyData> data;
    ValidationReport validation;
};

inline BuiltModel build_model(const Config& c) {
    BuiltModel out;
    switch (c.family) {
        case Family::Pair: {
            out.validation = c.pair.validate();
            if (!out.validation.ok)
                throw ValidationError("potential pair: " + out.validation.errors.front());
            DalembertOptions o;
            o.H = c.H;
            o.lambda = c.lambda;
            o.order = c.order;
            o.ode_step = c.ode_step;
            o.base_x = 0.5 * (c.A.lo + c.A.hi);
            o.base_y = 0.5 * (c.B.lo + c.B.hi);
            out.model = std::make_shared<DalembertSurface>(c.pair, o);
            return out;
        }
        case Family::Singular:
        case Family::Cauchy: {
            SingularPotential sp = c.singular;
            if (c.family == Family::Cauchy) {
                const auto drep = c.cauchy.validate();
                if (!drep.ok) throw ValidationError("cauchy data: " + drep.errors.front());
                sp = noncharacteristic_potential(c.cauchy);
                out.data = c.cauchy;
                out.validation = drep;
            }
            const auto vrep = sp.validate();
            if (!vrep.ok) throw ValidationError("singular potential: " + vrep.errors.front());
            for (const auto& w : vrep.warnings) out.validation.warnings.push_back(w);
            out.validation.degenerate_everywhere |= vrep.degenerate_everywhere;
            out.validation.regular = vrep.regular;
            ShiftedOptions o;
            o.H = c.H;
            o.lambda = c.lambda;
            o.order = c.order;
            o.ode_step = c.ode_step;
            out.model = std::make_shared<ShiftedSurface>(
                ShiftedSurface::from_singular(sp, c.A, c.B, o));
            return out;
        }
        case Family::Characteristic:
        case Family::CauchyCharacteristic: {
            CharSingularPair cp = c.charpair;
            if (c.family == Family::CauchyCharacteristic) {
                cp = characteristic_pair(c.char_s, c.t0, c.charpair.delta, c.charpair.sigma, c.H,
                                         c.A, c.B);
                CauchyData d;
                d.s = c.char_s;
                d.t = PolyFn::constant(c.t0);
                d.theta = PolyFn::constant(0.0);
                d.H = c.H;
                d.J = c.A;
                out.data = d;
            }
            out.validation = cp.validate();
            if (!out.validation.ok)
                throw ValidationError("characteristic pair: " + out.validation.errors.front());
            ShiftedOptions o;
            o.H = c.H;
            o.lambda = c.lambda;
            o.order = c.order;
            o.ode_step = c.ode_step;
            out.model = std::make_shared<ShiftedSurface>(
                ShiftedSurface::from_characteristic(cp, o));
            return out;
        }
    }
    throw Error("unreachable");
}

} // namespace tcmc
