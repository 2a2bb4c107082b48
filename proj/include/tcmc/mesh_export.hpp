#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "tcmc/frame.hpp"
#include "tcmc/geometry.hpp"

namespace tcmc {

struct Polyline {
    std::vector<MinkVec> points;
};

namespace detail {

inline std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// grid vertex numbering for finite samples; 0 means "no vertex"
inline std::vector<int> vertex_ids(const FrameField& f, int& count) {
    std::vector<int> ids(f.pts.size(), 0);
    count = 0;
    for (size_t i = 0; i < f.pts.size(); ++i)
        if (f.pts[i].finite) ids[i] = ++count;
    return ids;
}

inline bool quad_on_bigcell(const FrameField& f, int i, int j) {
    return f.at(i, j).cell.stratum == Stratum::BigCell &&
           f.at(i + 1, j).cell.stratum == Stratum::BigCell &&
           f.at(i + 1, j + 1).cell.stratum == Stratum::BigCell &&
           f.at(i, j + 1).cell.stratum == Stratum::BigCell;
}

} // namespace detail

// Wavefront OBJ: vertices in (t, x1, x2) order, quad faces over cells whose
// four corners all sit on the big cell, singular polylines as line elements.
// Blow-up points get no vertex at all (omission, not clamping).
inline void export_obj(const FrameField& f, const std::vector<Polyline>& curves,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path);
    int nverts = 0;
    const std::vector<int> id = detail::vertex_ids(f, nverts);
    for (size_t i = 0; i < f.pts.size(); ++i) {
        const PointSample& p = f.pts[i];
        if (!p.finite) continue;
        out << "v " << detail::g17(p.f.t) << " " << detail::g17(p.f.x1) << " "
            << detail::g17(p.f.x2) << "\n";
    }
    for (int j = 0; j + 1 < f.grid.nb; ++j)
        for (int i = 0; i + 1 < f.grid.na; ++i) {
            if (!detail::quad_on_bigcell(f, i, j)) continue;
            const int a = id[static_cast<size_t>(j) * f.grid.na + i];
            const int b = id[static_cast<size_t>(j) * f.grid.na + i + 1];
            const int c = id[static_cast<size_t>(j + 1) * f.grid.na + i + 1];
            const int d = id[static_cast<size_t>(j + 1) * f.grid.na + i];
            out << "f " << a << " " << b << " " << c << " " << d << "\n";
        }
    int next = nverts;
    for (const auto& pl : curves) {
        const int start = next + 1;
        for (const MinkVec& v : pl.points) {
            out << "v " << detail::g17(v.t) << " " << detail::g17(v.x1) << " "
                << detail::g17(v.x2) << "\n";
            ++next;
        }
        for (int k = start; k + 1 <= next; ++k) out << "l " << k << " " << k + 1 << "\n";
    }
    if (!out) throw IOError("write failure on " + path);
}

// ASCII PLY with vertex/face elements and an edge element for the polylines.
inline void export_ply(const FrameField& f, const std::vector<Polyline>& curves,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path);
    int nverts = 0;
    const std::vector<int> id = detail::vertex_ids(f, nverts);
    int nfaces = 0;
    for (int j = 0; j + 1 < f.grid.nb; ++j)
        for (int i = 0; i + 1 < f.grid.na; ++i)
            if (detail::quad_on_bigcell(f, i, j)) ++nfaces;
    int curve_verts = 0, nedges = 0;
    for (const auto& pl : curves) {
        curve_verts += static_cast<int>(pl.points.size());
        nedges += std::max(0, static_cast<int>(pl.points.size()) - 1);
    }
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << nverts + curve_verts << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << nfaces << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "element edge " << nedges << "\n";
    out << "property int vertex1\nproperty int vertex2\n";
    out << "end_header\n";
    for (size_t i = 0; i < f.pts.size(); ++i) {
        const PointSample& p = f.pts[i];
        if (!p.finite) continue;
        out << detail::g17(p.f.t) << " " << detail::g17(p.f.x1) << " " << detail::g17(p.f.x2)
            << "\n";
    }
    for (const auto& pl : curves)
        for (const MinkVec& v : pl.points)
            out << detail::g17(v.t) << " " << detail::g17(v.x1) << " " << detail::g17(v.x2)
                << "\n";
    for (int j = 0; j + 1 < f.grid.nb; ++j)
        for (int i = 0; i + 1 < f.grid.na; ++i) {
            if (!detail::quad_on_bigcell(f, i, j)) continue;
            // PLY indices are 0-based
            out << "4 " << id[static_cast<size_t>(j) * f.grid.na + i] - 1 << " "
                << id[static_cast<size_t>(j) * f.grid.na + i + 1] - 1 << " "
                << id[static_cast<size_t>(j + 1) * f.grid.na + i + 1] - 1 << " "
                << id[static_cast<size_t>(j + 1) * f.grid.na + i] - 1 << "\n";
        }
    int base = nverts;
    for (const auto& pl : curves) {
        for (size_t k = 0; k + 1 < pl.points.size(); ++k)
            out << base + static_cast<int>(k) << " " << base + static_cast<int>(k) + 1 << "\n";
        base += static_cast<int>(pl.points.size());
    }
    if (!out) throw IOError("write failure on " + path);
}

// CSV: one row per grid point carrying every SurfaceSample field, printed
// with 17 significant digits so a re-read reproduces the doubles bit-exactly.
inline void export_csv(const FrameField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path);
    out << "i,j,a,b,x,y,cell,finite,f_t,f_x1,f_x2,fx_t,fx_x1,fx_x2,fy_t,fy_x1,fy_x2,"
           "N_t,N_x1,N_x2,nE_t,nE_x1,nE_x2,chi,c1,b2,eomega,rho,eps1,eps2,c_m1,A0,"
           "residual,condition,blowup_mag\n";
    auto minkcols = [&](const MinkVec& v) {
        return detail::g17(v.t) + "," + detail::g17(v.x1) + "," + detail::g17(v.x2);
    };
    for (int j = 0; j < f.grid.nb; ++j)
        for (int i = 0; i < f.grid.na; ++i) {
            const PointSample& p = f.at(i, j);
            out << i << "," << j << "," << detail::g17(p.a) << "," << detail::g17(p.b) << ","
                << detail::g17(p.x) << "," << detail::g17(p.y) << ","
                << stratum_name(p.cell.stratum) << "," << (p.finite ? 1 : 0) << ","
                << minkcols(p.f) << "," << minkcols(p.fx) << "," << minkcols(p.fy) << ","
                << (p.has_N ? minkcols(p.N) : "nan,nan,nan") << "," << minkcols(p.nE) << ","
                << detail::g17(p.chi) << "," << detail::g17(p.c1) << "," << detail::g17(p.b2)
                << "," << detail::g17(p.eomega) << "," << detail::g17(p.rho) << "," << p.eps1
                << "," << p.eps2 << "," << detail::g17(p.c_m1) << "," << detail::g17(p.A0) << ","
                << detail::g17(p.cell.residual) << "," << detail::g17(p.cell.condition) << ","
                << detail::g17(p.blowup_mag) << "\n";
        }
    if (!out) throw IOError("write failure on " + path);
}

} // namespace tcmc
