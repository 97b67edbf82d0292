#pragma once

#include <iosfwd>
#include <string>

#include "gpq/grid.hpp"

namespace gpq {

// 17 significant digits, scientific, locale-independent
std::string fmt17(double v);

struct Snapshot {
    Grid1D grid;
    double t = 0.0;
    CVec u;
};

// "# L=<L> N=<N> t=<t>" then one "x re im" line per node
void write_snapshot(std::ostream& os, const Grid1D& g, const CVec& u, double t);
void write_snapshot(const std::string& path, const Grid1D& g, const CVec& u, double t);
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::string& path);

// parse a double with '.' as decimal separator regardless of locale
double parse_double(const std::string& s);

}  // namespace gpq
