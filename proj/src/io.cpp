#include "gpq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gpq/errors.hpp"

namespace gpq {

std::string fmt17(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw Error(Errc::ConfigError, "empty number");
    const char* first = s.data() + b;
    const char* last = s.data() + e + 1;
    if (*first == '+') ++first;
    double v = 0.0;
    auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last) throw Error(Errc::ConfigError, "not a number: '" + s + "'");
    return v;
}

void write_snapshot(std::ostream& os, const Grid1D& g, const CVec& u, double t) {
    check_field(u, g);
    os << "# L=" << fmt17(g.L) << " N=" << g.N << " t=" << fmt17(t) << '\n';
    for (int i = 0; i < g.N; ++i)
        os << fmt17(g.x(i)) << ' ' << fmt17(u[i].real()) << ' ' << fmt17(u[i].imag()) << '\n';
}

void write_snapshot(const std::string& path, const Grid1D& g, const CVec& u, double t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::ConfigError, "cannot write " + path);
    write_snapshot(f, g, u, t);
}

Snapshot read_snapshot(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw Error(Errc::ConfigError, "snapshot: missing header line");
    double L = NAN, t = NAN;
    long N = -1;
    std::istringstream hs(line.substr(2));
    std::string tok;
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        if (k == "L")
            L = parse_double(v);
        else if (k == "N")
            N = std::lround(parse_double(v));
        else if (k == "t")
            t = parse_double(v);
    }
    if (!(L > 0.0) || N <= 0 || !std::isfinite(t)) throw Error(Errc::ConfigError, "snapshot: bad header");
    Snapshot s;
    s.grid = make_grid(L, static_cast<int>(N));
    s.t = t;
    s.u.resize(s.grid.size());
    for (long i = 0; i < N; ++i) {
        if (!std::getline(is, line)) throw Error(Errc::ConfigError, "snapshot: truncated");
        std::istringstream ls(line);
        std::string xs, rs, ims;
        if (!(ls >> xs >> rs >> ims)) throw Error(Errc::ConfigError, "snapshot: malformed line " + std::to_string(i + 2));
        double x = parse_double(xs);
        if (std::abs(x - s.grid.x(static_cast<int>(i))) > 1e-9 * (1.0 + L))
            throw Error(Errc::ConfigError, "snapshot: node " + std::to_string(i) + " off the uniform grid");
        s.u[i] = {parse_double(rs), parse_double(ims)};
    }
    check_field(s.u, s.grid);
    return s;
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::ConfigError, "cannot read " + path);
    return read_snapshot(f);
}

}  // namespace gpq
