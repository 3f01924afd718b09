#include "gset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace cimcut {

namespace {

bool blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

// Reads one line, stripping a trailing '\r'. Returns false at end of input.
bool next_line(std::istream& in, std::string& line, long& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    return false;
}

bool parse_long(const std::string& tok, long long& out) {
    std::size_t pos = 0;
    try {
        out = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == tok.size();
}

bool parse_double(const std::string& tok, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(tok, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == tok.size() && std::isfinite(out);
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Graph parse_gset(std::istream& in) {
    std::string line;
    long line_no = 0;

    long long n = 0, m = 0;
    bool have_header = false;
    while (next_line(in, line, line_no)) {
        if (blank(line)) continue;
        const auto tok = tokens(line);
        if (tok.size() != 2 || !parse_long(tok[0], n) || !parse_long(tok[1], m) ||
            n < 1 || m < 0)
            throw ParseError("malformed header at line " + std::to_string(line_no) +
                                 ": expected \"N m\"",
                             line_no);
        have_header = true;
        break;
    }
    if (!have_header) throw ParseError("empty input: missing \"N m\" header", 0);

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(m) * 2);

    while (static_cast<long long>(edges.size()) < m) {
        if (!next_line(in, line, line_no))
            throw ParseError("unexpected end of input: got " +
                                 std::to_string(edges.size()) + " of " +
                                 std::to_string(m) + " edges",
                             line_no);
        if (blank(line)) continue;
        const auto tok = tokens(line);
        long long i = 0, j = 0;
        double w = 0.0;
        if (tok.size() != 3 || !parse_long(tok[0], i) || !parse_long(tok[1], j) ||
            !parse_double(tok[2], w))
            throw ParseError("malformed edge at line " + std::to_string(line_no) +
                                 ": expected \"i j w\"",
                             line_no);
        if (i < 1 || i > n || j < 1 || j > n)
            throw ParseError("vertex index out of [1, " + std::to_string(n) +
                                 "] at line " + std::to_string(line_no),
                             line_no);
        if (i == j)
            throw ParseError("self-loop at line " + std::to_string(line_no), line_no);
        int u = static_cast<int>(i - 1), v = static_cast<int>(j - 1);
        if (u > v) std::swap(u, v);
        const std::uint64_t key =
            (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
        if (!seen.insert(key).second)
            throw ParseError("duplicate edge at line " + std::to_string(line_no),
                             line_no);
        edges.push_back({u, v, w});
    }

    while (next_line(in, line, line_no)) {
        if (!blank(line))
            throw ParseError("trailing content at line " + std::to_string(line_no),
                             line_no);
    }

    return Graph(static_cast<int>(n), std::move(edges));
}

Graph parse_gset_string(const std::string& text) {
    std::istringstream ss(text);
    return parse_gset(ss);
}

Graph parse_gset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file: " + path);
    return parse_gset(in);
}

namespace {

// Shortest decimal form that round-trips the double.
std::string format_weight(double w) {
    if (std::abs(w) < 1e15 && w == std::floor(w)) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(w));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

}  // namespace

void write_gset(const Graph& g, std::ostream& out) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges())
        out << (e.u + 1) << ' ' << (e.v + 1) << ' ' << format_weight(e.w) << '\n';
}

std::string write_gset_string(const Graph& g) {
    std::ostringstream ss;
    write_gset(g, ss);
    return ss.str();
}

void write_gset_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    write_gset(g, out);
    out.flush();
    if (!out) throw IoError("failed writing graph file: " + path);
}

}  // namespace cimcut
