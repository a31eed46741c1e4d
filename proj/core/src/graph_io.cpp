#include "g3ad/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "g3ad/errors.hpp"

namespace g3ad {

namespace {

std::string trimmed(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Matrix load_attributes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open attribute file " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const std::string t = trimmed(cell);
            try {
                size_t pos = 0;
                const double v = std::stod(t, &pos);
                if (pos != t.size()) throw std::invalid_argument(t);
                row.push_back(v);
            } catch (const std::exception&) {
                throw FormatError(path + ":" + std::to_string(line_no) + ": non-numeric attribute '" + t + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError(path + ":" + std::to_string(line_no) + ": ragged row, expected " +
                              std::to_string(rows.front().size()) + " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError(path + ": attribute file is empty");
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[i][j];
            if (!std::isfinite(m(i, j)))
                throw FormatError(path + ":" + std::to_string(i + 1) + ": non-finite attribute value");
        }
    return m;
}

}  // namespace

Graph load_graph(const std::string& edge_path, const std::string& attr_path, LoadReport* report) {
    Matrix attrs = load_attributes(attr_path);
    const int n = attrs.rows();

    std::ifstream in(edge_path);
    if (!in) throw FormatError("cannot open edge file " + edge_path);
    std::set<std::pair<int, int>> edges;
    LoadReport rep;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        std::stringstream ss(t);
        long u = -1, v = -1;
        if (!(ss >> u >> v))
            throw FormatError(edge_path + ":" + std::to_string(line_no) + ": expected 'u<TAB>v', got '" + t + "'");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw FormatError(edge_path + ":" + std::to_string(line_no) + ": node index out of range for n=" +
                              std::to_string(n));
        if (u == v) {
            ++rep.dropped_self_loops;
            continue;
        }
        const int a = static_cast<int>(std::min(u, v));
        const int b = static_cast<int>(std::max(u, v));
        if (!edges.insert({a, b}).second) ++rep.duplicate_edges;
    }
    if (report) *report = rep;
    return Graph::build(std::move(attrs), {edges.begin(), edges.end()});
}

void save_graph(const Graph& g, const std::string& edge_path, const std::string& attr_path) {
    {
        std::ofstream out(edge_path);
        if (!out) throw FormatError("cannot write edge file " + edge_path);
        for (const auto& [u, v] : g.edge_list()) out << u << '\t' << v << '\n';
    }
    {
        std::ofstream out(attr_path);
        if (!out) throw FormatError("cannot write attribute file " + attr_path);
        char buf[40];
        for (int i = 0; i < g.n(); ++i) {
            for (int j = 0; j < g.d(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.17g", g.attributes()(i, j));
                out << (j ? "," : "") << buf;
            }
            out << '\n';
        }
    }
}

AnomalyGroundTruth load_labels(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open labels file " + path);
    AnomalyGroundTruth truth;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        if (t != "0" && t != "1")
            throw FormatError(path + ":" + std::to_string(line_no) + ": label must be 0 or 1, got '" + t + "'");
        truth.labels.push_back(t == "1" ? 1 : 0);
    }
    if (static_cast<int>(truth.labels.size()) != n)
        throw FormatError(path + ": expected " + std::to_string(n) + " labels, got " +
                          std::to_string(truth.labels.size()));
    return truth;
}

void save_labels(const AnomalyGroundTruth& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write labels file " + path);
    for (int y : truth.labels) out << y << '\n';
}

}  // namespace g3ad
