#include "g3ad/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "g3ad/errors.hpp"

namespace g3ad {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Canvas {
    double width = 640, height = 400;
    double margin_left = 50, margin_right = 15, margin_top = 15, margin_bottom = 35;
    double plot_w() const { return width - margin_left - margin_right; }
    double plot_h() const { return height - margin_top - margin_bottom; }
    double x(double frac) const { return margin_left + frac * plot_w(); }
    double y(double frac) const { return margin_top + (1.0 - frac) * plot_h(); }
};

void svg_open(std::ostringstream& out, const Canvas& c) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width << "\" height=\"" << c.height
        << "\" viewBox=\"0 0 " << c.width << " " << c.height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void svg_axes(std::ostringstream& out, const Canvas& c, const std::string& x_lo, const std::string& x_hi,
              const std::string& y_hi) {
    out << "<line x1=\"" << c.x(0) << "\" y1=\"" << c.y(0) << "\" x2=\"" << c.x(1) << "\" y2=\"" << c.y(0)
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << c.x(0) << "\" y1=\"" << c.y(0) << "\" x2=\"" << c.x(0) << "\" y2=\"" << c.y(1)
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << c.x(0) << "\" y=\"" << c.y(0) + 20 << "\" font-size=\"11\">" << x_lo << "</text>\n"
        << "<text x=\"" << c.x(1) - 40 << "\" y=\"" << c.y(0) + 20 << "\" font-size=\"11\">" << x_hi
        << "</text>\n"
        << "<text x=\"" << c.x(0) - 45 << "\" y=\"" << c.y(1) + 10 << "\" font-size=\"11\">" << y_hi
        << "</text>\n";
}

}  // namespace

ScoreHistogram score_histogram(const std::vector<double>& scores, const std::vector<int>& labels, int bins) {
    if (scores.empty()) throw ConfigError("score_histogram: no scores");
    if (bins < 1) throw ConfigError("score_histogram: bins must be >= 1");
    if (!labels.empty() && labels.size() != scores.size())
        throw ConfigError("score_histogram: labels length does not match scores");

    ScoreHistogram h;
    h.bins = bins;
    h.labeled = !labels.empty();
    h.lo = *std::min_element(scores.begin(), scores.end());
    h.hi = *std::max_element(scores.begin(), scores.end());
    if (h.hi <= h.lo) h.hi = h.lo + 1.0;  // degenerate all-equal case
    h.normal_counts.assign(bins, 0);
    if (h.labeled) h.anomaly_counts.assign(bins, 0);

    double normal_sum = 0, anomaly_sum = 0;
    long normal_n = 0, anomaly_n = 0;
    const double width = (h.hi - h.lo) / bins;
    for (size_t i = 0; i < scores.size(); ++i) {
        int bin = static_cast<int>((scores[i] - h.lo) / width);
        bin = std::clamp(bin, 0, bins - 1);
        const bool anomalous = h.labeled && labels[i] == 1;
        if (anomalous) {
            ++h.anomaly_counts[bin];
            anomaly_sum += scores[i];
            ++anomaly_n;
        } else {
            ++h.normal_counts[bin];
            normal_sum += scores[i];
            ++normal_n;
        }
    }
    h.normal_mean = normal_n > 0 ? normal_sum / normal_n : 0.0;
    h.anomaly_mean = anomaly_n > 0 ? anomaly_sum / anomaly_n : 0.0;
    return h;
}

std::string histogram_csv(const ScoreHistogram& h) {
    std::ostringstream out;
    out << (h.labeled ? "bin_lo,bin_hi,normal_count,anomaly_count\n" : "bin_lo,bin_hi,count\n");
    const double width = (h.hi - h.lo) / h.bins;
    for (int b = 0; b < h.bins; ++b) {
        out << fmt(h.lo + b * width) << ',' << fmt(h.lo + (b + 1) * width) << ',' << h.normal_counts[b];
        if (h.labeled) out << ',' << h.anomaly_counts[b];
        out << '\n';
    }
    return out.str();
}

std::string histogram_svg(const ScoreHistogram& h) {
    Canvas c;
    long peak = 1;
    for (long v : h.normal_counts) peak = std::max(peak, v);
    for (long v : h.anomaly_counts) peak = std::max(peak, v);

    std::ostringstream out;
    svg_open(out, c);
    svg_axes(out, c, fmt(h.lo), fmt(h.hi), std::to_string(peak));

    auto draw_series = [&](const std::vector<long>& counts, const char* color) {
        const double bar_w = c.plot_w() / h.bins;
        for (int b = 0; b < h.bins; ++b) {
            if (counts[b] == 0) continue;
            const double frac = static_cast<double>(counts[b]) / static_cast<double>(peak);
            out << "<rect x=\"" << fmt(c.x(0) + b * bar_w) << "\" y=\"" << fmt(c.y(frac)) << "\" width=\""
                << fmt(bar_w) << "\" height=\"" << fmt(c.y(0) - c.y(frac)) << "\" fill=\"" << color
                << "\" fill-opacity=\"0.55\"/>\n";
        }
    };
    auto draw_mean = [&](double mean, const char* color) {
        const double frac = (mean - h.lo) / (h.hi - h.lo);
        const double px = c.x(std::clamp(frac, 0.0, 1.0));
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(c.y(0)) << "\" x2=\"" << fmt(px) << "\" y2=\""
            << fmt(c.y(1)) << "\" stroke=\"" << color << "\" stroke-dasharray=\"6,4\" stroke-width=\"1.5\"/>\n";
    };

    draw_series(h.normal_counts, "#4878cf");
    draw_mean(h.normal_mean, "#4878cf");
    out << "<text x=\"" << c.x(1) - 110 << "\" y=\"" << c.y(1) + 12 << "\" font-size=\"11\" fill=\"#4878cf\">"
        << (h.labeled ? "normal" : "scores") << "</text>\n";
    if (h.labeled) {
        draw_series(h.anomaly_counts, "#d1434b");
        draw_mean(h.anomaly_mean, "#d1434b");
        out << "<text x=\"" << c.x(1) - 110 << "\" y=\"" << c.y(1) + 26 << "\" font-size=\"11\" fill=\"#d1434b\">"
            << "anomaly</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string loss_curve_svg(const std::vector<LossBreakdown>& history) {
    if (history.empty()) throw ConfigError("loss_curve_svg: empty history");
    Canvas c;
    double hi = 0;
    for (const auto& e : history) hi = std::max({hi, e.total, e.attr, e.topo, e.cons, e.cc});
    if (hi <= 0) hi = 1;

    std::ostringstream out;
    svg_open(out, c);
    svg_axes(out, c, "0", std::to_string(history.size() - 1), fmt(hi));

    struct Series {
        const char* name;
        const char* color;
        double LossBreakdown::* field;
    };
    const Series series[] = {
        {"total", "#333333", &LossBreakdown::total}, {"attr", "#4878cf", &LossBreakdown::attr},
        {"topo", "#d1434b", &LossBreakdown::topo},   {"cons", "#6acc65", &LossBreakdown::cons},
        {"cc", "#b47cc7", &LossBreakdown::cc},
    };
    const double denom = history.size() > 1 ? static_cast<double>(history.size() - 1) : 1.0;
    int label_row = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t e = 0; e < history.size(); ++e)
            out << fmt(c.x(e / denom)) << ',' << fmt(c.y(history[e].*s.field / hi)) << ' ';
        out << "\"/>\n";
        out << "<text x=\"" << c.x(1) - 50 << "\" y=\"" << c.y(1) + 12 + 13 * label_row++ << "\" font-size=\"11\" fill=\""
            << s.color << "\">" << s.name << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace g3ad
