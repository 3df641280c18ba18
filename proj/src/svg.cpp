#include "qarch/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qarch::cli {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

Range span_of(const std::vector<Series>& series, bool use_x) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const Series& s : series)
        for (double v : (use_x ? s.x : s.y)) {
            if (!std::isfinite(v)) throw std::invalid_argument("chart data must be finite");
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
    if (lo == hi) {
        const double pad = std::max(0.5, std::abs(lo) * 0.1);
        lo -= pad;
        hi += pad;
    } else {
        const double pad = (hi - lo) * 0.05;
        lo -= pad;
        hi += pad;
    }
    return {lo, hi};
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series,
                              int width, int height) {
    if (series.empty()) throw std::invalid_argument("chart needs at least one series");
    for (const Series& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("series x/y length mismatch");
        if (s.x.empty()) throw std::invalid_argument("empty chart series");
    }

    const double left = 64, right = 16, top = 36, bottom = 46;
    const double px0 = left, px1 = width - right;
    const double py0 = height - bottom, py1 = top;  // y grows downward in SVG
    const Range xr = span_of(series, true);
    const Range yr = span_of(series, false);

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"14\" font-weight=\"bold\">"
       << escape(title) << "</text>\n";

    const int n_ticks = 5;
    for (int i = 0; i < n_ticks; ++i) {
        const double f = static_cast<double>(i) / (n_ticks - 1);
        const double xv = xr.lo + f * (xr.hi - xr.lo);
        const double yv = yr.lo + f * (yr.hi - yr.lo);
        const double xp = xr.map(xv, px0, px1);
        const double yp = yr.map(yv, py0, py1);
        os << "<line x1=\"" << num(xp) << "\" y1=\"" << num(py0) << "\" x2=\"" << num(xp)
           << "\" y2=\"" << num(py1) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        os << "<line x1=\"" << num(px0) << "\" y1=\"" << num(yp) << "\" x2=\"" << num(px1)
           << "\" y2=\"" << num(yp) << "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << num(xp) << "\" y=\"" << num(py0 + 16)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
           << tick_label(xv) << "</text>\n";
        os << "<text x=\"" << num(px0 - 6) << "\" y=\"" << num(yp + 3)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << tick_label(yv)
           << "</text>\n";
    }

    os << "<line x1=\"" << num(px0) << "\" y1=\"" << num(py0) << "\" x2=\"" << num(px1) << "\" y2=\""
       << num(py0) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << num(px0) << "\" y1=\"" << num(py0) << "\" x2=\"" << num(px0) << "\" y2=\""
       << num(py1) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const std::string color = s.color.empty() ? kPalette[si % 5] : s.color;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) os << ' ';
            os << num(xr.map(s.x[i], px0, px1)) << ',' << num(yr.map(s.y[i], py0, py1));
        }
        os << "\"/>\n";
    }

    if (series.size() > 1) {
        double ly = py1 + 10;
        for (std::size_t si = 0; si < series.size(); ++si) {
            const Series& s = series[si];
            const std::string color = s.color.empty() ? kPalette[si % 5] : s.color;
            os << "<rect x=\"" << num(px1 - 150) << "\" y=\"" << num(ly - 8)
               << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
            os << "<text x=\"" << num(px1 - 136) << "\" y=\"" << num(ly + 1)
               << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
            ly += 16;
        }
    }

    os << "<text x=\"" << num((px0 + px1) / 2) << "\" y=\"" << num(height - 8.0)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(x_label)
       << "</text>\n";
    os << "<text x=\"14\" y=\"" << num((py0 + py1) / 2) << "\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
       << num((py0 + py1) / 2) << ")\">" << escape(y_label) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace qarch::cli
