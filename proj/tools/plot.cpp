#include "plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace affdec::plot {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;

const char* colour(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % std::size(palette)];
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double x) { return fmt::format("{:.6g}", x); }

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;

    double unit(double v) const {
        const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return std::clamp(t, -0.05, 1.05);
    }
};

Axis make_axis(const std::vector<double>& values, bool log) {
    Axis a{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), log};
    for (double v : values) {
        if (!std::isfinite(v) || (log && v <= 0)) continue;
        const double t = log ? std::log10(v) : v;
        a.lo = std::min(a.lo, t);
        a.hi = std::max(a.hi, t);
    }
    if (!std::isfinite(a.lo)) a = {0, 1, log};
    if (a.hi - a.lo < 1e-12) {
        a.lo -= 0.5;
        a.hi += 0.5;
    }
    const double pad = 0.05 * (a.hi - a.lo);
    a.lo -= pad;
    a.hi += pad;
    return a;
}

std::vector<double> ticks(const Axis& a) {
    std::vector<double> out;
    const double span = a.hi - a.lo;
    const double raw = span / 5;
    const double mag = std::pow(10, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    for (double t = std::ceil(a.lo / step) * step; t <= a.hi + 1e-12; t += step) out.push_back(t);
    return out;
}

}  // namespace

std::string to_csv(const Chart& chart) {
    std::string out = "series,x,y\n";
    for (const auto& s : chart.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) out += s.name + "," + num(s.x[i]) + "," + num(s.y[i]) + "\n";
    return out;
}

std::string to_svg(const Chart& chart) {
    std::vector<double> xs, ys;
    for (const auto& s : chart.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Axis ax = make_axis(xs, chart.loglog), ay = make_axis(ys, chart.loglog);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + ax.unit(v) * pw; };
    auto py = [&](double v) { return kTop + (1 - ay.unit(v)) * ph; };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight);
    out += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       kLeft + pw / 2, escape(chart.title));
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                       kTop, pw, ph);
    for (double t : ticks(ax)) {
        const double x = kLeft + (t - ax.lo) / (ax.hi - ax.lo) * pw;
        const std::string label = chart.loglog ? num(std::pow(10, t)) : num(t);
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#ddd\"/>\n", x, kTop, kTop + ph);
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, kTop + ph + 16, label);
    }
    for (double t : ticks(ay)) {
        const double y = kTop + (1 - (t - ay.lo) / (ay.hi - ay.lo)) * ph;
        const std::string label = chart.loglog ? num(std::pow(10, t)) : num(t);
        out += fmt::format("<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#ddd\"/>\n", y, kLeft, kLeft + pw);
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, y + 4, label);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + pw / 2, kHeight - 12,
                       escape(chart.xlabel));
    out += fmt::format("<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
                       kTop + ph / 2, escape(chart.ylabel));

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const Series& s = chart.series[k];
        std::string points;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (chart.loglog && (s.x[i] <= 0 || s.y[i] <= 0)) continue;
            points += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
            out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", px(s.x[i]), py(s.y[i]),
                               colour(k));
        }
        if (!points.empty()) points.pop_back();
        out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", points,
                           colour(k));
        const double ly = kTop + 10 + 18 * k;
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                           kLeft + pw + 12, ly, kLeft + pw + 32, colour(k));
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kLeft + pw + 38, ly + 4, escape(s.name));
    }
    out += "</svg>\n";
    return out;
}

std::string tiles_csv(const std::vector<Tile>& tiles) {
    std::string out = "group,cx,cy,ux,uy,vx,vy\n";
    for (const auto& t : tiles) {
        const Point2 c = t.omega.center(), u = t.omega.u(), v = t.omega.v();
        out += fmt::format("{},{},{},{},{},{},{}\n", t.group, num(c[0]), num(c[1]), num(u[0]), num(u[1]), num(v[0]),
                           num(v[1]));
    }
    return out;
}

std::string tiles_svg(const std::string& title, const std::vector<Tile>& tiles) {
    constexpr double size = 560, margin = 40;
    auto px = [&](double x) { return margin + (x + 1) / 2 * size; };
    auto py = [&](double y) { return margin + (1 - y) / 2 * size; };
    std::map<int, std::size_t> index;
    for (const auto& t : tiles) index.emplace(t.group, 0);
    std::size_t k = 0;
    for (auto& [g, i] : index) i = k++;

    const double w = size + 2 * margin + 120, h = size + 2 * margin;
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        w, h);
    out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", margin + size / 2,
                       escape(title));
    out += fmt::format("<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{1}\" fill=\"none\" stroke=\"black\"/>\n",
                       margin, size);
    for (const auto& t : tiles) {
        std::string points;
        for (const Point2& c : t.omega.corners()) points += fmt::format("{:.2f},{:.2f} ", px(c[0]), py(c[1]));
        points.pop_back();
        out += fmt::format("<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.15\" stroke=\"{}\" stroke-width=\"0.6\"/>\n",
                           points, colour(index.at(t.group)), colour(index.at(t.group)));
    }
    for (const auto& [g, i] : index) {
        const double y = margin + 10 + 18 * i;
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", margin + size + 16,
                           y - 9, colour(i));
        out += fmt::format("<text x=\"{}\" y=\"{}\">σ = 2^{}</text>\n", margin + size + 34, y + 1, -g);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace affdec::plot
