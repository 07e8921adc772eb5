#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "stadion/artifacts.hpp"

namespace stadion {

namespace {

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
    "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Panel {
    double x0, y0, w, h;  // plot rectangle in canvas pixels
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void fit_range(double& lo, double& hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi))) {
        lo = 0;
        hi = 1;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
}

void panel_frame(std::string& s, const Panel& p, const std::string& title,
                 const std::string& x_label, const std::string& y_label) {
    s += "<rect x=\"" + num(p.x0) + "\" y=\"" + num(p.y0) + "\" width=\"" + num(p.w) +
         "\" height=\"" + num(p.h) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + num(p.x0 + p.w / 2) + "\" y=\"" + num(p.y0 - 10) +
         "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" + title +
         "</text>\n";
    s += "<text x=\"" + num(p.x0 + p.w / 2) + "\" y=\"" + num(p.y0 + p.h + 32) +
         "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" + x_label +
         "</text>\n";
    s += "<text x=\"" + num(p.x0 - 44) + "\" y=\"" + num(p.y0 + p.h / 2) +
         "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 " +
         num(p.x0 - 44) + " " + num(p.y0 + p.h / 2) + ")\">" + y_label + "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        double fx = p.xmin + (p.xmax - p.xmin) * t / 4.0;
        double fy = p.ymin + (p.ymax - p.ymin) * t / 4.0;
        double cx = p.px(fx), cy = p.py(fy);
        s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(p.y0 + p.h) + "\" x2=\"" + num(cx) +
             "\" y2=\"" + num(p.y0 + p.h + 4) + "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + num(cx) + "\" y=\"" + num(p.y0 + p.h + 16) +
             "\" text-anchor=\"middle\" font-size=\"10\" font-family=\"sans-serif\">" +
             tick_label(fx) + "</text>\n";
        s += "<line x1=\"" + num(p.x0 - 4) + "\" y1=\"" + num(cy) + "\" x2=\"" + num(p.x0) +
             "\" y2=\"" + num(cy) + "\" stroke=\"#333\"/>\n";
        s += "<text x=\"" + num(p.x0 - 7) + "\" y=\"" + num(cy + 3) +
             "\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">" + tick_label(fy) +
             "</text>\n";
    }
}

void polyline(std::string& s, const Panel& p, const std::vector<double>& xs,
              const std::vector<double>& ys, const char* color) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(ys[i])) continue;
        if (!pts.empty()) pts += ' ';
        pts += num(p.px(xs[i])) + "," + num(p.py(ys[i]));
    }
    s += "<polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
}

void span_of(const std::vector<double>& v, double& lo, double& hi) {
    for (double x : v) {
        if (!std::isfinite(x)) continue;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
}

}  // namespace

std::string paths_svg(const SelectionReport& report, const RunMeta& meta) {
    const double W = 1240, H = 860;
    Panel panels[4] = {
        {70, 40, 460, 320},
        {700, 40, 460, 320},
        {70, 460, 460, 320},
        {700, 460, 460, 320},
    };
    const char* titles[3] = {"between-cluster stability", "within-cluster stability",
                             "stability difference"};

    for (int which = 0; which < 3; ++which) {
        Panel& p = panels[which];
        p.xmin = report.grid.values.front();
        p.xmax = report.grid.values.back();
        double lo = 1e300, hi = -1e300;
        for (const StadionPath& path : report.paths) {
            const std::vector<double>& ys =
                which == 0 ? path.stab_b : (which == 1 ? path.stab_w : path.stadion);
            span_of(ys, lo, hi);
        }
        fit_range(lo, hi);
        p.ymin = lo;
        p.ymax = hi;
    }

    std::vector<TradeOffRow> trade = trade_off_table(report, meta.aggregation);
    Panel& tp = panels[3];
    tp.xmin = 1;
    tp.xmax = static_cast<double>(report.k_max);
    if (tp.xmax <= tp.xmin) tp.xmax = tp.xmin + 1;
    {
        double lo = 1e300, hi = -1e300;
        std::vector<double> col;
        for (const TradeOffRow& r : trade) {
            span_of({r.stab_b, r.stab_w, r.stadion}, lo, hi);
        }
        fit_range(lo, hi);
        tp.ymin = lo;
        tp.ymax = hi;
    }

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
         "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(W) + "\" height=\"" + num(H) +
         "\" fill=\"#ffffff\"/>\n";

    for (int which = 0; which < 3; ++which) {
        Panel& p = panels[which];
        panel_frame(s, p, titles[which], "epsilon", which == 2 ? "difference" : "stability");
        for (std::size_t i = 0; i < report.paths.size(); ++i) {
            const StadionPath& path = report.paths[i];
            const std::vector<double>& ys =
                which == 0 ? path.stab_b : (which == 1 ? path.stab_w : path.stadion);
            polyline(s, p, report.grid.values, ys, kPalette[i % kPaletteSize]);
        }
    }

    std::string agg_name = to_string(meta.aggregation);
    panel_frame(s, tp, "trade-off (" + agg_name + " over epsilon)", "k", "value");
    std::vector<double> ks, tb, tw, ts;
    for (const TradeOffRow& r : trade) {
        ks.push_back(r.k);
        tb.push_back(r.stab_b);
        tw.push_back(r.stab_w);
        ts.push_back(r.stadion);
    }
    polyline(s, tp, ks, tb, "#1f77b4");
    polyline(s, tp, ks, tw, "#ff7f0e");
    polyline(s, tp, ks, ts, "#2ca02c");
    const char* trade_names[3] = {"between", "within", "difference"};
    const char* trade_colors[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    for (int i = 0; i < 3; ++i) {
        double lx = tp.x0 + tp.w - 110, ly = tp.y0 + 16 + 16 * i;
        s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 18) +
             "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + trade_colors[i] +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(lx + 24) + "\" y=\"" + num(ly) +
             "\" font-size=\"10\" font-family=\"sans-serif\">" + trade_names[i] + "</text>\n";
    }

    // per-K legend down the middle
    for (std::size_t i = 0; i < report.paths.size(); ++i) {
        double lx = 560, ly = 60 + 16 * static_cast<double>(i);
        s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 18) +
             "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + std::string(kPalette[i % kPaletteSize]) +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(lx + 24) + "\" y=\"" + num(ly) +
             "\" font-size=\"10\" font-family=\"sans-serif\">k=" + std::to_string(report.paths[i].k) +
             "</text>\n";
    }

    s += "</svg>\n";
    return s;
}

}  // namespace stadion
