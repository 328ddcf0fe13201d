#include "srnlsd/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "srnlsd/errors.hpp"

namespace srnlsd {

namespace {

using Rgb = std::array<double, 3>;

constexpr Rgb kLow{33, 102, 172};
constexpr Rgb kMid{247, 247, 247};
constexpr Rgb kHigh{178, 24, 43};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

std::string hex(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(std::lround(c[0])),
                  static_cast<int>(std::lround(c[1])), static_cast<int>(std::lround(c[2])));
    return buf;
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    t = std::clamp(t, 0.0, 1.0);
    return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t};
}

Rgb rate_color(double rate, double nominal, double vmax) {
    if (rate <= nominal) return lerp(kLow, kMid, nominal > 0.0 ? rate / nominal : 1.0);
    return lerp(kMid, kHigh, (rate - nominal) / (vmax - nominal));
}

struct PanelKey {
    double df;
    bool srnlsd;
    friend bool operator<(const PanelKey& a, const PanelKey& b) {
        return std::pair(a.df, a.srnlsd) < std::pair(b.df, b.srnlsd);
    }
};

}  // namespace

std::string render_size_heatmap(const std::vector<SizeRecord>& records, const HeatmapOptions& options) {
    if (records.empty()) throw ParseError("no cells");

    std::set<double> dfs;
    std::set<bool> tests;
    std::set<std::size_t> t_set;
    std::set<std::size_t> axis_set;
    std::map<PanelKey, std::map<std::pair<std::size_t, std::size_t>, const SizeRecord*>> panels;
    double max_rate = 0.0;
    for (const auto& r : records) {
        dfs.insert(r.df);
        tests.insert(r.srnlsd);
        t_set.insert(r.t);
        axis_set.insert(r.axis_value);
        panels[{r.df, r.srnlsd}][{r.t, r.axis_value}] = &r;
        if (r.rate) max_rate = std::max(max_rate, *r.rate);
    }
    const std::string axis_name(to_string(records.front().axis));
    const double nominal = options.nominal;
    const double vmax = std::max({2.0 * nominal, max_rate, nominal + 1e-9});

    const std::vector<std::size_t> t_values(t_set.rbegin(), t_set.rend());  // largest T on top
    const std::vector<std::size_t> axis_values(axis_set.begin(), axis_set.end());
    const double cell = options.cell_px;
    const double margin_left = 64.0;
    const double margin_top = 48.0;
    const double panel_w = cell * static_cast<double>(axis_values.size());
    const double panel_h = cell * static_cast<double>(t_values.size());
    const double gap_x = 80.0;
    const double gap_y = 84.0;
    const double legend_w = 110.0;
    const auto n_cols = static_cast<double>(tests.size());
    const auto n_rows = static_cast<double>(dfs.size());
    const double width = margin_left + n_cols * panel_w + (n_cols - 1.0) * gap_x + 40.0 + legend_w;
    const double height = margin_top + n_rows * panel_h + (n_rows - 1.0) * gap_y + 70.0;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width) << "\" height=\""
        << fmt("%.0f", height) << "\" viewBox=\"0 0 " << fmt("%.0f", width) << ' ' << fmt("%.0f", height)
        << "\" font-family=\"Helvetica, Arial, sans-serif\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
        << "<text x=\"" << fmt("%.1f", width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << "Empirical size (rejection rate under the null, nominal " << fmt("%g", nominal) << ")</text>\n";

    std::size_t row = 0;
    for (double df : dfs) {
        std::size_t col = 0;
        for (bool sr : tests) {
            const double x0 = margin_left + static_cast<double>(col) * (panel_w + gap_x);
            const double y0 = margin_top + static_cast<double>(row) * (panel_h + gap_y);
            const auto found = panels.find({df, sr});
            svg << "<g class=\"panel\" data-df=\"" << fmt("%g", df) << "\" data-test=\"" << (sr ? "srnlsd" : "nlsd")
                << "\">\n";
            svg << "<text x=\"" << fmt("%.1f", x0 + panel_w / 2.0) << "\" y=\"" << fmt("%.1f", y0 - 10.0)
                << "\" text-anchor=\"middle\" font-size=\"13\">" << (sr ? "SR-NLSD" : "NLSD") << ", df = "
                << fmt("%g", df) << "</text>\n";
            for (std::size_t i = 0; i < t_values.size(); ++i) {
                for (std::size_t j = 0; j < axis_values.size(); ++j) {
                    const double x = x0 + static_cast<double>(j) * cell;
                    const double y = y0 + static_cast<double>(i) * cell;
                    const SizeRecord* rec = nullptr;
                    if (found != panels.end()) {
                        const auto it = found->second.find({t_values[i], axis_values[j]});
                        if (it != found->second.end()) rec = it->second;
                    }
                    if (!rec) continue;
                    std::string fill = "#bdbdbd";
                    std::string label = "NA";
                    if (rec->rate) {
                        fill = hex(rate_color(*rec->rate, nominal, vmax));
                        label = fmt("%.2f", *rec->rate);
                    }
                    svg << "<rect class=\"cell\" x=\"" << fmt("%.1f", x) << "\" y=\"" << fmt("%.1f", y)
                        << "\" width=\"" << fmt("%.1f", cell) << "\" height=\"" << fmt("%.1f", cell) << "\" fill=\""
                        << fill << "\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
                    svg << "<text x=\"" << fmt("%.1f", x + cell / 2.0) << "\" y=\"" << fmt("%.1f", y + cell / 2.0 + 4.0)
                        << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"#202020\">" << label << "</text>\n";
                }
            }
            for (std::size_t i = 0; i < t_values.size(); ++i) {
                svg << "<text x=\"" << fmt("%.1f", x0 - 6.0) << "\" y=\""
                    << fmt("%.1f", y0 + (static_cast<double>(i) + 0.5) * cell + 4.0)
                    << "\" text-anchor=\"end\" font-size=\"10\">" << t_values[i] << "</text>\n";
            }
            for (std::size_t j = 0; j < axis_values.size(); ++j) {
                svg << "<text x=\"" << fmt("%.1f", x0 + (static_cast<double>(j) + 0.5) * cell) << "\" y=\""
                    << fmt("%.1f", y0 + panel_h + 14.0) << "\" text-anchor=\"middle\" font-size=\"10\">"
                    << axis_values[j] << "</text>\n";
            }
            svg << "<text x=\"" << fmt("%.1f", x0 + panel_w / 2.0) << "\" y=\"" << fmt("%.1f", y0 + panel_h + 32.0)
                << "\" text-anchor=\"middle\" font-size=\"11\">" << axis_name << "</text>\n";
            svg << "<text x=\"" << fmt("%.1f", x0 - 44.0) << "\" y=\"" << fmt("%.1f", y0 + panel_h / 2.0)
                << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 " << fmt("%.1f", x0 - 44.0)
                << ' ' << fmt("%.1f", y0 + panel_h / 2.0) << ")\">T</text>\n";
            svg << "</g>\n";
            ++col;
        }
        ++row;
    }

    // Legend: vertical bar, vmax at the top.
    const double lx = width - legend_w + 10.0;
    const double ly = margin_top;
    const double lh = std::max(120.0, std::min(240.0, height - margin_top - 70.0));
    const double mid_offset = 1.0 - nominal / vmax;
    svg << "<defs><linearGradient id=\"size-legend\" x1=\"0\" y1=\"0\" x2=\"0\" y2=\"1\">"
        << "<stop offset=\"0\" stop-color=\"" << hex(kHigh) << "\"/>"
        << "<stop offset=\"" << fmt("%.4f", mid_offset) << "\" stop-color=\"" << hex(kMid) << "\"/>"
        << "<stop offset=\"1\" stop-color=\"" << hex(kLow) << "\"/>"
        << "</linearGradient></defs>\n";
    svg << "<g class=\"legend\">\n";
    svg << "<rect x=\"" << fmt("%.1f", lx) << "\" y=\"" << fmt("%.1f", ly) << "\" width=\"18\" height=\""
        << fmt("%.1f", lh) << "\" fill=\"url(#size-legend)\" stroke=\"#808080\"/>\n";
    const std::array<double, 3> ticks{vmax, nominal, 0.0};
    for (double tick : ticks) {
        const double ty = ly + (1.0 - tick / vmax) * lh;
        svg << "<line x1=\"" << fmt("%.1f", lx + 18.0) << "\" y1=\"" << fmt("%.1f", ty) << "\" x2=\""
            << fmt("%.1f", lx + 23.0) << "\" y2=\"" << fmt("%.1f", ty) << "\" stroke=\"#404040\"/>\n";
        svg << "<text x=\"" << fmt("%.1f", lx + 26.0) << "\" y=\"" << fmt("%.1f", ty + 4.0)
            << "\" font-size=\"10\">" << fmt("%.3f", tick) << "</text>\n";
    }
    svg << "<text x=\"" << fmt("%.1f", lx) << "\" y=\"" << fmt("%.1f", ly - 10.0)
        << "\" font-size=\"11\">rate</text>\n";
    svg << "<rect x=\"" << fmt("%.1f", lx) << "\" y=\"" << fmt("%.1f", ly + lh + 14.0)
        << "\" width=\"18\" height=\"12\" fill=\"#bdbdbd\"/>\n";
    svg << "<text x=\"" << fmt("%.1f", lx + 26.0) << "\" y=\"" << fmt("%.1f", ly + lh + 24.0)
        << "\" font-size=\"10\">NA</text>\n";
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace srnlsd
