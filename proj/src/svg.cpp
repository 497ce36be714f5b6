#include "syntro/svg.hpp"

#include <cstdio>
#include <sstream>

#include "syntro/planar.hpp"

namespace syntro {

namespace {

// Figure conventions: nullcline of species 1 in red, of species 2 in green,
// separatrix in blue; basin fills in muted tints keyed by attractor kind.
constexpr const char* kGamma1Color = "#c0392b";
constexpr const char* kGamma2Color = "#27ae60";
constexpr const char* kSeparatrixColor = "#2471a3";
constexpr const char* kRegionColor = "#7f8c8d";

const char* basin_fill(CellLabel label) {
    switch (label) {
        case CellLabel::F0: return "#f5b7b1";
        case CellLabel::F1_boundary: return "#fdebd0";
        case CellLabel::F2_boundary: return "#d6eaf8";
        case CellLabel::F_star: return "#d5f5e3";
        case CellLabel::unresolved: return "#e5e7e9";
        case CellLabel::outside: return "none";
    }
    return "none";
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string phase_portrait_svg(const GrowthModel& model, const ChemostatConfig& config,
                               double D, const RegimeReport& regime,
                               const BasinGrid* basins, const Separatrix* separatrix,
                               int width, int height) {
    const double margin = 40.0;
    const double x_max = config.s1_in;
    const double y_max = config.s1_in + config.s2_in;
    const double sx = (width - 2.0 * margin) / x_max;
    const double sy = (height - 2.0 * margin) / y_max;
    auto px = [&](double x1) { return margin + x1 * sx; };
    auto py = [&](double x2) { return height - margin - x2 * sy; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    if (basins) {
        const double cw = x_max / basins->n1 * sx;
        const double ch = y_max / basins->n2 * sy;
        for (int j = 0; j < basins->n2; ++j) {
            for (int i = 0; i < basins->n1; ++i) {
                const CellLabel label = basins->at(i, j);
                if (label == CellLabel::outside) continue;
                const double cx = px(static_cast<double>(i) * x_max / basins->n1);
                const double cy = py(static_cast<double>(j + 1) * y_max / basins->n2);
                out << "<rect x=\"" << num(cx) << "\" y=\"" << num(cy) << "\" width=\""
                    << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\""
                    << basin_fill(label) << "\"/>\n";
            }
        }
    }

    // Region outline: (0,0) -> (s1_in,0) -> (s1_in, s1_in+s2_in) -> (0, s2_in).
    out << "<polygon points=\"" << num(px(0)) << ',' << num(py(0)) << ' ' << num(px(x_max))
        << ',' << num(py(0)) << ' ' << num(px(x_max)) << ',' << num(py(y_max)) << ' '
        << num(px(0)) << ',' << num(py(config.s2_in))
        << "\" fill=\"none\" stroke=\"" << kRegionColor << "\" stroke-width=\"1\"/>\n";

    auto polyline = [&](const std::vector<PlanarState>& line, const char* color,
                        double stroke) {
        if (line.size() < 2) return;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
            << stroke << "\" points=\"";
        for (const auto& p : line) out << num(px(p.x1)) << ',' << num(py(p.x2)) << ' ';
        out << "\"/>\n";
    };

    ChemostatConfig working = config;
    working.D = D;
    polyline(nullcline_polyline(model, working, 1, D), kGamma1Color, 1.8);
    polyline(nullcline_polyline(model, working, 2, D), kGamma2Color, 1.8);
    if (separatrix) polyline(separatrix->polyline(), kSeparatrixColor, 1.8);

    for (const auto& r : regime.equilibria) {
        const bool filled = r.stability == Stability::stable_node;
        out << "<circle cx=\"" << num(px(r.location.x1)) << "\" cy=\""
            << num(py(r.location.x2)) << "\" r=\"4\" fill=\""
            << (filled ? "#1b2631" : "white") << "\" stroke=\"#1b2631\" stroke-width=\"1.5\">"
            << "<title>" << to_string(r.kind) << " (" << to_string(r.stability)
            << ")</title></circle>\n";
    }

    out << "<text x=\"" << num(px(x_max) - 12) << "\" y=\"" << num(py(0) + 24)
        << "\" font-size=\"13\" font-family=\"sans-serif\">x1</text>\n";
    out << "<text x=\"" << num(px(0) - 24) << "\" y=\"" << num(py(y_max) + 4)
        << "\" font-size=\"13\" font-family=\"sans-serif\">x2</text>\n";
    out << "<text x=\"" << num(margin) << "\" y=\"" << num(margin * 0.6)
        << "\" font-size=\"13\" font-family=\"sans-serif\">D = " << num(D) << ", "
        << to_string(regime.case_label) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace syntro
