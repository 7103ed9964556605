#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

#include "params.hpp"

namespace {

std::string coord(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

void SvgDocument::polyline(std::vector<std::array<double, 2>> points, const std::string& stroke,
                           double width_scale) {
    if (points.size() < 2) return;
    items_.push_back({std::move(points), stroke, width_scale});
}

void SvgDocument::write(const std::string& path) const {
    double lox = std::numeric_limits<double>::infinity(), loy = lox;
    double hix = -lox, hiy = -lox;
    for (const Item& item : items_)
        for (const auto& p : item.points) {
            lox = std::min(lox, p[0]);
            hix = std::max(hix, p[0]);
            loy = std::min(loy, p[1]);
            hiy = std::max(hiy, p[1]);
        }
    if (items_.empty()) {
        lox = loy = -1.0;
        hix = hiy = 1.0;
    }
    double extent = std::max(hix - lox, hiy - loy);
    if (extent <= 0.0) extent = 1.0;
    double margin = 0.05 * extent;
    double w = (hix - lox) + 2.0 * margin, h = (hiy - loy) + 2.0 * margin;

    std::ofstream out(path);
    if (!out) throw CliError(2, "cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << coord(lox - margin)
        << " " << coord(loy - margin) << " " << coord(w) << " " << coord(h) << "\" width=\"640\" height=\""
        << coord(640.0 * h / w) << "\">\n";
    // flip y about the viewBox center so +y points up
    out << "<g transform=\"translate(0 " << coord(2.0 * (loy - margin) + h) << ") scale(1 -1)\">\n";
    for (const Item& item : items_) {
        out << "<polyline fill=\"none\" stroke=\"" << item.stroke << "\" stroke-width=\""
            << coord(0.004 * extent * item.width_scale) << "\" points=\"";
        for (size_t i = 0; i < item.points.size(); ++i) {
            if (i) out << ' ';
            out << coord(item.points[i][0]) << ',' << coord(item.points[i][1]);
        }
        out << "\"/>\n";
    }
    out << "</g>\n</svg>\n";
    if (!out.flush()) throw CliError(2, "cannot write '" + path + "'");
}
