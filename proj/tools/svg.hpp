#pragma once

#include <array>
#include <string>
#include <vector>

// Collects polylines in model coordinates and writes a static SVG 1.1
// document, viewBox fitted to the content with a 5% margin. The y axis is
// flipped at write time so the model's orientation renders upright.
class SvgDocument {
  public:
    // width_scale multiplies the base stroke width (0.4% of the extent).
    void polyline(std::vector<std::array<double, 2>> points, const std::string& stroke,
                  double width_scale = 1.0);
    void write(const std::string& path) const;

  private:
    struct Item {
        std::vector<std::array<double, 2>> points;
        std::string stroke;
        double width_scale;
    };
    std::vector<Item> items_;
};
