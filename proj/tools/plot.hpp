#pragma once

#include "affdec/geometry.hpp"

#include <string>
#include <vector>

namespace affdec::plot {

struct Series {
    std::string name;
    std::vector<double> x, y;
};

struct Chart {
    std::string title, xlabel, ylabel;
    bool loglog = true;
    std::vector<Series> series;
};

/// Long format: series,x,y.
std::string to_csv(const Chart& chart);

/// Static SVG line chart; non-positive values are dropped on log axes.
std::string to_svg(const Chart& chart);

struct Tile {
    int group = 0;
    Parallelogram omega;
};

/// group,cx,cy,ux,uy,vx,vy.
std::string tiles_csv(const std::vector<Tile>& tiles);

/// Outlines over [-1,1]², one colour per group.
std::string tiles_svg(const std::string& title, const std::vector<Tile>& tiles);

}  // namespace affdec::plot
