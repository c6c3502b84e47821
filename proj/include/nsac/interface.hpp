#pragma once

#include <vector>

#include "nsac/util.hpp"

namespace nsac {

// Zero level set of a cell-centered field by marching squares with linear
// interpolation, plus a least-squares circle fit of the contour points.
struct InterfaceExtract {
    std::vector<std::pair<Vec2, Vec2>> segments;
    double total_length = 0.0;
    // Kasa circle fit of the segment endpoints
    Vec2 center{0, 0};
    double radius = 0.0;
    double fit_rms = 0.0;  // rms distance of points to the fitted circle
};

InterfaceExtract extract_interface(const std::vector<double>& c, int nx, int ny, double h);

}  // namespace nsac
