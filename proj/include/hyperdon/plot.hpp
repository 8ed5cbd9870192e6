#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperdon/geometry.hpp"

namespace hyperdon::plot {

struct FieldPlot {
  std::string svg;
  double lo = 0.0;  // legend bounds
  double hi = 0.0;
};

// Color map of a vertex or face field over the fundamental-domain layout.
// Empty when the mesh carries no disk layout.
std::optional<FieldPlot> field_svg(const geometry::HyperbolicMesh& mesh, const Eigen::VectorXd& values,
                                   const std::string& title);

std::string line_svg(const std::vector<double>& x, const std::vector<double>& y, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel);

}  // namespace hyperdon::plot
