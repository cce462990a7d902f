#pragma once

#include <vector>

namespace sphu {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// The 20-point rule used for every composite panel in the library.
const GaussLegendreRule& panel_rule();

}  // namespace sphu
