#pragma once

#include <vector>

namespace opk {

struct QuadNode {
  double x; // abscissa on [-1, 1]
  double w; // weight, sum of weights = 2
};

/// Gauss-Legendre rule of the given order (number of nodes), computed by
/// Newton iteration on the Legendre recurrence and cached per order.
/// Exact for polynomials of degree <= 2*order - 1.
const std::vector<QuadNode>& gauss_legendre_nodes(int order);

}  // namespace opk
