#include "opk/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "opk/errors.hpp"

namespace opk {

namespace {

std::vector<QuadNode> compute_nodes(int order) {
  // Newton iteration on the three-term Legendre recurrence, roots taken in
  // symmetric pairs from the cosine initial guess.
  std::vector<QuadNode> out(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    out[i] = {-z, w};
    out[order - 1 - i] = {z, w};
  }
  if (order % 2 == 1) out[order / 2].x = 0.0; // kill the -0.0 from the pair fill
  return out;
}

}  // namespace

const std::vector<QuadNode>& gauss_legendre_nodes(int order) {
  if (order < 1 || order > 256)
    throw invalid_parameter("gauss_legendre_nodes: order must be in [1, 256]");
  static std::mutex mu;
  static std::map<int, std::vector<QuadNode>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_nodes(order)).first;
  return it->second;
}

}  // namespace opk
