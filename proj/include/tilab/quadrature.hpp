// Tensor-product quadrature rules on the box.
#pragma once

#include <vector>

#include "tilab/common.hpp"

namespace tilab {

enum class QuadratureRule { Gauss, Midpoint };

struct QuadratureSpec {
    QuadratureRule rule = QuadratureRule::Gauss;
    int points = 16;  // per axis

    QuadratureSpec() = default;
    QuadratureSpec(QuadratureRule r, int n);
};

// Nodes/weights on [-1, 1]; Gauss-Legendre via the symmetric tridiagonal
// Jacobi matrix (Golub-Welsch). Results are cached per (rule, n).
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const Rule1D& rule_1d(QuadratureRule rule, int n);

}  // namespace tilab
