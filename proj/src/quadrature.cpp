#include "tilab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace tilab {

QuadratureSpec::QuadratureSpec(QuadratureRule r, int n) : rule(r), points(n) {
    if (rule == QuadratureRule::Gauss && points < 2)
        throw std::invalid_argument("gauss rule needs at least 2 points per axis");
    if (rule == QuadratureRule::Midpoint && points < 8)
        throw std::invalid_argument("midpoint rule needs at least 8 points per axis");
}

namespace {

Rule1D make_gauss(int n) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        j(k, k - 1) = b;
        j(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    Rule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        r.weights[k] = 2.0 * v0 * v0;
    }
    return r;
}

Rule1D make_midpoint(int n) {
    Rule1D r;
    r.nodes.resize(n);
    r.weights.assign(n, 2.0 / n);
    for (int k = 0; k < n; ++k) r.nodes[k] = -1.0 + (2.0 * k + 1.0) / n;
    return r;
}

}  // namespace

const Rule1D& rule_1d(QuadratureRule rule, int n) {
    static std::map<std::pair<int, int>, Rule1D> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    const auto key = std::make_pair(static_cast<int>(rule), n);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, rule == QuadratureRule::Gauss ? make_gauss(n) : make_midpoint(n))
                 .first;
    return it->second;
}

}  // namespace tilab
