#include "tilab/tensors.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace tilab {

IsotropicBackground::IsotropicBackground(double lambda, double mu, double rho, double w)
    : lambda0(lambda), mu0(mu), rho0(rho), omega(w) {
    if (!(mu0 > 0.0) || !(3.0 * lambda0 + 2.0 * mu0 > 0.0))
        throw std::invalid_argument("background must satisfy mu0 > 0 and 3 lambda0 + 2 mu0 > 0");
    if (!(rho0 > 0.0)) throw std::invalid_argument("background density must be positive");
    if (!(omega >= 0.0)) throw std::invalid_argument("frequency must be nonnegative");
}

bool IsotropicBackground::same_medium(const IsotropicBackground& o) const {
    return lambda0 == o.lambda0 && mu0 == o.mu0 && rho0 == o.rho0 && omega == o.omega;
}

void StiffnessTensor::set(int i, int j, int k, int l, double v) {
    c_[idx(i, j, k, l)] = v;
    c_[idx(j, i, k, l)] = v;
    c_[idx(i, j, l, k)] = v;
    c_[idx(j, i, l, k)] = v;
    c_[idx(k, l, i, j)] = v;
    c_[idx(l, k, i, j)] = v;
    c_[idx(k, l, j, i)] = v;
    c_[idx(l, k, j, i)] = v;
}

void StiffnessTensor::add(int i, int j, int k, int l, double v) {
    set(i, j, k, l, c_[idx(i, j, k, l)] + v);
}

StiffnessTensor& StiffnessTensor::operator+=(const StiffnessTensor& o) {
    for (int n = 0; n < 81; ++n) c_[n] += o.c_[n];
    return *this;
}

StiffnessTensor StiffnessTensor::operator*(double s) const {
    StiffnessTensor out;
    for (int n = 0; n < 81; ++n) out.c_[n] = c_[n] * s;
    return out;
}

double StiffnessTensor::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

bool StiffnessTensor::has_symmetries() const {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const double v = (*this)(i, j, k, l);
                    if (v != (*this)(j, i, k, l)) return false;
                    if (v != (*this)(i, j, l, k)) return false;
                    if (v != (*this)(k, l, i, j)) return false;
                }
    return true;
}

StiffnessTensor ti_expand(const TIComponents& p) {
    StiffnessTensor c;
    c.set(0, 0, 0, 0, p.c1111);
    c.set(1, 1, 1, 1, p.c1111);
    c.set(2, 2, 2, 2, p.c3333);
    c.set(0, 0, 1, 1, p.c1122);
    c.set(0, 0, 2, 2, p.c1133);
    c.set(1, 1, 2, 2, p.c1133);
    c.set(0, 1, 0, 1, p.c1212());
    c.set(0, 2, 0, 2, p.c1313);
    c.set(1, 2, 1, 2, p.c1313);
    return c;
}

StiffnessTensor isotropic_expand(double lambda, double mu) {
    StiffnessTensor c;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = k; l < 3; ++l) {
                    const double v = lambda * (i == j) * (k == l) +
                                     mu * ((i == k) * (j == l) + (i == l) * (j == k));
                    if (v != 0.0) c.set(i, j, k, l, v);
                }
    return c;
}

StiffnessTensor rotate_tensor(const StiffnessTensor& c, const Mat3& q) {
    const Mat3 qtq = q.transpose() * q;
    if ((qtq - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("rotate_tensor: matrix is not orthogonal");

    StiffnessTensor out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double v = 0.0;
                    for (int p = 0; p < 3; ++p)
                        for (int r = 0; r < 3; ++r)
                            for (int s = 0; s < 3; ++s)
                                for (int u = 0; u < 3; ++u)
                                    v += q(i, p) * q(j, r) * q(k, s) * q(l, u) * c(p, r, s, u);
                    out.set(i, j, k, l, v);
                }
    return out;
}

bool check_ti_invariance(const StiffnessTensor& c, double tol) {
    std::vector<Mat3> qs;
    for (int axis = 0; axis < 3; ++axis) {
        Mat3 r = Mat3::Identity();
        r(axis, axis) = -1.0;
        qs.push_back(r);
    }
    for (int k = 0; k < 9; ++k) qs.push_back(rotation_x3(0.383 + 2.0 * M_PI * k / 9.0));

    for (const Mat3& q : qs) {
        const StiffnessTensor rc = rotate_tensor(c, q);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        if (std::abs(rc(i, j, k, l) - c(i, j, k, l)) > tol) return false;
    }
    return true;
}

Complex contract(const StiffnessTensor& c, const CMat3& g, const CMat3& h) {
    Complex out(0.0, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const double v = c(i, j, k, l);
                    if (v != 0.0) out += v * g(i, j) * h(k, l);
                }
    return out;
}

double positivity_margin(const StiffnessTensor& c) {
    // Orthonormal symmetric-matrix basis: three diagonal elements, three
    // off-diagonal pairs scaled by 1/sqrt(2).
    const double s = 1.0 / std::sqrt(2.0);
    const std::array<std::array<int, 2>, 6> pairs = {{{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};

    Eigen::Matrix<double, 6, 6> m;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            Mat3 ea = Mat3::Zero(), eb = Mat3::Zero();
            ea(pairs[a][0], pairs[a][1]) = ea(pairs[a][1], pairs[a][0]) = (a < 3) ? 1.0 : s;
            eb(pairs[b][0], pairs[b][1]) = eb(pairs[b][1], pairs[b][0]) = (b < 3) ? 1.0 : s;
            double v = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        for (int l = 0; l < 3; ++l) v += c(i, j, k, l) * ea(i, j) * eb(k, l);
            m(a, b) = v;
        }

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(0.5 * (m + m.transpose()));
    return es.eigenvalues().minCoeff();
}

}  // namespace tilab
