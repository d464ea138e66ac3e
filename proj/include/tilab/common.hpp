// Shared scalar/vector typedefs and small complex-vector helpers.
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace tilab {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;

inline constexpr Complex I{0.0, 1.0};

// Unconjugated (bilinear) dot product. Eigen's dot() conjugates the left
// argument, which is never what the phase algebra here wants.
inline Complex bdot(const CVec3& a, const CVec3& b) {
    return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

inline Complex bdot(const CVec3& a, const Vec3& b) {
    return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

inline Complex bdot(const Vec3& a, const CVec3& b) {
    return bdot(b, a);
}

// Hermitian norm |v| = sqrt(sum |v_i|^2).
inline double hnorm(const CVec3& v) {
    return std::sqrt(std::norm(v(0)) + std::norm(v(1)) + std::norm(v(2)));
}

inline CMat3 outer(const CVec3& a, const CVec3& b) {
    CMat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = a(i) * b(j);
    return m;
}

// Rotation about the x3 axis by angle phi.
inline Mat3 rotation_x3(double phi) {
    Mat3 r;
    const double c = std::cos(phi), s = std::sin(phi);
    r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
    return r;
}

inline CVec3 rotate(const Mat3& r, const CVec3& v) {
    CVec3 out;
    for (int i = 0; i < 3; ++i) {
        out(i) = Complex(0.0, 0.0);
        for (int j = 0; j < 3; ++j) out(i) += r(i, j) * v(j);
    }
    return out;
}

// Chunked parallel loop with deterministic work assignment. fn(begin, end)
// must only write to disjoint preallocated slots.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, std::size_t)>& fn);

inline int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 4 : static_cast<int>(hc);
}

}  // namespace tilab
