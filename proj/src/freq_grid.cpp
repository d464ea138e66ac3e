#include "tilab/freq_grid.hpp"

#include <cmath>

#include <Eigen/QR>

#include "tilab/quadrature.hpp"

namespace tilab {

double FreqGrid::masked_fraction() const {
    std::size_t n = 0;
    for (auto m : mask_) n += m;
    return static_cast<double>(n) / mask_.size();
}

void FreqGrid::symmetrize_conjugate() {
    const int h = geo_.h;
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = -h; c <= h; ++c) {
                if (std::make_tuple(a, b, c) > std::make_tuple(-a, -b, -c)) continue;
                const Complex v1 = at(a, b, c);
                const Complex v2 = at(-a, -b, -c);
                const Complex avg = 0.5 * (v1 + std::conj(v2));
                at(a, b, c) = avg;
                at(-a, -b, -c) = std::conj(avg);
            }
}

namespace {

std::vector<std::array<int, 3>> poly_powers(int degree) {
    std::vector<std::array<int, 3>> out;
    for (int p = 0; p <= degree; ++p)
        for (int q = 0; q + p <= degree; ++q)
            for (int r = 0; r + q + p <= degree; ++r) out.push_back({p, q, r});
    return out;
}

}  // namespace

void FreqGrid::infill_masked() {
    const int h = geo_.h;
    std::vector<Complex> out = values_;
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = -h; c <= h; ++c) {
                if (!masked(a, b, c)) continue;
                std::vector<std::array<int, 3>> nbr;
                for (int radius = 2; radius <= 3; ++radius) {
                    nbr.clear();
                    for (int da = -radius; da <= radius; ++da)
                        for (int db = -radius; db <= radius; ++db)
                            for (int dc = -radius; dc <= radius; ++dc) {
                                const int na = a + da, nb = b + db, nc = c + dc;
                                if (!geo_.valid(na, nb, nc)) continue;
                                if (masked(na, nb, nc)) continue;
                                nbr.push_back({na, nb, nc});
                            }
                    if (nbr.size() >= 14 || radius == 3) break;
                }
                if (nbr.empty()) continue;
                // Weighted polynomial least squares, degree picked by the
                // number of unmasked neighbors; inverse-distance fallback.
                int degree = 0;
                if (nbr.size() >= 50)
                    degree = 4;
                else if (nbr.size() >= 24)
                    degree = 3;
                else if (nbr.size() >= 12)
                    degree = 2;
                if (degree > 0) {
                    const auto powers = poly_powers(degree);
                    const int ncoef = static_cast<int>(powers.size());
                    Eigen::MatrixXd basis(nbr.size(), ncoef);
                    Eigen::VectorXcd rhs(nbr.size());
                    for (std::size_t i = 0; i < nbr.size(); ++i) {
                        const double da = nbr[i][0] - a, db = nbr[i][1] - b, dc = nbr[i][2] - c;
                        const double w = 1.0 / (1.0 + da * da + db * db + dc * dc);
                        for (int k = 0; k < ncoef; ++k)
                            basis(i, k) = w * std::pow(da, powers[k][0]) *
                                          std::pow(db, powers[k][1]) * std::pow(dc, powers[k][2]);
                        rhs(i) = w * values_[geo_.index(nbr[i][0], nbr[i][1], nbr[i][2])];
                    }
                    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
                    const Eigen::VectorXd xr = qr.solve(Eigen::VectorXd(rhs.real()));
                    const Eigen::VectorXd xi = qr.solve(Eigen::VectorXd(rhs.imag()));
                    out[geo_.index(a, b, c)] = Complex(xr(0), xi(0));
                } else {
                    Complex num(0.0, 0.0);
                    double den = 0.0;
                    for (std::size_t i = 0; i < nbr.size(); ++i) {
                        const double da = nbr[i][0] - a, db = nbr[i][1] - b, dc = nbr[i][2] - c;
                        const double w = 1.0 / (da * da + db * db + dc * dc);
                        num += w * values_[geo_.index(nbr[i][0], nbr[i][1], nbr[i][2])];
                        den += w;
                    }
                    out[geo_.index(a, b, c)] = num / den;
                }
            }
    values_ = std::move(out);
    std::fill(mask_.begin(), mask_.end(), 0);
}

void FreqGrid::infill_masked_supported(const SpatialGrid& grid, int layers) {
    // Masked representatives (nu paired with -nu; the origin is self-paired).
    const int h = geo_.h;
    std::vector<std::array<int, 3>> reps;
    bool has_origin = false;
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = -h; c <= h; ++c) {
                if (!masked(a, b, c)) continue;
                if (a == 0 && b == 0 && c == 0) {
                    has_origin = true;
                    continue;
                }
                if (std::make_tuple(a, b, c) > std::make_tuple(-a, -b, -c))
                    reps.push_back({a, b, c});
            }
    const std::size_t nunk = 2 * reps.size() + (has_origin ? 1 : 0);
    if (nunk == 0) {
        std::fill(mask_.begin(), mask_.end(), 0);
        return;
    }

    // Boundary shell of the spatial grid.
    std::vector<Vec3> shell;
    for (int i = 0; i < grid.nodes[0]; ++i)
        for (int j = 0; j < grid.nodes[1]; ++j)
            for (int k = 0; k < grid.nodes[2]; ++k) {
                const bool outer = i < layers || i >= grid.nodes[0] - layers || j < layers ||
                                   j >= grid.nodes[1] - layers || k < layers ||
                                   k >= grid.nodes[2] - layers;
                if (outer) shell.push_back(grid.node(i, j, k));
            }
    if (shell.size() < nunk + 8) {
        infill_masked();
        return;
    }

    // Known part of the field on the shell (masked coefficients zeroed).
    FreqGrid known = *this;
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = -h; c <= h; ++c)
                if (masked(a, b, c)) known.at(a, b, c) = Complex(0.0, 0.0);
    const ScalarField known_field = known.inverse_to_field(grid);
    const double norm = 1.0 / (geo_.length * geo_.length * geo_.length);

    std::vector<double> known_shell;
    known_shell.reserve(shell.size());
    for (int i = 0; i < grid.nodes[0]; ++i)
        for (int j = 0; j < grid.nodes[1]; ++j)
            for (int k = 0; k < grid.nodes[2]; ++k) {
                const bool outer = i < layers || i >= grid.nodes[0] - layers || j < layers ||
                                   j >= grid.nodes[1] - layers || k < layers ||
                                   k >= grid.nodes[2] - layers;
                if (outer) known_shell.push_back(known_field.values()[grid.index(i, j, k)]);
            }

    Eigen::MatrixXd m(shell.size(), nunk);
    Eigen::VectorXd rhs(shell.size());
    for (std::size_t p = 0; p < shell.size(); ++p) {
        const Vec3& x = shell[p];
        rhs(p) = -known_shell[p];
        std::size_t col = 0;
        for (const auto& nu : reps) {
            const double ph = geo_.xi(nu[0], nu[1], nu[2]).dot(x);
            // u e^{i ph} + conj(u) e^{-i ph} = 2 Re(u) cos(ph) - 2 Im(u) sin(ph)
            m(p, col++) = 2.0 * std::cos(ph) * norm;
            m(p, col++) = -2.0 * std::sin(ph) * norm;
        }
        if (has_origin) m(p, col++) = norm;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    if (qr.rank() < static_cast<Eigen::Index>(nunk)) {
        infill_masked();
        return;
    }
    const Eigen::VectorXd sol = qr.solve(rhs);
    std::size_t col = 0;
    for (const auto& nu : reps) {
        const Complex u(sol(col), sol(col + 1));
        col += 2;
        at(nu[0], nu[1], nu[2]) = u;
        at(-nu[0], -nu[1], -nu[2]) = std::conj(u);
    }
    if (has_origin) at(0, 0, 0) = Complex(sol(col), 0.0);
    std::fill(mask_.begin(), mask_.end(), 0);
}

FreqGrid& FreqGrid::operator*=(Complex s) {
    for (auto& v : values_) v *= s;
    return *this;
}

FreqGrid& FreqGrid::axpy(Complex a, const FreqGrid& other) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * other.values_[i];
    return *this;
}

namespace {

// 1D moment matrix elements over the periodization cell [-L/2, L/2]:
// (1/L) int x e^{i 2 pi m x / L} dx and the same with x^2.
Complex moment_element_1(int m, double ll) {
    if (m == 0) return Complex(0.0, 0.0);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return Complex(0.0, -sign * ll / (2.0 * M_PI * m));
}

Complex moment_element_2(int m, double ll) {
    if (m == 0) return Complex(ll * ll / 12.0, 0.0);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return Complex(sign * ll * ll / (2.0 * M_PI * M_PI * m * m), 0.0);
}

}  // namespace

FreqGrid FreqGrid::moment(int axis, int order) const {
    if (axis < 0 || axis > 2) throw std::invalid_argument("moment: axis must be 0..2");
    if (order < 1 || order > 2) throw std::invalid_argument("moment: order must be 1 or 2");
    const int h = geo_.h;
    const double ll = geo_.length;
    FreqGrid out(geo_);
    // out(mu) = sum_nu Mel(nu_axis - mu_axis) in(..nu_axis..), other axes fixed.
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = -h; c <= h; ++c) {
                Complex acc(0.0, 0.0);
                for (int n = -h; n <= h; ++n) {
                    int ia = a, ib = b, ic = c, mu;
                    if (axis == 0) {
                        mu = n - a;
                        ia = n;
                    } else if (axis == 1) {
                        mu = n - b;
                        ib = n;
                    } else {
                        mu = n - c;
                        ic = n;
                    }
                    const Complex mel =
                        order == 1 ? moment_element_1(mu, ll) : moment_element_2(mu, ll);
                    if (mel != Complex(0.0, 0.0)) acc += mel * values_[geo_.index(ia, ib, ic)];
                }
                out.at(a, b, c) = acc;
            }
    return out;
}

Complex FreqGrid::eval_offgrid(const Vec3& xi) const {
    const int h = geo_.h;
    const int m = geo_.m();
    const double ll = geo_.length;
    // (1/L) int e^{i(nu dxi - xi_a) x} dx = sinc((nu dxi - xi_a) L / 2)
    std::array<std::vector<Complex>, 3> w;
    for (int axis = 0; axis < 3; ++axis) {
        w[axis].resize(m);
        for (int n = -h; n <= h; ++n) {
            const double u = (n * geo_.dxi() - xi(axis)) * ll * 0.5;
            const double v = std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
            w[axis][n + h] = Complex(v, 0.0);
        }
    }
    // Separable contraction: z then y then x.
    Complex acc(0.0, 0.0);
    for (int a = 0; a < m; ++a) {
        Complex acca(0.0, 0.0);
        for (int b = 0; b < m; ++b) {
            Complex accb(0.0, 0.0);
            const std::size_t base = (static_cast<std::size_t>(a) * m + b) * m;
            for (int c = 0; c < m; ++c) accb += values_[base + c] * w[2][c];
            acca += accb * w[1][b];
        }
        acc += acca * w[0][a];
    }
    return acc;
}

ScalarField FreqGrid::inverse_to_field(const SpatialGrid& grid, double* max_imag) const {
    const int h = geo_.h;
    const int m = geo_.m();
    const double norm = 1.0 / (geo_.length * geo_.length * geo_.length);
    std::array<std::vector<Complex>, 3> ph;
    for (int axis = 0; axis < 3; ++axis) {
        ph[axis].resize(static_cast<std::size_t>(m) * grid.nodes[axis]);
        for (int n = -h; n <= h; ++n)
            for (int i = 0; i < grid.nodes[axis]; ++i)
                ph[axis][static_cast<std::size_t>(n + h) * grid.nodes[axis] + i] =
                    std::exp(Complex(0.0, n * geo_.dxi() * grid.coord(axis, i)));
    }
    // Contract axis by axis: (a,b,c) -> (a,b,iz) -> (a,iy,iz) -> (ix,iy,iz).
    const int nx = grid.nodes[0], ny = grid.nodes[1], nz = grid.nodes[2];
    std::vector<Complex> t1(static_cast<std::size_t>(m) * m * nz, Complex(0.0, 0.0));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const std::size_t base = (static_cast<std::size_t>(a) * m + b) * m;
            for (int c = 0; c < m; ++c) {
                const Complex v = values_[base + c];
                if (v == Complex(0.0, 0.0)) continue;
                for (int iz = 0; iz < nz; ++iz)
                    t1[(static_cast<std::size_t>(a) * m + b) * nz + iz] +=
                        v * ph[2][static_cast<std::size_t>(c) * nz + iz];
            }
        }
    std::vector<Complex> t2(static_cast<std::size_t>(m) * ny * nz, Complex(0.0, 0.0));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int iy = 0; iy < ny; ++iy) {
                const Complex p = ph[1][static_cast<std::size_t>(b) * ny + iy];
                for (int iz = 0; iz < nz; ++iz)
                    t2[(static_cast<std::size_t>(a) * ny + iy) * nz + iz] +=
                        p * t1[(static_cast<std::size_t>(a) * m + b) * nz + iz];
            }
    ScalarField out(grid);
    double mi = 0.0;
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            for (int iz = 0; iz < nz; ++iz) {
                Complex acc(0.0, 0.0);
                for (int a = 0; a < m; ++a)
                    acc += ph[0][static_cast<std::size_t>(a) * nx + ix] *
                           t2[(static_cast<std::size_t>(a) * ny + iy) * nz + iz];
                acc *= norm;
                out.values()[grid.index(ix, iy, iz)] = acc.real();
                mi = std::max(mi, std::abs(acc.imag()));
            }
    if (max_imag) *max_imag = mi;
    return out;
}

Complex fourier_of_closure(const ScalarClosure& f, const SpatialGrid& box, const Vec3& xi,
                           int points_per_axis) {
    const Rule1D& r1 = rule_1d(QuadratureRule::Gauss, points_per_axis);
    Complex acc(0.0, 0.0);
    for (int ix = 0; ix < points_per_axis; ++ix)
        for (int iy = 0; iy < points_per_axis; ++iy)
            for (int iz = 0; iz < points_per_axis; ++iz) {
                const Vec3 x(box.center(0) + box.halfwidth(0) * r1.nodes[ix],
                             box.center(1) + box.halfwidth(1) * r1.nodes[iy],
                             box.center(2) + box.halfwidth(2) * r1.nodes[iz]);
                const double w = r1.weights[ix] * r1.weights[iy] * r1.weights[iz];
                acc += f(x) * std::exp(Complex(0.0, -xi.dot(x))) * w;
            }
    return acc * (box.halfwidth(0) * box.halfwidth(1) * box.halfwidth(2));
}

}  // namespace tilab
