// Cubic grids of Fourier-transform samples F[f](xi) on the mode lattice
// xi = (2 pi / L) nu, |nu_a| <= h, where L is the box period (the box is the
// periodization cell). Provides conjugate symmetrization, masked-node infill,
// exact first/second moment transforms F[x_a f] for band-limited fields,
// off-lattice evaluation, and the inverse Fourier series on spatial nodes.
#pragma once

#include <cstdint>
#include <vector>

#include "tilab/fields.hpp"

namespace tilab {

struct FreqGeometry {
    int h = 7;          // modes nu in [-h, h]
    double length = 1.0;  // periodization length L (box edge)

    int m() const { return 2 * h + 1; }
    double dxi() const { return 2.0 * M_PI / length; }
    std::size_t size() const { return static_cast<std::size_t>(m()) * m() * m(); }
    std::size_t index(int a, int b, int c) const {
        return (static_cast<std::size_t>(a + h) * m() + (b + h)) * m() + (c + h);
    }
    Vec3 xi(int a, int b, int c) const { return dxi() * Vec3(a, b, c); }
    bool valid(int a, int b, int c) const {
        return std::abs(a) <= h && std::abs(b) <= h && std::abs(c) <= h;
    }
};

class FreqGrid {
  public:
    FreqGrid() = default;
    explicit FreqGrid(const FreqGeometry& g)
        : geo_(g), values_(g.size(), Complex(0.0, 0.0)), mask_(g.size(), 0) {}

    const FreqGeometry& geo() const { return geo_; }
    Complex& at(int a, int b, int c) { return values_[geo_.index(a, b, c)]; }
    Complex at(int a, int b, int c) const { return values_[geo_.index(a, b, c)]; }
    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }

    void set_masked(int a, int b, int c, bool m) { mask_[geo_.index(a, b, c)] = m ? 1 : 0; }
    bool masked(int a, int b, int c) const { return mask_[geo_.index(a, b, c)] != 0; }
    double masked_fraction() const;

    // F(-nu) = conj F(nu) averaged onto both halves.
    void symmetrize_conjugate();

    // Replaces masked entries with a weighted polynomial least-squares fit of
    // the unmasked neighborhood (inverse-distance fallback), then clears the
    // mask flags.
    void infill_masked();

    // Infill that exploits compact support: the masked coefficients are
    // chosen so the inverse Fourier series is as small as possible on the
    // outer `layers` node shells of `grid`. Falls back to the polynomial
    // infill when the least-squares system is degenerate. Requires a
    // conjugate-symmetric grid.
    void infill_masked_supported(const SpatialGrid& grid, int layers = 2);

    FreqGrid& operator*=(Complex s);
    FreqGrid& axpy(Complex a, const FreqGrid& other);  // this += a * other

    // Exact moment transform of the band-limited interpolant: returns the
    // grid of F[x_axis f](xi) (order 1) or F[x_axis^2 f](xi) (order 2).
    FreqGrid moment(int axis, int order = 1) const;

    // Off-lattice evaluation of F[f](xi) for the band-limited interpolant via
    // separable box-window factors.
    Complex eval_offgrid(const Vec3& xi) const;

    // f(x) = (1/L^3) sum F(nu) e^{i xi_nu . x} on the spatial grid nodes.
    // Returns the real part; max |imag| is reported through max_imag.
    ScalarField inverse_to_field(const SpatialGrid& grid, double* max_imag = nullptr) const;

  private:
    FreqGeometry geo_;
    std::vector<Complex> values_;
    std::vector<std::uint8_t> mask_;
};

// Forward reference transform for tests: quadrature-free exact transform of a
// closure via Gauss quadrature is in dn_form; this computes F[f](xi) of a
// sampled band-limited field by direct summation (inverse of inverse_to_field
// only in the band-limited sense).
Complex fourier_of_closure(const ScalarClosure& f, const SpatialGrid& box, const Vec3& xi,
                           int points_per_axis);

}  // namespace tilab
