// Truncated Laurent series in a large parameter r with complex coefficients.
// A series is either exact (a finite polynomial in r and 1/r) or carries a
// recorded tail order: the exponent of the first omitted power.
#pragma once

#include <limits>
#include <map>

#include "tilab/common.hpp"

namespace tilab {

class LaurentSeries {
  public:
    static constexpr int kExact = std::numeric_limits<int>::min();

    LaurentSeries() = default;
    static LaurentSeries monomial(Complex coeff, int power);
    static LaurentSeries constant(Complex c) { return monomial(c, 0); }

    Complex coeff(int power) const;
    const std::map<int, Complex>& coeffs() const { return c_; }
    void set_coeff(int power, Complex v);

    // Exponent of the first omitted term; kExact when nothing was dropped.
    int tail_order() const { return tail_; }
    void set_tail_order(int t) { tail_ = t; }
    bool exact() const { return tail_ == kExact; }

    int max_power() const;  // highest stored power (0 when empty)
    int min_power() const;

    LaurentSeries& operator+=(const LaurentSeries& o);
    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries operator*(Complex s) const;
    LaurentSeries operator-() const { return *this * Complex(-1.0, 0.0); }

    // Drops powers below min_keep, recording the strongest dropped power.
    LaurentSeries truncate(int min_keep) const;

    Complex eval(double r) const;
    void prune(double tol = 0.0);

  private:
    std::map<int, Complex> c_;
    int tail_ = kExact;
};

inline LaurentSeries operator*(Complex s, const LaurentSeries& l) { return l * s; }

// Truncated expansion of sqrt((r^2 - d^2 + k^2)/d^2) in powers of 1/r,
// keeping `terms` binomial terms (powers r^1, r^-1, ..., r^{3-2*terms}).
LaurentSeries beta_series(double s, double t, double k, int terms);

}  // namespace tilab
