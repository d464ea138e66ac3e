#include "tilab/laurent.hpp"

#include <cmath>

namespace tilab {

LaurentSeries LaurentSeries::monomial(Complex coeff, int power) {
    LaurentSeries s;
    if (coeff != Complex(0.0, 0.0)) s.c_[power] = coeff;
    return s;
}

Complex LaurentSeries::coeff(int power) const {
    auto it = c_.find(power);
    return it == c_.end() ? Complex(0.0, 0.0) : it->second;
}

void LaurentSeries::set_coeff(int power, Complex v) {
    if (v == Complex(0.0, 0.0))
        c_.erase(power);
    else
        c_[power] = v;
}

int LaurentSeries::max_power() const { return c_.empty() ? 0 : c_.rbegin()->first; }
int LaurentSeries::min_power() const { return c_.empty() ? 0 : c_.begin()->first; }

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
    for (const auto& [p, v] : o.c_) set_coeff(p, coeff(p) + v);
    tail_ = std::max(tail_, o.tail_);
    if (tail_ != kExact) *this = truncate(tail_ + 1);
    return *this;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    LaurentSeries s = *this;
    s += o;
    return s;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
    return *this + o * Complex(-1.0, 0.0);
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    LaurentSeries s;
    // Tail of the product: an omitted term of one factor times the strongest
    // term of the other.
    int tail = kExact;
    if (tail_ != kExact && !o.c_.empty()) tail = std::max(tail, tail_ + o.max_power());
    if (o.tail_ != kExact && !c_.empty()) tail = std::max(tail, o.tail_ + max_power());
    if (tail_ != kExact && o.tail_ != kExact) tail = std::max(tail, tail_ + o.tail_);
    for (const auto& [p1, v1] : c_)
        for (const auto& [p2, v2] : o.c_) s.set_coeff(p1 + p2, s.coeff(p1 + p2) + v1 * v2);
    s.tail_ = tail;
    if (tail != kExact) s = s.truncate(tail + 1);
    return s;
}

LaurentSeries LaurentSeries::operator*(Complex sc) const {
    LaurentSeries s;
    s.tail_ = tail_;
    if (sc == Complex(0.0, 0.0)) return s;
    for (const auto& [p, v] : c_) s.c_[p] = v * sc;
    return s;
}

LaurentSeries LaurentSeries::truncate(int min_keep) const {
    LaurentSeries s;
    int tail = tail_;
    for (const auto& [p, v] : c_) {
        if (p >= min_keep)
            s.c_[p] = v;
        else
            tail = std::max(tail, p);
    }
    s.tail_ = tail;
    return s;
}

Complex LaurentSeries::eval(double r) const {
    Complex out(0.0, 0.0);
    for (const auto& [p, v] : c_) out += v * std::pow(r, p);
    return out;
}

void LaurentSeries::prune(double tol) {
    for (auto it = c_.begin(); it != c_.end();)
        if (std::abs(it->second) <= tol)
            it = c_.erase(it);
        else
            ++it;
}

LaurentSeries beta_series(double s, double t, double k, int terms) {
    const double d2 = s * s + t * t;
    if (!(d2 > 0.0)) throw std::invalid_argument("beta_series: d = sqrt(s^2+t^2) must be positive");
    if (terms < 1) throw std::invalid_argument("beta_series: need at least one term");
    const double d = std::sqrt(d2);
    const double q = k * k - d2;  // beta = (r/d) (1 + q/r^2)^{1/2}
    LaurentSeries out;
    double binom = 1.0;  // binomial(1/2, n)
    double qn = 1.0;
    for (int n = 0; n < terms; ++n) {
        out.set_coeff(1 - 2 * n, Complex(binom * qn / d, 0.0));
        binom *= (0.5 - n) / (n + 1.0);
        qn *= q;
    }
    if (q != 0.0)
        out.set_tail_order(1 - 2 * terms);
    return out;
}

}  // namespace tilab
