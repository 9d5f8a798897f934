#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace exjacobi {

/// Dense real polynomial in the monomial basis; coeffs[k] multiplies x^k.
/// Trailing zero coefficients are stripped on construction, so degree() is
/// the index of the last nonzero coefficient (the zero polynomial keeps a
/// single zero coefficient and reports degree 0).
class Polynomial {
  public:
    Polynomial() : c_{0.0} {}
    Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { normalize(); }
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { normalize(); }

    static Polynomial constant(double v) { return Polynomial{v}; }
    static Polynomial identity() { return Polynomial{0.0, 1.0}; }  // x

    const std::vector<double>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == 0.0; }
    double leading() const { return c_.back(); }

    double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }

    /// Horner evaluation; works for real and complex arguments.
    template <class T>
    T eval(T x) const {
        T y = T(c_.back());
        for (std::size_t i = c_.size() - 1; i-- > 0;) y = y * x + T(c_[i]);
        return y;
    }
    double operator()(double x) const { return eval(x); }
    std::complex<double> operator()(std::complex<double> x) const { return eval(x); }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
        return Polynomial(std::move(d));
    }

    /// Primitive with the given constant term.
    Polynomial antiderivative(double constant_term = 0.0) const {
        std::vector<double> a(c_.size() + 1);
        a[0] = constant_term;
        for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
        return Polynomial(std::move(a));
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        normalize();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        normalize();
        return *this;
    }
    Polynomial& operator*=(double s) {
        for (double& v : c_) v *= s;
        normalize();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::fabs(v));
        return m;
    }

  private:
    void normalize() {
        while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
        if (c_.empty()) c_.push_back(0.0);
    }

    std::vector<double> c_;
};

}  // namespace exjacobi
