#pragma once

// Dense univariate polynomials over an exact field (GaussianRational)
// or over BigComplex. Coefficients are stored constant-term first; the
// empty vector is the zero polynomial. Division, gcd and the square-free
// decomposition are only meaningful over the exact field.

#include <stdexcept>
#include <utility>
#include <vector>

#include "ratiolim/bigcomplex.hpp"
#include "ratiolim/rational.hpp"

namespace ratiolim {

// Prototype-based scalar construction: BigComplex needs a precision to
// make 0 or k, so both are derived from an existing coefficient.
template <typename T>
struct field_traits;

template <>
struct field_traits<GaussianRational> {
    static GaussianRational zero(const GaussianRational&) { return {}; }
    static GaussianRational from_long(long k, const GaussianRational&) {
        return GaussianRational(k);
    }
};

template <>
struct field_traits<BigComplex> {
    static BigComplex zero(const BigComplex& like) { return BigComplex(like.precision()); }
    static BigComplex from_long(long k, const BigComplex& like) {
        return BigComplex::from_long(k, 0, like.precision());
    }
};

template <typename T>
struct Polynomial {
    std::vector<T> coeffs; // constant-first; empty == zero polynomial

    Polynomial() = default;
    explicit Polynomial(std::vector<T> c) : coeffs(std::move(c)) { normalize(); }

    /// degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const { return coeffs.empty(); }

    const T& lc() const {
        if (coeffs.empty())
            throw std::logic_error("Polynomial: leading coefficient of zero polynomial");
        return coeffs.back();
    }

    void normalize() {
        while (!coeffs.empty() && coeffs.back().is_zero())
            coeffs.pop_back();
    }

    T eval(const T& x) const {
        if (coeffs.empty())
            return field_traits<T>::zero(x);
        T acc = coeffs.back();
        for (int i = degree() - 1; i >= 0; --i)
            acc = acc * x + coeffs[static_cast<std::size_t>(i)];
        return acc;
    }

    Polynomial derivative() const {
        if (degree() <= 0)
            return {};
        std::vector<T> d;
        d.reserve(coeffs.size() - 1);
        for (int k = 1; k <= degree(); ++k)
            d.push_back(coeffs[static_cast<std::size_t>(k)] *
                        field_traits<T>::from_long(k, coeffs[0]));
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const T zero = field_traits<T>::zero(a.coeffs[0]);
        std::vector<T> c(std::max(a.coeffs.size(), b.coeffs.size()), zero);
        for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] = c[i] + a.coeffs[i];
        for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] = c[i] + b.coeffs[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) return a;
        if (a.is_zero()) {
            std::vector<T> c;
            c.reserve(b.coeffs.size());
            for (const T& x : b.coeffs) c.push_back(-x);
            return Polynomial(std::move(c));
        }
        const T zero = field_traits<T>::zero(a.coeffs[0]);
        std::vector<T> c(std::max(a.coeffs.size(), b.coeffs.size()), zero);
        for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] = c[i] + a.coeffs[i];
        for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] = c[i] - b.coeffs[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero())
            return {};
        const T zero = field_traits<T>::zero(a.coeffs[0]);
        std::vector<T> c(a.coeffs.size() + b.coeffs.size() - 1, zero);
        for (std::size_t i = 0; i < a.coeffs.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs.size(); ++j)
                c[i + j] = c[i + j] + a.coeffs[i] * b.coeffs[j];
        return Polynomial(std::move(c));
    }

    /// Euclidean division over a field: a = q*b + r with deg r < deg b.
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero())
            throw std::domain_error("Polynomial: division by zero polynomial");
        if (a.degree() < b.degree())
            return {Polynomial{}, a};
        const T zero = field_traits<T>::zero(b.coeffs[0]);
        std::vector<T> rem = a.coeffs;
        std::vector<T> quot(static_cast<std::size_t>(a.degree() - b.degree() + 1), zero);
        for (int k = a.degree() - b.degree(); k >= 0; --k) {
            T q = rem[static_cast<std::size_t>(k + b.degree())] / b.lc();
            quot[static_cast<std::size_t>(k)] = q;
            for (int j = 0; j <= b.degree(); ++j)
                rem[static_cast<std::size_t>(k + j)] =
                    rem[static_cast<std::size_t>(k + j)] - q * b.coeffs[static_cast<std::size_t>(j)];
        }
        rem.resize(static_cast<std::size_t>(std::max(b.degree(), 0)));
        return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
    }

    Polynomial monic() const {
        if (is_zero())
            return {};
        std::vector<T> c;
        c.reserve(coeffs.size());
        for (const T& x : coeffs)
            c.push_back(x / lc());
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.coeffs == b.coeffs;
    }
};

using ExactPolynomial = Polynomial<GaussianRational>;
using ComplexPolynomial = Polynomial<BigComplex>;

/// Monic gcd by the Euclidean algorithm (remainders are re-normalized
/// to monic each round to keep rational coefficients small).
inline ExactPolynomial gcd(ExactPolynomial a, ExactPolynomial b) {
    if (a.is_zero()) return b.is_zero() ? b : b.monic();
    if (b.is_zero()) return a.monic();
    while (!b.is_zero()) {
        ExactPolynomial r = divmod(a, b).second;
        a = std::move(b);
        b = r.is_zero() ? std::move(r) : r.monic();
    }
    return a.monic();
}

struct SquareFreeFactor {
    ExactPolynomial factor; // monic, square-free
    int multiplicity = 1;
};

/// Yun's square-free decomposition: p ~ prod factor_k^mult_k with the
/// factors monic, square-free and pairwise coprime.
inline std::vector<SquareFreeFactor> square_free_decompose(const ExactPolynomial& p) {
    if (p.degree() < 1)
        throw std::invalid_argument("square_free_decompose: polynomial must be nonconstant");
    ExactPolynomial q = p.monic();
    ExactPolynomial dq = q.derivative();
    ExactPolynomial d = gcd(q, dq);
    if (d.degree() == 0)
        return {SquareFreeFactor{q, 1}};

    std::vector<SquareFreeFactor> out;
    ExactPolynomial b = divmod(q, d).first;
    ExactPolynomial c = divmod(dq, d).first;
    ExactPolynomial z = c - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        ExactPolynomial g = gcd(b, z);
        if (g.degree() > 0)
            out.push_back(SquareFreeFactor{g, i});
        b = divmod(b, g).first;
        c = divmod(z, g).first;
        z = c - b.derivative();
        ++i;
    }
    return out;
}

} // namespace ratiolim
