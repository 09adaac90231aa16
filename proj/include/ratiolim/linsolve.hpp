#pragma once

// Small dense solves for the basis-matrix system. Two lanes: exact
// Gaussian elimination over GaussianRational, and complex LU with
// partial pivoting, one step of iterative refinement at the working
// precision, and a power-iteration condition estimate. n stays small,
// so robustness wins over asymptotics throughout.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ratiolim/bigcomplex.hpp"
#include "ratiolim/rational.hpp"

namespace ratiolim {

template <typename T>
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<T> a; // row-major

    SquareMatrix() = default;
    SquareMatrix(std::size_t size, const T& fill) : n(size), a(size * size, fill) {}

    T& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const T& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct SingularMatrix : std::runtime_error {
    SingularMatrix() : std::runtime_error("linear system is singular") {}
};

/// Exact solve over the Gaussian rationals (first-nonzero pivoting).
inline std::vector<GaussianRational> solve_exact(SquareMatrix<GaussianRational> m,
                                                 std::vector<GaussianRational> b) {
    const std::size_t n = m.n;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m.at(pivot, col).is_zero())
            ++pivot;
        if (pivot == n)
            throw SingularMatrix();
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m.at(pivot, j), m.at(col, j));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            if (m.at(row, col).is_zero())
                continue;
            GaussianRational factor = m.at(row, col) / m.at(col, col);
            for (std::size_t j = col; j < n; ++j)
                m.at(row, j) -= factor * m.at(col, j);
            b[row] -= factor * b[col];
        }
    }
    std::vector<GaussianRational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        GaussianRational acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            acc -= m.at(i, j) * x[j];
        x[i] = acc / m.at(i, i);
    }
    return x;
}

namespace detail {

struct ComplexLU {
    SquareMatrix<BigComplex> lu;
    std::vector<std::size_t> perm; // row order after pivoting
};

inline ComplexLU lu_factor(const SquareMatrix<BigComplex>& a) {
    const std::size_t n = a.n;
    ComplexLU f{a, std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i)
        f.perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        BigReal best = squared_modulus(f.lu.at(col, col));
        for (std::size_t row = col + 1; row < n; ++row) {
            BigReal cand = squared_modulus(f.lu.at(row, col));
            if (cand > best) {
                best = cand;
                pivot = row;
            }
        }
        if (best.is_zero())
            throw SingularMatrix();
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(f.lu.at(pivot, j), f.lu.at(col, j));
            std::swap(f.perm[pivot], f.perm[col]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            BigComplex m = f.lu.at(row, col) / f.lu.at(col, col);
            f.lu.at(row, col) = m;
            for (std::size_t j = col + 1; j < n; ++j)
                f.lu.at(row, j) -= m * f.lu.at(col, j);
        }
    }
    return f;
}

inline std::vector<BigComplex> lu_solve(const ComplexLU& f, const std::vector<BigComplex>& b) {
    const std::size_t n = f.lu.n;
    std::vector<BigComplex> y;
    y.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        y.push_back(b[f.perm[i]]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            y[i] -= f.lu.at(i, j) * y[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j)
            y[i] -= f.lu.at(i, j) * y[j];
        y[i] = y[i] / f.lu.at(i, i);
    }
    return y;
}

inline std::vector<BigComplex> matvec(const SquareMatrix<BigComplex>& a,
                                      const std::vector<BigComplex>& v, bool conj_transpose) {
    const std::size_t n = a.n;
    std::vector<BigComplex> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BigComplex acc(v.empty() ? kMinPrecision : v[0].precision());
        for (std::size_t j = 0; j < n; ++j)
            acc += (conj_transpose ? a.at(j, i).conj() : a.at(i, j)) * v[j];
        out.push_back(std::move(acc));
    }
    return out;
}

inline BigReal vec_norm2(const std::vector<BigComplex>& v, prec_t prec) {
    BigReal acc = BigReal::from_long(0, prec);
    for (const auto& z : v)
        acc += squared_modulus(z);
    return sqrt(acc);
}

/// sigma_max of the map v -> M v (or of M^{-1} when applied through a
/// solver callback), by power iteration on the normal operator.
template <typename Apply, typename ApplyH>
double sigma_max_estimate(std::size_t n, prec_t prec, Apply&& apply, ApplyH&& apply_h,
                          int iters = 6) {
    std::vector<BigComplex> v(n, BigComplex::from_long(1, 0, prec));
    BigReal nrm = vec_norm2(v, prec);
    for (auto& z : v)
        z = z / BigComplex(nrm, BigReal::from_long(0, prec));
    double sigma = 0.0;
    for (int t = 0; t < iters; ++t) {
        std::vector<BigComplex> w = apply(v);
        std::vector<BigComplex> u = apply_h(w);
        BigReal growth = vec_norm2(u, prec);
        if (growth.is_zero())
            return 0.0;
        sigma = std::sqrt(growth.to_double());
        for (auto& z : u)
            z = z / BigComplex(growth, BigReal::from_long(0, prec));
        v = std::move(u);
    }
    return sigma;
}

} // namespace detail

struct ComplexSolveResult {
    std::vector<BigComplex> solution;
    double condition_estimate = 1.0;
    double residual_norm = 0.0; // ||b - Ax||_2 after refinement
};

/// LU solve with one refinement step and a two-sided power-iteration
/// condition estimate (sigma_max(A) * sigma_max(A^{-1})).
inline ComplexSolveResult solve_complex(const SquareMatrix<BigComplex>& a,
                                        const std::vector<BigComplex>& b, prec_t prec) {
    const std::size_t n = a.n;
    detail::ComplexLU f = detail::lu_factor(a);
    std::vector<BigComplex> x = detail::lu_solve(f, b);

    // one step of iterative refinement at the same precision
    std::vector<BigComplex> ax = detail::matvec(a, x, false);
    std::vector<BigComplex> r;
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        r.push_back(b[i] - ax[i]);
    std::vector<BigComplex> d = detail::lu_solve(f, r);
    for (std::size_t i = 0; i < n; ++i)
        x[i] += d[i];

    ax = detail::matvec(a, x, false);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = b[i] - ax[i];

    // explicit inverse (n extra solves; n is tiny) so the conjugate
    // transpose of A^{-1} is a plain matvec in the power iteration
    SquareMatrix<BigComplex> inv(n, BigComplex(prec));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<BigComplex> e(n, BigComplex(prec));
        e[j] = BigComplex::from_long(1, 0, prec);
        std::vector<BigComplex> col = detail::lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i)
            inv.at(i, j) = col[i];
    }
    const double sigma_a = detail::sigma_max_estimate(
        n, prec, [&](const std::vector<BigComplex>& v) { return detail::matvec(a, v, false); },
        [&](const std::vector<BigComplex>& v) { return detail::matvec(a, v, true); });
    const double sigma_inv = detail::sigma_max_estimate(
        n, prec, [&](const std::vector<BigComplex>& v) { return detail::matvec(inv, v, false); },
        [&](const std::vector<BigComplex>& v) { return detail::matvec(inv, v, true); });

    ComplexSolveResult out;
    out.solution = std::move(x);
    out.condition_estimate = sigma_a * sigma_inv;
    out.residual_norm = detail::vec_norm2(r, prec).to_double_up();
    return out;
}

} // namespace ratiolim
