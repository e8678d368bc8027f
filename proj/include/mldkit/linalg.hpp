#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace mldkit {

using IntMatrix = std::vector<std::vector<Int>>;
using RatMatrix = std::vector<std::vector<Rat>>;

namespace detail {

// One-step Bareiss elimination on an augmented integer matrix (n rows,
// n + extra columns). Intermediate entries stay integral; every division
// is exact. Returns the determinant of the leading n x n block.
inline Int bareiss_eliminate(IntMatrix& m, std::size_t n) {
    Int prev = 1;
    int sign = 1;
    const std::size_t cols = n == 0 ? 0 : m[0].size();
    for (std::size_t k = 0; k + 1 <= n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) throw error(errc::singular_matrix, "zero pivot column in elimination");
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < cols; ++j) {
                Int t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    if (n == 0) return Int(1);
    return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

} // namespace detail

inline Int determinant(const IntMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return Int(1);
    IntMatrix m = a;
    try {
        return detail::bareiss_eliminate(m, n);
    } catch (const error& e) {
        if (e.code() == errc::singular_matrix) return Int(0);
        throw;
    }
}

// Sylvester test: every leading principal minor strictly positive.
// In pivot-free Bareiss the pivot entering step k is exactly the
// (k+1)-st leading principal minor, so the first nonpositive pivot decides.
inline bool all_leading_minors_positive(const IntMatrix& a) {
    const std::size_t n = a.size();
    IntMatrix m = a;
    Int prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return true;
}

struct LinearSolution {
    std::vector<Rat> x;
    Int det;
};

// Exact solve of A x = b by fraction-free elimination; the determinant of A
// is a by-product. Throws SingularMatrix when det = 0.
inline LinearSolution solve_exact(const IntMatrix& a, const std::vector<Rat>& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw error(errc::singular_matrix, "dimension mismatch in solve");
    if (n == 0) return {{}, Int(1)};

    Int scale = 1;
    for (const Rat& q : b) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), q.get_den().get_mpz_t());

    IntMatrix m(n, std::vector<Int>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        Rat scaled = b[i] * Rat(scale);
        m[i][n] = scaled.get_num(); // exact: denominator divides scale
    }

    Int det = detail::bareiss_eliminate(m, n);
    if (det == 0) throw error(errc::singular_matrix, "matrix is singular");

    std::vector<Rat> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Rat acc(m[ii][n]);
        for (std::size_t j = ii + 1; j < n; ++j) acc -= Rat(m[ii][j]) * x[j];
        x[ii] = acc / Rat(m[ii][ii]);
        x[ii].canonicalize();
    }
    for (Rat& q : x) {
        q /= Rat(scale);
        q.canonicalize();
    }
    return {std::move(x), det};
}

struct ExactInverse {
    RatMatrix inv;
    Int det;
};

// Inverse via one elimination sweep over [A | I].
inline ExactInverse inverse_exact(const IntMatrix& a) {
    const std::size_t n = a.size();
    IntMatrix m(n, std::vector<Int>(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        m[i][n + i] = 1;
    }
    Int det = detail::bareiss_eliminate(m, n);
    if (n > 0 && det == 0) throw error(errc::singular_matrix, "matrix is singular");

    RatMatrix inv(n, std::vector<Rat>(n));
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Rat> x(n);
        for (std::size_t ii = n; ii-- > 0;) {
            Rat acc(m[ii][n + c]);
            for (std::size_t j = ii + 1; j < n; ++j) acc -= Rat(m[ii][j]) * x[j];
            x[ii] = acc / Rat(m[ii][ii]);
            x[ii].canonicalize();
        }
        for (std::size_t r = 0; r < n; ++r) inv[r][c] = x[r];
    }
    return {std::move(inv), det};
}

} // namespace mldkit
