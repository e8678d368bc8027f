#include <catch2/catch_amalgamated.hpp>

#include <mldkit/linalg.hpp>

#include <random>

using namespace mldkit;

namespace {

// Independent oracle: cofactor expansion along the first row.
Int det_cofactor(const IntMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) return Int(1);
    if (n == 1) return a[0][0];
    Int acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0) continue;
        IntMatrix minor(n - 1, std::vector<Int>(n - 1));
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor[r - 1][cc++] = a[r][c];
            }
        }
        Int term = a[0][j] * det_cofactor(minor);
        if (j % 2 == 0) acc += term;
        else acc -= term;
    }
    return acc;
}

IntMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, int spread) {
    IntMatrix m(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = static_cast<long>(rng() % (2 * spread + 1)) - spread;
        for (std::size_t j = i + 1; j < n; ++j) {
            long v = static_cast<long>(rng() % (2 * spread + 1)) - spread;
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    return m;
}

} // namespace

TEST_CASE("determinant agrees with cofactor expansion") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 5;
        IntMatrix m = random_symmetric(rng, n, 4);
        CHECK(determinant(m) == det_cofactor(m));
    }
    CHECK(determinant({}) == 1);
}

TEST_CASE("solve has zero residual and exposes the determinant") {
    std::mt19937_64 rng(7);
    int solved = 0;
    while (solved < 100) {
        std::size_t n = 1 + rng() % 5;
        IntMatrix m = random_symmetric(rng, n, 5);
        if (det_cofactor(m) == 0) continue;
        std::vector<Rat> b(n);
        for (auto& q : b) {
            long num = static_cast<long>(rng() % 21) - 10;
            long den = 1 + static_cast<long>(rng() % 6);
            q = rat(num, den);
        }
        LinearSolution sol = solve_exact(m, b);
        CHECK(sol.det == det_cofactor(m));
        for (std::size_t i = 0; i < n; ++i) {
            Rat acc(0);
            for (std::size_t j = 0; j < n; ++j) acc += Rat(m[i][j]) * sol.x[j];
            REQUIRE(acc == b[i]);
        }
        ++solved;
    }
}

TEST_CASE("singular systems are rejected") {
    IntMatrix m{{Int(1), Int(2)}, {Int(2), Int(4)}};
    std::vector<Rat> b{Rat(1), Rat(1)};
    CHECK_THROWS_AS(solve_exact(m, b), error);
    CHECK(determinant(m) == 0);
}

TEST_CASE("leading minor positivity matches the definition") {
    // -M for the A2 chain: minors 2, 3.
    IntMatrix a2{{Int(2), Int(-1)}, {Int(-1), Int(2)}};
    CHECK(all_leading_minors_positive(a2));
    // 3-cycle of weight-2 curves: det 0.
    IntMatrix cyc{{Int(2), Int(-1), Int(-1)},
                  {Int(-1), Int(2), Int(-1)},
                  {Int(-1), Int(-1), Int(2)}};
    CHECK_FALSE(all_leading_minors_positive(cyc));
    CHECK(det_cofactor(cyc) == 0);
    CHECK(all_leading_minors_positive({{Int(1)}}));
}

TEST_CASE("exact inverse multiplies back to the identity") {
    std::mt19937_64 rng(99);
    int done = 0;
    while (done < 50) {
        std::size_t n = 1 + rng() % 4;
        IntMatrix m = random_symmetric(rng, n, 4);
        if (det_cofactor(m) == 0) continue;
        ExactInverse ei = inverse_exact(m);
        CHECK(ei.det == det_cofactor(m));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Rat acc(0);
                for (std::size_t k = 0; k < n; ++k) acc += Rat(m[i][k]) * ei.inv[k][j];
                REQUIRE(acc == (i == j ? Rat(1) : Rat(0)));
            }
        }
        ++done;
    }
}
