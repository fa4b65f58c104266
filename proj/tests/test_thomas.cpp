#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "silag/thomas.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace silag;

namespace {

// Dense Gaussian elimination with partial pivoting; the reference solver.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[pivot][k]))
                pivot = i;
        std::swap(a[k], a[pivot]);
        std::swap(b[k], b[pivot]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j)
                a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

} // namespace

TEST_CASE("identity system") {
    const std::vector<double> zero(4, 0.0), one(4, 1.0);
    const std::vector<double> rhs{3.0, -1.0, 0.5, 7.0};
    const auto x = thomas_solve(zero, one, zero, rhs);
    for (std::size_t i = 0; i < rhs.size(); ++i)
        CHECK(x[i] == rhs[i]);
}

TEST_CASE("small hand-checked system") {
    // Rows [2,-1], [-1,2,-1], [-1,2]; row sums match rhs, so x = (1,1,1).
    const std::vector<double> lower{0.0, -1.0, -1.0};
    const std::vector<double> diag{2.0, 2.0, 2.0};
    const std::vector<double> upper{-1.0, -1.0, 0.0};
    const std::vector<double> rhs{1.0, 0.0, 1.0};
    const auto x = thomas_solve(lower, diag, upper, rhs);
    for (const double xi : x)
        CHECK(xi == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random dominant system vs dense oracle") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const std::size_t n = 50;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> lower(n), diag(n), upper(n), rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            lower[i] = (i == 0) ? 0.0 : dist(rng);
            upper[i] = (i == n - 1) ? 0.0 : dist(rng);
            diag[i] = std::abs(lower[i]) + std::abs(upper[i]) + 0.5 + std::abs(dist(rng));
            if (dist(rng) < 0.0)
                diag[i] = -diag[i];
            rhs[i] = dist(rng);
        }
        std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            dense[i][i] = diag[i];
            if (i > 0)
                dense[i][i - 1] = lower[i];
            if (i + 1 < n)
                dense[i][i + 1] = upper[i];
        }
        const auto x = thomas_solve(lower, diag, upper, rhs);
        const auto y = dense_solve(dense, rhs);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-11));

        // Residual check directly against the assembled system.
        for (std::size_t i = 0; i < n; ++i) {
            double r = diag[i] * x[i] - rhs[i];
            if (i > 0)
                r += lower[i] * x[i - 1];
            if (i + 1 < n)
                r += upper[i] * x[i + 1];
            CHECK(std::abs(r) <= 1e-12 * (std::abs(rhs[i]) + 1.0));
        }
    }
}
