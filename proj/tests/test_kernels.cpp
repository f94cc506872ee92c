#include <complex>
#include <vector>

#include "doctest.h"

#include "bellbound/kernels.hpp"
#include "bellbound/rng.hpp"

using bellbound::Rng;
using cd = std::complex<double>;

namespace {

constexpr double kEquivTol = 1e-13;

std::vector<cd> random_vec(Rng& rng, std::size_t n) {
    std::vector<cd> v(n);
    for (auto& z : v) z = rng.next_complex_gaussian();
    return v;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace

TEST_CASE("every variant matches the scalar table") {
    const auto& ref = bellbound::simd::scalar();
    Rng rng(bellbound::kDefaultSeed);
    // Lengths straddling the vector width and remainder handling.
    const std::size_t lengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 64, 129};

    for (std::size_t vi = 0; vi < bellbound::simd::variant_count(); ++vi) {
        const auto& tab = bellbound::simd::variant(vi);
        CAPTURE(tab.name);
        for (std::size_t n : lengths) {
            auto x       = random_vec(rng, n);
            auto y0      = random_vec(rng, n);
            const cd a   = rng.next_complex_gaussian();
            const double c = rng.next_gaussian();
            const cd s     = rng.next_complex_gaussian();

            auto y_ref = y0;
            auto y_tab = y0;
            ref.axpy(n, a, x.data(), y_ref.data());
            tab.axpy(n, a, x.data(), y_tab.data());
            CHECK(max_abs_diff(y_ref, y_tab) <= kEquivTol);

            std::vector<cd> s_ref(n), s_tab(n);
            ref.scale(n, a, x.data(), s_ref.data());
            tab.scale(n, a, x.data(), s_tab.data());
            CHECK(max_abs_diff(s_ref, s_tab) <= kEquivTol);

            const cd d_ref = ref.dotc(n, x.data(), y0.data());
            const cd d_tab = tab.dotc(n, x.data(), y0.data());
            CHECK(std::abs(d_ref - d_tab) <=
                  kEquivTol * (1.0 + static_cast<double>(n)));

            auto rx_ref = x, ry_ref = y0;
            auto rx_tab = x, ry_tab = y0;
            ref.rot(n, rx_ref.data(), ry_ref.data(), c, s);
            tab.rot(n, rx_tab.data(), ry_tab.data(), c, s);
            CHECK(max_abs_diff(rx_ref, rx_tab) <= kEquivTol);
            CHECK(max_abs_diff(ry_ref, ry_tab) <= kEquivTol);
        }
    }
}

TEST_CASE("scalar kernels compute the definitions") {
    const auto& k = bellbound::simd::scalar();
    std::vector<cd> x = {{1, 2}, {3, -1}};
    std::vector<cd> y = {{0, 1}, {2, 0}};
    const cd a{2, -1};

    auto y1 = y;
    k.axpy(2, a, x.data(), y1.data());
    CHECK(std::abs(y1[0] - (y[0] + a * x[0])) <= 1e-15);
    CHECK(std::abs(y1[1] - (y[1] + a * x[1])) <= 1e-15);

    std::vector<cd> z(2);
    k.scale(2, a, x.data(), z.data());
    CHECK(std::abs(z[0] - a * x[0]) <= 1e-15);
    CHECK(std::abs(z[1] - a * x[1]) <= 1e-15);

    const cd d = k.dotc(2, x.data(), y.data());
    CHECK(std::abs(d - (std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1])) <=
          1e-15);

    auto rx = x, ry = y;
    const double c = 0.6;
    const cd s{0.8, 0.0};
    k.rot(2, rx.data(), ry.data(), c, s);
    CHECK(std::abs(rx[0] - (c * x[0] + s * y[0])) <= 1e-15);
    CHECK(std::abs(ry[0] - (-std::conj(s) * x[0] + c * y[0])) <= 1e-15);
}

TEST_CASE("rot preserves two-norm when |c|^2 + |s|^2 = 1") {
    Rng rng(7);
    auto x = random_vec(rng, 33);
    auto y = random_vec(rng, 33);
    double before = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        before += std::norm(x[i]) + std::norm(y[i]);

    const double c = 0.8;
    const cd s     = cd{0.36, 0.48}; // |s| = 0.6
    bellbound::simd::rot(x.size(), x.data(), y.data(), c, s);
    double after = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        after += std::norm(x[i]) + std::norm(y[i]);
    CHECK(std::abs(after - before) <= 1e-10 * before);
}

TEST_CASE("strided rotation agrees with the contiguous kernel") {
    Rng rng(11);
    const std::size_t n = 17, stride = 3;
    auto xs = random_vec(rng, n * stride);
    auto ys = random_vec(rng, n * stride);
    std::vector<cd> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = xs[i * stride];
        y[i] = ys[i * stride];
    }
    const double c = 0.28;
    const cd s{0.96, 0.0};
    bellbound::simd::rot_strided(n, xs.data(), stride, ys.data(), stride, c, s);
    bellbound::simd::rot(n, x.data(), y.data(), c, s);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(xs[i * stride] - x[i]) <= 1e-14);
        CHECK(std::abs(ys[i * stride] - y[i]) <= 1e-14);
    }
}

TEST_CASE("active table is one of the registered variants") {
    const auto& act = bellbound::simd::active();
    bool found      = false;
    for (std::size_t vi = 0; vi < bellbound::simd::variant_count(); ++vi)
        found = found || (&bellbound::simd::variant(vi) == &act);
    CHECK(found);
    CHECK(bellbound::simd::variant_count() >= 1);
}
