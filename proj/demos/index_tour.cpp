// Robbin-Salamon indices of rotation loops by three methods, and the mean
// index of a rotation generator against its iterates.

#include <cstdio>
#include <numbers>

#include <sympath/index.hpp>

int main()
{
    using namespace sympath;
    std::printf("%4s %10s %10s %10s\n", "k", "crossing", "kan", "spectral");
    for (int k = 1; k <= 5; ++k) {
        auto p = paths::rotation(2 * std::numbers::pi * k, 1.0);
        std::printf("%4d %10.1f %10.1f %10.1f\n", k, rs_index(p).value.value(), rs_index_kan(p).value.value(),
                    rs_index_spectral(p).value.value());
    }
    auto gen = paths::rotation(4 * std::numbers::pi / 3, 1.0);
    auto m = mean_index(gen, 12);
    std::printf("\nmean index of rotation(4pi/3): %.12f\n", m.value);
    for (int k : {1, 2, 3, 6})
        std::printf("  mu of %d-th iterate: %5.1f   mu/k = %.4f\n", k, m.indices[k - 1].value(), m.ratios[k - 1]);
}
