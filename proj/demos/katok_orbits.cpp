// Katok example with n = 3: the four closed Reeb orbits, the constant
// return time on the page and the two fixed points of the return map.

#include <cstdio>
#include <numbers>
#include <random>

#include <sympath/katok.hpp>
#include <sympath/return_map.hpp>

int main()
{
    using namespace sympath;
    const double eps = 1.0 / std::numbers::sqrt2 - 0.2;
    KatokParams p{3, {eps}, true};
    for (const auto& o : katok::orbit_catalog(p).orbits)
        std::printf("orbit %-6s period %.12f\n", o.label.c_str(), o.period);

    auto m = models::katok_page(eps);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        CVector w = katok::random_page_point(p, rng);
        auto r = first_return(m, to_real(w));
        std::printf("first return from page point %d: T = %.12f\n", i, r.T);
    }
    for (const auto& f : katok::periodic_point_search(p, 20))
        std::printf("periodic point of period %d, residual %.2e\n", f.period, f.residual);
}
