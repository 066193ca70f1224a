// Cotangent twist map of g(s) = s^2/2: periodic points of every period,
// then the twist verdict of Dehn-twist extensions across k and l.

#include <cstdio>

#include <sympath/twist.hpp>

int main()
{
    using namespace sympath;
    auto cat = periodic_point_search(polynomial_twist({0.5}), 8);
    std::printf("%3s %3s %12s %10s\n", "k", "j", "level", "residual");
    for (const auto& pl : cat)
        std::printf("%3d %3d %12.9f %10.2e\n", pl.k, pl.j, pl.level, pl.residual);

    std::printf("\nDehn-twist extension verdicts (T = twist)\n   k:");
    for (int k = 1; k <= 5; ++k)
        std::printf(" %d", k);
    std::printf("\n");
    for (int ell = 1; ell <= 3; ++ell) {
        std::printf("l = %d", ell);
        for (int k = 1; k <= 5; ++k)
            std::printf(" %c", dehn_twist_verdict(DehnTwistProfile{k, ell, 0.5}).twist.twist ? 'T' : '-');
        std::printf("\n");
    }
}
