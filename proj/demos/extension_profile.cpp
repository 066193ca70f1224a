// Radial profile of the Reeb coefficient F along the cylindrical end of the
// codisk extension, for a shrinking cutoff width delta1.

#include <cstdio>

#include <sympath/twist.hpp>

int main()
{
    using namespace sympath;
    auto collar = twist_collar(polynomial_twist({0.5}), 0.5);
    auto samples = boundary_samples(collar.boundary, 8, 1);
    auto split = split_collar(collar, samples);
    for (double d1 : {0.2, 0.1, 0.05}) {
        auto e = extend_hamiltonian(split, default_extension_params(split, samples, d1), samples);
        std::printf("delta1 = %.2f, A = %.6f, linear for r >= %.2f\n", d1, e.params.A, e.r_lin());
        const auto& x = samples.front();
        for (double r = 1.0; r <= e.r_lin() + 0.1001; r += (e.r_lin() + 0.1 - 1.0) / 8)
            std::printf("  r = %.4f  H = %10.6f  F = %10.6f\n", r, e.value(r, x.b, x.t), e.F(r, x.b, x.t));
    }
}
