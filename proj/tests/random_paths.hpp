#pragma once

#include <random>

#include <sympath/path.hpp>

namespace sympath::testutil {

inline SymplecticPath random_lie_path(std::mt19937_64& rng, int dim, int pieces, double horizon, double speed)
{
    return paths::random_lie(rng, dim, pieces, horizon, speed);
}

} // namespace sympath::testutil
