// Runs the fourteen acceptance batteries and prints one PASS/FAIL line each.
// Exit status is the number of failing criteria.

#include <cstdio>
#include <exception>

#include <sympath/batteries.hpp>

int main()
{
    using namespace sympath;
    BatteryOptions opts;
    int failed = 0;
    for (auto fn : acceptance_batteries()) {
        Battery b;
        std::string error;
        try {
            b = fn(opts);
        } catch (const std::exception& e) {
            error = e.what();
        }
        bool ok = error.empty() && b.pass();
        failed += ok ? 0 : 1;
        std::printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", b.criterion, b.name.c_str(), b.seconds);
        if (!error.empty())
            std::printf("    exception: %s\n", error.c_str());
        for (const auto& c : b.checks)
            std::printf("    [%s] %s: %.6g %s %.6g  (%s)%s%s\n", c.pass ? "ok" : "xx", c.id.c_str(), c.value,
                        c.relation.c_str(), c.tolerance, c.method.c_str(), c.detail.empty() ? "" : " ",
                        c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, acceptance_batteries().size());
    return failed;
}
