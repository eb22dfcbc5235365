#include "cantor_ei/observables.hpp"

#include "cantor_ei/errors.hpp"

namespace cantor_ei {

int ternary_ladder(double x, int cap)
{
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("ternary_ladder: x outside [0,1]");
    if (cap < 1) throw domain_error("ternary_ladder: cap must be >= 1");
    constexpr double third = 1.0 / 3.0;
    constexpr double two_thirds = 2.0 / 3.0;
    double y = x;
    for (int n = 1; n < cap; ++n) {
        if (y > third && y < two_thirds) return n;
        y = y < third ? 3.0 * y : 3.0 * y - 2.0;
    }
    return cap;
}

int escape_time(double x, const QuadraticMap& g, int cap)
{
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("escape_time: x outside [0,1]");
    if (cap < 1) throw domain_error("escape_time: cap must be >= 1");
    double y = x;
    for (int j = 1; j < cap; ++j) {
        y = g(y);
        if (y < 0.0 || y > 1.0) return j;
    }
    return cap;
}

} // namespace cantor_ei
