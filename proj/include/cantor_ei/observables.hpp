#pragma once

namespace cantor_ei {

/// Level index n of the gap B_n holding x, by ternary zoom; cap when no gap
/// turns up within cap steps (x on or very near the Cantor set).
int ternary_ladder(double x, int cap);

/// g(x) = a x^2 + b x + c; the default is 6 x (1 - x).
struct QuadraticMap {
    double a = -6.0;
    double b = 6.0;
    double c = 0.0;
    double operator()(double x) const { return (a * x + b) * x + c; }
};

/// Least j <= cap with g^j(x) outside [0,1], else cap.
int escape_time(double x, const QuadraticMap& g, int cap);

} // namespace cantor_ei
