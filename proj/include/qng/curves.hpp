#ifndef QNG_CURVES_HPP
#define QNG_CURVES_HPP

// Closed-form witness curves, parameterized by the squeezing r >= 0 of the
// optimal displaced squeezed vacuum. All functions are generic in the
// floating-point scalar. expm1 is used wherever the r -> 0 limit would
// otherwise cancel.

#include <cmath>
#include <concepts>

namespace qng::curve {

template <std::floating_point T>
T mean(T r)
{
    using std::expm1;
    return (expm1(T(6) * r) + expm1(T(-2) * r)) / T(4);
}

template <std::floating_point T>
T variance(T r)
{
    using std::expm1;
    return (T(3) * expm1(T(4) * r) + expm1(T(-4) * r)) / T(8);
}

/// <N^2> on the boundary, m^2 + s^2.
template <std::floating_point T>
T second_moment(T r)
{
    const T m = mean(r);
    return m * m + variance(r);
}

/// <W^2> on the boundary, <N^2> - <N>.
template <std::floating_point T>
T intensity_second_moment(T r)
{
    const T m = mean(r);
    return m * m + variance(r) - m;
}

/// d^2<N^2>/dm^2 along the curve. Non-negative for r >= 0.
template <std::floating_point T>
T second_moment_curvature(T r)
{
    using std::exp;
    return T(2) - T(4) / (T(3) * exp(T(8) * r) - T(1));
}

/// Rational closed form of 1 + s^2/m^2 - 1/m on the boundary (r > 0).
template <std::floating_point T>
T g2_rational(T r)
{
    using std::exp;
    const T e2 = exp(T(2) * r);
    const T e4 = e2 * e2;
    const T e6 = e4 * e2;
    const T e8 = e4 * e4;
    const T e10 = e8 * e2;
    const T e12 = e6 * e6;
    const T num = e12 + T(2) * e10 + T(3) * e8 - T(4) * e6 - T(3) * e4 - T(2) * e2 + T(3);
    const T den = e6 + e4 + e2 - T(1);
    return num / (den * den);
}

/// Average second quadrature moment Q^2 on the boundary.
template <std::floating_point T>
T quadrature_q2(T r)
{
    using std::exp;
    return (exp(T(6) * r) + exp(T(-2) * r)) / T(8);
}

/// Average fourth quadrature moment Q^4 on the boundary.
template <std::floating_point T>
T quadrature_q4(T r)
{
    using std::exp;
    return T(3) / T(128) *
           (exp(T(12) * r) + T(8) * exp(T(4) * r) - T(4) + T(3) * exp(T(-4) * r));
}

/// Maximal single-photon probability reachable by Gaussian mixtures at
/// vacuum probability prob_vacuum(r).
template <std::floating_point T>
T prob_vacuum(T r)
{
    using std::cosh;
    using std::exp;
    using std::expm1;
    using std::tanh;
    return exp(-expm1(T(4) * r) * (T(1) - tanh(r)) / T(4)) / cosh(r);
}

template <std::floating_point T>
T prob_single(T r)
{
    using std::cosh;
    using std::exp;
    using std::expm1;
    using std::tanh;
    const T c = cosh(r);
    const T a = expm1(T(4) * r);
    return a * exp(-a * (T(1) - tanh(r)) / T(4)) / (T(4) * c * c * c);
}

} // namespace qng::curve

#endif // QNG_CURVES_HPP
