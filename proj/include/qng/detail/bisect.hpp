#ifndef QNG_DETAIL_BISECT_HPP
#define QNG_DETAIL_BISECT_HPP

#include <cmath>
#include <limits>
#include <utility>

namespace qng::detail {

/// Bisection for a sign change of f on [lo, hi]. f(lo) and f(hi) must have
/// opposite signs (zero counts as the sign of hi's side when f(lo) < 0).
/// Stops when the bracket is below abs_tol or can no longer be split.
template <typename F>
std::pair<double, double> bisect_bracket(F&& f, double lo, double hi, double abs_tol = 0.0,
                                         int max_iter = 2000)
{
    const bool lo_negative = f(lo) < 0.0;
    for (int i = 0; i < max_iter; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi || hi - lo <= abs_tol) {
            break;
        }
        if ((f(mid) < 0.0) == lo_negative) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

template <typename F>
double bisect(F&& f, double lo, double hi, double abs_tol = 0.0, int max_iter = 2000)
{
    const auto [a, b] = bisect_bracket(f, lo, hi, abs_tol, max_iter);
    return a + 0.5 * (b - a);
}

} // namespace qng::detail

#endif // QNG_DETAIL_BISECT_HPP
