#include "qng/prob_witness.hpp"

#include "qng/curves.hpp"
#include "qng/detail/bisect.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qng {

namespace {

constexpr double kProbBand = 1e-12;

void check_range(double m, const char* where)
{
    if (!std::isfinite(m) || m < 0.0 || m > 2.0) {
        throw std::invalid_argument(std::string(where) + ": mean must lie in [0, 2]");
    }
}

} // namespace

ProbPoint p0p1_curve(double r)
{
    if (!std::isfinite(r) || r < 0.0) {
        throw std::invalid_argument("p0p1_curve: squeezing must be non-negative");
    }
    return {curve::prob_vacuum(r), curve::prob_single(r)};
}

double prob_curve_inverse(double p0)
{
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw std::invalid_argument("prob_curve_inverse: p0 must lie in [0, 1]");
    }
    if (p0 >= 1.0) {
        return 0.0;
    }
    // p0~ is strictly decreasing, so p0~(r) - p0 changes sign from + to -.
    return detail::bisect([p0](double r) { return curve::prob_vacuum(r) - p0; }, 0.0,
                          kProbCurveMaxSqueezing);
}

Verdict classify_probs(const ProbPoint& p)
{
    Verdict v;
    if (!std::isfinite(p.p0) || !std::isfinite(p.p1)) {
        return v;
    }
    if (p.p0 < 0.0 || p.p1 < 0.0 || p.p0 > 1.0 || p.p1 > 1.0 || p.p0 + p.p1 > 1.0 + 1e-12) {
        v.nonphysical = true;
        return v;
    }
    if (p.p0 == 0.0 && p.p1 == 0.0) {
        v.tag = VerdictTag::Unwitnessed;
        return v;
    }
    if (p.p0 <= curve::prob_vacuum(kProbCurveMaxSqueezing)) {
        v.margin = -p.p1;
    } else {
        v.margin = curve::prob_single(prob_curve_inverse(p.p0)) - p.p1;
    }
    v.tag = v.margin < -kProbBand ? VerdictTag::QNG : VerdictTag::Unwitnessed;
    return v;
}

double p0_star(double m)
{
    check_range(m, "p0_star");
    // Sign change of p1~ + 2 p0~ - (2 - m): m at r = 0, m - 2 as r grows.
    const auto gap = [m](double r) {
        return curve::prob_single(r) + 2.0 * curve::prob_vacuum(r) - 2.0 + m;
    };
    if (m == 0.0) {
        return 1.0;
    }
    if (gap(kProbCurveMaxSqueezing) >= 0.0) {
        return curve::prob_vacuum(kProbCurveMaxSqueezing);
    }
    const double r = detail::bisect(gap, 0.0, kProbCurveMaxSqueezing, 1e-15);
    return curve::prob_vacuum(r);
}

MomentPair converted_curve(double r)
{
    const ProbPoint c = p0p1_curve(r);
    const double p2 = 1.0 - c.p1 - c.p0;
    const double m = c.p1 + 2.0 * p2;
    return {m, c.p1 + 4.0 * p2 - m * m};
}

double s2_bound_from_prob(double m)
{
    check_range(m, "s2_bound_from_prob");
    return 2.0 * p0_star(m) - (m - 2.0) * (m - 1.0);
}

ProbPoint probs_from_moments_three_level(const MomentPair& p)
{
    const double n2 = p.second_moment();
    const double p2 = (n2 - p.m) / 2.0;
    const double p1 = p.m - 2.0 * p2;
    return {1.0 - p1 - p2, p1};
}

} // namespace qng
