#include "qng/witness.hpp"

#include "qng/curves.hpp"
#include "qng/detail/bisect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qng {

namespace {

void check_squeezing(double r, const char* where)
{
    if (!std::isfinite(r) || r < 0.0 || r > kMaxSqueezing) {
        throw std::invalid_argument(std::string(where) + ": squeezing must lie in [0, 50], got " +
                                    std::to_string(r));
    }
}

void check_positive_squeezing(double r, const char* where)
{
    check_squeezing(r, where);
    if (r <= 0.0) {
        throw std::invalid_argument(std::string(where) + ": squeezing must be positive");
    }
}

bool all_finite(double a, double b) { return std::isfinite(a) && std::isfinite(b); }

Verdict invalid(bool nonphysical) { return {VerdictTag::Invalid, 0.0, nonphysical}; }

double band_for(double s2_bound) { return kBoundaryBand * std::max(1.0, s2_bound); }

} // namespace

bool is_physical(const MomentPair& p, double tol)
{
    if (!all_finite(p.m, p.s2) || p.m < -tol || p.s2 < -tol) {
        return false;
    }
    const double frac = p.m - std::floor(p.m);
    return p.s2 >= frac * (1.0 - frac) - tol;
}

BoundaryPoint ng_boundary(double r)
{
    check_squeezing(r, "ng_boundary");
    return {r, curve::mean(r), curve::variance(r)};
}

double ng_inverse_mean(double m)
{
    if (!std::isfinite(m) || m < 0.0) {
        throw std::invalid_argument("ng_inverse_mean: mean must be finite and non-negative");
    }
    if (m > curve::mean(kMaxSqueezing)) {
        throw std::invalid_argument("ng_inverse_mean: mean beyond the supported range");
    }
    if (m == 0.0) {
        return 0.0;
    }
    // m_NG(r) >= r, so r <= m bounds the root from above as well.
    const double r_hi = std::min(std::max(1.0, std::log(4.0 * m + 2.0) / 6.0 + 1.0), m);
    return detail::bisect([m](double r) { return curve::mean(r) - m; }, 0.0, r_hi);
}

double ng_variance_at_mean(double m)
{
    if (m < kDegenerateMean) {
        return 0.0;
    }
    return curve::variance(ng_inverse_mean(m));
}

Verdict classify_moments(const MomentPair& p)
{
    if (!all_finite(p.m, p.s2)) {
        return invalid(false);
    }
    if (p.m < 0.0 || p.s2 < 0.0) {
        return invalid(true);
    }
    const double bound = ng_variance_at_mean(p.m);
    Verdict v;
    v.margin = p.s2 - bound;
    v.nonphysical = !is_physical(p);
    if (v.margin < -band_for(bound)) {
        v.tag = VerdictTag::QNG;
    } else if (p.s2 < p.m) {
        v.tag = VerdictTag::NonclassicalOnly;
    } else {
        v.tag = VerdictTag::Unwitnessed;
    }
    return v;
}

double boundary_second_moment(double r)
{
    check_squeezing(r, "boundary_second_moment");
    return curve::second_moment(r);
}

IntensityMoments boundary_intensity(double r)
{
    check_squeezing(r, "boundary_intensity");
    return {curve::mean(r), curve::intensity_second_moment(r)};
}

G2Point boundary_g2(double r)
{
    check_positive_squeezing(r, "boundary_g2");
    const double m = curve::mean(r);
    return {m, 1.0 + curve::variance(r) / (m * m) - 1.0 / m};
}

double g2_asymptotic(double m)
{
    if (!std::isfinite(m) || m <= 0.0) {
        throw std::invalid_argument("g2_asymptotic: mean must be positive");
    }
    const double x = m + 0.5;
    return 1.0 - 1.0 / x + 3.0 / (std::pow(2.0, 5.0 / 3.0) * std::pow(x, 4.0 / 3.0)) -
           1.0 / (x * x);
}

FanoPoint boundary_fano(double r)
{
    check_positive_squeezing(r, "boundary_fano");
    const double m = curve::mean(r);
    return {m, curve::variance(r) / m};
}

MomentPair multimode_identical_boundary(int modes, double r)
{
    if (modes < 1) {
        throw std::invalid_argument("multimode_identical_boundary: need at least one mode");
    }
    check_squeezing(r, "multimode_identical_boundary");
    const double k = modes;
    return {k * curve::mean(r), k * k * curve::variance(r)};
}

IntensityMoments to_intensity(const MomentPair& p) { return {p.m, p.second_moment() - p.m}; }

MomentPair from_intensity(const IntensityMoments& w)
{
    return MomentPair::from_second_moment(w.w1, w.w2 + w.w1);
}

G2Point to_g2(const MomentPair& p)
{
    if (!(p.m > 0.0)) {
        throw std::invalid_argument("to_g2: g2 needs a positive mean");
    }
    return {p.m, 1.0 + p.s2 / (p.m * p.m) - 1.0 / p.m};
}

MomentPair from_g2(const G2Point& g)
{
    if (!(g.m > 0.0)) {
        throw std::invalid_argument("from_g2: g2 needs a positive mean");
    }
    return {g.m, (g.g2 - 1.0) * g.m * g.m + g.m};
}

Verdict classify_intensity(const IntensityMoments& w)
{
    if (!all_finite(w.w1, w.w2)) {
        return invalid(false);
    }
    if (w.w1 < 0.0) {
        return invalid(true);
    }
    // w2 - W2_NG equals the variance margin at the same mean.
    return classify_moments(from_intensity(w));
}

Verdict classify_g2(const G2Point& g)
{
    if (!all_finite(g.m, g.g2) || !(g.m > 0.0)) {
        return invalid(false);
    }
    Verdict v = classify_moments(from_g2(g));
    if (v.tag != VerdictTag::Invalid) {
        v.margin /= g.m * g.m;
    }
    return v;
}

Verdict classify_fano(const FanoPoint& f)
{
    if (!all_finite(f.m, f.fano) || !(f.m > 0.0)) {
        return invalid(false);
    }
    Verdict v = classify_moments({f.m, f.fano * f.m});
    if (v.tag != VerdictTag::Invalid) {
        v.margin /= f.m;
    }
    return v;
}

} // namespace qng
