#include "qng/curves.hpp"
#include "qng/witness.hpp"

#include "reference.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace qng;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("boundary endpoints and reference values")
{
    const BoundaryPoint b0 = ng_boundary(0.0);
    CHECK(b0.m == 0.0);
    CHECK(b0.s2 == 0.0);

    // 40-digit values from an independent evaluation.
    const BoundaryPoint b = ng_boundary(0.2);
    CHECK(b.m == doctest::Approx(0.4976092421930466976).epsilon(1e-15));
    CHECK(b.s2 == doctest::Approx(0.3907439686993280506).epsilon(1e-15));

    for (double r : {1e-8, 1e-4, 0.01, 0.3, 1.0, 2.5, 5.0, 10.0}) {
        const ref::mp R(r);
        const BoundaryPoint p = ng_boundary(r);
        CHECK(rel_err(p.m, static_cast<double>(ref::mean(R))) < 1e-14);
        CHECK(rel_err(p.s2, static_cast<double>(ref::variance(R))) < 1e-14);
    }
}

TEST_CASE("boundary large-r asymptote")
{
    for (double r : {3.0, 4.0, 6.0}) {
        const BoundaryPoint b = ng_boundary(r);
        CHECK(b.m / (std::exp(6 * r) / 4) == doctest::Approx(1.0).epsilon(2 * std::exp(-6 * r) + 1e-12));
        CHECK(b.s2 / (0.375 * std::pow(4 * b.m, 2.0 / 3.0)) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("boundary rejects bad squeezing")
{
    CHECK_THROWS_AS(ng_boundary(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(ng_boundary(kNaN), std::invalid_argument);
    CHECK_THROWS_AS(ng_boundary(INFINITY), std::invalid_argument);
    CHECK_THROWS_AS(ng_boundary(50.5), std::invalid_argument);
    CHECK_NOTHROW(ng_boundary(50.0));
}

TEST_CASE("inverse mean")
{
    CHECK(ng_inverse_mean(0.0) == 0.0);
    CHECK(ng_inverse_mean(curve::mean(0.5)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ng_inverse_mean(15.0) == doctest::Approx(0.6871742200402210997).epsilon(1e-14));
    CHECK_THROWS_AS(ng_inverse_mean(-1e-3), std::invalid_argument);
    CHECK_THROWS_AS(ng_inverse_mean(kNaN), std::invalid_argument);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> logm(-10.0, 8.0);
    for (int i = 0; i < 300; ++i) {
        const double m = std::pow(10.0, logm(rng));
        const double r = ng_inverse_mean(m);
        CHECK(std::abs(curve::mean(r) - m) <= 1e-12 * std::max(1.0, m));
        CHECK(r == doctest::Approx(static_cast<double>(ref::inverse_mean(ref::mp(m)))).epsilon(1e-9));
    }
}

TEST_CASE("variance at mean against the multiprecision oracle")
{
    CHECK(ng_variance_at_mean(0.5) == doctest::Approx(0.3923457179605154776).epsilon(1e-13));
    CHECK(ng_variance_at_mean(1.0) == doctest::Approx(0.6991171098971365611).epsilon(1e-13));
    CHECK(ng_variance_at_mean(2.0) == doctest::Approx(1.2132328942050065586).epsilon(1e-13));
    CHECK(ng_variance_at_mean(5.0) == doctest::Approx(2.4282762827676974213).epsilon(1e-13));
    CHECK(ng_variance_at_mean(10.0) == doctest::Approx(4.0206663987812820833).epsilon(1e-13));
    for (double m : {1e-6, 1e-3, 0.07, 0.9, 3.3, 44.0, 1e4}) {
        CHECK(rel_err(ng_variance_at_mean(m), ref::variance_at_mean(m)) < 1e-10);
    }
    CHECK(ng_variance_at_mean(0.0) == 0.0);
    CHECK(ng_variance_at_mean(1e-13) == 0.0);
}

TEST_CASE("parametric and non-parametric forms agree")
{
    for (int i = 0; i < 1000; ++i) {
        const double r = 3.0 * i / 999.0;
        const BoundaryPoint b = ng_boundary(r);
        if (b.m == 0.0) {
            continue;
        }
        CHECK(ng_variance_at_mean(b.m) == doctest::Approx(b.s2).epsilon(1e-9));
    }
}

TEST_CASE("monotone in r")
{
    double m_prev = -1.0;
    double s_prev = -1.0;
    for (int i = 0; i <= 5000; ++i) {
        const BoundaryPoint b = ng_boundary(4.0 * i / 5000.0);
        CHECK(b.m > m_prev);
        CHECK(b.s2 > s_prev);
        m_prev = b.m;
        s_prev = b.s2;
    }
}

TEST_CASE("small-mean expansion")
{
    for (double s2 = 1e-4; s2 <= 0.05; s2 += 1e-4) {
        // r with s2_NG(r) = s2, by bisection on the variance.
        double lo = 0.0;
        double hi = 1.0;
        for (int k = 0; k < 200; ++k) {
            const double mid = 0.5 * (lo + hi);
            (curve::variance(mid) < s2 ? lo : hi) = mid;
        }
        const double m = curve::mean(0.5 * (lo + hi));
        CHECK(std::abs(m - (s2 + s2 * s2)) <= 2 * s2 * s2 * s2);
    }
}

TEST_CASE("second moment and its convexity")
{
    CHECK(boundary_second_moment(0.0) == 0.0);
    for (double r = 0.0; r <= 3.0; r += 0.01) {
        const BoundaryPoint b = ng_boundary(r);
        const double closed = std::exp(12 * r) / 16 - std::exp(6 * r) / 4 + std::exp(4 * r) / 2 -
                              0.25 - std::exp(-2 * r) / 4 + 3 * std::exp(-4 * r) / 16;
        CHECK(boundary_second_moment(r) == doctest::Approx(b.m * b.m + b.s2).epsilon(1e-12));
        CHECK(rel_err(boundary_second_moment(r), closed) < 1e-10);
        CHECK(curve::second_moment_curvature(r) >= 0.0);
    }
    // Discrete second difference in m, on an uneven grid.
    std::vector<double> m;
    std::vector<double> n2;
    for (double r = 0.0; r <= 2.0; r += 0.005) {
        m.push_back(curve::mean(r));
        n2.push_back(boundary_second_moment(r));
    }
    for (std::size_t i = 1; i + 1 < m.size(); ++i) {
        const double left = (n2[i] - n2[i - 1]) / (m[i] - m[i - 1]);
        const double right = (n2[i + 1] - n2[i]) / (m[i + 1] - m[i]);
        CHECK(right - left >= -1e-9);
    }
}

TEST_CASE("curvature closed form matches finite differences")
{
    for (double r : {0.05, 0.2, 0.5, 1.0}) {
        const double h = 1e-4;
        const double dm = (curve::mean(r + h) - curve::mean(r - h)) / (2 * h);
        const auto dn2 = [&](double x) {
            return (boundary_second_moment(x + h) - boundary_second_moment(x - h)) /
                   (curve::mean(x + h) - curve::mean(x - h));
        };
        const double numeric = (dn2(r + h) - dn2(r - h)) / (2 * h) / dm;
        CHECK(numeric == doctest::Approx(curve::second_moment_curvature(r)).epsilon(1e-4));
    }
}

TEST_CASE("classify_moments examples")
{
    const Verdict q = classify_moments({2.0, 0.0});
    CHECK(q.tag == VerdictTag::QNG);
    CHECK(q.margin < 0.0);

    const Verdict coh = classify_moments({1.0, 1.0});
    CHECK(coh.tag == VerdictTag::Unwitnessed);

    const BoundaryPoint b = ng_boundary(0.3);
    // On the boundary: not QNG, but still below s2 = m.
    const Verdict on = classify_moments({b.m, b.s2});
    CHECK(on.tag == VerdictTag::NonclassicalOnly);
    CHECK(std::abs(on.margin) < 1e-10);

    // Between the boundary and s2 = m.
    const Verdict nc = classify_moments({b.m, 0.5 * (b.s2 + b.m)});
    CHECK(nc.tag == VerdictTag::NonclassicalOnly);

    CHECK(classify_moments({kNaN, 1.0}).tag == VerdictTag::Invalid);
    CHECK_FALSE(classify_moments({kNaN, 1.0}).nonphysical);
    const Verdict neg = classify_moments({1.0, -0.1});
    CHECK(neg.tag == VerdictTag::Invalid);
    CHECK(neg.nonphysical);
}

TEST_CASE("classification band excludes boundary ties")
{
    for (double r : {0.01, 0.2, 0.8, 2.0}) {
        const BoundaryPoint b = ng_boundary(r);
        const double band = kBoundaryBand * std::max(1.0, b.s2);
        CHECK(classify_moments({b.m, b.s2 - 0.5 * band}).tag != VerdictTag::QNG);
        CHECK(classify_moments({b.m, b.s2 - 2.0 * band}).tag == VerdictTag::QNG);
    }
}

TEST_CASE("verdict margin invariant")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> um(0.0, 20.0);
    std::uniform_real_distribution<double> us(0.0, 25.0);
    for (int i = 0; i < 2000; ++i) {
        const MomentPair p{um(rng), us(rng)};
        const Verdict v = classify_moments(p);
        const double band = kBoundaryBand * std::max(1.0, ng_variance_at_mean(p.m));
        CHECK((v.tag == VerdictTag::QNG) == (v.margin < -band));
        CHECK(v.margin == doctest::Approx(p.s2 - ng_variance_at_mean(p.m)));
    }
}

TEST_CASE("physicality flag")
{
    CHECK(is_physical({0.5, 0.25}));
    CHECK_FALSE(is_physical({0.5, 0.2}));
    CHECK(is_physical({2.0, 0.0}));
    CHECK_FALSE(is_physical({2.5, 0.1}));
    CHECK(classify_moments({0.5, 0.1}).nonphysical);
    CHECK_FALSE(classify_moments({0.5, 0.3}).nonphysical);
}

TEST_CASE("intensity formulation")
{
    CHECK(boundary_intensity(0.0).w1 == 0.0);
    CHECK(boundary_intensity(0.0).w2 == 0.0);
    for (double r = 0.0; r < 3.0; r += 0.1) {
        const IntensityMoments w = boundary_intensity(r);
        CHECK(w.w2 == doctest::Approx(boundary_second_moment(r) - curve::mean(r)).epsilon(1e-12));
    }
}

TEST_CASE("g2 formulation")
{
    CHECK_THROWS_AS(boundary_g2(0.0), std::invalid_argument);
    for (double r = 0.02; r < 3.0; r += 0.02) {
        const G2Point g = boundary_g2(r);
        CHECK(g.g2 == doctest::Approx(curve::g2_rational(r)).epsilon(1e-10));
    }
    // Fock states sit below the boundary.
    for (int n = 1; n <= 14; ++n) {
        const double r = ng_inverse_mean(n);
        CHECK(1.0 - 1.0 / n < boundary_g2(r).g2);
    }
    // Asymptotic form from below, tending to 1.
    for (double m = 1.0; m <= 100.0; m += 0.5) {
        CHECK(g2_asymptotic(m) < boundary_g2(ng_inverse_mean(m)).g2);
    }
    CHECK(g2_asymptotic(1e12) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g2_asymptotic(10.0) == doctest::Approx(0.9367894373105234089).epsilon(1e-14));
    CHECK_THROWS_AS(g2_asymptotic(0.0), std::invalid_argument);

    const MomentPair p{2.3, 0.7};
    const MomentPair back = from_g2(to_g2(p));
    CHECK(back.s2 == doctest::Approx(p.s2).epsilon(1e-12));
}

TEST_CASE("fano formulation")
{
    CHECK_THROWS_AS(boundary_fano(0.0), std::invalid_argument);
    for (double r = 1e-3; r < 3.0; r += 0.01) {
        const FanoPoint f = boundary_fano(r);
        CHECK(f.fano * f.m == doctest::Approx(curve::variance(r)).epsilon(1e-12));
        CHECK(f.fano < 1.0);
    }
    // Series limit at the origin: s2 = m - m^2 + ..., so fano -> 1.
    CHECK(boundary_fano(1e-7).fano == doctest::Approx(kFanoAtOrigin).epsilon(1e-6));
}

TEST_CASE("multimode boundary")
{
    for (double r : {0.0, 0.3, 1.1}) {
        const MomentPair one = multimode_identical_boundary(1, r);
        CHECK(one.m == ng_boundary(r).m);
        CHECK(one.s2 == ng_boundary(r).s2);
    }
    const MomentPair two = multimode_identical_boundary(2, 0.3);
    CHECK(two.m == doctest::Approx(2 * curve::mean(0.3)));
    CHECK(two.s2 == doctest::Approx(4 * curve::variance(0.3)));
    CHECK_THROWS_AS(multimode_identical_boundary(0, 0.3), std::invalid_argument);

    // At equal total mean, a single mode has the lowest boundary.
    for (double m : {0.5, 2.0, 10.0}) {
        const double single = ng_variance_at_mean(m);
        for (int modes = 2; modes <= 5; ++modes) {
            CHECK(modes * modes * ng_variance_at_mean(m / modes) > single);
        }
    }
}

TEST_CASE("formulation equivalence on random points")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> um(0.01, 12.0);
    std::uniform_real_distribution<double> uf(0.0, 1.6);
    int compared = 0;
    for (int i = 0; i < 3000; ++i) {
        const double m = um(rng);
        const MomentPair p{m, uf(rng) * m};
        const double bound = ng_variance_at_mean(m);
        if (std::abs(p.s2 - bound) < 1e-9 * std::max(1.0, bound) * 10) {
            continue;
        }
        const Verdict vm = classify_moments(p);
        CHECK(classify_intensity(to_intensity(p)).tag == vm.tag);
        CHECK(classify_g2(to_g2(p)).tag == vm.tag);
        CHECK(classify_fano({p.m, p.s2 / p.m}).tag == vm.tag);
        CHECK(classify_moments(from_intensity(to_intensity(p))).tag == vm.tag);
        CHECK(classify_moments(from_g2(to_g2(p))).tag == vm.tag);
        ++compared;
    }
    CHECK(compared > 2900);
}

TEST_CASE("mp oracle agrees with curve templates in long double")
{
    for (long double r : {0.125L, 0.6875L, 1.90625L}) {
        const ref::mp R(static_cast<double>(r));
        CHECK(std::abs(curve::mean(r) - static_cast<long double>(ref::mean(R))) <
              1e-17L * std::max(1.0L, curve::mean(r)));
        CHECK(std::abs(curve::variance(r) - static_cast<long double>(ref::variance(R))) <
              1e-17L * std::max(1.0L, curve::variance(r)));
    }
}
