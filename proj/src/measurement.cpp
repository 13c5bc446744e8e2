#include "qng/measurement.hpp"

#include "qng/curves.hpp"
#include "qng/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

namespace qng {

namespace {

// Fourth-moment Jensen check with a little room for rounding in q2^2.
bool jensen_ok(double q2, double q4) { return q4 >= q2 * q2 * (1.0 - 1e-12) - 1e-15; }

struct MeanSe
{
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& z)
{
    const double n = static_cast<double>(z.size());
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : z) {
        ss += (v - mean) * (v - mean);
    }
    const double var = z.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

MomentPair phase_random_moments_unchecked(double q2, double q4)
{
    return {2.0 * q2 - 0.5, 8.0 / 3.0 * q4 - 4.0 * q2 * q2 - 0.25};
}

void require_samples(const std::vector<double>& v, const char* where)
{
    if (v.empty()) {
        throw std::invalid_argument(std::string(where) + ": empty sample set");
    }
}

} // namespace

MomentPair homodyne_moments(const QuadratureStats& stats)
{
    double sum2 = 0.0;
    double sum4 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        const double q2 = stats.q2[k];
        const double q4 = stats.q4[k];
        if (!std::isfinite(q2) || !std::isfinite(q4)) {
            throw std::invalid_argument("homodyne_moments: missing direction " + std::to_string(k));
        }
        if (q2 < 0.0 || !jensen_ok(q2, q4)) {
            throw std::invalid_argument("homodyne_moments: q4 < q2^2 in direction " +
                                        std::to_string(k));
        }
        sum2 += q2;
        sum4 += q4;
    }
    return {0.5 * (sum2 - 1.0), 2.0 / 3.0 * sum4 - 0.25 * sum2 * sum2 - 0.25};
}

QuadratureBoundary q_boundary(double r)
{
    ng_boundary(r); // range check
    return {curve::quadrature_q2(r), curve::quadrature_q4(r)};
}

Verdict classify_quadrature(double q2_avg, double q4_avg)
{
    Verdict v;
    if (!std::isfinite(q2_avg) || !std::isfinite(q4_avg)) {
        return v;
    }
    const MomentPair p = phase_random_moments_unchecked(q2_avg, q4_avg);
    if (q2_avg < 0.0 || !jensen_ok(q2_avg, q4_avg) || p.m < 0.0 || p.s2 < 0.0) {
        v.nonphysical = true;
        return v;
    }
    const double m = p.m;
    const double r = m < kDegenerateMean ? 0.0 : ng_inverse_mean(m);
    const double s2_bound = curve::variance(r);
    v.margin = q4_avg - curve::quadrature_q4(r);
    v.nonphysical = !is_physical(p);
    if (v.margin < -0.375 * kBoundaryBand * std::max(1.0, s2_bound)) {
        v.tag = VerdictTag::QNG;
    } else if (p.s2 < p.m) {
        v.tag = VerdictTag::NonclassicalOnly;
    } else {
        v.tag = VerdictTag::Unwitnessed;
    }
    return v;
}

MomentPair phase_random_moments(double q2, double q4)
{
    if (!std::isfinite(q2) || !std::isfinite(q4) || q2 < 0.0 || !jensen_ok(q2, q4)) {
        throw std::invalid_argument("phase_random_moments: need q4 >= q2^2 >= 0");
    }
    return phase_random_moments_unchecked(q2, q4);
}

CorrectedMoments double_homodyne_correct(double x2_meas, double x4_meas, double p2_meas,
                                         double p4_meas, double cov_meas)
{
    // Each arm sees (q0 + q_vac)/sqrt(2) with an independent vacuum quadrature:
    //   <q^2> = <q0^2>/2 + 1/8
    //   <q^4> = (<q0^4> + 3/2 <q0^2> + 3/16)/4
    // and cov(x^2, p^2) picks up only the factor 1/4.
    const auto undo = [](double q2, double q4) {
        const double q0_2 = 2.0 * (q2 - 0.125);
        const double q0_4 = 4.0 * q4 - 1.5 * q0_2 - 0.1875;
        return std::pair{q0_2, q0_4};
    };
    const auto [x0_2, x0_4] = undo(x2_meas, x4_meas);
    const auto [p0_2, p0_4] = undo(p2_meas, p4_meas);
    const double cov0 = 4.0 * cov_meas;

    CorrectedMoments out;
    out.moments.m = x0_2 + p0_2 - 0.5;
    out.moments.s2 = (x0_4 - x0_2 * x0_2) + (p0_4 - p0_2 * p0_2) + 2.0 * cov0 - 0.25;
    out.nonphysical = x0_2 < 0.0 || p0_2 < 0.0 || !jensen_ok(x0_2, x0_4) ||
                      !jensen_ok(p0_2, p0_4) || !is_physical(out.moments);
    return out;
}

void validate(const GainEstimate& gain)
{
    if (!std::isfinite(gain.g_est) || !std::isfinite(gain.g_min) || !std::isfinite(gain.g_max)) {
        throw std::invalid_argument("GainEstimate: non-finite gain");
    }
    if (!(gain.g_min > 1.0) || gain.g_est < gain.g_min || gain.g_max < gain.g_est) {
        throw std::invalid_argument("GainEstimate: need 1 < g_min <= g_est <= g_max");
    }
}

AmplifiedMoments pia_forward(const MomentPair& p, double G)
{
    if (!std::isfinite(G) || !(G > 1.0)) {
        throw std::invalid_argument("pia_forward: gain must exceed 1");
    }
    AmplifiedMoments out;
    out.M = p.m * G + G - 1.0;
    out.S2 = G * G * p.s2 + G * (G - 1.0) * p.m + (3.0 * G * G - 2.0 * G - 1.0) / 4.0;
    out.W2 = out.S2 + out.M * out.M - out.M;
    return out;
}

CorrectedMoments pia_invert(double M, double S2, const GainEstimate& gain, GainMode mode)
{
    validate(gain);
    const double G = mode == GainMode::Point ? gain.g_est : gain.g_min;
    CorrectedMoments out;
    out.moments.m = (M - G + 1.0) / G;
    out.moments.s2 =
        (S2 - G * (G - 1.0) * out.moments.m - (3.0 * G * G - 2.0 * G - 1.0) / 4.0) / (G * G);
    out.nonphysical = !is_physical(out.moments);
    return out;
}

AmplifiedMoments pia_boundary(double r, double gain)
{
    const BoundaryPoint b = ng_boundary(r);
    return pia_forward({b.m, b.s2}, gain);
}

std::pair<double, double> sample_even_moments(const std::vector<double>& samples)
{
    require_samples(samples, "sample_even_moments");
    double s2 = 0.0;
    double s4 = 0.0;
    for (double q : samples) {
        const double q2 = q * q;
        s2 += q2;
        s4 += q2 * q2;
    }
    const double n = static_cast<double>(samples.size());
    return {s2 / n, s4 / n};
}

MomentEstimate estimate_phase_random(const std::vector<double>& samples)
{
    require_samples(samples, "estimate_phase_random");
    const auto [mu2, mu4] = sample_even_moments(samples);
    MomentEstimate est;
    est.value = phase_random_moments_unchecked(mu2, mu4);
    // Delta method on the linearized estimators.
    std::vector<double> zm(samples.size());
    std::vector<double> zs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double q2 = samples[i] * samples[i];
        zm[i] = 2.0 * q2;
        zs[i] = -8.0 * mu2 * q2 + 8.0 / 3.0 * q2 * q2;
    }
    est.se_m = mean_and_se(zm).se;
    est.se_s2 = mean_and_se(zs).se;
    return est;
}

MomentEstimate estimate_homodyne4(const std::array<std::vector<double>, 4>& samples)
{
    QuadratureStats stats;
    double sum2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        require_samples(samples[k], "estimate_homodyne4");
        std::tie(stats.q2[k], stats.q4[k]) = sample_even_moments(samples[k]);
        sum2 += stats.q2[k];
    }
    MomentEstimate est;
    est.value = {0.5 * (sum2 - 1.0), 0.0};
    double sum4 = 0.0;
    for (double q4 : stats.q4) {
        sum4 += q4;
    }
    est.value.s2 = 2.0 / 3.0 * sum4 - 0.25 * sum2 * sum2 - 0.25;

    // Directions are sampled independently, so variances add.
    double var_m = 0.0;
    double var_s2 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> zm(samples[k].size());
        std::vector<double> zs(samples[k].size());
        for (std::size_t i = 0; i < samples[k].size(); ++i) {
            const double q2 = samples[k][i] * samples[k][i];
            zm[i] = 0.5 * q2;
            zs[i] = -0.5 * sum2 * q2 + 2.0 / 3.0 * q2 * q2;
        }
        const double se_m = mean_and_se(zm).se;
        const double se_s = mean_and_se(zs).se;
        var_m += se_m * se_m;
        var_s2 += se_s * se_s;
    }
    est.se_m = std::sqrt(var_m);
    est.se_s2 = std::sqrt(var_s2);
    return est;
}

MomentEstimate estimate_double_homodyne(const std::vector<double>& x, const std::vector<double>& p)
{
    require_samples(x, "estimate_double_homodyne");
    if (x.size() != p.size()) {
        throw std::invalid_argument("estimate_double_homodyne: arms have different sizes");
    }
    const auto estimate = [&](std::size_t begin, std::size_t end) {
        double x2 = 0.0, x4 = 0.0, p2 = 0.0, p4 = 0.0, xp = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double a = x[i] * x[i];
            const double b = p[i] * p[i];
            x2 += a;
            x4 += a * a;
            p2 += b;
            p4 += b * b;
            xp += a * b;
        }
        const double n = static_cast<double>(end - begin);
        x2 /= n;
        x4 /= n;
        p2 /= n;
        p4 /= n;
        xp /= n;
        return double_homodyne_correct(x2, x4, p2, p4, xp - x2 * p2).moments;
    };

    MomentEstimate est;
    est.value = estimate(0, x.size());
    // Batch means for the standard errors.
    constexpr std::size_t kBatches = 100;
    if (x.size() >= 2 * kBatches) {
        const std::size_t len = x.size() / kBatches;
        std::vector<double> bm(kBatches);
        std::vector<double> bs(kBatches);
        for (std::size_t b = 0; b < kBatches; ++b) {
            const MomentPair e = estimate(b * len, (b + 1) * len);
            bm[b] = e.m;
            bs[b] = e.s2;
        }
        est.se_m = mean_and_se(bm).se;
        est.se_s2 = mean_and_se(bs).se;
    } else {
        est.se_m = est.se_s2 = std::nan("");
    }
    return est;
}

} // namespace qng
