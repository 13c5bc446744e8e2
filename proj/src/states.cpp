#include "qng/states.hpp"

#include "qng/witness.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qng {

namespace {

void check_eta(double eta, const char* where)
{
    if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
        throw std::invalid_argument(std::string(where) + ": transmittance must lie in [0, 1]");
    }
}

void check_noise(const NoiseSpec& n)
{
    if (!std::isfinite(n.m_noise) || !std::isfinite(n.s2_noise) || n.m_noise < 0.0 ||
        n.s2_noise < 0.0) {
        throw std::invalid_argument("noise moments must be finite and non-negative");
    }
}

double log_binomial(int n, int k)
{
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// C(n, j) eta^j (1-eta)^(n-j), exact at the endpoints.
double binomial_pmf(int n, int j, double eta)
{
    if (eta == 0.0) {
        return j == 0 ? 1.0 : 0.0;
    }
    if (eta == 1.0) {
        return j == n ? 1.0 : 0.0;
    }
    return std::exp(log_binomial(n, j) + j * std::log(eta) + (n - j) * std::log1p(-eta));
}

double pats_prob(int n, int k, double nbar)
{
    if (n < k) {
        return 0.0;
    }
    if (nbar == 0.0) {
        return n == k ? 1.0 : 0.0;
    }
    return std::exp((n - k) * std::log(nbar) - (n + 1) * std::log1p(nbar) + log_binomial(n, k));
}

/// Geometric bound on sum_{n > cutoff} p(n): successive ratios decrease
/// towards nbar/(1+nbar).
double pats_tail_bound(int k, double nbar, int cutoff)
{
    if (nbar == 0.0) {
        return 0.0;
    }
    const int first = cutoff + 1;
    const double q = nbar / (1.0 + nbar);
    const double ratio = q * (first + 1.0) / (first + 1.0 - k);
    if (first < k || ratio >= 1.0) {
        return 1.0;
    }
    return pats_prob(first, k, nbar) / (1.0 - ratio);
}

void check_pats_args(int k, double nbar)
{
    if (k < 1) {
        throw std::invalid_argument("photon-added thermal: need at least one added photon");
    }
    if (!std::isfinite(nbar) || nbar < 0.0) {
        throw std::invalid_argument("photon-added thermal: nbar must be finite and non-negative");
    }
}

} // namespace

GaussianSpec normalized(const GaussianSpec& g)
{
    if (!std::isfinite(g.sigma2) || !std::isfinite(g.r) || !std::isfinite(g.phi) ||
        !std::isfinite(g.dx) || !std::isfinite(g.dp)) {
        throw std::invalid_argument("GaussianSpec: non-finite field");
    }
    if (g.sigma2 < 0.25 - 1e-15) {
        throw std::invalid_argument("GaussianSpec: sigma2 below the vacuum value 1/4");
    }
    if (g.r < 0.0) {
        throw std::invalid_argument("GaussianSpec: squeezing must be non-negative");
    }
    GaussianSpec out = g;
    out.phi = std::fmod(g.phi, std::numbers::pi);
    if (out.phi < 0.0) {
        out.phi += std::numbers::pi;
    }
    return out;
}

Eigen::Matrix2d covariance(const GaussianSpec& g)
{
    const Eigen::Rotation2Dd rot(g.phi);
    const Eigen::Vector2d axes(std::exp(-2.0 * g.r), std::exp(2.0 * g.r));
    const Eigen::Matrix2d R = rot.toRotationMatrix();
    return g.sigma2 * R * axes.asDiagonal() * R.transpose();
}

void validate(const MixtureSpec& mix)
{
    if (mix.components.empty()) {
        throw std::invalid_argument("MixtureSpec: no components");
    }
    double total = 0.0;
    for (const auto& c : mix.components) {
        if (!std::isfinite(c.weight) || c.weight < 0.0) {
            throw std::invalid_argument("MixtureSpec: weights must be non-negative");
        }
        normalized(c.spec);
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("MixtureSpec: weights must sum to 1");
    }
}

void validate(const PhotonPMF& pmf)
{
    if (pmf.probs.empty()) {
        throw std::invalid_argument("PhotonPMF: empty");
    }
    for (double p : pmf.probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("PhotonPMF: entries must lie in [0, 1]");
        }
    }
    const double total = std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0);
    if (!(pmf.tail_bound >= 0.0) || std::abs(total + pmf.tail_bound - 1.0) > 1e-9) {
        throw std::invalid_argument("PhotonPMF: mass plus tail bound must be 1");
    }
}

MomentPair pmf_moments(const PhotonPMF& pmf)
{
    double m = 0.0;
    double n2 = 0.0;
    for (std::size_t n = 0; n < pmf.probs.size(); ++n) {
        const double nd = static_cast<double>(n);
        m += nd * pmf.probs[n];
        n2 += nd * nd * pmf.probs[n];
    }
    return MomentPair::from_second_moment(m, n2);
}

PhotonPMF fock_pmf(int n)
{
    if (n < 0) {
        throw std::invalid_argument("fock_pmf: negative photon number");
    }
    PhotonPMF pmf;
    pmf.probs.assign(static_cast<std::size_t>(n) + 1, 0.0);
    pmf.probs.back() = 1.0;
    return pmf;
}

MomentPair gaussian_moments(const GaussianSpec& spec)
{
    const GaussianSpec g = normalized(spec);
    const Eigen::Matrix2d C = covariance(g);
    const Eigen::Vector2d d = displacement(g);
    // <N> = tr C + |d|^2 - 1/2 ; Var N = 2 tr(C^2) + 4 d^T C d - 1/4.
    const double m = C.trace() + d.squaredNorm() - 0.5;
    const double s2 = 2.0 * C.squaredNorm() + 4.0 * d.dot(C * d) - 0.25;
    return {m, s2};
}

MomentPair mixture_moments(const MixtureSpec& mix)
{
    validate(mix);
    double m = 0.0;
    double n2 = 0.0;
    for (const auto& c : mix.components) {
        const MomentPair p = gaussian_moments(c.spec);
        m += c.weight * p.m;
        n2 += c.weight * p.second_moment();
    }
    return MomentPair::from_second_moment(m, n2);
}

MomentPair lossy_fock_moments(int n, double eta)
{
    if (n < 0) {
        throw std::invalid_argument("lossy_fock_moments: negative photon number");
    }
    check_eta(eta, "lossy_fock_moments");
    return {eta * n, eta * (1.0 - eta) * n};
}

ProbPoint lossy_fock_probs(int n, double eta)
{
    if (n < 1) {
        throw std::invalid_argument("lossy_fock_probs: need n >= 1");
    }
    check_eta(eta, "lossy_fock_probs");
    return {std::pow(1.0 - eta, n), n * eta * std::pow(1.0 - eta, n - 1)};
}

int default_pats_cutoff(int k, double nbar, double tail_target)
{
    check_pats_args(k, nbar);
    int cutoff = k;
    while (pats_tail_bound(k, nbar, cutoff) >= tail_target) {
        ++cutoff;
    }
    return cutoff;
}

PhotonPMF photon_added_thermal_pmf(int k, double nbar, int cutoff)
{
    check_pats_args(k, nbar);
    if (cutoff < k) {
        throw std::invalid_argument("photon_added_thermal_pmf: cutoff below k");
    }
    PhotonPMF pmf;
    pmf.probs.resize(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 0; n <= cutoff; ++n) {
        pmf.probs[static_cast<std::size_t>(n)] = pats_prob(n, k, nbar);
    }
    const double stored = std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0);
    const double bound = pats_tail_bound(k, nbar, cutoff);
    // Fall back to the complement when the cutoff is too small for the
    // geometric bound to be useful.
    pmf.tail_bound = stored + bound <= 1.0 + 1e-9 ? bound : std::max(0.0, 1.0 - stored);
    return pmf;
}

PhotonPMF photon_added_thermal_pmf(int k, double nbar)
{
    return photon_added_thermal_pmf(k, nbar, default_pats_cutoff(k, nbar));
}

MomentPair photon_added_thermal_moments(int k, double nbar, double eta)
{
    check_pats_args(k, nbar);
    check_eta(eta, "photon_added_thermal_moments");
    const double base = k + (k + 1.0) * nbar;
    return {eta * base, eta * eta * (k + 1.0) * nbar * (nbar + 1.0) + eta * (1.0 - eta) * base};
}

PhotonPMF apply_loss_pmf(const PhotonPMF& pmf, double eta)
{
    check_eta(eta, "apply_loss_pmf");
    PhotonPMF out;
    out.probs.assign(pmf.probs.size(), 0.0);
    out.tail_bound = pmf.tail_bound;
    for (int n = 0; n <= pmf.cutoff(); ++n) {
        const double pn = pmf.probs[static_cast<std::size_t>(n)];
        if (pn == 0.0) {
            continue;
        }
        for (int j = 0; j <= n; ++j) {
            out.probs[static_cast<std::size_t>(j)] += pn * binomial_pmf(n, j, eta);
        }
    }
    return out;
}

MomentPair apply_channel(const MomentPair& p, const ChannelSpec& ch)
{
    check_eta(ch.eta, "apply_channel");
    check_noise(ch.noise);
    const double eta = ch.eta;
    return {eta * p.m + ch.noise.m_noise,
            eta * (1.0 - eta) * p.m + eta * eta * p.s2 + ch.noise.s2_noise};
}

CorrectedMoments correct_channel(const MomentPair& observed, const ChannelSpec& ch)
{
    check_eta(ch.eta, "correct_channel");
    check_noise(ch.noise);
    if (ch.eta == 0.0) {
        throw std::invalid_argument("correct_channel: zero transmittance is not invertible");
    }
    const double eta = ch.eta;
    const double m = (observed.m - ch.noise.m_noise) / eta;
    const double s2 = (observed.s2 - ch.noise.s2_noise - eta * (1.0 - eta) * m) / (eta * eta);
    CorrectedMoments out{{m, s2}, false};
    out.nonphysical = !is_physical(out.moments);
    return out;
}

GaussianSpec optimal_dsv_for_mean(double m)
{
    const double r = ng_inverse_mean(m);
    const double d2 = std::exp(2.0 * r) * std::expm1(4.0 * r) / 4.0;
    return {0.25, r, 0.0, std::sqrt(d2), 0.0};
}

} // namespace qng
