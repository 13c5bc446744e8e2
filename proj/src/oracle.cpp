#include "qng/oracle.hpp"

#include "qng/witness.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace qng {

namespace {

using cd = std::complex<double>;

constexpr double kScanTolerance = 1e-6;
constexpr double kAutoMomentTail = 1e-7;
constexpr int kAutoAttempts = 4;
constexpr double kMaxScanMean = 30.0;

Eigen::MatrixXd lowering(int n)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

GaussianSpec spec_with_mean(double m, double sigma2, double r, double theta)
{
    const double d2 = m + 0.5 - 2.0 * sigma2 * std::cosh(2.0 * r);
    const double d = std::sqrt(std::max(d2, 0.0));
    return {sigma2, r, 0.0, d * std::cos(theta), d * std::sin(theta)};
}

/// Random Gaussian state of mean m (phase fixed, displacement angle free).
GaussianSpec random_spec_with_mean(double m, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double sigma2 = 0.25 + u(rng) * (0.5 * (m + 0.5) - 0.25);
    const double r_max = 0.5 * std::acosh(std::max(1.0, (m + 0.5) / (2.0 * sigma2)));
    return spec_with_mean(m, sigma2, u(rng) * r_max, u(rng) * std::numbers::pi);
}

struct Scored
{
    double s2;
    GaussianSpec spec;
};

nlohmann::json spec_json(const GaussianSpec& g)
{
    return {{"sigma2", g.sigma2}, {"r", g.r}, {"phi", g.phi}, {"dx", g.dx}, {"dp", g.dp}};
}

TightnessTarget scan_target(double m, const TightnessGrid& grid, std::uint64_t seed)
{
    TightnessTarget t;
    t.m = m;
    t.bound = ng_variance_at_mean(m);
    t.optimal = optimal_dsv_for_mean(m);
    const double floor = t.bound - kScanTolerance;

    // Single states. Photon statistics are phase-insensitive, so phi = 0 and
    // only the displacement angle relative to the squeezed axis is scanned.
    // |d| is fixed by the mean.
    std::vector<Scored> best;
    const auto keep = [&](double s2, const GaussianSpec& g) {
        if (s2 < floor) {
            t.counterexamples.push_back({g, s2, std::nan("")});
        }
        const std::size_t k = static_cast<std::size_t>(std::max(grid.oracle_candidates, 1));
        if (best.size() < k || s2 < best.back().s2) {
            best.push_back({s2, g});
            std::sort(best.begin(), best.end(), [](auto& a, auto& b) { return a.s2 < b.s2; });
            if (best.size() > k) {
                best.pop_back();
            }
        }
    };
    for (int j = 0;; ++j) {
        const double sigma2 = 0.25 + j * grid.dsigma2;
        if (2.0 * sigma2 > m + 0.5) {
            break;
        }
        for (int i = 0;; ++i) {
            const double r = i * grid.dr;
            if (2.0 * sigma2 * std::cosh(2.0 * r) > m + 0.5) {
                break;
            }
            for (int a = 0; a < grid.angle_steps; ++a) {
                const GaussianSpec g =
                    spec_with_mean(m, sigma2, r, std::numbers::pi * a / grid.angle_steps);
                keep(gaussian_moments(g).s2, g);
                ++t.points;
                if (g.dx == 0.0 && g.dp == 0.0) {
                    break;
                }
            }
        }
    }
    t.argmin = best.front().spec;
    t.min_s2 = best.front().s2;

    // Two-component mixtures w g1 + (1 - w) g2 with w m1 + (1 - w) m2 = m.
    // Each component is either the best single state at its mean or a
    // random state of that mean.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    t.mixture_min_s2 = std::numeric_limits<double>::infinity();
    for (int s = 0; s < grid.mixture_samples; ++s) {
        const double w = 0.01 + 0.98 * u(rng);
        const double m1 = u(rng) * std::min(m / w, kMaxScanMean);
        const double m2 = (m - w * m1) / (1.0 - w);
        if (m2 > kMaxScanMean) {
            continue;
        }
        const auto pick = [&](double mi) {
            return u(rng) < 0.5 ? optimal_dsv_for_mean(mi) : random_spec_with_mean(mi, rng);
        };
        const GaussianSpec g1 = pick(m1);
        const GaussianSpec g2 = pick(m2);
        const MixtureSpec mix{{{w, g1}, {1.0 - w, g2}}};
        const double s2 = mixture_moments(mix).s2;
        ++t.points;
        if (s2 < floor) {
            t.counterexamples.push_back({g1, s2, std::nan("")});
        }
        if (s2 < t.mixture_min_s2) {
            t.mixture_min_s2 = s2;
            t.mixture_argmin = mix;
        }
    }

    // Fock-basis re-evaluation of the lowest single states and the best mixture.
    bool oracle_ok = true;
    double lowest = std::min(t.min_s2, t.mixture_min_s2);
    for (const auto& b : best) {
        const double s2 = oracle_moments(b.spec).s2;
        t.oracle.push_back({b.spec, b.s2, s2});
        oracle_ok = oracle_ok && std::abs(s2 - b.s2) <= kScanTolerance && s2 >= floor;
        lowest = std::min(lowest, s2);
    }
    if (!t.mixture_argmin.components.empty()) {
        int dim = 0;
        for (const auto& c : t.mixture_argmin.components) {
            dim = std::max(dim, auto_dim(c.spec));
        }
        const double s2 = pmf_moments(pmf_of(build_mixture_state(t.mixture_argmin, dim))).s2;
        oracle_ok = oracle_ok && std::abs(s2 - t.mixture_min_s2) <= kScanTolerance && s2 >= floor;
        lowest = std::min(lowest, s2);
    }

    const double d_arg = std::hypot(t.argmin.dx, t.argmin.dp);
    const double angle_step = std::numbers::pi / grid.angle_steps;
    t.argmin_matches = std::abs(t.argmin.sigma2 - 0.25) <= grid.dsigma2 &&
                       std::abs(t.argmin.r - t.optimal.r) <= grid.dr &&
                       std::abs(d_arg - t.optimal.dx) <= grid.dd &&
                       std::abs(t.argmin.dp) <= d_arg * std::sin(angle_step) + 1e-12;
    t.margin = lowest - t.bound;
    t.passed = t.counterexamples.empty() && oracle_ok && t.argmin_matches;
    return t;
}

} // namespace

InsufficientCutoff::InsufficientCutoff(int dim, double deficit, int suggested)
    : std::runtime_error("Fock cutoff " + std::to_string(dim) + " leaves trace deficit " +
                         std::to_string(deficit) + "; try dim " + std::to_string(suggested)),
      suggested_(suggested)
{
}

TruncatedState build_gaussian_state(const GaussianSpec& spec, int dim)
{
    if (dim < 1) {
        throw std::invalid_argument("build_gaussian_state: dim must be positive");
    }
    const GaussianSpec g = normalized(spec);
    const int work = dim + std::max(20, dim / 2);
    const Eigen::MatrixXd a = lowering(work);
    const Eigen::MatrixXd ad = a.transpose();

    // Everything up to the phases is real: the squeeze generator is, and
    // D(|alpha| e^{i theta}) = U D(|alpha|) U^dag with U = exp(i theta n).
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(work, work);
    const double nbar = thermal_mean(g);
    const double q = nbar / (1.0 + nbar);
    double pn = 1.0 / (1.0 + nbar);
    for (int n = 0; n < work; ++n, pn *= q) {
        rho(n, n) = pn;
    }
    if (g.r != 0.0) {
        const Eigen::MatrixXd S = (0.5 * g.r * (a * a - ad * ad)).exp();
        rho = S * rho * S.transpose();
    }

    const double d = std::hypot(g.dx, g.dp);
    const double theta = d == 0.0 ? 0.0 : std::atan2(g.dp, g.dx);
    const auto rotate = [work](Eigen::MatrixXcd& m, double angle) {
        if (angle == 0.0) {
            return;
        }
        for (int j = 0; j < work; ++j) {
            for (int i = 0; i < work; ++i) {
                m(i, j) *= std::polar(1.0, angle * (i - j));
            }
        }
    };
    Eigen::MatrixXcd full = rho.cast<cd>();
    rotate(full, g.phi - theta);
    if (d != 0.0) {
        const Eigen::MatrixXd D = (d * (ad - a)).exp();
        const Eigen::MatrixXd re = D * full.real() * D.transpose();
        const Eigen::MatrixXd im = D * full.imag() * D.transpose();
        full.real() = re;
        full.imag() = im;
    }
    rotate(full, theta);

    TruncatedState out;
    out.dim = dim;
    out.density = full.topLeftCorner(dim, dim);
    out.density = 0.5 * (out.density + out.density.adjoint()).eval();
    out.trace_deficit = 1.0 - out.density.trace().real();
    if (out.trace_deficit > kMaxTraceDeficit) {
        throw InsufficientCutoff(dim, out.trace_deficit, 2 * dim);
    }
    return out;
}

int auto_dim(const GaussianSpec& g)
{
    const MomentPair p = gaussian_moments(g);
    return static_cast<int>(std::ceil(4.0 * (p.m + 3.0 * std::sqrt(p.s2) + 10.0)));
}

TruncatedState build_gaussian_state(const GaussianSpec& g)
{
    // Mass d near the cutoff shifts <N^2> by about d dim^2, so the trace
    // check alone is too weak for moment comparisons.
    int dim = auto_dim(g);
    for (int attempt = 0;; ++attempt) {
        try {
            TruncatedState s = build_gaussian_state(g, dim);
            if (s.trace_deficit * dim * dim <= kAutoMomentTail || attempt == kAutoAttempts) {
                return s;
            }
            dim = static_cast<int>(std::ceil(1.5 * dim));
        } catch (const InsufficientCutoff& e) {
            if (attempt == kAutoAttempts) {
                throw;
            }
            dim = e.suggested_dim();
        }
    }
}

TruncatedState build_mixture_state(const MixtureSpec& mix, int dim)
{
    validate(mix);
    TruncatedState out;
    out.dim = dim;
    out.density = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& c : mix.components) {
        out.density += c.weight * build_gaussian_state(c.spec, dim).density;
    }
    out.trace_deficit = 1.0 - out.density.trace().real();
    return out;
}

PhotonPMF pmf_of(const TruncatedState& state)
{
    PhotonPMF pmf;
    pmf.probs.resize(static_cast<std::size_t>(state.dim));
    for (int n = 0; n < state.dim; ++n) {
        // Round-off can leave tiny negative populations.
        pmf.probs[static_cast<std::size_t>(n)] = std::max(0.0, state.density(n, n).real());
    }
    pmf.tail_bound = std::max(0.0, state.trace_deficit);
    return pmf;
}

MomentPair oracle_moments(const GaussianSpec& g)
{
    return pmf_moments(pmf_of(build_gaussian_state(g)));
}

TightnessReport tightness_scan(const std::vector<double>& m_targets, const TightnessGrid& grid)
{
    if (!(grid.dr > 0.0) || !(grid.dd > 0.0) || !(grid.dsigma2 > 0.0) || grid.angle_steps < 1 ||
        grid.mixture_samples < 0) {
        throw std::invalid_argument("tightness_scan: bad grid resolution");
    }
    TightnessReport report;
    report.grid = grid;
    report.passed = true;
    for (std::size_t i = 0; i < m_targets.size(); ++i) {
        const double m = m_targets[i];
        if (!std::isfinite(m) || m < 0.0 || m > kMaxScanMean) {
            throw std::invalid_argument("tightness_scan: target means must lie in [0, 30]");
        }
        report.targets.push_back(scan_target(m, grid, grid.seed + i));
        report.passed = report.passed && report.targets.back().passed;
    }
    return report;
}

nlohmann::json to_json(const TightnessReport& report)
{
    nlohmann::json j;
    j["grid"] = {{"dr", report.grid.dr},
                 {"dd", report.grid.dd},
                 {"dsigma2", report.grid.dsigma2},
                 {"angle_steps", report.grid.angle_steps},
                 {"mixture_samples", report.grid.mixture_samples},
                 {"seed", report.grid.seed}};
    j["passed"] = report.passed;
    j["targets"] = nlohmann::json::array();
    for (const auto& t : report.targets) {
        nlohmann::json jt;
        jt["m"] = t.m;
        jt["bound_s2"] = t.bound;
        jt["points"] = t.points;
        jt["min_s2"] = t.min_s2;
        jt["argmin"] = spec_json(t.argmin);
        jt["optimal"] = spec_json(t.optimal);
        jt["argmin_matches"] = t.argmin_matches;
        jt["mixture_min_s2"] = t.mixture_min_s2;
        nlohmann::json mix = nlohmann::json::array();
        for (const auto& c : t.mixture_argmin.components) {
            mix.push_back({{"weight", c.weight}, {"spec", spec_json(c.spec)}});
        }
        jt["mixture_argmin"] = mix;
        nlohmann::json oracle = nlohmann::json::array();
        for (const auto& c : t.oracle) {
            oracle.push_back({{"spec", spec_json(c.spec)},
                              {"s2_analytic", c.s2_analytic},
                              {"s2_fock", c.s2_oracle}});
        }
        jt["fock_check"] = oracle;
        jt["margin"] = t.margin;
        nlohmann::json bad = nlohmann::json::array();
        for (const auto& c : t.counterexamples) {
            bad.push_back({{"spec", spec_json(c.spec)}, {"s2", c.s2_analytic}});
        }
        jt["counterexamples"] = bad;
        jt["passed"] = t.passed;
        j["targets"].push_back(jt);
    }
    return j;
}

} // namespace qng
