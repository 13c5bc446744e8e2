#include "qng/oracle.hpp"
#include "qng/witness.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace qng;

namespace {

double poisson(double lambda, int n)
{
    return std::exp(n * std::log(lambda) - lambda - std::lgamma(n + 1.0));
}

void check_density(const TruncatedState& s)
{
    const Eigen::MatrixXcd& rho = s.density;
    CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(rho.trace().real() + s.trace_deficit - 1) < 1e-12);
    CHECK(s.trace_deficit <= kMaxTraceDeficit);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

} // namespace

TEST_CASE("reference states in the Fock basis")
{
    const TruncatedState vac = build_gaussian_state(GaussianSpec::vacuum(), 12);
    CHECK(std::abs(vac.density(0, 0) - 1.0) < 1e-14);
    CHECK(vac.density.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-13));
    check_density(vac);

    const PhotonPMF coh = pmf_of(build_gaussian_state(GaussianSpec::coherent(1.0), 40));
    for (int n = 0; n < 20; ++n) {
        CHECK(coh[n] == doctest::Approx(poisson(1.0, n)).epsilon(1e-9).scale(1e-12));
    }

    const double r = 0.6;
    const PhotonPMF sq = pmf_of(build_gaussian_state(GaussianSpec::squeezed_vacuum(r), 80));
    CHECK(sq[0] == doctest::Approx(1 / std::cosh(r)).epsilon(1e-9));
    for (int n = 1; n < 40; n += 2) {
        CHECK(sq[n] < 1e-13);
    }
    // p(2) = tanh^2 r / (2 cosh r).
    CHECK(sq[2] == doctest::Approx(std::pow(std::tanh(r), 2) / (2 * std::cosh(r))).epsilon(1e-9));

    const double nbar = 0.8;
    const PhotonPMF th = pmf_of(build_gaussian_state(GaussianSpec::thermal(nbar), 80));
    for (int n = 0; n < 30; ++n) {
        CHECK(th[n] == doctest::Approx(std::pow(nbar, n) / std::pow(1 + nbar, n + 1)).epsilon(1e-9).scale(1e-13));
    }
}

TEST_CASE("Fock-basis moments match the closed forms")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double d = 3 * std::sqrt(u(rng));
        const double theta = 2 * std::numbers::pi * u(rng);
        const GaussianSpec g{0.25 + 1.75 * u(rng), u(rng), std::numbers::pi * u(rng),
                             d * std::cos(theta), d * std::sin(theta)};
        const TruncatedState s = build_gaussian_state(g);
        check_density(s);
        const MomentPair o = pmf_moments(pmf_of(s));
        const MomentPair a = gaussian_moments(g);
        CHECK(std::abs(o.m - a.m) < 1e-6);
        CHECK(std::abs(o.s2 - a.s2) < 1e-6);
    }
}

TEST_CASE("optimal state sits on the boundary")
{
    for (double m : {0.5, 3.0}) {
        const MomentPair o = oracle_moments(optimal_dsv_for_mean(m));
        CHECK(o.m == doctest::Approx(m).epsilon(1e-8));
        CHECK(o.s2 == doctest::Approx(ng_variance_at_mean(m)).epsilon(1e-8));
    }
}

TEST_CASE("photon statistics are rotation invariant")
{
    const GaussianSpec g{0.4, 0.5, 0.3, 0.9, -0.2};
    const double delta = 1.1;
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(delta).toRotationMatrix();
    const Eigen::Vector2d d = rot * displacement(g);
    const GaussianSpec h{g.sigma2, g.r, g.phi + delta, d.x(), d.y()};
    REQUIRE((covariance(h) - rot * covariance(g) * rot.transpose()).norm() < 1e-12);
    const PhotonPMF a = pmf_of(build_gaussian_state(g, 60));
    const PhotonPMF b = pmf_of(build_gaussian_state(h, 60));
    for (int n = 0; n < 60; ++n) {
        CHECK(std::abs(a[n] - b[n]) < 1e-10);
    }
}

TEST_CASE("mixture states")
{
    const MixtureSpec mix{{{0.6, GaussianSpec::coherent(1.0)}, {0.4, GaussianSpec::thermal(0.5)}}};
    const TruncatedState s = build_mixture_state(mix, 40);
    check_density(s);
    const MomentPair o = pmf_moments(pmf_of(s));
    const MomentPair a = mixture_moments(mix);
    CHECK(o.m == doctest::Approx(a.m).epsilon(1e-9));
    CHECK(o.s2 == doctest::Approx(a.s2).epsilon(1e-9));
}

TEST_CASE("cutoff too small")
{
    const GaussianSpec big = GaussianSpec::coherent(4.0);
    CHECK_THROWS_AS(build_gaussian_state(big, 10), InsufficientCutoff);
    try {
        build_gaussian_state(big, 10);
    } catch (const InsufficientCutoff& e) {
        CHECK(e.suggested_dim() == 20);
    }
    CHECK(auto_dim(big) >= 4 * (16 + 10));
    CHECK_NOTHROW(build_gaussian_state(big));
    CHECK_THROWS_AS(build_gaussian_state(big, 0), std::invalid_argument);
}

TEST_CASE("small tightness scan")
{
    TightnessGrid grid;
    grid.dr = 0.05;
    grid.dsigma2 = 0.05;
    grid.angle_steps = 24;
    grid.mixture_samples = 300;
    grid.oracle_candidates = 2;
    const TightnessReport rep = tightness_scan({0.0, 1.0}, grid);
    REQUIRE(rep.targets.size() == 2);
    CHECK(rep.passed);
    for (const TightnessTarget& t : rep.targets) {
        CHECK(t.counterexamples.empty());
        CHECK(t.min_s2 >= t.bound - 1e-6);
        CHECK(t.mixture_min_s2 >= t.bound - 1e-6);
        CHECK(t.points > 0);
        for (const TightnessCandidate& c : t.oracle) {
            CHECK(std::abs(c.s2_oracle - c.s2_analytic) < 1e-6);
        }
    }
    CHECK(rep.targets[0].bound == 0.0);
    CHECK(rep.targets[0].min_s2 == doctest::Approx(0.0).scale(1e-12));

    const nlohmann::json j = to_json(rep);
    CHECK(j["passed"].get<bool>());
    CHECK(j["targets"].size() == 2);
    for (const char* key : {"m", "bound_s2", "min_s2", "argmin", "optimal", "mixture_argmin",
                            "fock_check", "margin", "counterexamples", "passed"}) {
        CHECK(j["targets"][1].contains(key));
    }
    CHECK_THROWS_AS(tightness_scan({-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(tightness_scan({40.0}), std::invalid_argument);
}
