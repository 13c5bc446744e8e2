#ifndef QNG_STATES_HPP
#define QNG_STATES_HPP

// Photon-number moments and distributions of the state families used with
// the witness: single Gaussian states and their mixtures, lossy Fock states,
// photon-added thermal states, and the loss/additive-noise channel acting on
// any of them.
//
// Quadrature convention: x = (a + a^dag)/2, p = (a - a^dag)/(2i), vacuum
// quadrature variance 1/4.

#include "qng/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qng {

/// Gaussian state built from a thermal state of variance sigma2 by squeezing
/// x with r, rotating by phi and displacing by (dx, dp).
struct GaussianSpec
{
    double sigma2 = 0.25;
    double r = 0.0;
    double phi = 0.0;
    double dx = 0.0;
    double dp = 0.0;

    static GaussianSpec vacuum() { return {}; }
    static GaussianSpec coherent(double alpha_x, double alpha_p = 0.0)
    {
        return {0.25, 0.0, 0.0, alpha_x, alpha_p};
    }
    static GaussianSpec thermal(double nbar) { return {(2.0 * nbar + 1.0) / 4.0, 0.0, 0.0, 0.0, 0.0}; }
    static GaussianSpec squeezed_vacuum(double r) { return {0.25, r, 0.0, 0.0, 0.0}; }
};

/// Throws std::invalid_argument on a Heisenberg or range violation; returns
/// a copy with phi reduced into [0, pi).
GaussianSpec normalized(const GaussianSpec& g);

Eigen::Matrix2d covariance(const GaussianSpec& g);
inline Eigen::Vector2d displacement(const GaussianSpec& g) { return {g.dx, g.dp}; }
/// Mean photon number of the thermal seed, 2 sigma2 - 1/2.
inline double thermal_mean(const GaussianSpec& g) { return 2.0 * g.sigma2 - 0.5; }

struct MixtureComponent
{
    double weight = 1.0;
    GaussianSpec spec;
};

struct MixtureSpec
{
    std::vector<MixtureComponent> components;
};

void validate(const MixtureSpec& mix);

/// Truncated photon-number distribution. tail_bound bounds the mass beyond
/// the last stored entry.
struct PhotonPMF
{
    std::vector<double> probs;
    double tail_bound = 0.0;

    int cutoff() const { return static_cast<int>(probs.size()) - 1; }
    double operator[](std::size_t n) const { return n < probs.size() ? probs[n] : 0.0; }
};

void validate(const PhotonPMF& pmf);
MomentPair pmf_moments(const PhotonPMF& pmf);
PhotonPMF fock_pmf(int n);

struct NoiseSpec
{
    double m_noise = 0.0;
    double s2_noise = 0.0;

    static NoiseSpec none() { return {}; }
    static NoiseSpec poissonian(double nbar) { return {nbar, nbar}; }
    static NoiseSpec thermal(double nbar) { return {nbar, nbar * (nbar + 1.0)}; }
};

struct ChannelSpec
{
    double eta = 1.0;
    NoiseSpec noise;
};

struct CorrectedMoments
{
    MomentPair moments;
    bool nonphysical = false;
};

MomentPair gaussian_moments(const GaussianSpec& g);
MomentPair mixture_moments(const MixtureSpec& mix);

MomentPair lossy_fock_moments(int n, double eta);
ProbPoint lossy_fock_probs(int n, double eta);

/// Distribution of k photons added to a thermal state of mean nbar.
PhotonPMF photon_added_thermal_pmf(int k, double nbar, int cutoff);
/// Same, with the smallest cutoff whose tail bound is below 1e-10.
PhotonPMF photon_added_thermal_pmf(int k, double nbar);
int default_pats_cutoff(int k, double nbar, double tail_target = 1e-10);

MomentPair photon_added_thermal_moments(int k, double nbar, double eta);

/// Binomial thinning of a photon-number distribution.
PhotonPMF apply_loss_pmf(const PhotonPMF& pmf, double eta);

MomentPair apply_channel(const MomentPair& p, const ChannelSpec& ch);
/// Exact inverse of apply_channel. Never clamps.
CorrectedMoments correct_channel(const MomentPair& observed, const ChannelSpec& ch);

/// Displaced squeezed vacuum sitting on the boundary at mean m.
GaussianSpec optimal_dsv_for_mean(double m);

} // namespace qng

#endif // QNG_STATES_HPP
