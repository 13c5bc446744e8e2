#ifndef QNG_MEASUREMENT_HPP
#define QNG_MEASUREMENT_HPP

// Photon-number moment estimators for homodyne-type and amplified-intensity
// measurements, with the quadrature samplers used to validate them.
//
// All quadrature moments use the vacuum-variance-1/4 convention shared with
// qng/states.hpp.

#include "qng/states.hpp"
#include "qng/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qng {

/// Homodyne directions 0, pi/4, pi/2, 3pi/4.
inline constexpr std::array<double, 4> kHomodyneAngles = {0.0, 0.78539816339744830962,
                                                          1.57079632679489661923,
                                                          2.35619449019234492885};

/// Second and fourth quadrature moments per homodyne direction, indexed as
/// kHomodyneAngles. A non-finite entry marks a missing direction.
struct QuadratureStats
{
    std::array<double, 4> q2{};
    std::array<double, 4> q4{};
};

MomentPair homodyne_moments(const QuadratureStats& stats);

/// Boundary in direction-averaged quadrature moments (Q2, Q4).
struct QuadratureBoundary
{
    double q2 = 0.0;
    double q4 = 0.0;
};

QuadratureBoundary q_boundary(double r);

/// QNG iff Q4 lies below the boundary at the same Q2.
Verdict classify_quadrature(double q2_avg, double q4_avg);

/// Moments from a single quadrature of a phase-randomized state.
MomentPair phase_random_moments(double q2, double q4);

/// Undo the balanced-splitter vacuum admixture of a double homodyne setup
/// and assemble (m, s2). cov_meas is cov(x^2, p^2) of the measured arms.
CorrectedMoments double_homodyne_correct(double x2_meas, double x4_meas, double p2_meas,
                                         double p4_meas, double cov_meas);

// Phase-insensitive amplifier with a vacuum idler.

struct GainEstimate
{
    double g_est = 1.0;
    double g_min = 1.0;
    double g_max = 1.0;

    static GainEstimate exact(double g) { return {g, g, g}; }
};

void validate(const GainEstimate& gain);

struct AmplifiedMoments
{
    double M = 0.0;
    double S2 = 0.0;
    double W2 = 0.0;
};

enum class GainMode { Point, Conservative };

AmplifiedMoments pia_forward(const MomentPair& p, double gain);

/// Pre-amplification moments from (M, S2). Point mode uses g_est,
/// conservative mode uses g_min. Never clamps.
CorrectedMoments pia_invert(double M, double S2, const GainEstimate& gain, GainMode mode);

/// Boundary transported to the amplified domain at gain G.
AmplifiedMoments pia_boundary(double r, double gain);

// Samplers.

struct FockSpec
{
    int n = 0;
};

/// Phase-invariant state diagonal in the number basis (e.g. a lossy Fock state).
struct NumberMixtureSpec
{
    PhotonPMF pmf;
};

using StateSpec = std::variant<GaussianSpec, MixtureSpec, FockSpec, NumberMixtureSpec>;

std::string describe(const StateSpec& state);

/// Quadrature outcomes. phi is empty for phase-randomized samples.
struct SampleSet
{
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string source;
    std::optional<double> phi;
};

SampleSet sample_quadrature(const StateSpec& state, double phi, std::size_t count,
                            std::uint64_t seed);

/// Homodyne with a local oscillator of uniformly random phase.
SampleSet sample_phase_random(const StateSpec& state, std::size_t count, std::uint64_t seed);

/// Joint (x, p) outcomes of the two arms of a double homodyne setup.
/// Gaussian states only: the joint outcome is drawn from the Wigner function.
std::pair<std::vector<double>, std::vector<double>>
sample_double_homodyne(const StateSpec& state, std::size_t count, std::uint64_t seed);

/// Quadrature probability density of Fock state n at q.
double fock_quadrature_density(int n, double q);

struct MomentEstimate
{
    MomentPair value;
    double se_m = 0.0;
    double se_s2 = 0.0;
};

MomentEstimate estimate_phase_random(const std::vector<double>& samples);
MomentEstimate estimate_homodyne4(const std::array<std::vector<double>, 4>& samples);
MomentEstimate estimate_double_homodyne(const std::vector<double>& x, const std::vector<double>& p);

/// Plain sample means of q^2 and q^4.
std::pair<double, double> sample_even_moments(const std::vector<double>& samples);

void write_sample_csv(std::ostream& out, const SampleSet& samples);
SampleSet read_sample_csv(std::istream& in);

} // namespace qng

#endif // QNG_MEASUREMENT_HPP
