#ifndef QNG_ORACLE_HPP
#define QNG_ORACLE_HPP

// Brute-force checks in a truncated Fock basis, independent of the closed
// forms in qng/states.hpp and qng/witness.hpp.

#include "qng/states.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qng {

struct TruncatedState
{
    int dim = 0;
    Eigen::MatrixXcd density;
    double trace_deficit = 0.0;
};

class InsufficientCutoff : public std::runtime_error
{
public:
    InsufficientCutoff(int dim, double deficit, int suggested);
    int suggested_dim() const { return suggested_; }

private:
    int suggested_;
};

/// Largest trace deficit build_gaussian_state accepts.
constexpr double kMaxTraceDeficit = 1e-8;

/// Thermal seed, then squeeze, rotation and displacement, each applied as a
/// matrix exponential of the truncated ladder operators. The operators act
/// on a padded space and the result is cut back to dim.
TruncatedState build_gaussian_state(const GaussianSpec& g, int dim);
/// dim = ceil(4 (m + 3 s + 10)) from the analytic moments, grown until the
/// cutoff tail is negligible for second moments.
TruncatedState build_gaussian_state(const GaussianSpec& g);

TruncatedState build_mixture_state(const MixtureSpec& mix, int dim);

int auto_dim(const GaussianSpec& g);

PhotonPMF pmf_of(const TruncatedState& state);

/// Moments of pmf_of(build_gaussian_state(g)).
MomentPair oracle_moments(const GaussianSpec& g);

struct TightnessGrid
{
    double dr = 0.02;
    double dd = 0.05;
    double dsigma2 = 0.025;
    int angle_steps = 72;
    int mixture_samples = 4000;
    /// Lowest single-state grid points re-evaluated in the Fock basis.
    int oracle_candidates = 5;
    std::uint64_t seed = 12345;
};

struct TightnessCandidate
{
    GaussianSpec spec;
    double s2_analytic = 0.0;
    double s2_oracle = 0.0;
};

struct TightnessTarget
{
    double m = 0.0;
    double bound = 0.0;
    std::size_t points = 0;
    /// Best single Gaussian on the grid.
    GaussianSpec argmin;
    double min_s2 = 0.0;
    /// Best two-component mixture.
    MixtureSpec mixture_argmin;
    double mixture_min_s2 = 0.0;
    std::vector<TightnessCandidate> oracle;
    GaussianSpec optimal;
    bool argmin_matches = false;
    double margin = 0.0;
    std::vector<TightnessCandidate> counterexamples;
    bool passed = false;
};

struct TightnessReport
{
    TightnessGrid grid;
    std::vector<TightnessTarget> targets;
    bool passed = false;
};

/// Grid search over single Gaussian states and two-component mixtures at
/// each target mean, with the lowest candidates rebuilt in the Fock basis.
/// Evidence that the boundary is the minimum, not a proof.
TightnessReport tightness_scan(const std::vector<double>& m_targets,
                               const TightnessGrid& grid = {});

nlohmann::json to_json(const TightnessReport& report);

} // namespace qng

#endif // QNG_ORACLE_HPP
