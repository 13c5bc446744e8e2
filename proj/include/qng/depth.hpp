#ifndef QNG_DEPTH_HPP
#define QNG_DEPTH_HPP

// Quantum non-Gaussianity depth: the largest loss 1 - eta_min a state family
// tolerates while its statistics still violate a witness.

#include "qng/states.hpp"
#include "qng/types.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qng {

enum class WitnessKind { Moment, Probability };

constexpr const char* to_string(WitnessKind w)
{
    return w == WitnessKind::Moment ? "moment" : "probability";
}

/// A state family parameterized by transmittance eta in [0, 1].
class FamilyCurve
{
public:
    enum class Kind { LossyFock, PhotonAddedThermal, Custom };

    static FamilyCurve lossy_fock(int n);
    static FamilyCurve photon_added_thermal(int k, double nbar);
    static FamilyCurve custom(std::function<MomentPair(double)> moments,
                              std::function<ProbPoint(double)> probs = {});

    Kind kind() const { return kind_; }
    int photons() const { return photons_; }
    double nbar() const { return nbar_; }

    MomentPair moments_at(double eta) const { return moments_(eta); }
    bool has_probs() const { return static_cast<bool>(probs_); }
    ProbPoint probs_at(double eta) const;

private:
    Kind kind_ = Kind::Custom;
    int photons_ = 0;
    double nbar_ = 0.0;
    std::function<MomentPair(double)> moments_;
    std::function<ProbPoint(double)> probs_;
};

struct DepthResult
{
    double eta_min = 1.0;
    double depth = 0.0;
    WitnessKind witness = WitnessKind::Moment;
    bool converged = false;
    std::pair<double, double> bracket{1.0, 1.0};
    /// All coarse-grid sign changes of the margin, largest eta first.
    std::vector<double> crossings;
    bool multi_crossing = false;
};

DepthResult qng_depth_moment(const FamilyCurve& family);
DepthResult qng_depth_prob(const FamilyCurve& family);

/// Large-n approximation (3/8) 4^(2/3) n^(-1/3) of the Fock-state depth.
double asymptotic_fock_depth(int n);

DepthResult depth_with_noise(int n, const NoiseSpec& noise);

/// Thermal mean at which the lossless single-photon-added thermal state
/// reaches the moment boundary.
double pats_threshold();

struct DepthRow
{
    std::string family;
    std::string parameter;
    DepthResult result;
};

/// Fock states n = 1..5, both witnesses.
std::vector<DepthRow> depth_table_fock();
/// Photon-added thermal states k = 1..3, nbar = 0..0.4, both witnesses.
std::vector<DepthRow> depth_table_photon_added();

/// CSV with columns family,parameter,witness,eta_min,depth.
void write_depth_csv(std::ostream& out, const std::vector<DepthRow>& rows);

} // namespace qng

#endif // QNG_DEPTH_HPP
