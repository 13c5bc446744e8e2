#ifndef QNG_TYPES_HPP
#define QNG_TYPES_HPP

#include <string_view>

namespace qng {

/// Photon-number mean m and variance s2.
struct MomentPair
{
    double m = 0.0;
    double s2 = 0.0;

    /// Non-centered second moment <N^2>.
    double second_moment() const { return s2 + m * m; }

    static MomentPair from_second_moment(double m, double n2) { return {m, n2 - m * m}; }
};

/// Integrated-intensity moments <W> and <W^2>.
struct IntensityMoments
{
    double w1 = 0.0;
    double w2 = 0.0;
};

/// Mean photon number together with the second-order correlation g2.
struct G2Point
{
    double m = 0.0;
    double g2 = 0.0;
};

struct FanoPoint
{
    double m = 0.0;
    double fano = 0.0;
};

/// Point on the moment boundary together with the squeezing that produces it.
struct BoundaryPoint
{
    double r = 0.0;
    double m = 0.0;
    double s2 = 0.0;
};

/// Zero- and single-photon probabilities.
struct ProbPoint
{
    double p0 = 0.0;
    double p1 = 0.0;
};

enum class VerdictTag { QNG, NonclassicalOnly, Unwitnessed, Invalid };

/// Outcome of a witness check. margin is the signed distance to the QNG
/// boundary in the witness's own coordinate; negative means the point lies
/// on the non-Gaussian side.
struct Verdict
{
    VerdictTag tag = VerdictTag::Invalid;
    double margin = 0.0;
    bool nonphysical = false;
};

constexpr std::string_view to_string(VerdictTag tag)
{
    switch (tag) {
    case VerdictTag::QNG: return "QNG";
    case VerdictTag::NonclassicalOnly: return "NONCLASSICAL_ONLY";
    case VerdictTag::Unwitnessed: return "UNWITNESSED";
    case VerdictTag::Invalid: return "INVALID";
    }
    return "INVALID";
}

/// Physicality of number statistics: finite, non-negative, and no smaller
/// than the minimal variance f(1-f) of an integer distribution with
/// fractional mean part f.
bool is_physical(const MomentPair& p, double tol = 1e-12);

} // namespace qng

#endif // QNG_TYPES_HPP
