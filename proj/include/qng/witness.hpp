#ifndef QNG_WITNESS_HPP
#define QNG_WITNESS_HPP

// Moment-based quantum non-Gaussianity witness: no mixture of single-mode
// Gaussian states can have photon-number variance below s2_NG at a given
// mean. The boundary is the curve (m_NG(r), s2_NG(r)), r >= 0, traced by the
// optimal displaced squeezed vacuum.

#include "qng/types.hpp"

namespace qng {

/// Points closer than this (absolute, scaled by max(1, s2_NG)) to the
/// boundary never certify QNG.
inline constexpr double kBoundaryBand = 1e-9;

/// Largest accepted squeezing; m_NG(50) is ~1e130.
inline constexpr double kMaxSqueezing = 50.0;

/// Below this mean the boundary is pinned to the origin.
inline constexpr double kDegenerateMean = 1e-12;

BoundaryPoint ng_boundary(double r);

/// Unique r >= 0 with m_NG(r) = m.
double ng_inverse_mean(double m);

/// s2_NG expressed as a function of the mean.
double ng_variance_at_mean(double m);

Verdict classify_moments(const MomentPair& p);

double boundary_second_moment(double r);
IntensityMoments boundary_intensity(double r);
G2Point boundary_g2(double r);

/// Large-mean approximation to the g2 boundary; lies below it.
double g2_asymptotic(double m);

FanoPoint boundary_fano(double r);

/// Limit of s2_NG/m_NG as r -> 0+.
inline constexpr double kFanoAtOrigin = 1.0;

/// Boundary for M identical copies of a mode.
MomentPair multimode_identical_boundary(int modes, double r);

// Representation changes. All are exact algebraic maps.
IntensityMoments to_intensity(const MomentPair& p);
MomentPair from_intensity(const IntensityMoments& w);
G2Point to_g2(const MomentPair& p);
MomentPair from_g2(const G2Point& g);

// Classification in the equivalent formulations. Each compares against its
// own boundary expression rather than converting back to (m, s2).
Verdict classify_intensity(const IntensityMoments& w);
Verdict classify_g2(const G2Point& g);
Verdict classify_fano(const FanoPoint& f);

} // namespace qng

#endif // QNG_WITNESS_HPP
