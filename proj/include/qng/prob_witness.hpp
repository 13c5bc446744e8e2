#ifndef QNG_PROB_WITNESS_HPP
#define QNG_PROB_WITNESS_HPP

// Witness in terms of the zero- and single-photon probabilities: at fixed
// p0, Gaussian mixtures cannot exceed the single-photon probability of the
// curve (p0~(r), p1~(r)). Also its translation into moment space under the
// assumption that no three-or-more photon events occur.

#include "qng/types.hpp"

namespace qng {

/// Squeezing range used to invert p0~; p0~(10) underflows to zero.
inline constexpr double kProbCurveMaxSqueezing = 10.0;

ProbPoint p0p1_curve(double r);

/// Unique r in [0, 10] with p0~(r) = p0.
double prob_curve_inverse(double p0);

/// QNG iff p1 exceeds the curve at the same p0. margin = p1~ - p1, so a
/// negative margin certifies. The inconclusive point p0 = p1 = 0 is
/// UNWITNESSED.
Verdict classify_probs(const ProbPoint& p);

/// Vacuum probability where the line p1 = 2 - m - 2 p0 meets the curve.
double p0_star(double m);

/// Boundary mapped into (m, s2) assuming p_{3+} = 0.
MomentPair converted_curve(double r);

/// Largest variance certified QNG by the converted probability witness.
double s2_bound_from_prob(double m);

/// The (p0, p1) of the unique distribution on {0, 1, 2} with moments (m, s2),
/// when it exists.
ProbPoint probs_from_moments_three_level(const MomentPair& p);

} // namespace qng

#endif // QNG_PROB_WITNESS_HPP
