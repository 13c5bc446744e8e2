// Acceptance checks. One PASS/FAIL line per criterion. With an argument,
// runs only that criterion.

#include "qng/depth.hpp"
#include "qng/measurement.hpp"
#include "qng/oracle.hpp"
#include "qng/prob_witness.hpp"
#include "qng/witness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace qng;

namespace {

int failures = 0;
int only = 0;

// check() returns false on failure and fills detail.
void criterion(int id, const char* name, double budget_s,
               const std::function<bool(std::ostringstream&)>& check)
{
    if (only != 0 && id != only) {
        return;
    }
    std::ostringstream detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = check(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        detail << " over time budget " << budget_s << " s";
        ok = false;
    }
    failures += !ok;
    std::printf("[%s] %d %s (%.2f s) %s\n", ok ? "PASS" : "FAIL", id, name, secs, detail.str().c_str());
    std::fflush(stdout);
}

double depth_of(const std::vector<DepthRow>& rows, const std::string& param, WitnessKind w)
{
    for (const DepthRow& r : rows) {
        if (r.parameter == param && r.result.witness == w) {
            return r.result.depth;
        }
    }
    throw std::runtime_error("missing row " + param);
}

bool within_se(const MomentEstimate& e, const MomentPair& truth, std::ostringstream& d)
{
    const double zm = (e.value.m - truth.m) / e.se_m;
    const double zs = (e.value.s2 - truth.s2) / e.se_s2;
    d << "z=(" << zm << ", " << zs << ") ";
    return std::abs(zm) < 4 && std::abs(zs) < 4;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc > 1) {
        only = std::atoi(argv[1]);
    }
    criterion(1, "Fock depth table", 10, [](std::ostringstream& d) {
        const double moment[] = {1, 0.82, 0.72, 0.66, 0.61};
        const double prob[] = {1, 0.63, 0.51, 0.46, 0.42};
        const auto rows = depth_table_fock();
        double worst = 0;
        for (int n = 1; n <= 5; ++n) {
            const std::string p = "n=" + std::to_string(n);
            worst = std::max(worst, std::abs(depth_of(rows, p, WitnessKind::Moment) - moment[n - 1]));
            worst = std::max(worst, std::abs(depth_of(rows, p, WitnessKind::Probability) - prob[n - 1]));
        }
        d << "max deviation " << worst;
        return worst <= 0.01;
    });

    criterion(2, "photon-added thermal depth table", 60, [](std::ostringstream& d) {
        // Rows nbar = 0..0.4; columns (P, M) for k = 1, 2, 3.
        const double table[5][6] = {{1, 1, 0.63, 0.82, 0.51, 0.72},
                                    {0.76, 0.88, 0.54, 0.71, 0.45, 0.61},
                                    {0.62, 0.71, 0.47, 0.56, 0.41, 0.47},
                                    {0.52, 0.44, 0.42, 0.36, 0.38, 0.29},
                                    {0.45, 0, 0.38, 0.06, 0.35, 0.02}};
        const char* nbars[] = {"0", "0.1", "0.2", "0.3", "0.4"};
        const auto rows = depth_table_photon_added();
        double worst = 0;
        int count = 0;
        for (int i = 0; i < 5; ++i) {
            for (int k = 1; k <= 3; ++k) {
                const std::string p = "k=" + std::to_string(k) + ";nbar=" + nbars[i];
                const double dp = depth_of(rows, p, WitnessKind::Probability);
                const double dm = depth_of(rows, p, WitnessKind::Moment);
                worst = std::max(worst, std::abs(dp - table[i][2 * (k - 1)]));
                worst = std::max(worst, std::abs(dm - table[i][2 * (k - 1) + 1]));
                count += 2;
            }
        }
        d << count << " entries, max deviation " << worst;
        return count == 30 && worst <= 0.01;
    });

    criterion(3, "amplifier example", 1, [](std::ostringstream& d) {
        const AmplifiedMoments a = pia_forward({2.5, 1.0}, 100.0);
        const CorrectedMoments b = pia_invert(a.M, a.S2, GainEstimate::exact(100.0), GainMode::Point);
        d << "M=" << a.M << " S2=" << a.S2 << " back=(" << b.moments.m << ", " << b.moments.s2 << ")";
        return std::abs(a.M - 349) < 1e-9 && std::abs(a.S2 - 42199.75) < 1e-9 &&
               std::abs(a.S2 - 42200) < 1 && std::abs(b.moments.m - 2.5) < 1e-9 &&
               std::abs(b.moments.s2 - 1.0) < 1e-9;
    });

    criterion(4, "boundary self-consistency", 1, [](std::ostringstream& d) {
        double worst = 0;
        for (int i = 1; i <= 1000; ++i) {
            const BoundaryPoint b = ng_boundary(3.0 * i / 1000);
            worst = std::max(worst, std::abs(ng_variance_at_mean(b.m) - b.s2) / b.s2);
        }
        double worst_series = 0;
        int small = 0;
        for (double r = 1e-5; r < 1.0; r *= 1.01) {
            const BoundaryPoint b = ng_boundary(r);
            if (b.s2 > 0.05) {
                break;
            }
            ++small;
            const double s = b.s2;
            worst_series = std::max(worst_series, std::abs(b.m - (s + s * s)) / (2 * s * s * s));
        }
        d << "max relative error " << worst << ", expansion ratio " << worst_series << " over " << small
          << " points";
        return worst <= 1e-9 && worst_series <= 1 && small > 100;
    });

    criterion(5, "Fock-basis tightness scan", 300, [](std::ostringstream& d) {
        const TightnessReport rep = tightness_scan({0.5, 1, 2, 5, 10});
        bool ok = rep.passed;
        for (const TightnessTarget& t : rep.targets) {
            double oracle_gap = 0;
            for (const auto& c : t.oracle) {
                oracle_gap = std::max(oracle_gap, std::abs(c.s2_oracle - c.s2_analytic));
            }
            d << "m=" << t.m << ":margin=" << t.margin << ",fock_gap=" << oracle_gap
              << ",argmin=" << (t.argmin_matches ? "ok" : "off") << " ";
            ok = ok && t.counterexamples.empty() && t.argmin_matches && t.min_s2 >= t.bound - 1e-6 &&
                 t.mixture_min_s2 >= t.bound - 1e-6;
        }
        return ok;
    });

    criterion(6, "Monte Carlo estimators", 30, [](std::ostringstream& d) {
        const NumberMixtureSpec lossy{apply_loss_pmf(fock_pmf(1), 0.8)};
        bool ok = within_se(estimate_phase_random(sample_phase_random(lossy, 1000000, 101).values),
                            {0.8, 0.16}, d);
        for (const auto& [spec, truth] : {std::pair{GaussianSpec::vacuum(), MomentPair{0, 0}},
                                          std::pair{GaussianSpec::coherent(1.0), MomentPair{1, 1}}}) {
            std::array<std::vector<double>, 4> dirs;
            for (std::size_t k = 0; k < 4; ++k) {
                dirs[k] = sample_quadrature(spec, kHomodyneAngles[k], 250000, 200 + k).values;
            }
            ok = within_se(estimate_homodyne4(dirs), truth, d) && ok;
        }
        return ok;
    });

    criterion(7, "large-n depth slope", 30, [](std::ostringstream& d) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int k = 8;
        for (int n = 8; n <= 15; ++n) {
            const double x = std::log(n);
            const double y = std::log(qng_depth_moment(FamilyCurve::lossy_fock(n)).depth);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        d << "slope " << slope;
        return std::abs(slope + 1.0 / 3) <= 0.05;
    });

    criterion(8, "photon-added thermal threshold", 1, [](std::ostringstream& d) {
        const double t = pats_threshold();
        d << "nbar* = " << t;
        return std::abs(t - 0.40) <= 0.02;
    });

    criterion(9, "converted probability boundary", 1, [](std::ostringstream& d) {
        double worst_low = 0;
        int low = 0;
        for (double r = 1e-5; r < 1.0; r *= 1.01) {
            const MomentPair c = converted_curve(r);
            if (c.m > 0.05) {
                break;
            }
            ++low;
            worst_low = std::max(worst_low, std::abs(c.s2 - ng_variance_at_mean(c.m)));
        }
        // Required: converted minus moment boundary > 0 on [0.5, 2].
        double min_gap = 1e300;
        double max_gap = -1e300;
        for (int i = 0; i <= 1500; ++i) {
            const double m = 0.5 + 1.5 * i / 1500;
            const double gap = s2_bound_from_prob(m) - ng_variance_at_mean(m);
            min_gap = std::min(min_gap, gap);
            max_gap = std::max(max_gap, gap);
        }
        d << "max |ds2| for m<=0.05: " << worst_low << " over " << low
          << " points; converted minus moment on [0.5,2] spans [" << min_gap << ", " << max_gap << "]";
        if (max_gap < 0) {
            d << " (converted boundary lies below the moment boundary everywhere)";
        }
        return worst_low < 1e-3 && low > 100 && min_gap > 0;
    });

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
