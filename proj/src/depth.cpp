#include "qng/depth.hpp"

#include "qng/detail/bisect.hpp"
#include "qng/format.hpp"
#include "qng/prob_witness.hpp"
#include "qng/witness.hpp"

#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace qng {

namespace {

constexpr double kGridStep = 0.01;
constexpr int kGridPoints = 100;
constexpr double kEtaTolerance = 1e-9;
/// Start of the scan when the witness is inconclusive exactly at eta = 1.
constexpr double kTopOffset = 1e-6;

double moment_margin(const MomentPair& p) { return p.s2 - ng_variance_at_mean(p.m); }

/// Crossing search on a margin whose negative sign means "QNG".
template <typename Margin>
DepthResult search_depth(Margin&& margin, double eta_top, WitnessKind witness)
{
    DepthResult res;
    res.witness = witness;

    std::vector<double> etas{eta_top};
    for (int i = kGridPoints - 1; i >= 1; --i) {
        etas.push_back(i * kGridStep);
    }
    std::vector<double> values;
    values.reserve(etas.size());
    for (double eta : etas) {
        values.push_back(margin(eta));
    }
    for (std::size_t i = 1; i < etas.size(); ++i) {
        if ((values[i - 1] < 0.0) != (values[i] < 0.0)) {
            res.crossings.push_back(0.5 * (etas[i - 1] + etas[i]));
        }
    }

    if (!(values.front() < 0.0)) {
        res.eta_min = 1.0;
        res.depth = 0.0;
        res.converged = true;
        res.bracket = {eta_top, 1.0};
        res.multi_crossing = !res.crossings.empty();
        return res;
    }

    std::size_t first_out = etas.size();
    for (std::size_t i = 1; i < etas.size(); ++i) {
        if (!(values[i] < 0.0)) {
            first_out = i;
            break;
        }
    }

    double lo = 0.0;
    double hi = 0.0;
    if (first_out < etas.size()) {
        lo = etas[first_out];
        hi = etas[first_out - 1];
    } else {
        // QNG on the whole grid; look closer to eta = 0.
        hi = etas.back();
        bool found = false;
        for (double probe : {1e-3, 1e-4, 1e-5}) {
            if (!(margin(probe) < 0.0)) {
                lo = probe;
                found = true;
                break;
            }
            hi = probe;
        }
        if (!found) {
            res.eta_min = 0.0;
            res.depth = 1.0;
            res.converged = true;
            res.bracket = {0.0, hi};
            res.multi_crossing = !res.crossings.empty();
            return res;
        }
        res.crossings.push_back(0.5 * (lo + hi));
    }

    res.bracket = detail::bisect_bracket(margin, lo, hi, kEtaTolerance);
    res.eta_min = 0.5 * (res.bracket.first + res.bracket.second);
    res.depth = 1.0 - res.eta_min;
    res.converged = true;
    res.multi_crossing = res.crossings.size() > 1;
    return res;
}

void check_eta_arg(double eta)
{
    if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
        throw std::invalid_argument("FamilyCurve: transmittance must lie in [0, 1]");
    }
}

} // namespace

FamilyCurve FamilyCurve::lossy_fock(int n)
{
    if (n < 1) {
        throw std::invalid_argument("FamilyCurve::lossy_fock: need n >= 1");
    }
    FamilyCurve f;
    f.kind_ = Kind::LossyFock;
    f.photons_ = n;
    f.moments_ = [n](double eta) { return lossy_fock_moments(n, eta); };
    f.probs_ = [n](double eta) { return lossy_fock_probs(n, eta); };
    return f;
}

FamilyCurve FamilyCurve::photon_added_thermal(int k, double nbar)
{
    auto pmf = std::make_shared<const PhotonPMF>(photon_added_thermal_pmf(k, nbar));
    FamilyCurve f;
    f.kind_ = Kind::PhotonAddedThermal;
    f.photons_ = k;
    f.nbar_ = nbar;
    f.moments_ = [k, nbar](double eta) { return photon_added_thermal_moments(k, nbar, eta); };
    f.probs_ = [pmf](double eta) {
        const PhotonPMF thinned = apply_loss_pmf(*pmf, eta);
        return ProbPoint{thinned[0], thinned[1]};
    };
    return f;
}

FamilyCurve FamilyCurve::custom(std::function<MomentPair(double)> moments,
                                std::function<ProbPoint(double)> probs)
{
    if (!moments) {
        throw std::invalid_argument("FamilyCurve::custom: moment map required");
    }
    FamilyCurve f;
    f.moments_ = std::move(moments);
    f.probs_ = std::move(probs);
    return f;
}

ProbPoint FamilyCurve::probs_at(double eta) const
{
    if (!probs_) {
        throw std::invalid_argument("FamilyCurve: family has no probability map");
    }
    check_eta_arg(eta);
    return probs_(eta);
}

DepthResult qng_depth_moment(const FamilyCurve& family)
{
    return search_depth(
        [&family](double eta) { return moment_margin(family.moments_at(eta)); }, 1.0,
        WitnessKind::Moment);
}

DepthResult qng_depth_prob(const FamilyCurve& family)
{
    const auto margin = [&family](double eta) { return classify_probs(family.probs_at(eta)).margin; };
    const ProbPoint top = family.probs_at(1.0);
    // p0 = p1 = 0 is inconclusive; take the limit from below.
    const double eta_top = top.p0 == 0.0 && top.p1 == 0.0 ? 1.0 - kTopOffset : 1.0;
    return search_depth(margin, eta_top, WitnessKind::Probability);
}

double asymptotic_fock_depth(int n)
{
    if (n < 1) {
        throw std::invalid_argument("asymptotic_fock_depth: need n >= 1");
    }
    return 0.375 * std::pow(4.0, 2.0 / 3.0) * std::pow(static_cast<double>(n), -1.0 / 3.0);
}

DepthResult depth_with_noise(int n, const NoiseSpec& noise)
{
    if (n < 1) {
        throw std::invalid_argument("depth_with_noise: need n >= 1");
    }
    const ChannelSpec channel{1.0, noise};
    apply_channel({0.0, 0.0}, channel); // validates the noise
    return qng_depth_moment(FamilyCurve::custom([n, noise](double eta) {
        return apply_channel(lossy_fock_moments(n, eta), ChannelSpec{1.0, noise});
    }));
}

double pats_threshold()
{
    const auto margin = [](double nbar) {
        return moment_margin(photon_added_thermal_moments(1, nbar, 1.0));
    };
    return detail::bisect(margin, 0.0, 1.0, 1e-12);
}

std::vector<DepthRow> depth_table_fock()
{
    std::vector<DepthRow> rows;
    for (int n = 1; n <= 5; ++n) {
        const FamilyCurve f = FamilyCurve::lossy_fock(n);
        rows.push_back({"fock", "n=" + std::to_string(n), qng_depth_prob(f)});
        rows.push_back({"fock", "n=" + std::to_string(n), qng_depth_moment(f)});
    }
    return rows;
}

std::vector<DepthRow> depth_table_photon_added()
{
    std::vector<DepthRow> rows;
    for (double nbar : {0.0, 0.1, 0.2, 0.3, 0.4}) {
        for (int k = 1; k <= 3; ++k) {
            const FamilyCurve f = FamilyCurve::photon_added_thermal(k, nbar);
            const std::string param = "k=" + std::to_string(k) + ";nbar=" + format_number(nbar);
            rows.push_back({"photon_added_thermal", param, qng_depth_prob(f)});
            rows.push_back({"photon_added_thermal", param, qng_depth_moment(f)});
        }
    }
    return rows;
}

void write_depth_csv(std::ostream& out, const std::vector<DepthRow>& rows)
{
    out << "family,parameter,witness,eta_min,depth\n";
    for (const auto& row : rows) {
        out << row.family << ',' << row.parameter << ',' << to_string(row.result.witness) << ','
            << format_number(row.result.eta_min) << ',' << format_number(row.result.depth) << '\n';
    }
}

} // namespace qng
