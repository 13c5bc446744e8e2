#include "qng/cli.hpp"

#include "qng/depth.hpp"
#include "qng/format.hpp"
#include "qng/measurement.hpp"
#include "qng/oracle.hpp"
#include "qng/prob_witness.hpp"
#include "qng/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qng {

namespace {

using nlohmann::json;

struct Common
{
    std::string format;
    std::string output;
    std::optional<unsigned long long> seed;
    bool strict = false;
};

/// A flat table written either as CSV (header + rows) or as a JSON array of
/// objects.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v)
{
    if (v.is_number_float()) {
        return format_number(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_null()) {
        return "";
    }
    return v.dump();
}

void write_table(std::ostream& out, const Table& t, const std::string& format)
{
    if (format == "json") {
        json arr = json::array();
        for (const auto& row : t.rows) {
            json obj;
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                obj[t.columns[i]] = row[i];
            }
            arr.push_back(obj);
        }
        out << arr.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << t.columns[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_cell(row[i]);
        }
        out << '\n';
    }
}

/// Output sink: the -o file if given, otherwise the caller's stream.
class Sink
{
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw std::invalid_argument("cannot open output file '" + path + "'");
            }
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

unsigned long long resolve_seed(const Common& c)
{
    if (c.seed) {
        return *c.seed;
    }
    if (const char* env = std::getenv(kSeedEnv); env && *env) {
        std::size_t used = 0;
        const unsigned long long s = std::stoull(env, &used);
        if (used != std::string(env).size()) {
            throw std::invalid_argument(std::string(kSeedEnv) + " is not an unsigned integer");
        }
        return s;
    }
    return kDefaultSeed;
}

/// none | poisson:N | thermal:N | custom:M,S2
NoiseSpec parse_noise(const std::string& text)
{
    if (text.empty() || text == "none") {
        return NoiseSpec::none();
    }
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("noise must look like poisson:N, thermal:N or custom:M,S2");
    }
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    const auto number = [](const std::string& s) {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("bad noise value '" + s + "'");
        }
        return v;
    };
    if (kind == "poisson") {
        return NoiseSpec::poissonian(number(rest));
    }
    if (kind == "thermal") {
        return NoiseSpec::thermal(number(rest));
    }
    if (kind == "custom") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("custom noise needs M,S2");
        }
        return {number(rest.substr(0, comma)), number(rest.substr(comma + 1))};
    }
    throw std::invalid_argument("unknown noise kind '" + kind + "'");
}

bool is_none(const NoiseSpec& n) { return n.m_noise == 0.0 && n.s2_noise == 0.0; }

// ---- curve ----

struct CurveArgs
{
    std::string which = "moment";
    int modes = 2;
    double r_min = 0.0;
    double r_max = 2.0;
    int steps = 100;
};

/// Log-uniform grid. A zero lower end is kept as the first point, with the
/// rest log-uniform from r_max * 1e-4, unless the curve is singular at 0.
std::vector<double> r_grid(const CurveArgs& a, bool positive_only)
{
    if (a.steps < 2) {
        throw std::invalid_argument("curve: need at least 2 steps");
    }
    if (!(a.r_min >= 0.0) || !(a.r_max > a.r_min) || a.r_max > kMaxSqueezing) {
        throw std::invalid_argument("curve: need 0 <= r-min < r-max <= 50");
    }
    std::vector<double> r;
    double lo = a.r_min;
    int n = a.steps;
    if (lo == 0.0) {
        if (!positive_only) {
            r.push_back(0.0);
            --n;
        }
        lo = a.r_max * 1e-4;
    }
    if (n == 1) {
        r.push_back(a.r_max);
        return r;
    }
    const double step = std::log(a.r_max / lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        r.push_back(i == n - 1 ? a.r_max : lo * std::exp(step * i));
    }
    return r;
}

Table run_curve(const CurveArgs& a)
{
    Table t;
    const std::string& w = a.which;
    const bool singular = w == "g2" || w == "fano";
    if (w == "prob" || w == "converted_prob") {
        if (a.r_max > kProbCurveMaxSqueezing) {
            throw std::invalid_argument("curve: probability curves need r-max <= 10");
        }
    }
    if (w == "multimode" && a.modes < 1) {
        throw std::invalid_argument("curve: modes must be >= 1");
    }
    if (w == "moment") {
        t.columns = {"r", "m", "s2"};
    } else if (w == "intensity") {
        t.columns = {"r", "w1", "w2"};
    } else if (w == "g2") {
        t.columns = {"r", "m", "g2", "g2_asymptotic"};
    } else if (w == "fano") {
        t.columns = {"r", "m", "fano"};
    } else if (w == "quadrature") {
        t.columns = {"r", "q2", "q4"};
    } else if (w == "prob") {
        t.columns = {"r", "p0", "p1"};
    } else if (w == "converted_prob") {
        t.columns = {"r", "m", "s2"};
    } else if (w == "multimode") {
        t.columns = {"r", "modes", "m", "s2"};
    } else {
        throw std::invalid_argument("curve: unknown formulation '" + w + "'");
    }
    for (double r : r_grid(a, singular)) {
        if (w == "moment") {
            const BoundaryPoint b = ng_boundary(r);
            t.rows.push_back({r, b.m, b.s2});
        } else if (w == "intensity") {
            const IntensityMoments i = boundary_intensity(r);
            t.rows.push_back({r, i.w1, i.w2});
        } else if (w == "g2") {
            const G2Point g = boundary_g2(r);
            t.rows.push_back({r, g.m, g.g2, g2_asymptotic(g.m)});
        } else if (w == "fano") {
            const FanoPoint f = boundary_fano(r);
            t.rows.push_back({r, f.m, f.fano});
        } else if (w == "quadrature") {
            const QuadratureBoundary q = q_boundary(r);
            t.rows.push_back({r, q.q2, q.q4});
        } else if (w == "prob") {
            const ProbPoint p = p0p1_curve(r);
            t.rows.push_back({r, p.p0, p.p1});
        } else if (w == "converted_prob") {
            // The conversion only applies up to m = 2.
            const MomentPair c = converted_curve(r);
            if (c.m <= 2.0) {
                t.rows.push_back({r, c.m, c.s2});
            }
        } else {
            const MomentPair p = multimode_identical_boundary(a.modes, r);
            t.rows.push_back({r, a.modes, p.m, p.s2});
        }
    }
    return t;
}

// ---- classify ----

struct ClassifyArgs
{
    std::optional<double> m, s2, w1, w2, g2, p0, p1, M, S2;
    std::optional<double> gain, gain_est, gain_min, gain_max;
    std::string gain_mode = "point";
    double eta = 1.0;
    std::string noise = "none";
    std::string noise_stage = "post";
};

struct ClassifyResult
{
    Table table;
    bool nonphysical = false;
};

ClassifyResult run_classify(const ClassifyArgs& a)
{
    const bool probs = a.p0 || a.p1;
    const bool amplified = a.M || a.S2;
    const bool intensity = a.w1 || a.w2;
    const bool g2 = a.g2.has_value();
    const bool moments = (a.m || a.s2) && !g2;
    const int kinds = probs + amplified + intensity + g2 + moments;
    if (kinds != 1) {
        throw std::invalid_argument(
            "classify: give exactly one of --m/--s2, --w1/--w2, --m/--g2, --p0/--p1, --M/--S2");
    }
    const bool gain_given = a.gain || a.gain_est || a.gain_min || a.gain_max;
    const NoiseSpec noise = parse_noise(a.noise);
    const ChannelSpec channel{a.eta, noise};
    const bool channel_given = a.eta != 1.0 || !is_none(noise);

    ClassifyResult res;
    if (probs) {
        if (!a.p0 || !a.p1) {
            throw std::invalid_argument("classify: --p0 needs --p1");
        }
        if (gain_given || channel_given) {
            throw std::invalid_argument("classify: corrections apply to moment inputs only");
        }
        const Verdict v = classify_probs({*a.p0, *a.p1});
        if (v.tag == VerdictTag::Invalid) {
            throw std::invalid_argument("classify: probabilities must be finite, non-negative, sum <= 1");
        }
        res.table.columns = {"witness", "p0", "p1", "verdict", "margin", "nonphysical"};
        res.table.rows.push_back({"probability", *a.p0, *a.p1, std::string(to_string(v.tag)),
                                  v.margin, v.nonphysical});
        res.nonphysical = v.nonphysical;
        return res;
    }

    MomentPair p;
    bool nonphysical = false;
    if (amplified) {
        if (!a.M || !a.S2) {
            throw std::invalid_argument("classify: --M needs --S2");
        }
        if (!gain_given) {
            throw std::invalid_argument("classify: amplified input needs --gain or --gain-est");
        }
        GainEstimate gain;
        if (a.gain) {
            if (a.gain_est || a.gain_min || a.gain_max) {
                throw std::invalid_argument("classify: --gain conflicts with --gain-est/min/max");
            }
            gain = GainEstimate::exact(*a.gain);
        } else {
            if (!a.gain_est) {
                throw std::invalid_argument("classify: --gain-min/--gain-max need --gain-est");
            }
            gain = {*a.gain_est, a.gain_min.value_or(*a.gain_est), a.gain_max.value_or(*a.gain_est)};
        }
        const GainMode mode = a.gain_mode == "conservative" ? GainMode::Conservative : GainMode::Point;
        // Gain inversion first, then the channel. Post-stage noise was added
        // at detection, after the amplifier, so it comes off before the gain.
        double M = *a.M;
        double S2 = *a.S2;
        if (!std::isfinite(M) || !std::isfinite(S2) || S2 < 0.0) {
            throw std::invalid_argument("classify: need finite M and S2 >= 0");
        }
        ChannelSpec after_gain = channel;
        if (a.noise_stage == "post") {
            M -= noise.m_noise;
            S2 -= noise.s2_noise;
            after_gain.noise = NoiseSpec::none();
        }
        const CorrectedMoments inv = pia_invert(M, S2, gain, mode);
        p = inv.moments;
        nonphysical = inv.nonphysical;
        if (after_gain.eta != 1.0 || !is_none(after_gain.noise)) {
            const CorrectedMoments c = correct_channel(p, after_gain);
            p = c.moments;
            nonphysical = nonphysical || c.nonphysical;
        }
    } else {
        if (gain_given) {
            throw std::invalid_argument("classify: gain options need amplified input --M/--S2");
        }
        if (intensity) {
            if (!a.w1 || !a.w2) {
                throw std::invalid_argument("classify: --w1 needs --w2");
            }
            p = from_intensity({*a.w1, *a.w2});
        } else if (g2) {
            if (!a.m || a.s2) {
                throw std::invalid_argument("classify: --g2 needs --m and no --s2");
            }
            p = from_g2({*a.m, *a.g2});
        } else {
            if (!a.m || !a.s2) {
                throw std::invalid_argument("classify: --m needs --s2");
            }
            p = {*a.m, *a.s2};
        }
        // Raw measured statistics must be usable; corrected ones may go negative.
        if (!std::isfinite(p.m) || !std::isfinite(p.s2) || p.m < 0.0 || p.s2 < 0.0) {
            throw std::invalid_argument("classify: need finite m >= 0 and s2 >= 0");
        }
        if (channel_given) {
            const CorrectedMoments c = correct_channel(p, channel);
            p = c.moments;
            nonphysical = c.nonphysical;
        }
    }
    const Verdict v = classify_moments(p);
    res.nonphysical = nonphysical || v.nonphysical;
    res.table.columns = {"witness", "m", "s2", "verdict", "margin", "nonphysical"};
    res.table.rows.push_back(
        {"moment", p.m, p.s2, std::string(to_string(v.tag)), v.margin, res.nonphysical});
    return res;
}

// ---- depth ----

struct DepthArgs
{
    bool table1 = false;
    bool table2 = false;
    std::optional<int> fock;
    std::optional<int> pats_k;
    double nbar = 0.0;
    std::string witness = "both";
    std::string noise = "none";
};

std::vector<DepthRow> run_depth(const DepthArgs& a)
{
    if (!a.table1 && !a.table2 && !a.fock && !a.pats_k) {
        throw std::invalid_argument("depth: give --table1, --table2, --fock or --pats-k");
    }
    const NoiseSpec noise = parse_noise(a.noise);
    const bool want_moment = a.witness != "probability";
    const bool want_prob = a.witness != "moment";
    std::vector<DepthRow> rows;
    const auto keep = [&](const std::vector<DepthRow>& in) {
        for (const auto& r : in) {
            if ((r.result.witness == WitnessKind::Moment && want_moment) ||
                (r.result.witness == WitnessKind::Probability && want_prob)) {
                rows.push_back(r);
            }
        }
    };
    if (!is_none(noise) && (!a.fock || a.table1 || a.table2 || a.pats_k)) {
        throw std::invalid_argument("depth: --noise applies to a single --fock family");
    }
    if (a.table1) {
        keep(depth_table_fock());
    }
    if (a.table2) {
        keep(depth_table_photon_added());
    }
    if (a.fock) {
        const std::string param = "n=" + std::to_string(*a.fock);
        if (!is_none(noise)) {
            if (a.witness == "probability") {
                throw std::invalid_argument("depth: noise is supported for the moment witness only");
            }
            rows.push_back({"fock", param + ";noise=" + a.noise, depth_with_noise(*a.fock, noise)});
        } else {
            const FamilyCurve f = FamilyCurve::lossy_fock(*a.fock);
            if (want_prob) {
                rows.push_back({"fock", param, qng_depth_prob(f)});
            }
            if (want_moment) {
                rows.push_back({"fock", param, qng_depth_moment(f)});
            }
        }
    }
    if (a.pats_k) {
        const FamilyCurve f = FamilyCurve::photon_added_thermal(*a.pats_k, a.nbar);
        const std::string param =
            "k=" + std::to_string(*a.pats_k) + ";nbar=" + format_number(a.nbar);
        if (want_prob) {
            rows.push_back({"photon_added_thermal", param, qng_depth_prob(f)});
        }
        if (want_moment) {
            rows.push_back({"photon_added_thermal", param, qng_depth_moment(f)});
        }
    }
    return rows;
}

void write_depth(std::ostream& out, const std::vector<DepthRow>& rows, const std::string& format)
{
    if (format != "json") {
        write_depth_csv(out, rows);
        return;
    }
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"family", r.family},
                       {"parameter", r.parameter},
                       {"witness", to_string(r.result.witness)},
                       {"eta_min", r.result.eta_min},
                       {"depth", r.result.depth},
                       {"converged", r.result.converged},
                       {"crossings", r.result.crossings},
                       {"multi_crossing", r.result.multi_crossing}});
    }
    out << arr.dump(2) << '\n';
}

// ---- simulate ----

struct SimulateArgs
{
    std::string scheme;
    std::optional<int> fock;
    double eta = 1.0;
    std::optional<double> coherent, thermal, squeezed;
    std::vector<double> gaussian;
    std::size_t count = 100000;
    std::optional<double> m, s2, gain;
};

struct StateChoice
{
    StateSpec spec;
    MomentPair truth;
};

StateChoice choose_state(const SimulateArgs& a)
{
    const int given = a.fock.has_value() + a.coherent.has_value() + a.thermal.has_value() +
                      a.squeezed.has_value() + !a.gaussian.empty();
    if (given != 1) {
        throw std::invalid_argument(
            "simulate: give exactly one of --fock, --coherent, --thermal, --squeezed, --gaussian");
    }
    if (a.eta != 1.0 && !a.fock) {
        throw std::invalid_argument("simulate: --eta applies to --fock only");
    }
    if (a.fock) {
        if (*a.fock < 0) {
            throw std::invalid_argument("simulate: --fock must be >= 0");
        }
        if (a.eta == 1.0) {
            return {FockSpec{*a.fock}, {static_cast<double>(*a.fock), 0.0}};
        }
        const PhotonPMF pmf = apply_loss_pmf(fock_pmf(*a.fock), a.eta);
        return {NumberMixtureSpec{pmf}, lossy_fock_moments(*a.fock, a.eta)};
    }
    GaussianSpec g;
    if (a.coherent) {
        g = GaussianSpec::coherent(*a.coherent);
    } else if (a.thermal) {
        if (*a.thermal < 0.0) {
            throw std::invalid_argument("simulate: --thermal must be >= 0");
        }
        g = GaussianSpec::thermal(*a.thermal);
    } else if (a.squeezed) {
        g = GaussianSpec::squeezed_vacuum(*a.squeezed);
    } else {
        if (a.gaussian.size() != 5) {
            throw std::invalid_argument("simulate: --gaussian takes sigma2,r,phi,dx,dp");
        }
        g = {a.gaussian[0], a.gaussian[1], a.gaussian[2], a.gaussian[3], a.gaussian[4]};
    }
    return {g, gaussian_moments(g)};
}

struct SimulateResult
{
    json report;
    Table table;
    bool nonphysical = false;
};

json moments_json(const MomentPair& p) { return {{"m", p.m}, {"s2", p.s2}}; }

json verdict_json(const Verdict& v)
{
    return {{"tag", std::string(to_string(v.tag))}, {"margin", v.margin}, {"nonphysical", v.nonphysical}};
}

SimulateResult run_simulate(const SimulateArgs& a, unsigned long long seed)
{
    SimulateResult res;
    if (a.scheme == "pia") {
        if (!a.gain) {
            throw std::invalid_argument("simulate: pia needs --gain");
        }
        MomentPair p;
        if (a.m || a.s2) {
            if (!a.m || !a.s2) {
                throw std::invalid_argument("simulate: --m needs --s2");
            }
            p = {*a.m, *a.s2};
        } else {
            p = choose_state(a).truth;
        }
        const AmplifiedMoments amp = pia_forward(p, *a.gain);
        const CorrectedMoments back = pia_invert(amp.M, amp.S2, GainEstimate::exact(*a.gain), GainMode::Point);
        const Verdict v = classify_moments(p);
        res.nonphysical = back.nonphysical || v.nonphysical;
        res.report = {{"scheme", "pia"},
                      {"gain", *a.gain},
                      {"input", moments_json(p)},
                      {"amplified", {{"M", amp.M}, {"S2", amp.S2}, {"W2", amp.W2}}},
                      {"recovered", moments_json(back.moments)},
                      {"verdict", verdict_json(v)}};
        res.table.columns = {"scheme", "gain", "m", "s2", "M", "S2", "W2", "verdict", "margin"};
        res.table.rows.push_back({"pia", *a.gain, p.m, p.s2, amp.M, amp.S2, amp.W2,
                                  std::string(to_string(v.tag)), v.margin});
        return res;
    }

    if (a.count < 100) {
        throw std::invalid_argument("simulate: --count must be >= 100");
    }
    const StateChoice state = choose_state(a);
    MomentEstimate est;
    if (a.scheme == "phase_random") {
        est = estimate_phase_random(sample_phase_random(state.spec, a.count, seed).values);
    } else if (a.scheme == "homodyne4") {
        std::array<std::vector<double>, 4> samples;
        for (std::size_t k = 0; k < 4; ++k) {
            samples[k] = sample_quadrature(state.spec, kHomodyneAngles[k], a.count, seed + k).values;
        }
        est = estimate_homodyne4(samples);
    } else if (a.scheme == "double_homodyne") {
        if (!std::holds_alternative<GaussianSpec>(state.spec)) {
            throw std::invalid_argument("simulate: double_homodyne supports Gaussian states only");
        }
        const auto [x, p] = sample_double_homodyne(state.spec, a.count, seed);
        est = estimate_double_homodyne(x, p);
    } else {
        throw std::invalid_argument("simulate: unknown scheme '" + a.scheme + "'");
    }
    const Verdict v = classify_moments(est.value);
    res.nonphysical = v.nonphysical;
    const double z_m = (est.value.m - state.truth.m) / est.se_m;
    const double z_s2 = (est.value.s2 - state.truth.s2) / est.se_s2;
    res.report = {{"scheme", a.scheme},
                  {"state", describe(state.spec)},
                  {"count", a.count},
                  {"seed", seed},
                  {"estimate",
                   {{"m", est.value.m}, {"s2", est.value.s2}, {"se_m", est.se_m}, {"se_s2", est.se_s2}}},
                  {"truth", moments_json(state.truth)},
                  {"z", {{"m", z_m}, {"s2", z_s2}}},
                  {"verdict", verdict_json(v)}};
    res.table.columns = {"scheme", "state", "count", "seed", "m", "s2", "se_m", "se_s2",
                         "true_m", "true_s2", "verdict", "margin", "nonphysical"};
    res.table.rows.push_back({a.scheme, describe(state.spec), a.count, seed, est.value.m,
                              est.value.s2, est.se_m, est.se_s2, state.truth.m, state.truth.s2,
                              std::string(to_string(v.tag)), v.margin, v.nonphysical});
    return res;
}

// ---- scan ----

struct ScanArgs
{
    std::vector<double> targets{0.5, 1.0, 2.0, 5.0, 10.0};
    TightnessGrid grid;
};

Table scan_table(const TightnessReport& r)
{
    Table t;
    t.columns = {"m", "bound_s2", "min_s2", "mixture_min_s2", "margin", "argmin_matches",
                 "counterexamples", "passed"};
    for (const auto& x : r.targets) {
        t.rows.push_back({x.m, x.bound, x.min_s2, x.mixture_min_s2, x.margin, x.argmin_matches,
                          x.counterexamples.size(), x.passed});
    }
    return t;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quantum non-Gaussianity from photon-number mean and variance", "qng"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--format", common.format, "csv or json (default depends on command)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", common.output, "Write results to this file");
    app.add_option("--seed", common.seed,
                   std::string("RNG seed (default: $") + kSeedEnv + ", else " +
                       std::to_string(kDefaultSeed) + ")");
    app.add_flag("--strict", common.strict, "Exit with 3 when a result is flagged nonphysical");

    CurveArgs curve;
    auto* c_curve = app.add_subcommand("curve", "Sample a boundary on a log-uniform r grid");
    c_curve->add_option("--which", curve.which, "Formulation")
        ->check(CLI::IsMember({"moment", "intensity", "g2", "fano", "quadrature", "prob",
                               "converted_prob", "multimode"}));
    c_curve->add_option("--modes", curve.modes, "Number of identical modes for multimode");
    c_curve->add_option("--r-min", curve.r_min, "Smallest squeezing parameter");
    c_curve->add_option("--r-max", curve.r_max, "Largest squeezing parameter");
    c_curve->add_option("--steps", curve.steps, "Number of rows");

    ClassifyArgs cls;
    auto* c_cls = app.add_subcommand("classify", "Classify measured statistics");
    c_cls->add_option("--m", cls.m, "Mean photon number");
    c_cls->add_option("--s2", cls.s2, "Photon-number variance");
    c_cls->add_option("--w1", cls.w1, "Mean integrated intensity");
    c_cls->add_option("--w2", cls.w2, "Second moment of integrated intensity");
    c_cls->add_option("--g2", cls.g2, "Second-order correlation (with --m)");
    c_cls->add_option("--p0", cls.p0, "Vacuum probability");
    c_cls->add_option("--p1", cls.p1, "Single-photon probability");
    c_cls->add_option("--M", cls.M, "Mean after amplification");
    c_cls->add_option("--S2", cls.S2, "Variance after amplification");
    c_cls->add_option("--gain", cls.gain, "Known amplifier gain");
    c_cls->add_option("--gain-est", cls.gain_est, "Estimated gain");
    c_cls->add_option("--gain-min", cls.gain_min, "Lower gain bound");
    c_cls->add_option("--gain-max", cls.gain_max, "Upper gain bound");
    c_cls->add_option("--gain-mode", cls.gain_mode, "point or conservative")
        ->check(CLI::IsMember({"point", "conservative"}));
    c_cls->add_option("--eta", cls.eta, "Aggregate transmittance to correct for");
    c_cls->add_option("--noise", cls.noise, "none, poisson:N, thermal:N or custom:M,S2");
    c_cls->add_option("--noise-stage", cls.noise_stage, "pre or post amplification")
        ->check(CLI::IsMember({"pre", "post"}));

    DepthArgs dep;
    auto* c_dep = app.add_subcommand("depth", "QNG depth of lossy state families");
    c_dep->add_flag("--table1", dep.table1, "Fock states n = 1..5");
    c_dep->add_flag("--table2", dep.table2, "Photon-added thermal states");
    c_dep->add_option("--fock", dep.fock, "Fock state photon number");
    c_dep->add_option("--pats-k", dep.pats_k, "Photons added to a thermal state");
    c_dep->add_option("--nbar", dep.nbar, "Thermal mean for --pats-k");
    c_dep->add_option("--witness", dep.witness, "moment, probability or both")
        ->check(CLI::IsMember({"moment", "probability", "both"}));
    c_dep->add_option("--noise", dep.noise, "Detection noise for --fock");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo measurement and estimation");
    c_sim->add_option("--scheme", sim.scheme, "Measurement scheme")
        ->required()
        ->check(CLI::IsMember({"homodyne4", "phase_random", "double_homodyne", "pia"}));
    c_sim->add_option("--fock", sim.fock, "Fock state");
    c_sim->add_option("--eta", sim.eta, "Loss applied to the Fock state");
    c_sim->add_option("--coherent", sim.coherent, "Coherent amplitude (real)");
    c_sim->add_option("--thermal", sim.thermal, "Thermal mean");
    c_sim->add_option("--squeezed", sim.squeezed, "Squeezed vacuum parameter");
    c_sim->add_option("--gaussian", sim.gaussian, "sigma2,r,phi,dx,dp")->delimiter(',');
    c_sim->add_option("--count", sim.count, "Samples (per direction for homodyne4)");
    c_sim->add_option("--m", sim.m, "Input mean for pia");
    c_sim->add_option("--s2", sim.s2, "Input variance for pia");
    c_sim->add_option("--gain", sim.gain, "Amplifier gain for pia");

    ScanArgs scan;
    auto* c_scan = app.add_subcommand("scan", "Fock-basis tightness scan of the boundary");
    c_scan->add_option("--m", scan.targets, "Target means")->delimiter(',');
    c_scan->add_option("--dr", scan.grid.dr, "Squeezing grid step");
    c_scan->add_option("--dd", scan.grid.dd, "Displacement tolerance for the argmin check");
    c_scan->add_option("--mixtures", scan.grid.mixture_samples, "Random two-component mixtures");
    c_scan->add_option("--candidates", scan.grid.oracle_candidates,
                       "Lowest states rebuilt in the Fock basis");

    std::vector<std::string> storage{"qng"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        const auto fmt = [&](const char* fallback) {
            return common.format.empty() ? std::string(fallback) : common.format;
        };
        bool nonphysical = false;
        int code = kExitOk;
        if (c_curve->parsed()) {
            const Table t = run_curve(curve);
            Sink sink(common.output, out);
            write_table(sink.stream(), t, fmt("csv"));
        } else if (c_cls->parsed()) {
            const ClassifyResult r = run_classify(cls);
            Sink sink(common.output, out);
            write_table(sink.stream(), r.table, fmt("csv"));
            nonphysical = r.nonphysical;
        } else if (c_dep->parsed()) {
            const auto rows = run_depth(dep);
            Sink sink(common.output, out);
            write_depth(sink.stream(), rows, fmt("csv"));
        } else if (c_sim->parsed()) {
            const SimulateResult r = run_simulate(sim, resolve_seed(common));
            Sink sink(common.output, out);
            if (fmt("json") == "json") {
                sink.stream() << r.report.dump(2) << '\n';
            } else {
                write_table(sink.stream(), r.table, "csv");
            }
            nonphysical = r.nonphysical;
        } else if (c_scan->parsed()) {
            scan.grid.seed = resolve_seed(common);
            const TightnessReport r = tightness_scan(scan.targets, scan.grid);
            Sink sink(common.output, out);
            if (fmt("json") == "json") {
                sink.stream() << to_json(r).dump(2) << '\n';
            } else {
                write_table(sink.stream(), scan_table(r), "csv");
            }
            if (!r.passed) {
                err << "scan: boundary check failed, see report\n";
                code = kExitFailure;
            }
        }
        if (nonphysical) {
            err << "warning: result flagged nonphysical\n";
            if (common.strict) {
                return kExitNonphysical;
            }
        }
        return code;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace qng
