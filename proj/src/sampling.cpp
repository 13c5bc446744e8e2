#include "qng/measurement.hpp"

#include "qng/format.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qng {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Normalized Hermite function of order n at y (three-term recurrence).
double hermite_function(int n, double y)
{
    double prev = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
    if (n == 0) {
        return prev;
    }
    double cur = std::numbers::sqrt2 * y * prev;
    for (int k = 1; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1.0)) * y * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Tabulated inverse CDF of the Fock-n quadrature distribution on
/// |q| <= sqrt(2n+1) + 6.
class FockQuadratureTable
{
public:
    explicit FockQuadratureTable(int n)
    {
        const double half_width = std::sqrt(2.0 * n + 1.0) + 6.0;
        constexpr std::size_t kPoints = 40001;
        grid_.resize(kPoints);
        cdf_.resize(kPoints);
        const double h = 2.0 * half_width / static_cast<double>(kPoints - 1);
        double prev_density = 0.0;
        for (std::size_t i = 0; i < kPoints; ++i) {
            grid_[i] = -half_width + h * static_cast<double>(i);
            const double density = fock_quadrature_density(n, grid_[i]);
            cdf_[i] = i == 0 ? 0.0 : cdf_[i - 1] + 0.5 * h * (density + prev_density);
            prev_density = density;
        }
        const double total = cdf_.back();
        if (std::abs(total - 1.0) > 1e-6) {
            throw std::runtime_error("FockQuadratureTable: CDF normalization off by more than 1e-6");
        }
        for (double& c : cdf_) {
            c /= total;
        }
    }

    double inverse(double u) const
    {
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.begin()) {
            return grid_.front();
        }
        if (it == cdf_.end()) {
            return grid_.back();
        }
        const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
        const double c0 = cdf_[i - 1];
        const double c1 = cdf_[i];
        const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
        return grid_[i - 1] + t * (grid_[i] - grid_[i - 1]);
    }

private:
    std::vector<double> grid_;
    std::vector<double> cdf_;
};

class QuadratureSampler
{
public:
    QuadratureSampler(const StateSpec& state, std::uint64_t seed) : state_(state), rng_(seed)
    {
        std::visit(overloaded{
                       [](const GaussianSpec& g) { normalized(g); },
                       [this](const MixtureSpec& mix) {
                           validate(mix);
                           std::vector<double> w;
                           for (const auto& c : mix.components) {
                               w.push_back(c.weight);
                           }
                           pick_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
                       },
                       [](const FockSpec& f) {
                           if (f.n < 0) {
                               throw std::invalid_argument("FockSpec: negative photon number");
                           }
                       },
                       [this](const NumberMixtureSpec& s) {
                           validate(s.pmf);
                           pick_ = std::discrete_distribution<std::size_t>(s.pmf.probs.begin(),
                                                                           s.pmf.probs.end());
                       },
                   },
                   state_);
    }

    double draw(double phi)
    {
        return std::visit(overloaded{
                              [&](const GaussianSpec& g) { return draw_gaussian(g, phi); },
                              [&](const MixtureSpec& mix) {
                                  return draw_gaussian(mix.components[pick_(rng_)].spec, phi);
                              },
                              [&](const FockSpec& f) { return draw_fock(f.n); },
                              [&](const NumberMixtureSpec&) {
                                  return draw_fock(static_cast<int>(pick_(rng_)));
                              },
                          },
                          state_);
    }

    double draw_random_phase()
    {
        return draw(std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng_));
    }

private:
    double draw_gaussian(const GaussianSpec& spec, double phi)
    {
        const GaussianSpec g = normalized(spec);
        const Eigen::Vector2d u(std::cos(phi), std::sin(phi));
        const double mean = u.dot(displacement(g));
        const double var = u.dot(covariance(g) * u);
        return std::normal_distribution<double>(mean, std::sqrt(var))(rng_);
    }

    double draw_fock(int n)
    {
        auto it = tables_.find(n);
        if (it == tables_.end()) {
            it = tables_.emplace(n, FockQuadratureTable(n)).first;
        }
        return it->second.inverse(std::uniform_real_distribution<double>(0.0, 1.0)(rng_));
    }

    StateSpec state_;
    std::mt19937_64 rng_;
    std::discrete_distribution<std::size_t> pick_;
    std::map<int, FockQuadratureTable> tables_;
};

void require_count(std::size_t count)
{
    if (count == 0) {
        throw std::invalid_argument("sampler: count must be at least 1");
    }
}

std::string format_double(double v) { return format_number(v, 17); }

} // namespace

double fock_quadrature_density(int n, double q)
{
    if (n < 0) {
        throw std::invalid_argument("fock_quadrature_density: negative photon number");
    }
    const double psi = hermite_function(n, std::numbers::sqrt2 * q);
    return std::numbers::sqrt2 * psi * psi;
}

std::string describe(const StateSpec& state)
{
    return std::visit(
        overloaded{
            [](const GaussianSpec& g) {
                return "gaussian(sigma2=" + format_double(g.sigma2) + ";r=" + format_double(g.r) +
                       ";phi=" + format_double(g.phi) + ";dx=" + format_double(g.dx) +
                       ";dp=" + format_double(g.dp) + ")";
            },
            [](const MixtureSpec& mix) {
                return "mixture(" + std::to_string(mix.components.size()) + ")";
            },
            [](const FockSpec& f) { return "fock(" + std::to_string(f.n) + ")"; },
            [](const NumberMixtureSpec& s) {
                return "number_mixture(cutoff=" + std::to_string(s.pmf.cutoff()) + ")";
            },
        },
        state);
}

SampleSet sample_quadrature(const StateSpec& state, double phi, std::size_t count,
                            std::uint64_t seed)
{
    require_count(count);
    QuadratureSampler sampler(state, seed);
    SampleSet out;
    out.seed = seed;
    out.source = describe(state);
    out.phi = phi;
    out.values.resize(count);
    for (double& v : out.values) {
        v = sampler.draw(phi);
    }
    return out;
}

SampleSet sample_phase_random(const StateSpec& state, std::size_t count, std::uint64_t seed)
{
    require_count(count);
    QuadratureSampler sampler(state, seed);
    SampleSet out;
    out.seed = seed;
    out.source = describe(state) + "/phase-random";
    out.values.resize(count);
    for (double& v : out.values) {
        v = sampler.draw_random_phase();
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>>
sample_double_homodyne(const StateSpec& state, std::size_t count, std::uint64_t seed)
{
    require_count(count);
    std::vector<GaussianSpec> specs;
    std::vector<double> weights;
    if (const auto* g = std::get_if<GaussianSpec>(&state)) {
        specs.push_back(normalized(*g));
        weights.push_back(1.0);
    } else if (const auto* mix = std::get_if<MixtureSpec>(&state)) {
        validate(*mix);
        for (const auto& c : mix->components) {
            specs.push_back(normalized(c.spec));
            weights.push_back(c.weight);
        }
    } else {
        throw std::invalid_argument("sample_double_homodyne: only Gaussian states and mixtures");
    }

    std::vector<Eigen::Matrix2d> chol;
    for (const auto& g : specs) {
        chol.push_back(covariance(g).llt().matrixL());
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

    std::pair<std::vector<double>, std::vector<double>> out;
    out.first.resize(count);
    out.second.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t c = pick(rng);
        const Eigen::Vector2d z(normal(rng), normal(rng));
        const Eigen::Vector2d w = displacement(specs[c]) + chol[c] * z;
        const double x_vac = 0.5 * normal(rng);
        const double p_vac = 0.5 * normal(rng);
        out.first[i] = (w.x() + x_vac) / std::numbers::sqrt2;
        out.second[i] = (w.y() - p_vac) / std::numbers::sqrt2;
    }
    return out;
}

void write_sample_csv(std::ostream& out, const SampleSet& samples)
{
    out << "# state=" << samples.source
        << " phi=" << (samples.phi ? format_double(*samples.phi) : std::string("random"))
        << " seed=" << samples.seed << '\n';
    for (double v : samples.values) {
        out << format_double(v) << '\n';
    }
}

SampleSet read_sample_csv(std::istream& in)
{
    SampleSet out;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw std::invalid_argument("read_sample_csv: missing '# state=... phi=... seed=...' header");
    }
    std::istringstream header(line.substr(2));
    std::string field;
    bool have_state = false, have_phi = false, have_seed = false;
    while (header >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("read_sample_csv: malformed header field '" + field + "'");
        }
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "state") {
            out.source = value;
            have_state = true;
        } else if (key == "phi") {
            if (value != "random") {
                out.phi = std::stod(value);
            }
            have_phi = true;
        } else if (key == "seed") {
            out.seed = std::stoull(value);
            have_seed = true;
        }
    }
    if (!have_state || !have_phi || !have_seed) {
        throw std::invalid_argument("read_sample_csv: header needs state, phi and seed");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::size_t used = 0;
        const double v = std::stod(line, &used);
        if (used != line.size() && line.find_first_not_of(" \r\t", used) != std::string::npos) {
            throw std::invalid_argument("read_sample_csv: bad value '" + line + "'");
        }
        out.values.push_back(v);
    }
    return out;
}

} // namespace qng
