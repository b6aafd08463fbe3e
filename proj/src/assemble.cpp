#include "turan/assemble.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "turan/bounds.hpp"
#include "turan/errors.hpp"
#include "turan/number_theory.hpp"

namespace turan {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent generator for substream `stream` of `seed`.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream)
{
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

// Uniform in [0, bound) by rejection; portable unlike std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

std::vector<std::size_t> random_subset(std::mt19937_64& rng, std::size_t n, std::size_t m)
{
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = 0; i < m; ++i) std::swap(perm[i], perm[i + bounded(rng, n - i)]);
    perm.resize(m);
    std::ranges::sort(perm);
    return perm;
}

// n^h, saturating.
unsigned __int128 int_pow(std::uint64_t n, unsigned h)
{
    unsigned __int128 r = 1;
    const unsigned __int128 cap = static_cast<unsigned __int128>(1) << 126;
    for (unsigned i = 0; i < h; ++i) {
        r *= n;
        if (r > cap) return cap;
    }
    return r;
}

// Sweep max of a subset, with per-(point, nu) phases cached when they fit.
class SubsetObjective {
public:
    SubsetObjective(const AngleTuple& tuple, std::uint64_t nu_max, const SweepOptions& sweep)
        : tuple_(tuple), nu_max_(nu_max), sweep_(sweep)
    {
        constexpr std::uint64_t cache_limit = std::uint64_t{1} << 22;
        if (tuple.size() * nu_max <= cache_limit) {
            phases_.resize(tuple.size() * nu_max);
            for (std::size_t k = 0; k < tuple.size(); ++k) {
                const auto& a = tuple.entries()[k];
                std::uint64_t r = a.numerator;
                for (std::uint64_t nu = 1; nu <= nu_max; ++nu) {
                    phases_[k * nu_max + (nu - 1)] = unit_root(r, a.denominator);
                    r = (r + a.numerator) % a.denominator;
                }
            }
        }
    }

    double operator()(std::span<const std::size_t> indices)
    {
        ++evaluations_;
        if (phases_.empty()) return sweep_naive(tuple_.subset(indices), 1, nu_max_, sweep_).max_abs;
        double best = 0.0;
        for (std::uint64_t nu = 0; nu < nu_max_; ++nu) {
            std::complex<double> s = 0.0;
            for (auto k : indices) s += phases_[k * nu_max_ + nu];
            best = std::max(best, std::abs(s));
        }
        return best;
    }

    std::uint64_t evaluations() const { return evaluations_; }

private:
    const AngleTuple& tuple_;
    std::uint64_t nu_max_;
    SweepOptions sweep_;
    std::vector<std::complex<double>> phases_;
    std::uint64_t evaluations_ = 0;
};

} // namespace

CompositionPlan plan_composition(std::uint64_t n, unsigned h)
{
    if (n < 1) throw DomainError("composition needs n >= 1");
    if (h < 2) throw DomainError("composition needs h >= 2");
    CompositionPlan plan;
    plan.n = n;
    plan.h = h;
    plan.top_bit = static_cast<unsigned>(std::bit_width(n) - 1);
    plan.N = h * (plan.top_bit + 1);
    for (unsigned m = 0; m <= plan.top_bit; ++m) plan.digits.push_back(static_cast<unsigned>((n >> m) & 1));

    double certified = 0.0;
    for (unsigned m = 0; m <= plan.top_bit; ++m) {
        if (plan.digits[m] == 0) continue;
        CompositionBlock block;
        block.m = m;
        block.q = std::uint64_t{1} << m;
        if (m == 0) {
            block.degree = 0;
            block.bound = 1.0;
        } else {
            block.degree = (plan.N + m - 1) / m;
            block.bound = static_cast<double>(block.degree - 1) * std::pow(2.0, m / 2.0);
            if (static_cast<std::uint64_t>(m) * block.degree < plan.N)
                throw DomainError("block range does not cover 2^N - 2");
        }
        certified += block.bound;
        plan.blocks.push_back(block);
    }
    plan.certified_bound = certified;

    if (n >= 2 && plan.N < 127) {
        const unsigned __int128 top = (static_cast<unsigned __int128>(1) << plan.N) - 2;
        if (int_pow(n, h) > top) throw DomainError("n^h exceeds 2^N - 2");
    }
    return plan;
}

Composition binary_compose(std::uint64_t n, unsigned h, const FieldBudget& budget)
{
    Composition out;
    out.plan = plan_composition(n, h);
    for (const auto& block : out.plan.blocks) {
        if (block.m == 0) {
            out.tuple = concat(out.tuple, AngleTuple({Angle{0, 1}}));
            continue;
        }
        try {
            out.tuple = concat(out.tuple, unimodular_tuple(bose_chowla(block.q, block.degree, budget)));
        } catch (const ResourceError& e) {
            throw ResourceError("block m=" + std::to_string(block.m) + " (q=2^" + std::to_string(block.m) +
                                ", GF(2^" + std::to_string(block.m * block.degree) + ")): " + e.what());
        }
    }
    return out;
}

PrimeGap next_prime_gap(std::uint64_t n)
{
    if (n < 2) throw DomainError("next_prime_gap needs n >= 2");
    PrimeGap g;
    g.p = next_prime_after(n);
    g.gap = g.p - n;
    g.ratio = static_cast<double>(g.gap) / std::pow(static_cast<double>(g.p), 0.525);
    return g;
}

TrimResult trim_subset(const AngleTuple& tuple, std::size_t m, std::uint64_t nu_max, const TrimOptions& options,
                       const SweepOptions& sweep)
{
    const std::size_t p = tuple.size();
    if (m > p) throw DomainError("subset size exceeds tuple size");
    if (nu_max < 1) throw DomainError("trim needs nu_max >= 1");

    TrimResult result;
    result.target = m == 0 ? 0.0 : std::pow(static_cast<double>(m), 0.5 + options.epsilon);
    if (m == 0) return result;
    if (m == p) {
        for (std::size_t i = 0; i < p; ++i) result.indices.push_back(i);
        result.achieved_max = sweep_naive(tuple, 1, nu_max, sweep).max_abs;
        result.evaluations = 1;
        return result;
    }

    SubsetObjective objective(tuple, nu_max, sweep);
    const std::uint64_t budget = std::max<std::uint64_t>(options.budget, 1);
    const std::uint64_t random_evals = std::max<std::uint64_t>(budget / 2, 1);

    auto rng = substream(options.seed, 0);
    std::vector<std::size_t> best;
    double best_value = 0.0;
    for (std::uint64_t i = 0; i < random_evals; ++i) {
        auto candidate = random_subset(rng, p, m);
        const double v = objective(candidate);
        if (best.empty() || v < best_value) {
            best = std::move(candidate);
            best_value = v;
        }
    }

    // First-improvement single swaps; rescan from the start after each accepted move.
    bool improved = true;
    while (improved && objective.evaluations() < budget) {
        improved = false;
        std::vector<bool> member(p, false);
        for (auto i : best) member[i] = true;
        for (std::size_t slot = 0; slot < best.size() && !improved; ++slot) {
            for (std::size_t out = 0; out < p && !improved; ++out) {
                if (member[out]) continue;
                if (objective.evaluations() >= budget) break;
                auto candidate = best;
                candidate[slot] = out;
                std::ranges::sort(candidate);
                const double v = objective(candidate);
                if (v < best_value) {
                    best = std::move(candidate);
                    best_value = v;
                    improved = true;
                }
            }
        }
    }

    result.indices = std::move(best);
    result.evaluations = objective.evaluations();
    result.achieved_max = sweep_naive(tuple.subset(result.indices), 1, nu_max, sweep).max_abs;
    return result;
}

Theorem2Result theorem2_construct(std::uint64_t n, unsigned h, const TrimOptions& trim, const FieldBudget& budget,
                                  const SweepOptions& sweep)
{
    if (n < 2) throw DomainError("theorem2_construct needs n >= 2");
    if (h < 2) throw DomainError("theorem2_construct needs h >= 2");

    PipelineReport report;
    report.n = n;
    report.h = h;
    const unsigned __int128 nu_max = int_pow(n, h);
    if (nu_max > std::numeric_limits<std::uint64_t>::max()) throw ResourceError("n^h overflows");
    report.nu_max = static_cast<std::uint64_t>(nu_max);
    report.reference = static_cast<double>(h - 1) * std::sqrt(static_cast<double>(n));

    // Always p > n: for p = n the range 1..n^h would reach nu = p^h - 1, where S = n.
    const auto g = next_prime_gap(n);
    report.p = g.p;
    report.gap = g.gap;
    report.gap_ratio = g.ratio;

    const SidonSet set = bose_chowla(report.p, h, budget);
    const AngleTuple full = unimodular_tuple(set);
    report.katz = katz_bound(report.p, h);
    report.full_max = sweep_naive(full, 1, report.nu_max, sweep).max_abs;

    const auto trimmed = trim_subset(full, static_cast<std::size_t>(report.gap), report.nu_max, trim, sweep);
    report.trimmed_indices = trimmed.indices;
    report.achieved_trim_max = trimmed.achieved_max;
    report.trim_target = trimmed.target;
    Theorem2Result out;
    out.tuple = full.without(trimmed.indices);
    report.final_max = sweep_naive(out.tuple, 1, report.nu_max, sweep).max_abs;
    constexpr double slack = 1e-9;
    report.triangle_ok = report.final_max <= report.full_max + report.achieved_trim_max + slack &&
                         report.final_max <= report.katz + report.achieved_trim_max + slack;
    out.report = std::move(report);
    return out;
}

nlohmann::json to_json(const CompositionPlan& plan)
{
    auto blocks = nlohmann::json::array();
    for (const auto& b : plan.blocks)
        blocks.push_back({{"m", b.m}, {"q", b.q}, {"degree", b.degree}, {"bound", b.bound}});
    return {{"n", plan.n},
            {"h", plan.h},
            {"top_bit", plan.top_bit},
            {"N", plan.N},
            {"digits", plan.digits},
            {"blocks", blocks},
            {"certified_bound", plan.certified_bound}};
}

nlohmann::json to_json(const PipelineReport& r)
{
    return {{"n", r.n},
            {"h", r.h},
            {"p", r.p},
            {"gap", r.gap},
            {"gap_ratio", r.gap_ratio},
            {"nu_max", r.nu_max},
            {"trimmed_indices", r.trimmed_indices},
            {"achieved_trim_max", r.achieved_trim_max},
            {"trim_target", r.trim_target},
            {"full_max", r.full_max},
            {"katz", r.katz},
            {"final_max", r.final_max},
            {"reference", r.reference},
            {"triangle_ok", r.triangle_ok}};
}

} // namespace turan
