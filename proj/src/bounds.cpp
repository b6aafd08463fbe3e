#include "turan/bounds.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "turan/errors.hpp"

namespace turan {

double erdos_renyi_bound(std::uint64_t n, std::uint64_t m)
{
    if (n < 1 || m < 1) throw DomainError("erdos_renyi_bound needs n, m >= 1");
    return std::sqrt(6.0 * static_cast<double>(n) * std::log(static_cast<double>(m) + 1.0));
}

double katz_bound(std::uint64_t q, unsigned h)
{
    if (q < 2 || h < 2) throw DomainError("katz_bound needs q, h >= 2");
    return static_cast<double>(h - 1) * std::sqrt(static_cast<double>(q));
}

double turan_lower(std::uint64_t n, std::uint64_t s)
{
    if (s < 1 || s > n) throw DomainError("turan_lower needs 1 <= s <= n");
    // log(n! / (n - s)!) as a sum of s logs; lgamma differences lose digits for large n.
    double log_value = std::lgamma(static_cast<double>(s) + 1.0);
    for (std::uint64_t i = 0; i < s; ++i) log_value += std::log(static_cast<double>(n - i));
    return std::exp(log_value / (2.0 * static_cast<double>(s)));
}

double turan_constant(unsigned h)
{
    if (h < 2) throw DomainError("turan_constant needs h >= 2");
    const unsigned m = h / 2;
    return std::exp(std::lgamma(m + 1.0) / (2.0 * m));
}

double montgomery_reference(std::uint64_t n, double B)
{
    if (n < 1 || B < 1.0) throw DomainError("montgomery_reference needs n >= 1, B >= 1");
    return std::sqrt(static_cast<double>(n) * B);
}

AngleTuple roots_of_unity_tuple(std::uint64_t n)
{
    if (n < 1) throw DomainError("roots_of_unity_tuple needs n >= 1");
    std::vector<std::uint64_t> num;
    for (std::uint64_t k = 1; k <= n; ++k) num.push_back(k);
    return AngleTuple::uniform(num, n);
}

AngleTuple random_unimodular_tuple(std::uint64_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> num(n);
    for (auto& a : num) a = rng() >> 32;
    return AngleTuple::uniform(num, random_angle_denominator);
}

BaselineStats random_unimodular_baseline(std::uint64_t n, std::uint64_t m, std::uint64_t seed, unsigned trials,
                                         const SweepOptions& options)
{
    if (trials < 1) throw DomainError("baseline needs at least one trial");
    BaselineStats stats;
    stats.n = n;
    stats.m = m;
    stats.seed = seed;
    stats.bound = erdos_renyi_bound(n, m);
    unsigned within = 0;
    for (unsigned t = 0; t < trials; ++t) {
        const auto tuple = random_unimodular_tuple(n, seed + t);
        const double mx = sweep_naive(tuple, 1, m, options).max_abs;
        stats.per_trial_max.push_back(mx);
        if (mx <= stats.bound) ++within;
    }
    stats.fraction_within = static_cast<double>(within) / trials;
    return stats;
}

std::string to_csv_row(const BoundReport& r)
{
    std::ostringstream os;
    os.precision(12);
    os << r.n << ',' << r.range << ',' << r.construction << ',';
    if (r.measured_max) os << *r.measured_max;
    os << ',' << r.katz << ',' << r.turan_lower << ',' << r.erdos_renyi << ',' << r.montgomery_ref;
    return os.str();
}

} // namespace turan
