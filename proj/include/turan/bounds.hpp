#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "turan/powersum.hpp"

namespace turan {

// sqrt(6 n ln(m + 1)). Natural log.
double erdos_renyi_bound(std::uint64_t n, std::uint64_t m);

// (h - 1) sqrt(q): bound on every nontrivial character sum over a shifted subfield.
double katz_bound(std::uint64_t q, unsigned h);

// (n! s! / (n - s)!)^(1 / (2 s)), evaluated in log space. Valid lower bound
// for max over nu = 1..n^(2s) of |S(nu)| whenever all |z_k| >= 1.
double turan_lower(std::uint64_t n, std::uint64_t s);

// C_{2m} = (m!)^(1 / 2m), C_{2m+1} = C_{2m}.
double turan_constant(unsigned h);

// sqrt(n B). The true lower bound carries an unknown constant; use for ratios only.
double montgomery_reference(std::uint64_t n, double B);

// Angles k/n for k = 1..n (the last one reduces to 0).
AngleTuple roots_of_unity_tuple(std::uint64_t n);

struct BaselineStats {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t seed = 0;
    std::vector<double> per_trial_max;
    double bound = 0.0; // erdos_renyi_bound(n, m)
    double fraction_within = 0.0;
};

// Angle denominator used for random unimodular points.
inline constexpr std::uint64_t random_angle_denominator = std::uint64_t{1} << 32;

/**
 * trials independent n-tuples of uniformly random angles a / 2^32, each swept
 * exactly over nu = 1..m. Trial t draws from mt19937_64(seed + t).
 */
BaselineStats random_unimodular_baseline(std::uint64_t n, std::uint64_t m, std::uint64_t seed, unsigned trials,
                                         const SweepOptions& options = {});

// The random tuple used by trial `trial` of the baseline.
AngleTuple random_unimodular_tuple(std::uint64_t n, std::uint64_t seed);

struct BoundReport {
    std::uint64_t n = 0;
    std::string range;        // "a:b"
    std::string construction; // e.g. "bose-chowla", "compose", "roots-of-unity"
    std::optional<double> measured_max;
    double katz = 0.0;
    double turan_lower = 0.0;
    double erdos_renyi = 0.0;
    double montgomery_ref = 0.0;
};

inline constexpr const char* bound_report_csv_header =
    "n,m_or_range,construction,measured_max,katz,turan_lower,er_bound,mont_ref";

std::string to_csv_row(const BoundReport& r);

} // namespace turan
