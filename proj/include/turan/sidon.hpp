#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "turan/gf.hpp"
#include "turan/powersum.hpp"

namespace turan {

// A B_h set modulo M = q^h - 1 from the Bose-Chowla construction.
struct SidonSet {
    std::uint64_t q = 0;
    unsigned h = 0;
    std::uint64_t modulus = 0; // M
    std::vector<std::uint64_t> exponents; // ascending
    FieldParams field;
    std::uint64_t omega = 0; // encoding of the primitive element used
};

// The field E = GF(q^h) as used by bose_chowla(q, h).
FieldContext bose_chowla_field(std::uint64_t q, unsigned h, const FieldBudget& budget = {});

/**
 * a_k = log(omega + x_k) over the q elements x_k of the subfield GF(q) inside
 * GF(q^h), sorted ascending. omega generates E* so it is never in GF(q) and
 * omega + x_k is never zero.
 */
SidonSet bose_chowla(std::uint64_t q, unsigned h, const FieldBudget& budget = {});
SidonSet bose_chowla(const FieldContext& field, std::uint64_t q, unsigned h);

struct BhOk {
    // true when only a random sample of multisets was checked.
    bool probabilistic = false;
};

// Two distinct h-multisets of exponent values with the same sum mod M.
struct BhCollision {
    std::vector<std::uint64_t> first;
    std::vector<std::uint64_t> second;
    std::uint64_t sum = 0;
};

using BhVerdict = std::variant<BhOk, BhCollision>;

// Exhaustive B_h check. Enumerates h-multisets of positions in lexicographic
// order and reports the first multiset whose sum repeats, paired with the
// earlier one. Throws ResourceError if binomial(n+h-1, h) > max_multisets.
BhVerdict verify_bh(std::span<const std::uint64_t> values, std::uint64_t modulus, unsigned h,
                    std::uint64_t max_multisets = 1'000'000);
BhVerdict verify_bh(const SidonSet& set, std::uint64_t max_multisets = 1'000'000);

// Random-sample variant for sets too large to enumerate. A pass is only
// probabilistic.
BhVerdict verify_bh_sampled(const SidonSet& set, std::uint64_t samples, std::uint64_t seed);

// Number of h-multisets from n items, saturating at UINT64_MAX.
std::uint64_t multiset_count(std::uint64_t n, unsigned h);

// z_k = e(a_k / M).
AngleTuple unimodular_tuple(const SidonSet& set);

// sum over x in GF(q) of chi^nu(omega + x) with chi(omega^j) = e(j / M),
// evaluated from the field's log table.
std::complex<double> character_sum_direct(const FieldContext& field, std::uint64_t q, std::uint64_t nu);

nlohmann::json to_json(const SidonSet& set);

} // namespace turan
