#include "turan/sidon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

#include "turan/errors.hpp"
#include "turan/number_theory.hpp"

namespace turan {

namespace {

PrimePower require_prime_power(std::uint64_t q)
{
    auto pp = as_prime_power(q);
    if (!pp) throw DomainError(std::to_string(q) + " is not a prime power");
    return *pp;
}

// Advances positions to the next non-decreasing sequence over [0, n); false when done.
bool next_multiset(std::vector<std::uint32_t>& pos, std::uint32_t n)
{
    std::size_t i = pos.size();
    while (i-- > 0) {
        if (pos[i] + 1 < n) {
            const std::uint32_t v = pos[i] + 1;
            for (std::size_t j = i; j < pos.size(); ++j) pos[j] = v;
            return true;
        }
    }
    return false;
}

std::uint64_t multiset_sum(std::span<const std::uint32_t> pos, std::span<const std::uint64_t> values,
                           std::uint64_t modulus)
{
    std::uint64_t s = 0;
    for (auto i : pos) s = (s + values[i] % modulus) % modulus;
    return s;
}

std::vector<std::uint64_t> values_at(std::span<const std::uint32_t> pos, std::span<const std::uint64_t> values)
{
    std::vector<std::uint64_t> out;
    for (auto i : pos) out.push_back(values[i]);
    return out;
}

} // namespace

FieldContext bose_chowla_field(std::uint64_t q, unsigned h, const FieldBudget& budget)
{
    const auto pp = require_prime_power(q);
    if (h < 2) throw DomainError("h must be at least 2");
    if (pp.prime > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("characteristic too large");
    return build_field(static_cast<std::uint32_t>(pp.prime), pp.exponent * h, std::nullopt, budget);
}

SidonSet bose_chowla(std::uint64_t q, unsigned h, const FieldBudget& budget)
{
    return bose_chowla(bose_chowla_field(q, h, budget), q, h);
}

SidonSet bose_chowla(const FieldContext& field, std::uint64_t q, unsigned h)
{
    require_prime_power(q);
    if (h < 2) throw DomainError("h must be at least 2");
    if (checked_pow(q, h) != field.size()) throw DomainError("field order is not q^h");

    SidonSet set;
    set.q = q;
    set.h = h;
    set.modulus = field.order();
    set.field = field.params();
    set.omega = field.encode(field.omega());
    for (const auto& x : subfield_elements(field, q)) set.exponents.push_back(field.discrete_log(field.add(field.omega(), x)));
    std::ranges::sort(set.exponents);
    return set;
}

std::uint64_t multiset_count(std::uint64_t n, unsigned h)
{
    // binomial(n + h - 1, h), built as a running product of exact binomials.
    unsigned __int128 c = 1;
    for (unsigned i = 0; i < h; ++i) {
        c = c * (n + i) / (i + 1);
        if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

BhVerdict verify_bh(std::span<const std::uint64_t> values, std::uint64_t modulus, unsigned h,
                    std::uint64_t max_multisets)
{
    if (modulus == 0) throw DomainError("modulus must be positive");
    if (h == 0) throw DomainError("h must be positive");
    if (values.empty()) return BhOk{};
    const std::uint64_t count = multiset_count(values.size(), h);
    if (count > max_multisets)
        throw ResourceError(std::to_string(count) + " multisets exceed the budget of " + std::to_string(max_multisets));

    const auto n = static_cast<std::uint32_t>(values.size());
    std::unordered_map<std::uint64_t, std::uint64_t> first_rank;
    first_rank.reserve(count);
    std::vector<std::uint32_t> seen; // flattened positions, h per multiset
    seen.reserve(count * h);
    std::vector<std::uint32_t> pos(h, 0);
    std::uint64_t rank = 0;
    do {
        const std::uint64_t s = multiset_sum(pos, values, modulus);
        auto [it, inserted] = first_rank.try_emplace(s, rank);
        if (!inserted) {
            std::span<const std::uint32_t> earlier(seen.data() + it->second * h, h);
            return BhCollision{values_at(earlier, values), values_at(pos, values), s};
        }
        seen.insert(seen.end(), pos.begin(), pos.end());
        ++rank;
    } while (next_multiset(pos, n));
    return BhOk{};
}

BhVerdict verify_bh(const SidonSet& set, std::uint64_t max_multisets)
{
    return verify_bh(set.exponents, set.modulus, set.h, max_multisets);
}

BhVerdict verify_bh_sampled(const SidonSet& set, std::uint64_t samples, std::uint64_t seed)
{
    if (set.exponents.empty()) return BhOk{true};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(set.exponents.size() - 1));
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_sum;
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::vector<std::uint32_t> pos(set.h);
        for (auto& p : pos) p = pick(rng);
        std::ranges::sort(pos);
        const std::uint64_t sum = multiset_sum(pos, set.exponents, set.modulus);
        auto [it, inserted] = by_sum.try_emplace(sum, pos);
        if (!inserted && it->second != pos) {
            auto a = values_at(it->second, set.exponents);
            auto b = values_at(pos, set.exponents);
            if (b < a) std::swap(a, b);
            return BhCollision{std::move(a), std::move(b), sum};
        }
    }
    return BhOk{true};
}

AngleTuple unimodular_tuple(const SidonSet& set)
{
    return AngleTuple::uniform(set.exponents, set.modulus);
}

std::complex<double> character_sum_direct(const FieldContext& field, std::uint64_t q, std::uint64_t nu)
{
    const std::uint64_t M = field.order();
    const std::uint64_t nu_mod = nu % M;
    // Kahan sums of chi^nu(omega + x) = e(nu log(omega + x) / M).
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    auto kahan = [](double& sum, double& c, double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    };
    for (const auto& x : subfield_elements(field, q)) {
        const FieldElement y = field.add(field.omega(), x);
        const std::uint64_t e = mul_mod(nu_mod, field.discrete_log(y), M);
        const std::complex<double> z = std::exp(std::complex<double>(0.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(M)));
        kahan(re, cre, z.real());
        kahan(im, cim, z.imag());
    }
    return {re, im};
}

nlohmann::json to_json(const SidonSet& set)
{
    return {{"q", set.q},
            {"h", set.h},
            {"M", set.modulus},
            {"exponents", set.exponents},
            {"field", to_json(set.field)},
            {"omega", set.omega}};
}

} // namespace turan
