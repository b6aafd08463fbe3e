#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "turan/errors.hpp"

namespace turan {

using Coeffs = std::vector<std::uint32_t>;

// GF(p^d) realized as GF(p)[t]/(modulus). modulus holds d+1 coefficients,
// low degree first, and is monic.
struct FieldParams {
    std::uint32_t p = 0;
    unsigned d = 0;
    Coeffs modulus;

    bool operator==(const FieldParams&) const = default;
};

// Coefficient of t^i at position i; always exactly d entries.
struct FieldElement {
    Coeffs coeffs;

    bool operator==(const FieldElement&) const = default;
};

// Caps the size of the log / antilog tables (entries, not bytes).
struct FieldBudget {
    std::uint64_t max_table_entries = std::uint64_t{1} << 24;
};

// Raised when a supplied modulus factors; carries a monic factor.
class ReducibleModulusError : public DomainError {
public:
    ReducibleModulusError(const std::string& what, Coeffs factor)
        : DomainError(what), factor_(std::move(factor)) {}
    const Coeffs& factor() const noexcept { return factor_; }

private:
    Coeffs factor_;
};

/**
 * An immutable finite field with a chosen primitive element omega and full
 * discrete-log tables. Elements are identified with their canonical
 * encoding sum(coeffs[i] * p^i), which also gives the total order used for
 * tie-breaking. Safe for concurrent reads.
 */
class FieldContext {
public:
    const FieldParams& params() const noexcept { return params_; }
    std::uint32_t characteristic() const noexcept { return params_.p; }
    unsigned degree() const noexcept { return params_.d; }
    // p^d
    std::uint64_t size() const noexcept { return size_; }
    // M = p^d - 1, the order of the multiplicative group.
    std::uint64_t order() const noexcept { return size_ - 1; }
    const FieldElement& omega() const noexcept { return omega_; }

    std::uint64_t encode(const FieldElement& x) const;
    FieldElement decode(std::uint64_t code) const;

    FieldElement zero() const;
    FieldElement one() const;
    FieldElement constant(std::uint32_t c) const;
    // The polynomial variable t (equals the constant t mod modulus when d = 1).
    FieldElement variable() const;

    FieldElement add(const FieldElement& x, const FieldElement& y) const;
    FieldElement sub(const FieldElement& x, const FieldElement& y) const;
    FieldElement mul(const FieldElement& x, const FieldElement& y) const;
    FieldElement pow(FieldElement x, std::uint64_t e) const;

    // Unique j in [0, M) with omega^j = x. Throws DomainError for x = 0.
    std::uint64_t discrete_log(const FieldElement& x) const;
    std::uint64_t discrete_log_code(std::uint64_t code) const;
    // omega^j for any j (reduced mod M).
    FieldElement exp(std::uint64_t j) const;

    // Multiplicative order of a nonzero element, from the log table.
    std::uint64_t element_order(const FieldElement& x) const;

private:
    friend FieldContext build_field(std::uint32_t, unsigned, std::optional<Coeffs>,
                                    const FieldBudget&);
    friend FieldContext field_from_json(const nlohmann::json&, const FieldBudget&);

    FieldContext() = default;
    void check(const FieldElement& x) const;
    void build_tables();

    FieldParams params_;
    std::uint64_t size_ = 0;
    FieldElement omega_;
    std::vector<std::uint32_t> log_table_; // indexed by encoding; [0] unused
    std::vector<std::uint32_t> exp_table_; // omega^j encodings, j in [0, M)
};

// Polynomials over GF(p), low degree first, no trailing zeros except for 0.
Coeffs poly_rem(Coeffs a, std::span<const std::uint32_t> b, std::uint32_t p);

// Returns a nontrivial monic factor of the monic polynomial f, found by trial
// division in order of increasing degree, or nullopt if f is irreducible.
std::optional<Coeffs> find_factor(std::span<const std::uint32_t> f, std::uint32_t p);

bool is_irreducible(std::span<const std::uint32_t> f, std::uint32_t p);

// Smallest monic irreducible of degree d, comparing coefficients c0, c1, ...
Coeffs smallest_irreducible(std::uint32_t p, unsigned d);

/**
 * Builds GF(p^d). With no modulus, the smallest monic irreducible in
 * low-degree-first lexicographic order is used. omega is the nonzero element
 * of smallest encoding whose order is exactly p^d - 1.
 */
FieldContext build_field(std::uint32_t p, unsigned d, std::optional<Coeffs> modulus = std::nullopt,
                         const FieldBudget& budget = {});

// The q elements fixed by x -> x^q, sorted by encoding. q = p^a with a | d.
std::vector<FieldElement> subfield_elements(const FieldContext& ctx, std::uint64_t q);

nlohmann::json to_json(const FieldParams& params);
// {p, d, modulus, omega, order}
nlohmann::json to_json(const FieldContext& ctx);
// Rebuilds tables from a context dump; rejects a non-primitive omega.
FieldContext field_from_json(const nlohmann::json& j, const FieldBudget& budget = {});

} // namespace turan
