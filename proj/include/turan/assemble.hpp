#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "turan/gf.hpp"
#include "turan/powersum.hpp"
#include "turan/sidon.hpp"

namespace turan {

// One binary digit's contribution: 2^m points from GF(2^(m * degree)), or
// the single point z = 1 for m = 0.
struct CompositionBlock {
    unsigned m = 0;
    std::uint64_t q = 1;  // 2^m
    unsigned degree = 0;  // ceil(N / m); 0 for the singleton
    double bound = 1.0;   // (degree - 1) 2^(m/2), or 1 for the singleton
};

struct CompositionPlan {
    std::uint64_t n = 0;
    unsigned h = 0;
    unsigned top_bit = 0; // largest index with 2^top_bit <= n
    unsigned N = 0;       // h (top_bit + 1)
    std::vector<unsigned> digits; // binary digits of n, least significant first
    std::vector<CompositionBlock> blocks; // ascending m
    double certified_bound = 0.0;
};

// Digits, block sizes and the certified bound. Checks n^h <= 2^N - 2 for n >= 2.
CompositionPlan plan_composition(std::uint64_t n, unsigned h);

struct Composition {
    AngleTuple tuple;
    CompositionPlan plan;
};

// Concatenates one Bose-Chowla tuple per set bit of n; |S(nu)| stays below
// plan.certified_bound for nu = 1..2^N - 2.
Composition binary_compose(std::uint64_t n, unsigned h, const FieldBudget& budget = {});

struct PrimeGap {
    std::uint64_t p = 0;
    std::uint64_t gap = 0;
    double ratio = 0.0; // gap / p^0.525, informational
};

PrimeGap next_prime_gap(std::uint64_t n);

struct TrimOptions {
    double epsilon = 0.25;
    // Total subset evaluations; half go to random sampling, the rest to descent.
    std::uint64_t budget = 2000;
    std::uint64_t seed = 0;
};

struct TrimResult {
    std::vector<std::size_t> indices; // ascending
    double achieved_max = 0.0;        // max over nu = 1..nu_max of |sum over the subset|
    double target = 0.0;              // m^(1/2 + epsilon)
    std::uint64_t evaluations = 0;
};

/**
 * Picks an m-subset of the tuple whose own power sums stay small over
 * nu = 1..nu_max: seeded random subsets, then first-improvement single-swap
 * descent from the best one. Deterministic in (seed, budget).
 */
TrimResult trim_subset(const AngleTuple& tuple, std::size_t m, std::uint64_t nu_max, const TrimOptions& options = {},
                       const SweepOptions& sweep = {});

struct PipelineReport {
    std::uint64_t n = 0;
    unsigned h = 0;
    std::uint64_t p = 0;
    std::uint64_t gap = 0;
    double gap_ratio = 0.0;
    std::uint64_t nu_max = 0; // n^h
    std::vector<std::size_t> trimmed_indices;
    double achieved_trim_max = 0.0;
    double trim_target = 0.0;
    double full_max = 0.0;
    double katz = 0.0;
    double final_max = 0.0;
    double reference = 0.0; // (h - 1) sqrt(n)
    // final_max <= full_max + achieved_trim_max and <= katz + achieved_trim_max, up to 1e-9.
    bool triangle_ok = false;
};

struct Theorem2Result {
    AngleTuple tuple;
    PipelineReport report;
};

// Next prime p > n, Bose-Chowla over GF(p^h), then removes p - n points.
// p > n even when n is a prime power, so n^h <= p^h - 2 stays inside the
// range where the full tuple is bounded.
Theorem2Result theorem2_construct(std::uint64_t n, unsigned h, const TrimOptions& trim = {},
                                  const FieldBudget& budget = {}, const SweepOptions& sweep = {});

nlohmann::json to_json(const CompositionPlan& plan);
nlohmann::json to_json(const PipelineReport& report);

} // namespace turan
