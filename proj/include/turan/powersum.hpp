#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace turan {

// z = e(numerator / denominator), e(x) = exp(2 pi i x).
struct Angle {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    bool operator==(const Angle&) const = default;
};

/**
 * An n-tuple of unimodular numbers held as exact rational angles. Numerators
 * are reduced into [0, denominator) on construction, so every entry is a
 * root of unity and powers can be reduced in integer arithmetic.
 */
class AngleTuple {
public:
    AngleTuple() = default;
    explicit AngleTuple(std::vector<Angle> entries);

    // Every entry numerator / M. Keeps M even when the tuple is empty.
    static AngleTuple uniform(std::span<const std::uint64_t> numerators, std::uint64_t M);

    const std::vector<Angle>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::optional<std::uint64_t> uniform_denominator() const noexcept { return uniform_; }

    AngleTuple subset(std::span<const std::size_t> indices) const;
    AngleTuple without(std::span<const std::size_t> indices) const;

    bool operator==(const AngleTuple&) const = default;

private:
    std::vector<Angle> entries_;
    std::optional<std::uint64_t> uniform_;
};

AngleTuple concat(const AngleTuple& a, const AngleTuple& b);

// e(r / den) for 0 <= r < den, with the angle folded into (-1/2, 1/2].
std::complex<double> unit_root(std::uint64_t r, std::uint64_t den);

// nu * numerator_k mod denominator_k for every entry.
std::vector<std::uint64_t> reduced_angles(const AngleTuple& tuple, std::uint64_t nu);

// Sum of e(r_k / den_k) with compensated (Neumaier) summation in entry order.
std::complex<double> sum_reduced(const AngleTuple& tuple, std::span<const std::uint64_t> reduced);

// S(nu) = sum_k z_k^nu.
std::complex<double> eval_power_sum(const AngleTuple& tuple, std::uint64_t nu);

enum class SweepMethod { naive, dft, generic };

std::string to_string(SweepMethod m);

struct SweepResult {
    std::uint64_t nu_start = 0;
    std::uint64_t nu_end = 0;
    double max_abs = 0.0;
    std::uint64_t argmax_nu = 0;
    SweepMethod method = SweepMethod::naive;
    // |S(nu)| for nu = nu_start..nu_end, when requested.
    std::optional<std::vector<double>> per_nu;
};

struct SweepOptions {
    bool keep_per_nu = false;
    // Worker cap; results do not depend on it.
    unsigned threads = 1;
    // Max (range length) * (tuple size) for the naive engines.
    std::uint64_t max_ops = std::uint64_t{1} << 32;
    // Max transform length for the DFT engine.
    std::uint64_t max_transform = std::uint64_t{1} << 26;
};

/**
 * Evaluates every nu in [nu_start, nu_end], stepping each reduced angle by its
 * numerator modulo its denominator. Reports the largest |S(nu)|, ties going to
 * the smallest nu under exact double comparison.
 */
SweepResult sweep_naive(const AngleTuple& tuple, std::uint64_t nu_start, std::uint64_t nu_end,
                        const SweepOptions& options = {});

// |S(nu)| for all nu in [0, M) via a length-M transform of the multiplicity vector.
std::vector<double> dft_magnitudes(const AngleTuple& tuple, const SweepOptions& options = {});

/**
 * Full-period sweep for a uniform-denominator tuple. The max is reported over
 * nu = 1..M-2 (0..M-1 when M < 3); near-maximal candidates from the transform
 * are re-evaluated with eval_power_sum so the result matches sweep_naive.
 */
SweepResult sweep_dft(const AngleTuple& tuple, const SweepOptions& options = {});

// |sum_nu |S(nu)|^2 - M n| / (M n) over one full period.
double parseval_residual(const AngleTuple& tuple, const SweepOptions& options = {});

// Iterated multiplication over arbitrary points with |z| >= 1. Unimodular
// points are renormalized after every step.
SweepResult sweep_generic(std::span<const std::complex<double>> points, std::uint64_t nu_start,
                          std::uint64_t nu_end, const SweepOptions& options = {});

nlohmann::json to_json(const AngleTuple& tuple);
AngleTuple tuple_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepResult& r);
// "nu,abs" rows, one per stored nu.
std::string per_nu_csv(const SweepResult& r);

} // namespace turan
