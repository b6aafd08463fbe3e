#include "turan/powersum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <fftw3.h>

#include "turan/errors.hpp"
#include "turan/number_theory.hpp"

namespace turan {

namespace {

// Neumaier summation.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Best {
    double value = -1.0;
    std::uint64_t nu = 0;

    void offer(double v, std::uint64_t n)
    {
        if (v > value) {
            value = v;
            nu = n;
        }
    }
};

void check_ops(std::uint64_t range, std::uint64_t n, const SweepOptions& options)
{
    const std::uint64_t work = range * std::max<std::uint64_t>(n, 1);
    if (range != 0 && work / range != std::max<std::uint64_t>(n, 1))
        throw ResourceError("sweep work overflows");
    if (work > options.max_ops)
        throw ResourceError("sweep needs " + std::to_string(work) + " term evaluations, budget is " +
                            std::to_string(options.max_ops));
}

unsigned worker_count(std::uint64_t range, unsigned requested)
{
    constexpr std::uint64_t min_chunk = 1024;
    const std::uint64_t by_size = std::max<std::uint64_t>(1, range / min_chunk);
    return static_cast<unsigned>(std::clamp<std::uint64_t>(requested, 1, by_size));
}

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

} // namespace

AngleTuple::AngleTuple(std::vector<Angle> entries) : entries_(std::move(entries))
{
    for (auto& a : entries_) {
        if (a.denominator == 0) throw DomainError("angle denominator must be at least 1");
        a.numerator %= a.denominator;
    }
    if (!entries_.empty()) {
        const auto den = entries_.front().denominator;
        if (std::ranges::all_of(entries_, [&](const Angle& a) { return a.denominator == den; }))
            uniform_ = den;
    }
}

AngleTuple AngleTuple::uniform(std::span<const std::uint64_t> numerators, std::uint64_t M)
{
    if (M == 0) throw DomainError("angle denominator must be at least 1");
    std::vector<Angle> entries;
    entries.reserve(numerators.size());
    for (auto a : numerators) entries.push_back({a, M});
    AngleTuple t(std::move(entries));
    t.uniform_ = M;
    return t;
}

AngleTuple AngleTuple::subset(std::span<const std::size_t> indices) const
{
    std::vector<Angle> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(entries_.at(i));
    AngleTuple t(std::move(out));
    if (uniform_) t.uniform_ = uniform_;
    return t;
}

AngleTuple AngleTuple::without(std::span<const std::size_t> indices) const
{
    std::vector<bool> drop(entries_.size(), false);
    for (auto i : indices) drop.at(i) = true;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!drop[i]) keep.push_back(i);
    return subset(keep);
}

AngleTuple concat(const AngleTuple& a, const AngleTuple& b)
{
    std::vector<Angle> entries = a.entries();
    entries.insert(entries.end(), b.entries().begin(), b.entries().end());
    return AngleTuple(std::move(entries));
}

std::complex<double> unit_root(std::uint64_t r, std::uint64_t den)
{
    // Fold into (-1/2, 1/2] so the trig argument stays small.
    double x;
    if (2 * static_cast<unsigned __int128>(r) > den)
        x = -static_cast<double>(den - r) / static_cast<double>(den);
    else
        x = static_cast<double>(r) / static_cast<double>(den);
    const double theta = 2.0 * std::numbers::pi * x;
    return {std::cos(theta), std::sin(theta)};
}

std::vector<std::uint64_t> reduced_angles(const AngleTuple& tuple, std::uint64_t nu)
{
    std::vector<std::uint64_t> r;
    r.reserve(tuple.size());
    for (const auto& a : tuple.entries()) r.push_back(mul_mod(nu % a.denominator, a.numerator, a.denominator));
    return r;
}

std::complex<double> sum_reduced(const AngleTuple& tuple, std::span<const std::uint64_t> reduced)
{
    CompensatedSum re, im;
    const auto& entries = tuple.entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto z = unit_root(reduced[k], entries[k].denominator);
        re.add(z.real());
        im.add(z.imag());
    }
    return {re.value(), im.value()};
}

std::complex<double> eval_power_sum(const AngleTuple& tuple, std::uint64_t nu)
{
    const auto r = reduced_angles(tuple, nu);
    return sum_reduced(tuple, r);
}

std::string to_string(SweepMethod m)
{
    switch (m) {
    case SweepMethod::naive: return "naive";
    case SweepMethod::dft: return "dft";
    case SweepMethod::generic: return "generic";
    }
    return "unknown";
}

SweepResult sweep_naive(const AngleTuple& tuple, std::uint64_t nu_start, std::uint64_t nu_end,
                        const SweepOptions& options)
{
    if (nu_start > nu_end) throw DomainError("empty sweep range");
    const std::uint64_t range = nu_end - nu_start + 1;
    check_ops(range, tuple.size(), options);

    SweepResult result;
    result.nu_start = nu_start;
    result.nu_end = nu_end;
    result.method = SweepMethod::naive;
    if (options.keep_per_nu) result.per_nu.emplace(range, 0.0);

    // Table of e(j/M) for a shared denominator; entries come from unit_root so
    // the sums are bit-identical to eval_power_sum.
    std::vector<std::complex<double>> roots;
    constexpr std::uint64_t table_limit = std::uint64_t{1} << 22;
    if (const auto M = tuple.uniform_denominator(); M && *M <= table_limit && *M <= range * tuple.size()) {
        roots.resize(*M);
        for (std::uint64_t j = 0; j < *M; ++j) roots[j] = unit_root(j, *M);
    }
    auto evaluate = [&](std::span<const std::uint64_t> reduced) {
        if (roots.empty()) return std::abs(sum_reduced(tuple, reduced));
        CompensatedSum re, im;
        for (auto r : reduced) {
            re.add(roots[r].real());
            im.add(roots[r].imag());
        }
        return std::abs(std::complex<double>(re.value(), im.value()));
    };

    const unsigned workers = worker_count(range, options.threads);
    std::vector<Best> partial(workers);
    auto run_chunk = [&](unsigned w) {
        const std::uint64_t lo = nu_start + range * w / workers;
        const std::uint64_t hi = nu_start + range * (w + 1) / workers; // exclusive
        auto reduced = reduced_angles(tuple, lo);
        const auto& entries = tuple.entries();
        Best best;
        for (std::uint64_t nu = lo; nu < hi; ++nu) {
            const double v = evaluate(reduced);
            best.offer(v, nu);
            if (result.per_nu) (*result.per_nu)[nu - nu_start] = v;
            for (std::size_t k = 0; k < entries.size(); ++k) {
                const auto den = entries[k].denominator;
                const auto step = entries[k].numerator;
                if (reduced[k] >= den - step)
                    reduced[k] -= den - step;
                else
                    reduced[k] += step;
            }
        }
        partial[w] = best;
    };
    if (workers == 1) {
        run_chunk(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_chunk, w);
    }
    Best best;
    for (const auto& b : partial) best.offer(b.value, b.nu);
    result.max_abs = best.value;
    result.argmax_nu = best.nu;
    return result;
}

std::vector<double> dft_magnitudes(const AngleTuple& tuple, const SweepOptions& options)
{
    const auto M = tuple.uniform_denominator();
    if (!M) throw UnsupportedError("DFT engine needs a uniform denominator; use sweep_naive");
    if (*M > options.max_transform)
        throw ResourceError("transform length " + std::to_string(*M) + " exceeds budget " +
                            std::to_string(options.max_transform));
    const auto len = static_cast<std::size_t>(*M);
    auto* buf = fftw_alloc_complex(len);
    if (buf == nullptr) throw ResourceError("cannot allocate transform buffer");
    for (std::size_t i = 0; i < len; ++i) buf[i][0] = buf[i][1] = 0.0;
    for (const auto& a : tuple.entries()) buf[a.numerator][0] += 1.0;

    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(len), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    // Backward sign gives sum_j c_j exp(+2 pi i nu j / M), i.e. S(nu).
    fftw_execute(plan);
    std::vector<double> mags(len);
    for (std::size_t i = 0; i < len; ++i) mags[i] = std::hypot(buf[i][0], buf[i][1]);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);
    return mags;
}

SweepResult sweep_dft(const AngleTuple& tuple, const SweepOptions& options)
{
    const auto mags = dft_magnitudes(tuple, options);
    const std::uint64_t M = mags.size();

    SweepResult result;
    result.method = SweepMethod::dft;
    result.nu_start = M >= 3 ? 1 : 0;
    result.nu_end = M >= 3 ? M - 2 : M - 1;

    double approx_max = -1.0;
    for (auto nu = result.nu_start; nu <= result.nu_end; ++nu) approx_max = std::max(approx_max, mags[nu]);
    // Transform rounding is far below this window; every true maximizer lands in it.
    const double window = 1e-9 * std::max<double>(1.0, static_cast<double>(tuple.size()));
    Best best;
    for (auto nu = result.nu_start; nu <= result.nu_end; ++nu) {
        if (mags[nu] >= approx_max - window) best.offer(std::abs(eval_power_sum(tuple, nu)), nu);
    }
    result.max_abs = best.value;
    result.argmax_nu = best.nu;
    if (options.keep_per_nu)
        result.per_nu.emplace(mags.begin() + static_cast<std::ptrdiff_t>(result.nu_start),
                              mags.begin() + static_cast<std::ptrdiff_t>(result.nu_end) + 1);
    return result;
}

double parseval_residual(const AngleTuple& tuple, const SweepOptions& options)
{
    const auto M = tuple.uniform_denominator();
    if (!M) throw UnsupportedError("Parseval check needs a uniform denominator");
    std::set<std::uint64_t> distinct;
    for (const auto& a : tuple.entries()) distinct.insert(a.numerator);
    if (distinct.size() != tuple.size()) throw DomainError("Parseval check needs distinct exponents");
    if (tuple.empty()) return 0.0;

    const auto mags = dft_magnitudes(tuple, options);
    CompensatedSum energy;
    for (double m : mags) energy.add(m * m);
    const double expected = static_cast<double>(*M) * static_cast<double>(tuple.size());
    return std::abs(energy.value() - expected) / expected;
}

SweepResult sweep_generic(std::span<const std::complex<double>> points, std::uint64_t nu_start,
                          std::uint64_t nu_end, const SweepOptions& options)
{
    if (nu_start > nu_end) throw DomainError("empty sweep range");
    const std::uint64_t range = nu_end - nu_start + 1;
    check_ops(range, points.size(), options);
    constexpr double unit_tol = 1e-12;

    std::vector<bool> unimodular(points.size());
    std::vector<std::complex<double>> cur(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double r = std::abs(points[k]);
        if (r < 1.0 - unit_tol) throw DomainError("sweep_generic needs |z| >= 1");
        unimodular[k] = std::abs(r - 1.0) <= unit_tol;
        // z^nu_start by repeated squaring.
        std::complex<double> base = unimodular[k] ? points[k] / r : points[k];
        std::complex<double> acc = 1.0;
        for (std::uint64_t e = nu_start; e > 0; e >>= 1) {
            if (e & 1) acc *= base;
            base *= base;
            if (unimodular[k]) {
                acc /= std::abs(acc);
                base /= std::abs(base);
            }
        }
        cur[k] = acc;
    }

    SweepResult result;
    result.nu_start = nu_start;
    result.nu_end = nu_end;
    result.method = SweepMethod::generic;
    if (options.keep_per_nu) result.per_nu.emplace();
    Best best;
    for (std::uint64_t nu = nu_start;; ++nu) {
        CompensatedSum re, im;
        for (const auto& z : cur) {
            re.add(z.real());
            im.add(z.imag());
        }
        const double v = std::hypot(re.value(), im.value());
        best.offer(v, nu);
        if (result.per_nu) result.per_nu->push_back(v);
        if (nu == nu_end) break;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            cur[k] *= points[k];
            if (unimodular[k]) cur[k] /= std::abs(cur[k]);
        }
    }
    result.max_abs = best.value;
    result.argmax_nu = best.nu;
    return result;
}

nlohmann::json to_json(const AngleTuple& tuple)
{
    auto entries = nlohmann::json::array();
    for (const auto& a : tuple.entries()) entries.push_back({a.numerator, a.denominator});
    nlohmann::json j{{"entries", entries}};
    if (tuple.uniform_denominator()) j["uniform_denominator"] = *tuple.uniform_denominator();
    return j;
}

AngleTuple tuple_from_json(const nlohmann::json& j)
{
    std::vector<Angle> entries;
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 2) throw DomainError("tuple entry must be [numerator, denominator]");
        entries.push_back({e[0].get<std::uint64_t>(), e[1].get<std::uint64_t>()});
    }
    if (entries.empty() && j.contains("uniform_denominator"))
        return AngleTuple::uniform({}, j["uniform_denominator"].get<std::uint64_t>());
    return AngleTuple(std::move(entries));
}

nlohmann::json to_json(const SweepResult& r)
{
    return {{"nu_start", r.nu_start},
            {"nu_end", r.nu_end},
            {"max_abs", r.max_abs},
            {"argmax_nu", r.argmax_nu},
            {"method", to_string(r.method)}};
}

std::string per_nu_csv(const SweepResult& r)
{
    std::ostringstream os;
    os << "nu,abs\n" << std::setprecision(17);
    if (r.per_nu) {
        for (std::size_t i = 0; i < r.per_nu->size(); ++i) os << r.nu_start + i << ',' << (*r.per_nu)[i] << '\n';
    }
    return os.str();
}

} // namespace turan
