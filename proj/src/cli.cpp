#include "turan/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "turan/assemble.hpp"
#include "turan/bounds.hpp"
#include "turan/errors.hpp"
#include "turan/gf.hpp"
#include "turan/powersum.hpp"
#include "turan/sidon.hpp"

namespace turan::cli {

namespace {

using nlohmann::json;

// Tests on (q, h) inside `verify`.
constexpr double bound_slack = 1e-6;
constexpr double engine_tolerance = 1e-8;
constexpr double parseval_tolerance = 1e-9;
constexpr double charsum_tolerance = 1e-9;
constexpr std::uint64_t charsum_full_limit = 100'000;
constexpr std::uint64_t charsum_sample_count = 10'000;

struct Output {
    std::string text;
    int code = exit_ok;
};

std::string range_string(std::uint64_t a, std::uint64_t b)
{
    return std::to_string(a) + ":" + std::to_string(b);
}

FieldBudget field_budget(const RunConfig& cfg)
{
    FieldBudget b{cfg.budget_table};
    if (const char* mb = std::getenv("POWERSUM_BUDGET_MB")) {
        const std::uint64_t bytes = std::strtoull(mb, nullptr, 10) << 20;
        // log table plus antilog table, 4 bytes each per entry
        b.max_table_entries = std::min(b.max_table_entries, bytes / 8);
    }
    return b;
}

SweepOptions sweep_options(const RunConfig& cfg)
{
    SweepOptions o;
    o.threads = std::max(1u, cfg.threads);
    o.max_ops = cfg.budget_ops;
    o.max_transform = cfg.budget_transform;
    return o;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string csv(const std::vector<BoundReport>& rows)
{
    std::string s = std::string(bound_report_csv_header) + "\n";
    for (const auto& r : rows) s += to_csv_row(r) + "\n";
    return s;
}

Output cmd_construct(const RunConfig& cfg)
{
    const auto set = bose_chowla(cfg.q, cfg.h, field_budget(cfg));
    const auto tuple = unimodular_tuple(set);
    if (cfg.format == Format::csv) {
        std::string s = "k,numerator,denominator\n";
        for (std::size_t k = 0; k < tuple.size(); ++k)
            s += std::to_string(k) + "," + std::to_string(tuple.entries()[k].numerator) + "," +
                 std::to_string(tuple.entries()[k].denominator) + "\n";
        return {s};
    }
    return {dump({{"sidon", to_json(set)}, {"tuple", to_json(tuple)}})};
}

Output cmd_verify(const RunConfig& cfg)
{
    const auto field = bose_chowla_field(cfg.q, cfg.h, field_budget(cfg));
    const auto set = bose_chowla(field, cfg.q, cfg.h);
    const auto tuple = unimodular_tuple(set);
    const auto opts = sweep_options(cfg);
    const std::uint64_t M = set.modulus;
    const std::uint64_t lo = 1, hi = M - 2;
    json report{{"q", set.q}, {"h", set.h}, {"M", M}, {"n", tuple.size()}};

    std::optional<SweepResult> naive, dft;
    if (cfg.engine != Engine::dft) naive = sweep_naive(tuple, lo, hi, opts);
    if (cfg.engine != Engine::naive) dft = sweep_dft(tuple, opts);
    const SweepResult& primary = dft ? *dft : *naive;
    bool pass = true;
    report["sweep"] = to_json(primary);
    if (naive && dft) {
        const bool agree = std::abs(naive->max_abs - dft->max_abs) <= engine_tolerance &&
                           naive->argmax_nu == dft->argmax_nu;
        report["sweep_naive"] = to_json(*naive);
        report["engines_agree"] = agree;
        pass = pass && agree;
    }
    const double katz = katz_bound(set.q, set.h);
    const bool bound_ok = primary.max_abs <= katz + bound_slack;
    report["katz"] = katz;
    report["bound_ok"] = bound_ok;
    pass = pass && bound_ok;

    json bh;
    BhVerdict verdict;
    try {
        verdict = verify_bh(set);
    } catch (const ResourceError&) {
        verdict = verify_bh_sampled(set, 1'000'000, cfg.seed);
    }
    if (const auto* ok = std::get_if<BhOk>(&verdict)) {
        bh = {{"ok", true}, {"probabilistic", ok->probabilistic}};
    } else {
        const auto& c = std::get<BhCollision>(verdict);
        bh = {{"ok", false}, {"first", c.first}, {"second", c.second}, {"sum", c.sum}};
        pass = false;
    }
    report["bh"] = bh;

    const double residual = parseval_residual(tuple, opts);
    report["parseval_residual"] = residual;
    report["parseval_ok"] = residual <= parseval_tolerance;
    pass = pass && residual <= parseval_tolerance;

    // Every nu for small M, otherwise an evenly spaced sample.
    const std::uint64_t checks = std::min(M - 1, M - 1 <= charsum_full_limit ? M - 1 : charsum_sample_count);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < checks; ++i) {
        const std::uint64_t nu = 1 + i * (M - 1) / std::max<std::uint64_t>(checks, 1);
        worst = std::max(worst, std::abs(character_sum_direct(field, set.q, nu) - eval_power_sum(tuple, nu)));
    }
    report["charsum_checked"] = checks;
    report["charsum_max_diff"] = worst;
    report["charsum_ok"] = worst <= charsum_tolerance;
    pass = pass && worst <= charsum_tolerance;
    report["pass"] = pass;

    const int code = pass ? exit_ok : exit_assertion;
    if (cfg.format == Format::csv) {
        BoundReport row{tuple.size(), range_string(lo, hi), "bose-chowla", primary.max_abs, katz,
                        turan_lower(tuple.size(), 1), erdos_renyi_bound(tuple.size(), hi),
                        montgomery_reference(tuple.size(), cfg.h)};
        return {csv({row}), code};
    }
    return {dump(report), code};
}

Output cmd_compose(const RunConfig& cfg)
{
    const auto comp = binary_compose(cfg.n, cfg.h, field_budget(cfg));
    std::uint64_t hi = 1;
    for (unsigned i = 0; i < cfg.h; ++i) hi *= cfg.n;
    if (cfg.range) hi = cfg.range->second;
    const std::uint64_t lo = cfg.range ? cfg.range->first : 1;
    const auto sweep = sweep_naive(comp.tuple, lo, hi, sweep_options(cfg));
    const bool within = sweep.max_abs <= comp.plan.certified_bound + 1e-9;
    const bool size_ok = comp.tuple.size() == cfg.n;
    const int code = within && size_ok ? exit_ok : exit_assertion;
    if (cfg.format == Format::csv) {
        BoundReport row{cfg.n, range_string(lo, hi), "compose", sweep.max_abs, comp.plan.certified_bound,
                        turan_lower(cfg.n, 1), erdos_renyi_bound(cfg.n, std::max<std::uint64_t>(hi, 1)),
                        montgomery_reference(cfg.n, cfg.h)};
        return {csv({row}), code};
    }
    return {dump({{"plan", to_json(comp.plan)},
                  {"size", comp.tuple.size()},
                  {"sweep", to_json(sweep)},
                  {"within_certified_bound", within},
                  {"ratio_to_sqrt_n", comp.plan.certified_bound / std::sqrt(static_cast<double>(cfg.n))}}),
            code};
}

Output cmd_pipeline(const RunConfig& cfg)
{
    TrimOptions trim;
    trim.seed = cfg.seed;
    trim.budget = cfg.trim_budget;
    trim.epsilon = cfg.epsilon;
    const auto res = theorem2_construct(cfg.n, cfg.h, trim, field_budget(cfg), sweep_options(cfg));
    const auto& r = res.report;
    const bool ok = r.triangle_ok && res.tuple.size() == cfg.n;
    const int code = ok ? exit_ok : exit_assertion;
    if (cfg.format == Format::csv) {
        BoundReport row{cfg.n, range_string(1, r.nu_max), "pipeline", r.final_max, r.katz + r.achieved_trim_max,
                        turan_lower(cfg.n, 1), erdos_renyi_bound(cfg.n, r.nu_max), montgomery_reference(cfg.n, cfg.h)};
        return {csv({row}), code};
    }
    json j = to_json(r);
    j["size"] = res.tuple.size();
    j["final_over_sqrt_n"] = r.final_max / std::sqrt(static_cast<double>(cfg.n));
    j["tuple"] = to_json(res.tuple);
    return {dump(j), code};
}

Output cmd_baseline(const RunConfig& cfg)
{
    const auto opts = sweep_options(cfg);
    if (cfg.kind == "roots-of-unity") {
        const auto tuple = roots_of_unity_tuple(cfg.n);
        const auto [lo, hi] = cfg.range.value_or(std::pair<std::uint64_t, std::uint64_t>{1, std::max<std::uint64_t>(cfg.n - 1, 1)});
        const auto sweep = sweep_naive(tuple, lo, hi, opts);
        if (cfg.format == Format::csv) {
            BoundReport row{cfg.n, range_string(lo, hi), "roots-of-unity", sweep.max_abs, 0.0, turan_lower(cfg.n, 1),
                            erdos_renyi_bound(cfg.n, std::max<std::uint64_t>(hi, 1)), montgomery_reference(cfg.n, 1.0)};
            return {csv({row})};
        }
        return {dump({{"kind", cfg.kind}, {"n", cfg.n}, {"sweep", to_json(sweep)}})};
    }
    if (cfg.kind == "random") {
        const std::uint64_t m = cfg.m != 0 ? cfg.m : (cfg.range ? cfg.range->second : 0);
        if (m == 0) throw DomainError("random baseline needs --m");
        const auto stats = random_unimodular_baseline(cfg.n, m, cfg.seed, cfg.trials, opts);
        if (cfg.format == Format::csv) {
            std::vector<BoundReport> rows;
            for (double mx : stats.per_trial_max)
                rows.push_back({cfg.n, range_string(1, m), "random", mx, 0.0, turan_lower(cfg.n, 1), stats.bound,
                                montgomery_reference(cfg.n, 1.0)});
            return {csv(rows)};
        }
        return {dump({{"kind", cfg.kind},
                      {"n", stats.n},
                      {"m", stats.m},
                      {"seed", stats.seed},
                      {"trials", stats.per_trial_max.size()},
                      {"per_trial_max", stats.per_trial_max},
                      {"er_bound", stats.bound},
                      {"fraction_within", stats.fraction_within}})};
    }
    throw DomainError("unknown baseline kind '" + cfg.kind + "'");
}

Output cmd_sweep(const RunConfig& cfg)
{
    std::ifstream in(cfg.input);
    if (!in) throw DomainError("cannot open tuple file '" + cfg.input + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError(std::string("malformed tuple file: ") + e.what());
    }
    const auto tuple = tuple_from_json(j);
    auto opts = sweep_options(cfg);
    opts.keep_per_nu = cfg.format == Format::csv;
    SweepResult result;
    if (cfg.engine == Engine::naive || cfg.range) {
        const auto M = tuple.uniform_denominator();
        std::pair<std::uint64_t, std::uint64_t> range;
        if (cfg.range)
            range = *cfg.range;
        else if (M && *M >= 3)
            range = {1, *M - 2};
        else
            throw DomainError("sweep needs --range for this tuple");
        result = sweep_naive(tuple, range.first, range.second, opts);
    } else {
        result = sweep_dft(tuple, opts);
        if (cfg.engine == Engine::both) {
            const auto naive = sweep_naive(tuple, result.nu_start, result.nu_end, opts);
            if (std::abs(naive.max_abs - result.max_abs) > engine_tolerance || naive.argmax_nu != result.argmax_nu)
                return {dump(to_json(result)), exit_assertion};
        }
    }
    if (cfg.format == Format::csv) return {per_nu_csv(result)};
    return {dump(to_json(result))};
}

} // namespace

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("range must look like a:b");
    auto number = [&](const std::string& s) {
        if (s.empty() || !std::ranges::all_of(s, [](char c) { return c >= '0' && c <= '9'; }))
            throw DomainError("range bound '" + s + "' is not a non-negative integer");
        return std::stoull(s);
    };
    const auto a = number(text.substr(0, colon));
    const auto b = number(text.substr(colon + 1));
    if (a > b) throw DomainError("range start exceeds end");
    return {a, b};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    std::string range_text, engine_text = "dft", format_text = "json";

    CLI::App app{"Turan power sums: explicit unimodular constructions and sweeps", "turan"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", cfg.threads, "Worker threads (results do not depend on it)")
        ->default_val(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--out", cfg.out, "Write output to this file instead of stdout");
    app.add_option("--format", format_text, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--budget-table", cfg.budget_table, "Max field table entries");
    app.add_option("--budget-ops", cfg.budget_ops, "Max term evaluations per naive sweep");
    app.add_option("--budget-transform", cfg.budget_transform, "Max DFT length");
    app.add_option("--seed", cfg.seed, "Random seed")->default_val(0);
    app.add_option("--engine", engine_text, "naive, dft or both")->check(CLI::IsMember({"naive", "dft", "both"}));
    app.add_option("--range", range_text, "Inclusive nu range a:b");

    auto* construct = app.add_subcommand("construct", "Bose-Chowla B_h set and its unimodular tuple");
    construct->add_option("--q", cfg.q)->required();
    construct->add_option("--h", cfg.h)->default_val(2);

    auto* verify = app.add_subcommand("verify", "Full-period sweep, B_h, Parseval and character-sum checks");
    verify->add_option("--q", cfg.q)->required();
    verify->add_option("--h", cfg.h)->default_val(2);

    auto* compose = app.add_subcommand("compose", "Binary-expansion composition for arbitrary n");
    compose->add_option("--n", cfg.n)->required();
    compose->add_option("--h", cfg.h)->default_val(2);

    auto* pipeline = app.add_subcommand("pipeline", "Next prime, Bose-Chowla, then subset trimming");
    pipeline->add_option("--n", cfg.n)->required();
    pipeline->add_option("--h", cfg.h)->default_val(2);
    pipeline->add_option("--trim-budget", cfg.trim_budget, "Subset evaluations for trimming");
    pipeline->add_option("--epsilon", cfg.epsilon, "Trim target exponent slack");

    auto* baseline = app.add_subcommand("baseline", "Roots of unity or seeded random tuples");
    baseline->add_option("--kind", cfg.kind)->check(CLI::IsMember({"roots-of-unity", "random"}));
    baseline->add_option("--n", cfg.n)->required();
    baseline->add_option("--m", cfg.m);
    baseline->add_option("--trials", cfg.trials)->default_val(100);

    auto* sweep = app.add_subcommand("sweep", "Sweep a tuple file {entries: [[num, den], ...]}");
    sweep->add_option("input", cfg.input)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    Output result;
    try {
        if (!range_text.empty()) cfg.range = parse_range(range_text);
        cfg.engine = engine_text == "naive" ? Engine::naive : engine_text == "both" ? Engine::both : Engine::dft;
        cfg.format = format_text == "csv" ? Format::csv : Format::json;
        if (cfg.budget_table == 0 || cfg.budget_ops == 0 || cfg.budget_transform == 0)
            throw DomainError("budgets must be positive");

        if (construct->parsed()) {
            cfg.command = "construct";
            result = cmd_construct(cfg);
        } else if (verify->parsed()) {
            cfg.command = "verify";
            result = cmd_verify(cfg);
        } else if (compose->parsed()) {
            cfg.command = "compose";
            result = cmd_compose(cfg);
        } else if (pipeline->parsed()) {
            cfg.command = "pipeline";
            result = cmd_pipeline(cfg);
        } else if (baseline->parsed()) {
            cfg.command = "baseline";
            result = cmd_baseline(cfg);
        } else {
            cfg.command = "sweep";
            result = cmd_sweep(cfg);
        }
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return exit_resource;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << cfg.out << "'\n";
            return exit_usage;
        }
        file << result.text;
    } else {
        out << result.text;
    }
    return result.code;
}

} // namespace turan::cli
