#include <doctest.h>

#include <cmath>

#include "turan/assemble.hpp"
#include "turan/bounds.hpp"
#include "turan/errors.hpp"

using namespace turan;

TEST_CASE("plan_composition for n = 3")
{
    auto plan = plan_composition(3, 2);
    CHECK(plan.top_bit == 1);
    CHECK(plan.N == 4);
    CHECK(plan.digits == std::vector<unsigned>{1, 1});
    REQUIRE(plan.blocks.size() == 2);
    CHECK(plan.blocks[0].m == 0);
    CHECK(plan.blocks[0].bound == 1.0);
    CHECK(plan.blocks[1].m == 1);
    CHECK(plan.blocks[1].q == 2);
    CHECK(plan.blocks[1].degree == 4);
    CHECK(plan.blocks[1].bound == doctest::Approx(3 * std::sqrt(2.0)));
    CHECK(plan.certified_bound == doctest::Approx(3 * std::sqrt(2.0) + 1));
    CHECK(plan.certified_bound == doctest::Approx(5.243).epsilon(1e-3));
}

TEST_CASE("plan invariants")
{
    for (unsigned h = 2; h <= 4; ++h)
        for (std::uint64_t n = 1; n <= 300; ++n) {
            auto plan = plan_composition(n, h);
            std::uint64_t sum = 0;
            for (unsigned m = 0; m < plan.digits.size(); ++m) sum += std::uint64_t{plan.digits[m]} << m;
            CHECK(sum == n);
            for (const auto& b : plan.blocks)
                if (b.m >= 1) CHECK(b.m * b.degree >= plan.N);
            if (n >= 2) {
                const long double top = std::ldexp(1.0L, static_cast<int>(plan.N)) - 2;
                CHECK(std::pow(static_cast<long double>(n), h) <= top);
            }
        }
    CHECK_THROWS_AS(plan_composition(0, 2), DomainError);
    CHECK_THROWS_AS(plan_composition(5, 1), DomainError);
}

TEST_CASE("binary_compose")
{
    SUBCASE("n = 1 is the single point 1")
    {
        auto c = binary_compose(1, 3);
        REQUIRE(c.tuple.size() == 1);
        CHECK(c.plan.certified_bound == 1.0);
        for (std::uint64_t nu = 1; nu < 50; ++nu) CHECK(std::abs(eval_power_sum(c.tuple, nu)) == doctest::Approx(1.0));
    }
    SUBCASE("n = 3")
    {
        auto c = binary_compose(3, 2);
        CHECK(c.tuple.size() == 3);
        CHECK(sweep_naive(c.tuple, 1, 9).max_abs <= c.plan.certified_bound);
    }
    SUBCASE("n a power of two is one Lemma block")
    {
        auto c = binary_compose(8, 2);
        REQUIRE(c.plan.blocks.size() == 1);
        const auto& b = c.plan.blocks[0];
        CHECK(b.m == 3);
        CHECK(b.degree == 3);
        CHECK(c.plan.certified_bound == doctest::Approx(katz_bound(8, 3)));
        const auto direct = unimodular_tuple(bose_chowla(8, 3));
        CHECK(c.tuple == direct);
        CHECK(sweep_dft(direct).max_abs <= c.plan.certified_bound + 1e-6);
    }
    SUBCASE("budget errors name the block")
    {
        try {
            binary_compose(3, 2, FieldBudget{8});
            FAIL("expected a resource error");
        } catch (const ResourceError& e) {
            CHECK(std::string(e.what()).find("m=1") != std::string::npos);
        }
    }
}

TEST_CASE("binary_compose stays under its certified bound")
{
    for (std::uint64_t n = 2; n <= 24; ++n) {
        CAPTURE(n);
        auto c = binary_compose(n, 2);
        CHECK(c.tuple.size() == n);
        CHECK(sweep_naive(c.tuple, 1, n * n).max_abs <= c.plan.certified_bound + 1e-9);
    }
}

TEST_CASE("next_prime_gap")
{
    auto g = next_prime_gap(24);
    CHECK(g.p == 29);
    CHECK(g.gap == 5);
    CHECK(g.ratio == doctest::Approx(5.0 / std::pow(29.0, 0.525)));
    CHECK(next_prime_gap(2).p == 3);
    CHECK(next_prime_gap(2).gap == 1);
    CHECK(next_prime_gap(89).p == 97);
    CHECK(next_prime_gap(89).gap == 8);
    CHECK_THROWS_AS(next_prime_gap(1), DomainError);
}

TEST_CASE("trim_subset")
{
    const auto full = unimodular_tuple(bose_chowla(29, 2));
    REQUIRE(full.size() == 29);

    auto none = trim_subset(full, 0, 576);
    CHECK(none.indices.empty());
    CHECK(none.achieved_max == 0.0);

    auto all = trim_subset(full, 29, 576);
    CHECK(all.indices.size() == 29);
    CHECK(all.achieved_max == sweep_naive(full, 1, 576).max_abs);

    CHECK_THROWS_AS(trim_subset(full, 30, 576), DomainError);
    CHECK_THROWS_AS(trim_subset(full, 3, 0), DomainError);

    // Regression fixture: oracle run with seed 0, budget 2000, frozen.
    TrimOptions opts;
    opts.seed = 0;
    opts.budget = 2000;
    opts.epsilon = 0.25;
    auto r = trim_subset(full, 5, 24 * 24, opts);
    CHECK(r.indices == std::vector<std::size_t>{1, 3, 12, 21, 26});
    CHECK(r.achieved_max == doctest::Approx(4.497609701881151).epsilon(1e-12));
    CHECK(r.achieved_max <= std::pow(5.0, 0.75) * 3);
    CHECK(r.target == doctest::Approx(std::pow(5.0, 0.75)));
    CHECK(r.evaluations <= 2000);

    // Deterministic across runs and sweep thread counts.
    SweepOptions threaded;
    threaded.threads = 4;
    auto again = trim_subset(full, 5, 576, opts, threaded);
    CHECK(again.indices == r.indices);
    CHECK(again.achieved_max == r.achieved_max);
}

TEST_CASE("theorem2_construct")
{
    auto res = theorem2_construct(24, 2);
    const auto& r = res.report;
    CHECK(res.tuple.size() == 24);
    CHECK(r.p == 29);
    CHECK(r.gap == 5);
    CHECK(r.trimmed_indices.size() == 5);
    CHECK(r.nu_max == 576);
    CHECK(r.final_max <= std::sqrt(29.0) + r.achieved_trim_max + 1e-9);
    CHECK(r.final_max <= r.full_max + r.achieved_trim_max + 1e-9);
    CHECK(r.triangle_ok);
    CHECK(r.reference == doctest::Approx(4.899).epsilon(1e-3));
    CHECK(sweep_naive(res.tuple, 1, 576).max_abs == r.final_max);

    // A prime power n still moves to the next prime: p = n would put nu = n^h - 1 in range.
    auto pp = theorem2_construct(25, 2);
    CHECK(pp.report.p == 29);
    CHECK(pp.report.gap == 4);
    CHECK(pp.tuple.size() == 25);
    CHECK(pp.report.triangle_ok);
    CHECK(std::abs(eval_power_sum(unimodular_tuple(bose_chowla(25, 2)), 624)) == doctest::Approx(25.0));

    auto j = to_json(r);
    CHECK(j.at("trimmed_indices").size() == 5);
    CHECK(j.at("p") == 29);
}
