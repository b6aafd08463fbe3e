#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "turan/gf.hpp"
#include "turan/number_theory.hpp"

using namespace turan;

namespace {

// Independent GF(9) arithmetic: a + b t with t^2 = -c1 t - c0 (mod 3).
struct Gf9 {
    unsigned c0, c1;
    std::array<unsigned, 2> mul(std::array<unsigned, 2> x, std::array<unsigned, 2> y) const
    {
        unsigned a = x[0] * y[0];
        unsigned b = x[0] * y[1] + x[1] * y[0];
        unsigned tt = x[1] * y[1];
        // tt * t^2 = tt * (-c1 t - c0)
        a += tt * (3 - c0) % 3 * 1;
        b += tt * (3 - c1) % 3;
        return {a % 3, b % 3};
    }
    unsigned order(std::array<unsigned, 2> x) const
    {
        std::array<unsigned, 2> y = x;
        for (unsigned k = 1; k <= 8; ++k) {
            if (y[0] == 1 && y[1] == 0) return k;
            y = mul(y, x);
        }
        return 0;
    }
};

FieldElement elem(std::initializer_list<std::uint32_t> c) { return FieldElement{Coeffs(c)}; }

// Smallest monic irreducible of degree 2 or 3 by the root test, ordered c0, c1, ...
Coeffs oracle_smallest_irreducible(std::uint32_t p, unsigned d)
{
    std::vector<Coeffs> irreducible;
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
        Coeffs f(d + 1, 1);
        std::uint64_t r = code;
        for (unsigned i = 0; i < d; ++i) {
            f[i] = static_cast<std::uint32_t>(r % p);
            r /= p;
        }
        bool has_root = false;
        for (std::uint64_t x = 0; x < p && !has_root; ++x) {
            std::uint64_t v = 0;
            for (unsigned i = d + 1; i-- > 0;) v = (v * x + f[i]) % p;
            has_root = v == 0;
        }
        if (!has_root) irreducible.push_back(f);
    }
    return *std::ranges::min_element(irreducible, [](const Coeffs& a, const Coeffs& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
}

} // namespace

TEST_CASE("number theory helpers")
{
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
    CHECK(is_prime(18446744073709551557ull));
    CHECK_FALSE(is_prime(3215031751ull)); // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(distinct_prime_factors(360) == std::vector<std::uint64_t>{2, 3, 5});
    auto pp = as_prime_power(27);
    REQUIRE(pp);
    CHECK(pp->prime == 3);
    CHECK(pp->exponent == 3);
    CHECK_FALSE(as_prime_power(6));
    CHECK_FALSE(as_prime_power(1));
    CHECK(next_prime_after(24) == 29);
}

TEST_CASE("build_field picks the smallest irreducible")
{
    auto f4 = build_field(2, 2);
    CHECK(f4.params().modulus == Coeffs{1, 1, 1});
    CHECK(f4.order() == 3);

    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        for (unsigned d : {2u, 3u}) {
            CAPTURE(p);
            CAPTURE(d);
            CHECK(smallest_irreducible(p, d) == oracle_smallest_irreducible(p, d));
        }
    }
}

TEST_CASE("build_field with t^2 + 1 over GF(3) searches for omega")
{
    auto ctx = build_field(3, 2, Coeffs{1, 0, 1});
    CHECK(ctx.omega() != ctx.variable());

    // Brute-force orders of all 8 nonzero elements, encoding a + 3b.
    Gf9 oracle{1, 0};
    CHECK(oracle.order({0, 1}) == 4);
    std::uint64_t expected = 0;
    for (unsigned code = 1; code < 9; ++code) {
        if (oracle.order({code % 3, code / 3}) == 8) {
            expected = code;
            break;
        }
    }
    CHECK(ctx.encode(ctx.omega()) == expected);
    CHECK(ctx.element_order(ctx.variable()) == 4);
}

TEST_CASE("build_field rejections")
{
    CHECK_THROWS_AS(build_field(4, 1), DomainError);
    CHECK_THROWS_AS(build_field(3, 0), DomainError);
    CHECK_THROWS_AS(build_field(3, 2, Coeffs{1, 0, 2}), DomainError); // not monic
    try {
        build_field(3, 2, Coeffs{2, 0, 1}); // t^2 - 1
        FAIL("reducible modulus accepted");
    } catch (const ReducibleModulusError& e) {
        const auto& f = e.factor();
        REQUIRE(f.size() == 2);
        // Witness must be t - 1 or t + 1, i.e. have a root at 1 or 2.
        CHECK((f == Coeffs{1, 1} || f == Coeffs{2, 1}));
        const Coeffs rem = poly_rem(Coeffs{2, 0, 1}, f, 3);
        CHECK(rem == Coeffs{0});
    }
    CHECK_THROWS_AS(build_field(2, 30, std::nullopt, FieldBudget{1 << 10}), ResourceError);
}

TEST_CASE("field arithmetic")
{
    auto f4 = build_field(2, 2);
    const auto t = f4.variable();
    CHECK(f4.mul(t, t) == elem({1, 1}));

    auto f9 = build_field(3, 2, Coeffs{2, 1, 1});
    const auto t9 = f9.variable();
    CHECK(f9.pow(t9, 4) == f9.constant(2));
    CHECK(f9.mul(f9.mul(t9, t9), f9.mul(t9, t9)) == f9.constant(2));
    Gf9 oracle{2, 1};
    auto chain = oracle.mul(oracle.mul(oracle.mul({0, 1}, {0, 1}), {0, 1}), {0, 1});
    CHECK(chain == std::array<unsigned, 2>{2, 0});

    for (auto* ctx : {&f4, &f9}) {
        for (std::uint64_t c = 0; c < ctx->size(); ++c) {
            const auto x = ctx->decode(c);
            CHECK(ctx->mul(x, ctx->one()) == x);
            CHECK(ctx->add(x, ctx->zero()) == x);
            CHECK(ctx->sub(x, x) == ctx->zero());
        }
    }
    CHECK_THROWS_AS(f9.mul(elem({1}), t9), DomainError);
}

TEST_CASE("discrete_log")
{
    auto f4 = build_field(2, 2);
    REQUIRE(f4.omega() == f4.variable());
    CHECK(f4.discrete_log(elem({1, 1})) == 2);
    CHECK(f4.discrete_log(f4.one()) == 0);
    CHECK(f4.discrete_log(f4.omega()) == 1);

    auto f9 = build_field(3, 2, Coeffs{2, 1, 1});
    REQUIRE(f9.omega() == f9.variable());
    // Enumerate t^1..t^8 independently and find t + 1.
    Gf9 oracle{2, 1};
    std::array<unsigned, 2> y{0, 1};
    unsigned expected = 0;
    for (unsigned j = 1; j <= 8; ++j) {
        if (y == std::array<unsigned, 2>{1, 1}) expected = j;
        y = oracle.mul(y, {0, 1});
    }
    CHECK(expected == 7);
    CHECK(f9.discrete_log(elem({1, 1})) == expected);
    CHECK(f9.discrete_log(f9.one()) == 0);
    CHECK_THROWS_AS(f9.discrete_log(f9.zero()), DomainError);
}

TEST_CASE("subfield_elements")
{
    auto f4 = build_field(2, 2);
    auto s2 = subfield_elements(f4, 2);
    CHECK(s2 == std::vector<FieldElement>{f4.zero(), f4.one()});

    auto f9 = build_field(3, 2);
    CHECK(subfield_elements(f9, 3) == std::vector<FieldElement>{f9.zero(), f9.one(), f9.constant(2)});

    auto f16 = build_field(2, 4);
    auto s4 = subfield_elements(f16, 4);
    std::vector<FieldElement> fixed;
    for (std::uint64_t c = 0; c < 16; ++c) {
        const auto x = f16.decode(c);
        if (f16.pow(x, 4) == x) fixed.push_back(x);
    }
    CHECK(s4.size() == 4);
    CHECK(s4 == fixed);

    CHECK_THROWS_AS(subfield_elements(f16, 3), DomainError);
    CHECK_THROWS_AS(subfield_elements(f16, 8), DomainError);
    CHECK_THROWS_AS(subfield_elements(f16, 6), DomainError);
}

TEST_CASE("field invariants at desk scale")
{
    std::mt19937_64 rng(7);
    for (auto [p, d] : std::vector<std::pair<std::uint32_t, unsigned>>{{2, 5}, {3, 4}, {5, 3}, {7, 2}, {2, 13}, {97, 2}}) {
        CAPTURE(p);
        CAPTURE(d);
        auto ctx = build_field(p, d);
        const std::uint64_t M = ctx.order();
        REQUIRE(M <= 10'000);
        CHECK(ctx.element_order(ctx.omega()) == M);
        for (int trial = 0; trial < 500; ++trial) {
            const auto x = ctx.decode(1 + rng() % M);
            const auto y = ctx.decode(1 + rng() % M);
            CHECK(ctx.discrete_log(ctx.mul(x, y)) == (ctx.discrete_log(x) + ctx.discrete_log(y)) % M);
        }
        for (std::uint64_t c = 1; c < ctx.size(); ++c) {
            const auto x = ctx.decode(c);
            if (ctx.pow(ctx.omega(), ctx.discrete_log(x)) != x) FAIL("table round trip broken at ", c);
        }
    }
}

TEST_CASE("subfields are closed under add and mul")
{
    for (auto [p, d, q] : std::vector<std::tuple<std::uint32_t, unsigned, std::uint64_t>>{{2, 4, 4}, {2, 6, 8}, {3, 4, 9}, {2, 6, 4}}) {
        auto ctx = build_field(p, d);
        auto sub = subfield_elements(ctx, q);
        std::set<std::uint64_t> codes;
        for (const auto& x : sub) codes.insert(ctx.encode(x));
        for (const auto& x : sub)
            for (const auto& y : sub) {
                CHECK(codes.contains(ctx.encode(ctx.add(x, y))));
                CHECK(codes.contains(ctx.encode(ctx.mul(x, y))));
            }
    }
}

TEST_CASE("build_field is deterministic and the dump round-trips")
{
    auto a = build_field(5, 3);
    auto b = build_field(5, 3);
    CHECK(a.params() == b.params());
    CHECK(a.omega() == b.omega());
    for (std::uint64_t j = 0; j < a.order(); j += 7) CHECK(a.exp(j) == b.exp(j));

    const auto dump = to_json(a);
    CHECK(dump.at("order") == 124);
    auto c = field_from_json(dump);
    CHECK(c.params() == a.params());
    CHECK(c.omega() == a.omega());

    // Another primitive element is accepted and the tables follow it.
    auto alt = dump;
    std::uint64_t other = 0;
    for (std::uint64_t code = a.encode(a.omega()) + 1; code < a.size(); ++code)
        if (a.element_order(a.decode(code)) == a.order()) {
            other = code;
            break;
        }
    alt["omega"] = other;
    auto d = field_from_json(alt);
    CHECK(d.encode(d.omega()) == other);
    CHECK(d.discrete_log(d.omega()) == 1);

    auto bad = dump;
    bad["omega"] = 1;
    CHECK_THROWS_AS(field_from_json(bad), DomainError);
}
