#include "turan/gf.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "turan/number_theory.hpp"

namespace turan {

namespace {

void trim(Coeffs& a)
{
    while (a.size() > 1 && a.back() == 0) a.pop_back();
}

std::string poly_string(std::span<const std::uint32_t> f)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (f[i] != 1 || i == 0) os << f[i];
        if (i >= 1) os << "t";
        if (i >= 2) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

// Monic polynomial of degree k whose low coefficients are the base-p digits of code.
Coeffs monic_from_code(std::uint64_t code, unsigned k, std::uint32_t p)
{
    Coeffs f(k + 1, 0);
    for (unsigned i = 0; i < k; ++i) {
        f[i] = static_cast<std::uint32_t>(code % p);
        code /= p;
    }
    f[k] = 1;
    return f;
}

} // namespace

Coeffs poly_rem(Coeffs a, std::span<const std::uint32_t> b, std::uint32_t p)
{
    trim(a);
    std::size_t db = b.size() - 1;
    while (db > 0 && b[db] == 0) --db;
    if (db == 0) return Coeffs{0};
    const std::uint64_t lead_inv = pow_mod(b[db], p - 2, p);
    while (a.size() - 1 >= db) {
        const std::size_t shift = a.size() - 1 - db;
        const std::uint64_t c = mul_mod(a.back(), lead_inv, p);
        for (std::size_t i = 0; i <= db; ++i) {
            const std::uint64_t s = mul_mod(c, b[i], p);
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - s) % p);
        }
        trim(a);
    }
    return a;
}

std::optional<Coeffs> find_factor(std::span<const std::uint32_t> f, std::uint32_t p)
{
    const unsigned d = static_cast<unsigned>(f.size() - 1);
    for (unsigned k = 1; k <= d / 2; ++k) {
        std::uint64_t count = checked_pow(p, k);
        for (std::uint64_t code = 0; code < count; ++code) {
            Coeffs g = monic_from_code(code, k, p);
            Coeffs r = poly_rem(Coeffs(f.begin(), f.end()), g, p);
            if (r.size() == 1 && r[0] == 0) return g;
        }
    }
    return std::nullopt;
}

bool is_irreducible(std::span<const std::uint32_t> f, std::uint32_t p)
{
    return !find_factor(f, p).has_value();
}

Coeffs smallest_irreducible(std::uint32_t p, unsigned d)
{
    const std::uint64_t count = checked_pow(p, d);
    for (std::uint64_t k = 0; k < count; ++k) {
        // c0 is the most significant digit of k.
        Coeffs f(d + 1, 0);
        std::uint64_t rest = k;
        for (unsigned i = d; i-- > 0;) {
            f[i] = static_cast<std::uint32_t>(rest % p);
            rest /= p;
        }
        f[d] = 1;
        if (is_irreducible(f, p)) return f;
    }
    throw DomainError("no irreducible polynomial found");
}

FieldContext build_field(std::uint32_t p, unsigned d, std::optional<Coeffs> modulus,
                         const FieldBudget& budget)
{
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (d < 1) throw DomainError("extension degree must be at least 1");

    std::uint64_t size = 1;
    for (unsigned i = 0; i < d; ++i) {
        if (size > budget.max_table_entries / p)
            throw ResourceError("field GF(" + std::to_string(p) + "^" + std::to_string(d) +
                                ") exceeds table budget of " +
                                std::to_string(budget.max_table_entries) + " entries");
        size *= p;
    }
    if (size - 1 > 0xFFFFFFFFull) throw ResourceError("field order exceeds 32-bit exponent range");

    FieldContext ctx;
    ctx.params_.p = p;
    ctx.params_.d = d;
    ctx.size_ = size;
    if (modulus) {
        if (modulus->size() != d + 1 || modulus->back() != 1)
            throw DomainError("modulus must be monic of degree " + std::to_string(d));
        for (auto c : *modulus)
            if (c >= p) throw DomainError("modulus coefficient out of range");
        if (auto factor = find_factor(*modulus, p))
            throw ReducibleModulusError("modulus " + poly_string(*modulus) +
                                            " is reducible, divisible by " + poly_string(*factor),
                                        *factor);
        ctx.params_.modulus = std::move(*modulus);
    } else {
        ctx.params_.modulus = smallest_irreducible(p, d);
    }

    const std::uint64_t m = size - 1;
    const auto factors = distinct_prime_factors(m);
    const FieldElement one = ctx.one();
    for (std::uint64_t code = 1; code < size; ++code) {
        FieldElement x = ctx.decode(code);
        bool primitive = std::ranges::none_of(factors, [&](std::uint64_t r) { return ctx.pow(x, m / r) == one; });
        if (primitive) {
            ctx.omega_ = std::move(x);
            break;
        }
    }
    ctx.build_tables();
    return ctx;
}

void FieldContext::build_tables()
{
    const std::uint64_t m = order();
    log_table_.assign(size_, 0);
    exp_table_.assign(m, 0);
    std::vector<bool> seen(size_, false);
    FieldElement x = one();
    for (std::uint64_t j = 0; j < m; ++j) {
        const std::uint64_t code = encode(x);
        if (seen[code]) throw DomainError("element is not primitive");
        seen[code] = true;
        log_table_[code] = static_cast<std::uint32_t>(j);
        exp_table_[j] = static_cast<std::uint32_t>(code);
        x = mul(x, omega_);
    }
    if (x != one()) throw DomainError("element is not primitive");
}

void FieldContext::check(const FieldElement& x) const
{
    if (x.coeffs.size() != params_.d) throw DomainError("element has wrong length for this field");
    for (auto c : x.coeffs)
        if (c >= params_.p) throw DomainError("element coefficient out of range");
}

std::uint64_t FieldContext::encode(const FieldElement& x) const
{
    check(x);
    std::uint64_t code = 0;
    for (std::size_t i = x.coeffs.size(); i-- > 0;) code = code * params_.p + x.coeffs[i];
    return code;
}

FieldElement FieldContext::decode(std::uint64_t code) const
{
    if (code >= size_) throw DomainError("encoding out of range");
    FieldElement x{Coeffs(params_.d, 0)};
    for (unsigned i = 0; i < params_.d; ++i) {
        x.coeffs[i] = static_cast<std::uint32_t>(code % params_.p);
        code /= params_.p;
    }
    return x;
}

FieldElement FieldContext::zero() const { return FieldElement{Coeffs(params_.d, 0)}; }

FieldElement FieldContext::one() const { return constant(1); }

FieldElement FieldContext::constant(std::uint32_t c) const
{
    FieldElement x = zero();
    x.coeffs[0] = c % params_.p;
    return x;
}

FieldElement FieldContext::variable() const
{
    if (params_.d == 1) {
        // t = -c0 in GF(p)[t]/(t + c0)
        return constant((params_.p - params_.modulus[0]) % params_.p);
    }
    FieldElement x = zero();
    x.coeffs[1] = 1;
    return x;
}

FieldElement FieldContext::add(const FieldElement& x, const FieldElement& y) const
{
    check(x);
    check(y);
    FieldElement r = zero();
    for (unsigned i = 0; i < params_.d; ++i) r.coeffs[i] = (x.coeffs[i] + y.coeffs[i]) % params_.p;
    return r;
}

FieldElement FieldContext::sub(const FieldElement& x, const FieldElement& y) const
{
    check(x);
    check(y);
    FieldElement r = zero();
    for (unsigned i = 0; i < params_.d; ++i)
        r.coeffs[i] = (x.coeffs[i] + params_.p - y.coeffs[i]) % params_.p;
    return r;
}

FieldElement FieldContext::mul(const FieldElement& x, const FieldElement& y) const
{
    check(x);
    check(y);
    const unsigned d = params_.d;
    const std::uint64_t p = params_.p;
    std::vector<std::uint64_t> prod(2 * d - 1, 0);
    for (unsigned i = 0; i < d; ++i) {
        if (x.coeffs[i] == 0) continue;
        for (unsigned j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{x.coeffs[i]} * y.coeffs[j]) % p;
    }
    // Reduce with the monic modulus: t^d = -(c0 + c1 t + ... + c_{d-1} t^{d-1}).
    for (std::size_t k = prod.size(); k-- > d;) {
        const std::uint64_t c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (unsigned i = 0; i < d; ++i)
            prod[k - d + i] = (prod[k - d + i] + (p - c) * params_.modulus[i]) % p;
    }
    FieldElement r = zero();
    for (unsigned i = 0; i < d; ++i) r.coeffs[i] = static_cast<std::uint32_t>(prod[i]);
    return r;
}

FieldElement FieldContext::pow(FieldElement x, std::uint64_t e) const
{
    FieldElement result = one();
    while (e > 0) {
        if (e & 1) result = mul(result, x);
        x = mul(x, x);
        e >>= 1;
    }
    return result;
}

std::uint64_t FieldContext::discrete_log_code(std::uint64_t code) const
{
    if (code == 0) throw DomainError("discrete log of zero is undefined");
    if (code >= size_) throw DomainError("encoding out of range");
    return log_table_[code];
}

std::uint64_t FieldContext::discrete_log(const FieldElement& x) const
{
    return discrete_log_code(encode(x));
}

FieldElement FieldContext::exp(std::uint64_t j) const
{
    return decode(exp_table_[j % order()]);
}

std::uint64_t FieldContext::element_order(const FieldElement& x) const
{
    const std::uint64_t j = discrete_log(x);
    return order() / std::gcd(order(), j);
}

std::vector<FieldElement> subfield_elements(const FieldContext& ctx, std::uint64_t q)
{
    auto pp = as_prime_power(q);
    if (!pp || pp->prime != ctx.characteristic())
        throw DomainError(std::to_string(q) + " is not a power of the characteristic " +
                          std::to_string(ctx.characteristic()));
    if (ctx.degree() % pp->exponent != 0)
        throw DomainError("subfield degree " + std::to_string(pp->exponent) + " does not divide " +
                          std::to_string(ctx.degree()));
    // F* is the subgroup of E* of order q - 1, generated by omega^((|E|-1)/(q-1)).
    const std::uint64_t step = ctx.order() / (q - 1);
    std::vector<std::uint64_t> codes{0};
    for (std::uint64_t k = 0; k < q - 1; ++k) codes.push_back(ctx.encode(ctx.exp(k * step)));
    std::ranges::sort(codes);
    std::vector<FieldElement> out;
    out.reserve(codes.size());
    for (auto c : codes) out.push_back(ctx.decode(c));
    return out;
}

nlohmann::json to_json(const FieldParams& params)
{
    return {{"p", params.p}, {"d", params.d}, {"modulus", params.modulus}};
}

nlohmann::json to_json(const FieldContext& ctx)
{
    auto j = to_json(ctx.params());
    j["omega"] = ctx.encode(ctx.omega());
    j["order"] = ctx.order();
    return j;
}

FieldContext field_from_json(const nlohmann::json& j, const FieldBudget& budget)
{
    FieldContext ctx = build_field(j.at("p").get<std::uint32_t>(), j.at("d").get<unsigned>(),
                                   j.at("modulus").get<Coeffs>(), budget);
    const std::uint64_t omega = j.at("omega").get<std::uint64_t>();
    if (omega == 0 || omega >= ctx.size()) throw DomainError("omega encoding out of range");
    if (omega != ctx.encode(ctx.omega_)) {
        ctx.omega_ = ctx.decode(omega);
        ctx.build_tables();
    }
    if (j.contains("order") && j.at("order").get<std::uint64_t>() != ctx.order())
        throw DomainError("order does not match p^d - 1");
    return ctx;
}

} // namespace turan
