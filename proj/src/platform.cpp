#include "nilkex/platform.hpp"

#include <charconv>
#include <stdexcept>

#include "nilkex/numeric.hpp"

namespace nilkex {

PlatformDescriptor PlatformDescriptor::unitriangular(unsigned m, std::uint64_t q) {
    if (m < 2)
        throw std::invalid_argument("unitriangular platform: m must be at least 2");
    if (m > 16)
        throw std::invalid_argument("unitriangular platform: m must be at most 16");
    if (q > 0xFFFFFFFFULL)
        throw std::invalid_argument("unitriangular platform: q must fit in 32 bits");
    if (!is_prime_u64(q))
        throw std::invalid_argument("unitriangular platform: q must be prime");
    std::optional<unsigned> not_engel;
    if (m >= 3) not_engel = m - 2;
    return PlatformDescriptor(PlatformFamily::unitriangular, m, Modulus(q), m - 1, not_engel);
}

PlatformDescriptor PlatformDescriptor::wreath_product(unsigned p) {
    if (p >= 256)
        throw std::invalid_argument("wreath platform: p must be below 256");
    if (!is_prime_u64(p))
        throw std::invalid_argument("wreath platform: p must be prime");
    return PlatformDescriptor(PlatformFamily::wreath, p, Modulus(p), p, p - 1);
}

unsigned PlatformDescriptor::matrix_dim() const {
    if (family_ != PlatformFamily::unitriangular)
        throw std::invalid_argument("matrix_dim: not a unitriangular platform");
    return dim_;
}

unsigned PlatformDescriptor::wreath_prime() const {
    if (family_ != PlatformFamily::wreath)
        throw std::invalid_argument("wreath_prime: not a wreath platform");
    return dim_;
}

std::optional<std::uint64_t> PlatformDescriptor::order_if_at_most(std::uint64_t limit) const {
    if (family_ == PlatformFamily::unitriangular) {
        const unsigned exponent = dim_ * (dim_ - 1) / 2;
        return checked_pow(mod_.value(), exponent, limit);
    }
    return checked_pow(dim_, dim_ + 1, limit);
}

std::string PlatformDescriptor::spec_string() const {
    if (family_ == PlatformFamily::unitriangular)
        return "ut:" + std::to_string(dim_) + ":" + std::to_string(mod_.value());
    return "wreath:" + std::to_string(dim_);
}

namespace {

std::uint64_t parse_number(std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("platform spec: bad number '" + std::string(s) + "'");
    return v;
}

} // namespace

PlatformDescriptor parse_platform_spec(std::string_view spec) {
    const auto first = spec.find(':');
    if (first == std::string_view::npos)
        throw std::invalid_argument("platform spec: expected ut:<m>:<q> or wreath:<p>");
    const std::string_view family = spec.substr(0, first);
    const std::string_view rest = spec.substr(first + 1);
    if (family == "ut") {
        const auto second = rest.find(':');
        if (second == std::string_view::npos)
            throw std::invalid_argument("platform spec: expected ut:<m>:<q>");
        const std::uint64_t m = parse_number(rest.substr(0, second));
        const std::uint64_t q = parse_number(rest.substr(second + 1));
        if (m > 16) throw std::invalid_argument("platform spec: m too large");
        return PlatformDescriptor::unitriangular(static_cast<unsigned>(m), q);
    }
    if (family == "wreath") {
        if (rest.find(':') != std::string_view::npos)
            throw std::invalid_argument("platform spec: expected wreath:<p>");
        const std::uint64_t p = parse_number(rest);
        if (p >= 256) throw std::invalid_argument("platform spec: p too large");
        return PlatformDescriptor::wreath_product(static_cast<unsigned>(p));
    }
    throw std::invalid_argument("platform spec: unknown family '" + std::string(family) + "'");
}

} // namespace nilkex
