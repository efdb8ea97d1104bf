#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nilkex/residue.hpp"

namespace nilkex {

enum class PlatformFamily : std::uint8_t {
    unitriangular = 1,
    wreath = 2,
};

/// Names a concrete finite platform group, its parameters, and the
/// nilpotency-class / Engel claims that certification can re-verify.
///
/// Shipped families:
///   - unitriangular UT(m, q): class m-1, not (m-2)-Engel for m >= 3;
///   - wreath Z_p wr Z_p: class p, not (p-1)-Engel.
class PlatformDescriptor {
public:
    /// UT(m, q). Requires m >= 2 and q a prime below 2^32.
    static PlatformDescriptor unitriangular(unsigned m, std::uint64_t q);

    /// Z_p wr Z_p. Requires p a prime below 256.
    static PlatformDescriptor wreath_product(unsigned p);

    PlatformFamily family() const noexcept { return family_; }

    /// m for UT platforms.
    unsigned matrix_dim() const;
    /// p for wreath platforms.
    unsigned wreath_prime() const;

    /// The residue characteristic: q for UT(m, q), p for Z_p wr Z_p. Matrix
    /// entries, wreath coordinates and protocol exponents all live mod this.
    const Modulus& modulus() const noexcept { return mod_; }

    /// Claimed nilpotency class (m-1 / p); re-verifiable by certify_class.
    unsigned nilpotency_class() const noexcept { return claimed_class_; }

    /// Claimed "not k-Engel" witness degree, when the family provides one.
    std::optional<unsigned> not_engel() const noexcept { return not_engel_; }

    /// Group order if it is at most limit; nothing if it would exceed it.
    /// Used to gate exhaustive enumeration.
    std::optional<std::uint64_t> order_if_at_most(std::uint64_t limit) const;

    /// "ut:<m>:<q>" or "wreath:<p>".
    std::string spec_string() const;

    friend bool operator==(const PlatformDescriptor&, const PlatformDescriptor&) = default;

private:
    PlatformDescriptor(PlatformFamily family, unsigned dim, Modulus mod,
                       unsigned claimed_class, std::optional<unsigned> not_engel)
        : family_(family), dim_(dim), mod_(mod), claimed_class_(claimed_class),
          not_engel_(not_engel) {}

    PlatformFamily family_;
    unsigned dim_; // m for UT, p for wreath
    Modulus mod_;
    unsigned claimed_class_;
    std::optional<unsigned> not_engel_;
};

/// Parses "ut:<m>:<q>" / "wreath:<p>". Throws std::invalid_argument on any
/// malformed or invalid spec (including non-prime q and m < 2).
PlatformDescriptor parse_platform_spec(std::string_view spec);

} // namespace nilkex
