#pragma once

#include <cstdint>
#include <stdexcept>

#include "nilkex/numeric.hpp"

namespace nilkex {

/// A modulus q >= 2 together with the fixed byte width used to encode
/// canonical residues: ceil(bitlen(q-1)/8), at least 1.
class Modulus {
public:
    explicit Modulus(std::uint64_t q) : q_(q) {
        if (q < 2) throw std::invalid_argument("Modulus: q must be at least 2");
        byte_width_ = (bit_length(q - 1) + 7) / 8;
        if (byte_width_ == 0) byte_width_ = 1;
    }

    std::uint64_t value() const noexcept { return q_; }
    unsigned byte_width() const noexcept { return byte_width_; }

    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    std::uint64_t q_;
    unsigned byte_width_;
};

/// Exact arithmetic in Z_q. Values are kept canonical in [0, q) after every
/// operation. Mixing residues with different moduli throws.
class Residue {
public:
    Residue(std::uint64_t value, Modulus mod)
        : mod_(mod), value_(value % mod.value()) {}

    static Residue from_signed(std::int64_t v, Modulus mod) {
        const std::uint64_t q = mod.value();
        std::int64_t r = v % static_cast<std::int64_t>(q);
        if (r < 0) r += static_cast<std::int64_t>(q);
        return Residue(static_cast<std::uint64_t>(r), mod);
    }

    std::uint64_t value() const noexcept { return value_; }
    const Modulus& modulus() const noexcept { return mod_; }
    bool is_zero() const noexcept { return value_ == 0; }

    Residue operator+(const Residue& o) const {
        check(o);
        return raw(addmod(value_, o.value_, q()));
    }
    Residue operator-(const Residue& o) const {
        check(o);
        return raw(submod(value_, o.value_, q()));
    }
    Residue operator*(const Residue& o) const {
        check(o);
        return raw(mulmod(value_, o.value_, q()));
    }
    Residue operator-() const { return raw(value_ == 0 ? 0 : q() - value_); }

    Residue inverse() const { return raw(invmod(value_, q())); }
    Residue pow(std::uint64_t e) const { return raw(powmod(value_, e, q())); }

    friend bool operator==(const Residue&, const Residue&) = default;

private:
    std::uint64_t q() const noexcept { return mod_.value(); }
    Residue raw(std::uint64_t canonical) const {
        Residue r = *this;
        r.value_ = canonical;
        return r;
    }
    void check(const Residue& o) const {
        if (!(mod_ == o.mod_))
            throw std::invalid_argument("Residue: modulus mismatch");
    }

    Modulus mod_;
    std::uint64_t value_;
};

} // namespace nilkex
