#pragma once

#include <cstdint>
#include <vector>

#include "nilkex/residue.hpp"

namespace nilkex {

/// An element (v, s) of the wreath product Z_p wr Z_p: a base vector v of p
/// residues mod p and a cyclic shift amount s mod p. Multiplication is
///   (v, s) * (w, t) = (v + sigma^s w, s + t)
/// where sigma shifts coordinate index i to i+1 mod p (the top group acts on
/// the left). The group has order p^(p+1) and is nilpotent of class p.
class WreathElement {
public:
    WreathElement(unsigned p, const std::vector<std::uint64_t>& base, std::uint64_t top);

    static WreathElement identity(unsigned p);

    unsigned prime() const noexcept { return p_; }
    const std::vector<Residue>& base() const noexcept { return base_; }
    const Residue& top() const noexcept { return top_; }

    WreathElement multiply(const WreathElement& other) const;
    WreathElement inverse() const;

    bool is_identity() const;

    friend bool operator==(const WreathElement&, const WreathElement&) = default;

private:
    WreathElement(unsigned p, std::vector<Residue> base, Residue top);
    void check_same_platform(const WreathElement& o) const;

    unsigned p_;
    std::vector<Residue> base_;
    Residue top_;
};

} // namespace nilkex
