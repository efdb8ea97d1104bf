#include "nilkex/wreath.hpp"

#include <stdexcept>

#include "nilkex/errors.hpp"

namespace nilkex {

namespace {
unsigned checked_p(unsigned p) {
    if (p < 2 || p >= 256)
        throw std::invalid_argument("WreathElement: p must be in [2, 255]");
    return p;
}
} // namespace

WreathElement::WreathElement(unsigned p, const std::vector<std::uint64_t>& base,
                             std::uint64_t top)
    : p_(checked_p(p)), top_(top, Modulus(p)) {
    if (base.size() != p)
        throw std::invalid_argument("WreathElement: base vector must have p coordinates");
    const Modulus mod(p);
    base_.reserve(p);
    for (std::uint64_t v : base) base_.emplace_back(v, mod);
}

WreathElement::WreathElement(unsigned p, std::vector<Residue> base, Residue top)
    : p_(p), base_(std::move(base)), top_(top) {}

WreathElement WreathElement::identity(unsigned p) {
    return WreathElement(p, std::vector<std::uint64_t>(p, 0), 0);
}

void WreathElement::check_same_platform(const WreathElement& o) const {
    if (p_ != o.p_)
        throw PlatformMismatchError("WreathElement: elements from different platforms");
}

WreathElement WreathElement::multiply(const WreathElement& other) const {
    check_same_platform(other);
    // (v, s)(w, t) = (v + sigma^s w, s + t), (sigma^s w)[i] = w[(i - s) mod p]
    const unsigned s = static_cast<unsigned>(top_.value());
    std::vector<Residue> out;
    out.reserve(p_);
    for (unsigned i = 0; i < p_; ++i)
        out.push_back(base_[i] + other.base_[(i + p_ - s) % p_]);
    return WreathElement(p_, std::move(out), top_ + other.top_);
}

WreathElement WreathElement::inverse() const {
    // (v, s)^-1 = (-sigma^{-s} v, -s), (sigma^{-s} v)[i] = v[(i + s) mod p]
    const unsigned s = static_cast<unsigned>(top_.value());
    std::vector<Residue> out;
    out.reserve(p_);
    for (unsigned i = 0; i < p_; ++i)
        out.push_back(-base_[(i + s) % p_]);
    return WreathElement(p_, std::move(out), -top_);
}

bool WreathElement::is_identity() const {
    if (!top_.is_zero()) return false;
    for (const Residue& r : base_)
        if (!r.is_zero()) return false;
    return true;
}

} // namespace nilkex
