#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <doctest.h>

#include "nilkex/group.hpp"

namespace nilkex::test {

inline PlatformDescriptor ut_platform(unsigned m, std::uint64_t q) {
    return PlatformDescriptor::unitriangular(m, q);
}

inline PlatformDescriptor wreath_platform(unsigned p) {
    return PlatformDescriptor::wreath_product(p);
}

/// Matrix from a full row-major entry list.
inline GroupElement ut(unsigned m, std::uint64_t q, std::initializer_list<std::uint64_t> e) {
    return UTMatrix(m, Modulus(q), std::vector<std::uint64_t>(e));
}

/// I + c*E(i,j).
inline GroupElement tv(unsigned m, std::uint64_t q, unsigned i, unsigned j, std::uint64_t c) {
    return UTMatrix::transvection(m, Modulus(q), i, j, c);
}

inline GroupElement wr(unsigned p, std::initializer_list<std::uint64_t> base, std::uint64_t top) {
    return WreathElement(p, std::vector<std::uint64_t>(base), top);
}

} // namespace nilkex::test

namespace doctest {

template <>
struct StringMaker<nilkex::GroupElement> {
    static String convert(const nilkex::GroupElement& e) {
        const std::string s = nilkex::platform_of(e).spec_string() + ":" +
                              nilkex::to_hex(nilkex::serialize(e));
        return {s.c_str(), static_cast<String::size_type>(s.size())};
    }
};

} // namespace doctest
