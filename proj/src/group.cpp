#include "nilkex/group.hpp"

#include <limits>
#include <stdexcept>

#include "nilkex/errors.hpp"
#include "nilkex/wire.hpp"

namespace nilkex {

PlatformDescriptor platform_of(const GroupElement& g) {
    if (const auto* m = std::get_if<UTMatrix>(&g))
        return PlatformDescriptor::unitriangular(m->dim(), m->modulus().value());
    const auto& w = std::get<WreathElement>(g);
    return PlatformDescriptor::wreath_product(w.prime());
}

GroupElement group_identity(const PlatformDescriptor& platform) {
    if (platform.family() == PlatformFamily::unitriangular)
        return UTMatrix::identity(platform.matrix_dim(), platform.modulus());
    return WreathElement::identity(platform.wreath_prime());
}

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
    if (a.index() != b.index())
        throw PlatformMismatchError("multiply: elements from different platform families");
    if (const auto* m = std::get_if<UTMatrix>(&a))
        return m->multiply(std::get<UTMatrix>(b));
    return std::get<WreathElement>(a).multiply(std::get<WreathElement>(b));
}

GroupElement inverse(const GroupElement& a) {
    if (const auto* m = std::get_if<UTMatrix>(&a)) return m->inverse();
    return std::get<WreathElement>(a).inverse();
}

namespace {

GroupElement pow_impl(const GroupElement& g, std::int64_t a, std::uint64_t* count) {
    GroupElement base = g;
    std::uint64_t mag;
    if (a < 0) {
        base = inverse(g);
        if (count) ++*count;
        // magnitude of a without overflowing on INT64_MIN
        mag = static_cast<std::uint64_t>(-(a + 1)) + 1;
    } else {
        mag = static_cast<std::uint64_t>(a);
    }
    GroupElement acc = group_identity(platform_of(g));
    while (mag != 0) {
        if (mag & 1) {
            acc = multiply(acc, base);
            if (count) ++*count;
        }
        mag >>= 1;
        if (mag != 0) {
            base = multiply(base, base);
            if (count) ++*count;
        }
    }
    return acc;
}

} // namespace

GroupElement power(const GroupElement& g, std::int64_t a) {
    return pow_impl(g, a, nullptr);
}

GroupElement power_counted(const GroupElement& g, std::int64_t a,
                           std::uint64_t& multiplications) {
    return pow_impl(g, a, &multiplications);
}

GroupElement conjugate(const GroupElement& a, const GroupElement& y) {
    return multiply(multiply(inverse(y), a), y);
}

bool is_identity(const GroupElement& g) {
    if (const auto* m = std::get_if<UTMatrix>(&g)) return m->is_identity();
    return std::get<WreathElement>(g).is_identity();
}

std::size_t element_byte_size(const PlatformDescriptor& platform) {
    if (platform.family() == PlatformFamily::unitriangular) {
        const unsigned m = platform.matrix_dim();
        return static_cast<std::size_t>(m) * (m - 1) / 2 * platform.modulus().byte_width();
    }
    return platform.wreath_prime() + 1;
}

namespace {

void put_fixed_be(std::vector<std::uint8_t>& out, std::uint64_t v, unsigned width) {
    for (unsigned i = 0; i < width; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * (width - 1 - i))));
}

std::uint64_t get_fixed_be(std::span<const std::uint8_t> in, std::size_t& offset,
                           unsigned width) {
    wire::need(in, offset, width);
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = v << 8 | in[offset + i];
    offset += width;
    return v;
}

} // namespace

std::vector<std::uint8_t> serialize(const GroupElement& g) {
    std::vector<std::uint8_t> out;
    if (const auto* m = std::get_if<UTMatrix>(&g)) {
        const unsigned width = m->modulus().byte_width();
        for (unsigned i = 0; i < m->dim(); ++i)
            for (unsigned j = i + 1; j < m->dim(); ++j)
                put_fixed_be(out, m->at(i, j), width);
        return out;
    }
    const auto& w = std::get<WreathElement>(g);
    for (const Residue& r : w.base())
        out.push_back(static_cast<std::uint8_t>(r.value()));
    out.push_back(static_cast<std::uint8_t>(w.top().value()));
    return out;
}

GroupElement deserialize(std::span<const std::uint8_t> bytes,
                         const PlatformDescriptor& platform) {
    if (bytes.size() != element_byte_size(platform))
        throw DecodeError("element: wrong byte length");
    std::size_t offset = 0;
    if (platform.family() == PlatformFamily::unitriangular) {
        const unsigned m = platform.matrix_dim();
        const Modulus mod = platform.modulus();
        const unsigned width = mod.byte_width();
        std::vector<std::uint64_t> entries(static_cast<std::size_t>(m) * m, 0);
        for (unsigned i = 0; i < m; ++i) entries[i * m + i] = 1;
        for (unsigned i = 0; i < m; ++i)
            for (unsigned j = i + 1; j < m; ++j) {
                const std::uint64_t v = get_fixed_be(bytes, offset, width);
                if (v >= mod.value()) throw DecodeError("element: entry out of range");
                entries[i * m + j] = v;
            }
        return UTMatrix(m, mod, entries);
    }
    const unsigned p = platform.wreath_prime();
    std::vector<std::uint64_t> base(p, 0);
    for (unsigned i = 0; i < p; ++i) {
        base[i] = bytes[offset++];
        if (base[i] >= p) throw DecodeError("element: coordinate out of range");
    }
    const std::uint64_t top = bytes[offset++];
    if (top >= p) throw DecodeError("element: shift out of range");
    return WreathElement(p, base, top);
}

void encode_platform(std::vector<std::uint8_t>& out, const PlatformDescriptor& platform) {
    wire::put_u8(out, static_cast<std::uint8_t>(platform.family()));
    if (platform.family() == PlatformFamily::unitriangular) {
        wire::put_u32(out, platform.matrix_dim());
        wire::put_u32(out, static_cast<std::uint32_t>(platform.modulus().value()));
    } else {
        wire::put_u32(out, platform.wreath_prime());
    }
}

PlatformDescriptor decode_platform(std::span<const std::uint8_t> bytes, std::size_t& offset) {
    const std::uint8_t tag = wire::get_u8(bytes, offset);
    try {
        if (tag == static_cast<std::uint8_t>(PlatformFamily::unitriangular)) {
            const std::uint32_t m = wire::get_u32(bytes, offset);
            const std::uint32_t q = wire::get_u32(bytes, offset);
            return PlatformDescriptor::unitriangular(m, q);
        }
        if (tag == static_cast<std::uint8_t>(PlatformFamily::wreath)) {
            const std::uint32_t p = wire::get_u32(bytes, offset);
            if (p >= 256) throw DecodeError("platform header: p out of range");
            return PlatformDescriptor::wreath_product(p);
        }
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string("platform header: ") + e.what());
    }
    throw DecodeError("platform header: unknown family tag");
}

GroupElement random_element(const PlatformDescriptor& platform, Rng& rng) {
    if (platform.family() == PlatformFamily::unitriangular) {
        const unsigned m = platform.matrix_dim();
        const Modulus mod = platform.modulus();
        std::vector<std::uint64_t> entries(static_cast<std::size_t>(m) * m, 0);
        for (unsigned i = 0; i < m; ++i) {
            entries[i * m + i] = 1;
            for (unsigned j = i + 1; j < m; ++j)
                entries[i * m + j] = rng.below(mod.value());
        }
        return UTMatrix(m, mod, entries);
    }
    const unsigned p = platform.wreath_prime();
    std::vector<std::uint64_t> base(p, 0);
    for (unsigned i = 0; i < p; ++i) base[i] = rng.below(p);
    return WreathElement(p, base, rng.below(p));
}

std::vector<GroupElement> enumerate_group(const PlatformDescriptor& platform,
                                          std::uint64_t limit) {
    const auto order = platform.order_if_at_most(limit);
    if (!order)
        throw std::invalid_argument("enumerate_group: group order exceeds limit");
    std::vector<GroupElement> out;
    out.reserve(*order);
    if (platform.family() == PlatformFamily::unitriangular) {
        const unsigned m = platform.matrix_dim();
        const Modulus mod = platform.modulus();
        const std::uint64_t q = mod.value();
        const unsigned slots = m * (m - 1) / 2;
        std::vector<std::uint64_t> digits(slots, 0);
        for (;;) {
            std::vector<std::uint64_t> entries(static_cast<std::size_t>(m) * m, 0);
            unsigned slot = 0;
            for (unsigned i = 0; i < m; ++i) {
                entries[i * m + i] = 1;
                for (unsigned j = i + 1; j < m; ++j) entries[i * m + j] = digits[slot++];
            }
            out.emplace_back(UTMatrix(m, mod, entries));
            unsigned pos = slots;
            while (pos > 0) {
                --pos;
                if (++digits[pos] < q) break;
                digits[pos] = 0;
                if (pos == 0) return out;
            }
        }
    }
    const unsigned p = platform.wreath_prime();
    std::vector<std::uint64_t> digits(p + 1, 0);
    for (;;) {
        std::vector<std::uint64_t> base(digits.begin(), digits.begin() + p);
        out.emplace_back(WreathElement(p, base, digits[p]));
        unsigned pos = p + 1;
        while (pos > 0) {
            --pos;
            if (++digits[pos] < p) break;
            digits[pos] = 0;
            if (pos == 0) return out;
        }
    }
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw DecodeError("hex: odd length");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
        throw DecodeError("hex: bad digit");
    };
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
    return out;
}

} // namespace nilkex
