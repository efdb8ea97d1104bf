#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nilkex/errors.hpp"

namespace nilkex::wire {

inline void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void need(std::span<const std::uint8_t> in, std::size_t offset, std::size_t count) {
    if (offset > in.size() || in.size() - offset < count)
        throw DecodeError("truncated input");
}

inline std::uint8_t get_u8(std::span<const std::uint8_t> in, std::size_t& offset) {
    need(in, offset, 1);
    return in[offset++];
}

inline std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t& offset) {
    need(in, offset, 2);
    const std::uint16_t v = static_cast<std::uint16_t>(in[offset] << 8 | in[offset + 1]);
    offset += 2;
    return v;
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t& offset) {
    need(in, offset, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | in[offset + i];
    offset += 4;
    return v;
}

inline std::vector<std::uint8_t> get_bytes(std::span<const std::uint8_t> in,
                                           std::size_t& offset, std::size_t count) {
    need(in, offset, count);
    std::vector<std::uint8_t> out(in.begin() + offset, in.begin() + offset + count);
    offset += count;
    return out;
}

} // namespace nilkex::wire
