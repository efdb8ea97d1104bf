#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nilkex/platform.hpp"
#include "nilkex/rng.hpp"
#include "nilkex/ut_matrix.hpp"
#include "nilkex/wreath.hpp"

namespace nilkex {

/// A platform group element: either a unitriangular matrix or a wreath
/// product pair. Immutable value; all operations below are pure functions.
using GroupElement = std::variant<UTMatrix, WreathElement>;

/// Reconstructs the descriptor an element belongs to.
PlatformDescriptor platform_of(const GroupElement& g);

GroupElement group_identity(const PlatformDescriptor& platform);

/// Exact group product. Throws PlatformMismatchError when the operands come
/// from different platform instances.
GroupElement multiply(const GroupElement& a, const GroupElement& b);

GroupElement inverse(const GroupElement& a);

/// g^a by square-and-multiply; negative exponents via the inverse,
/// power(g, 0) = identity.
GroupElement power(const GroupElement& g, std::int64_t a);

/// Same as power, adding the number of group multiplications performed to
/// multiplications (inversions count as one each). Used by the solvers and
/// attack runners to report operation counts.
GroupElement power_counted(const GroupElement& g, std::int64_t a,
                           std::uint64_t& multiplications);

/// y^-1 * a * y.
GroupElement conjugate(const GroupElement& a, const GroupElement& y);

bool is_identity(const GroupElement& g);

/// Canonical byte encoding.
///   UT(m, q): the m(m-1)/2 strictly-upper entries in row-major order, each a
///   big-endian integer of Modulus::byte_width bytes. Diagonal and lower
///   entries are never encoded.
///   wreath(p): base coordinates v_0..v_{p-1} then the shift, one byte each.
std::vector<std::uint8_t> serialize(const GroupElement& g);

/// Exact inverse of serialize. Throws DecodeError on wrong length or any
/// entry >= q.
GroupElement deserialize(std::span<const std::uint8_t> bytes,
                         const PlatformDescriptor& platform);

/// Byte length of every serialized element of the platform.
std::size_t element_byte_size(const PlatformDescriptor& platform);

/// Platform header encoding: family tag byte (0x01 UT, 0x02 wreath) followed
/// by the parameters as big-endian u32 values (m, q for UT; p for wreath).
void encode_platform(std::vector<std::uint8_t>& out, const PlatformDescriptor& platform);
PlatformDescriptor decode_platform(std::span<const std::uint8_t> bytes, std::size_t& offset);

GroupElement random_element(const PlatformDescriptor& platform, Rng& rng);

/// All elements of the platform group in a fixed canonical order
/// (lexicographic in the serialized encoding). Throws std::invalid_argument
/// when the group order exceeds limit.
std::vector<GroupElement> enumerate_group(const PlatformDescriptor& platform,
                                          std::uint64_t limit);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

} // namespace nilkex
