#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "nilkex/group.hpp"

namespace nilkex {

/// [a, b] = a^-1 b^-1 a b.
GroupElement commutator(const GroupElement& a, const GroupElement& b);

/// Left-normed simple commutator [g_1,...,g_n] = [[g_1,...,g_{n-1}], g_n],
/// with [g_1] = g_1. Throws on an empty argument list.
GroupElement simple_commutator(std::span<const GroupElement> args);

/// Engel commutator [x, g, g, ..., g] with n >= 1 trailing copies of g.
GroupElement engel_commutator(const GroupElement& x, const GroupElement& g, unsigned n);

/// Checks the two commutator expansion identities
///   [xy, z] = [x, z]^y [y, z]   and   [x, yz] = [x, z] [x, y]^z
/// with the product supplied by mul. They hold in every group, so with the
/// real multiplication this doubles as an arithmetic self-test; tests inject
/// a corrupted mul to confirm the check has teeth.
template <class Mult>
bool verify_property_1_with(Mult&& mul, const GroupElement& x, const GroupElement& y,
                            const GroupElement& z) {
    auto comm = [&](const GroupElement& a, const GroupElement& b) {
        return mul(mul(mul(inverse(a), inverse(b)), a), b);
    };
    auto conj = [&](const GroupElement& a, const GroupElement& w) {
        return mul(mul(inverse(w), a), w);
    };
    const GroupElement lhs1 = comm(mul(x, y), z);
    const GroupElement rhs1 = mul(conj(comm(x, z), y), comm(y, z));
    const GroupElement lhs2 = comm(x, mul(y, z));
    const GroupElement rhs2 = mul(comm(x, z), conj(comm(x, y), z));
    return lhs1 == rhs1 && lhs2 == rhs2;
}

bool verify_property_1(const GroupElement& x, const GroupElement& y, const GroupElement& z);

/// Checks both exponent-sliding identities for a weight-n commutator on a
/// platform of class at most n:
///   [[g_1,...,g_{n-1}]^a, g_n] = [g_1,...,g_n]^a
///   [g_1,...,g_{n-1}, g_n^a]   = [g_1,...,g_n]^a
/// Requires n >= 2 and a != 0 (throws std::invalid_argument otherwise).
bool verify_lemma1(std::span<const GroupElement> args, std::int64_t a);

/// Checks the single-slot identity
///   [g_1,...,g_i^{a_i},...,g_n] = [g_1,...,g_n]^{a_i}
/// for 1-based slot i. Requires class <= n, 1 <= i <= n, a_i != 0.
bool verify_proposition(std::span<const GroupElement> args, std::size_t slot,
                        std::int64_t exponent);

/// The n-linear map e(g_1,...,g_n) = [g_1,...,g_n] on a platform of class n.
/// Arity must equal the platform's nilpotency class.
GroupElement multilinear_e(std::span<const GroupElement> args);

/// The (n-1)-linear map e'(g_1,...,g_{n-1}) = [x, g_1,...,g_{n-1}] for a
/// fixed x. Arity must equal class - 1.
GroupElement multilinear_e_prime(const GroupElement& x, std::span<const GroupElement> args);

/// Searches for (x, g) with [x,_{n-1} g] != 1, the witness that makes e'
/// non-degenerate. Scans the whole group when it is small enough, otherwise
/// tries budget random pairs from the seed. Not-found is a value, not an
/// error: on an abelian platform the search always comes back empty.
std::optional<std::pair<GroupElement, GroupElement>> find_nondegenerate_witness(
    const PlatformDescriptor& platform, unsigned n, std::uint64_t budget,
    std::uint64_t seed);

} // namespace nilkex
