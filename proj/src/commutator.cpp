#include "nilkex/commutator.hpp"

#include <stdexcept>
#include <vector>

#include "nilkex/rng.hpp"

namespace nilkex {

GroupElement commutator(const GroupElement& a, const GroupElement& b) {
    return multiply(multiply(multiply(inverse(a), inverse(b)), a), b);
}

GroupElement simple_commutator(std::span<const GroupElement> args) {
    if (args.empty()) {
        throw std::invalid_argument("simple_commutator: empty argument list");
    }
    GroupElement acc = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) {
        acc = commutator(acc, args[i]);
    }
    return acc;
}

GroupElement engel_commutator(const GroupElement& x, const GroupElement& g, unsigned n) {
    if (n == 0) {
        throw std::invalid_argument("engel_commutator: n must be >= 1");
    }
    GroupElement acc = commutator(x, g);
    for (unsigned i = 1; i < n; ++i) {
        acc = commutator(acc, g);
    }
    return acc;
}

bool verify_property_1(const GroupElement& x, const GroupElement& y, const GroupElement& z) {
    return verify_property_1_with(
        [](const GroupElement& a, const GroupElement& b) { return multiply(a, b); }, x, y, z);
}

bool verify_lemma1(std::span<const GroupElement> args, std::int64_t a) {
    if (args.size() < 2) {
        throw std::invalid_argument("verify_lemma1: need at least two arguments");
    }
    if (a == 0) {
        throw std::invalid_argument("verify_lemma1: exponent must be nonzero");
    }
    const PlatformDescriptor platform = platform_of(args[0]);
    if (platform.nilpotency_class() > args.size()) {
        throw std::invalid_argument("verify_lemma1: platform class exceeds commutator weight");
    }
    const GroupElement full = simple_commutator(args);
    const GroupElement expect = power(full, a);

    const std::span<const GroupElement> head = args.first(args.size() - 1);
    const GroupElement& last = args.back();

    const GroupElement lhs1 = commutator(power(simple_commutator(head), a), last);
    if (lhs1 != expect) {
        return false;
    }
    const GroupElement lhs2 = commutator(simple_commutator(head), power(last, a));
    return lhs2 == expect;
}

bool verify_proposition(std::span<const GroupElement> args, std::size_t slot,
                        std::int64_t exponent) {
    if (args.empty()) {
        throw std::invalid_argument("verify_proposition: empty argument list");
    }
    if (slot < 1 || slot > args.size()) {
        throw std::invalid_argument("verify_proposition: slot out of range");
    }
    if (exponent == 0) {
        throw std::invalid_argument("verify_proposition: exponent must be nonzero");
    }
    const PlatformDescriptor platform = platform_of(args[0]);
    if (platform.nilpotency_class() > args.size()) {
        throw std::invalid_argument(
            "verify_proposition: platform class exceeds commutator weight");
    }
    std::vector<GroupElement> scaled(args.begin(), args.end());
    scaled[slot - 1] = power(scaled[slot - 1], exponent);
    const GroupElement lhs = simple_commutator(scaled);
    const GroupElement rhs = power(simple_commutator(args), exponent);
    return lhs == rhs;
}

GroupElement multilinear_e(std::span<const GroupElement> args) {
    if (args.empty()) {
        throw std::invalid_argument("multilinear_e: empty argument list");
    }
    const PlatformDescriptor platform = platform_of(args[0]);
    if (args.size() != platform.nilpotency_class()) {
        throw std::invalid_argument("multilinear_e: arity must equal the nilpotency class");
    }
    return simple_commutator(args);
}

GroupElement multilinear_e_prime(const GroupElement& x, std::span<const GroupElement> args) {
    const PlatformDescriptor platform = platform_of(x);
    if (platform.nilpotency_class() < 2) {
        throw std::invalid_argument("multilinear_e_prime: platform class must be >= 2");
    }
    if (args.size() != platform.nilpotency_class() - 1) {
        throw std::invalid_argument("multilinear_e_prime: arity must equal class - 1");
    }
    std::vector<GroupElement> chain;
    chain.reserve(args.size() + 1);
    chain.push_back(x);
    chain.insert(chain.end(), args.begin(), args.end());
    return simple_commutator(chain);
}

namespace {

constexpr std::uint64_t kExhaustiveWitnessLimit = 256;

bool witness_ok(const GroupElement& x, const GroupElement& g, unsigned n) {
    return !is_identity(engel_commutator(x, g, n - 1));
}

} // namespace

std::optional<std::pair<GroupElement, GroupElement>> find_nondegenerate_witness(
    const PlatformDescriptor& platform, unsigned n, std::uint64_t budget,
    std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("find_nondegenerate_witness: n must be >= 2");
    }
    if (platform.order_if_at_most(kExhaustiveWitnessLimit)) {
        const std::vector<GroupElement> all =
            enumerate_group(platform, kExhaustiveWitnessLimit);
        for (const GroupElement& x : all) {
            for (const GroupElement& g : all) {
                if (witness_ok(x, g, n)) {
                    return std::make_pair(x, g);
                }
            }
        }
        return std::nullopt;
    }
    Rng rng(seed);
    for (std::uint64_t i = 0; i < budget; ++i) {
        GroupElement x = random_element(platform, rng);
        GroupElement g = random_element(platform, rng);
        if (witness_ok(x, g, n)) {
            return std::make_pair(x, g);
        }
    }
    return std::nullopt;
}

} // namespace nilkex
