#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nilkex/group.hpp"

namespace nilkex {

/// Randomized checking budget: count samples drawn from a deterministic
/// stream seeded with seed.
struct SampleSpec {
    std::uint64_t count = 0;
    std::uint64_t seed = 0;

    bool operator==(const SampleSpec&) const = default;
};

/// Evidence that the platform has the stated nilpotency class. With
/// exhaustive set the class is exact (the whole lower central series was
/// computed); otherwise the claim survived the sampling budget.
struct ClassCertificate {
    explicit ClassCertificate(PlatformDescriptor p) : platform(std::move(p)) {}

    PlatformDescriptor platform;
    unsigned nilpotency_class = 0;
    bool exhaustive = false;
    /// Chain g_1,...,g_c with [g_1,...,g_c] != 1.
    std::vector<GroupElement> class_witness;
    /// Exhaustive runs only: |gamma_1|, |gamma_2|, ..., ending with 1.
    std::vector<std::uint64_t> gamma_orders;
    std::uint64_t checked = 0;
    std::optional<SampleSpec> sampling;
};

struct CertificationFailure {
    enum class Kind {
        refuted,           // a commutator that the claim says is trivial is not
        witness_not_found, // no nontrivial commutator of the claimed weight turned up
    };
    Kind kind = Kind::refuted;
    std::string detail;
    /// For refuted: a chain whose simple commutator violates the claim.
    std::vector<GroupElement> counterexample;
};

using ClassCertification = std::variant<ClassCertificate, CertificationFailure>;

/// Certifies the class recorded in the descriptor. Without sampling the
/// whole group is enumerated (order must be <= 1024) and the lower central
/// series computed exactly; with sampling the claim is tested on random
/// commutator chains.
ClassCertification certify_class(const PlatformDescriptor& platform,
                                 std::optional<SampleSpec> sampling = std::nullopt);

/// Same, but against an arbitrary claimed class. This is how a wrong claim
/// gets refuted; certify_class passes the descriptor's own class.
ClassCertification certify_class_claim(const PlatformDescriptor& platform,
                                       unsigned claimed_class,
                                       std::optional<SampleSpec> sampling = std::nullopt);

/// Verdict on whether [x, g, ..., g] (k copies of g) vanishes for all x, g.
/// A witness pair is attached when it does not.
struct EngelCertificate {
    explicit EngelCertificate(PlatformDescriptor p) : platform(std::move(p)) {}

    PlatformDescriptor platform;
    unsigned k = 0;
    bool is_k_engel = false;
    bool exhaustive = false;
    std::optional<std::pair<GroupElement, GroupElement>> witness;
    std::uint64_t checked = 0;
    std::optional<SampleSpec> sampling;
};

EngelCertificate certify_engel(const PlatformDescriptor& platform, unsigned k,
                               std::optional<SampleSpec> sampling = std::nullopt);

nlohmann::json platform_json(const PlatformDescriptor& platform);
nlohmann::json to_json(const ClassCertificate& cert);
nlohmann::json to_json(const CertificationFailure& failure);
nlohmann::json to_json(const ClassCertification& certification);
nlohmann::json to_json(const EngelCertificate& cert);

} // namespace nilkex
