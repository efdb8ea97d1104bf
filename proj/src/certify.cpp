#include "nilkex/certify.hpp"

#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "nilkex/commutator.hpp"
#include "nilkex/rng.hpp"

namespace nilkex {

namespace {

constexpr std::uint64_t kExhaustiveOrderLimit = 1024;

std::string byte_key(const GroupElement& e) {
    const std::vector<std::uint8_t> bytes = serialize(e);
    return std::string(bytes.begin(), bytes.end());
}

/// Order of the subgroup generated by gens. Every element has finite order,
/// so closing under right multiplication by the generators is enough.
std::uint64_t closure_order(const PlatformDescriptor& platform,
                            const std::vector<GroupElement>& gens) {
    const GroupElement id = group_identity(platform);
    std::set<std::string> seen;
    seen.insert(byte_key(id));
    std::deque<GroupElement> queue;
    queue.push_back(id);
    while (!queue.empty()) {
        const GroupElement e = std::move(queue.front());
        queue.pop_front();
        for (const GroupElement& g : gens) {
            GroupElement next = multiply(e, g);
            if (seen.insert(byte_key(next)).second) {
                queue.push_back(std::move(next));
            }
        }
    }
    return seen.size();
}

struct Entry {
    GroupElement value;
    std::vector<GroupElement> chain;
};

/// Nontrivial weight-k simple commutator values, keyed by serialized value so
/// iteration order is deterministic. One witnessing chain is kept per value.
using Layer = std::map<std::string, Entry>;

void require_small_order(const PlatformDescriptor& platform) {
    if (!platform.order_if_at_most(kExhaustiveOrderLimit)) {
        throw std::invalid_argument(
            "exhaustive certification needs group order <= 1024; supply a sampling budget");
    }
}

ClassCertification exhaustive_class(const PlatformDescriptor& platform, unsigned claimed) {
    const std::vector<GroupElement> all = enumerate_group(platform, kExhaustiveOrderLimit);
    std::uint64_t checked = 0;

    std::vector<Layer> layers;
    Layer first;
    for (const GroupElement& g : all) {
        if (!is_identity(g)) {
            first.emplace(byte_key(g), Entry{g, {g}});
        }
    }
    layers.push_back(std::move(first));

    std::vector<std::uint64_t> gamma_orders{all.size()};
    while (!layers.back().empty()) {
        Layer next;
        std::vector<GroupElement> values;
        for (const auto& [key, entry] : layers.back()) {
            for (const GroupElement& g : all) {
                GroupElement c = commutator(entry.value, g);
                ++checked;
                if (is_identity(c)) {
                    continue;
                }
                std::string k = byte_key(c);
                if (next.count(k) != 0) {
                    continue;
                }
                std::vector<GroupElement> chain = entry.chain;
                chain.push_back(g);
                next.emplace(std::move(k), Entry{std::move(c), std::move(chain)});
            }
        }
        if (!next.empty()) {
            values.reserve(next.size());
            for (const auto& [key, entry] : next) {
                values.push_back(entry.value);
            }
            gamma_orders.push_back(closure_order(platform, values));
        } else {
            gamma_orders.push_back(1);
        }
        layers.push_back(std::move(next));
    }

    const auto actual = static_cast<unsigned>(layers.size() - 1);
    if (actual != claimed) {
        CertificationFailure failure;
        failure.kind = CertificationFailure::Kind::refuted;
        failure.detail = "exact nilpotency class is " + std::to_string(actual) +
                         ", claimed " + std::to_string(claimed);
        if (actual > claimed) {
            // A nontrivial commutator one weight above the claim.
            failure.counterexample = layers[claimed].begin()->second.chain;
        }
        return failure;
    }

    ClassCertificate cert{platform};
    cert.nilpotency_class = claimed;
    cert.exhaustive = true;
    if (claimed > 0) {
        cert.class_witness = layers[claimed - 1].begin()->second.chain;
    }
    cert.gamma_orders = std::move(gamma_orders);
    cert.checked = checked;
    return cert;
}

ClassCertification sampled_class(const PlatformDescriptor& platform, unsigned claimed,
                                 const SampleSpec& spec) {
    if (claimed == 0) {
        throw std::invalid_argument("certify_class_claim: sampled claim must be >= 1");
    }
    Rng rng(spec.seed);
    std::uint64_t checked = 0;

    auto random_chain = [&](std::size_t weight) {
        std::vector<GroupElement> chain;
        chain.reserve(weight);
        for (std::size_t i = 0; i < weight; ++i) {
            chain.push_back(random_element(platform, rng));
        }
        return chain;
    };

    for (std::uint64_t i = 0; i < spec.count; ++i) {
        std::vector<GroupElement> chain = random_chain(claimed + 1);
        ++checked;
        if (!is_identity(simple_commutator(chain))) {
            CertificationFailure failure;
            failure.kind = CertificationFailure::Kind::refuted;
            failure.detail = "found a nontrivial commutator of weight " +
                             std::to_string(claimed + 1);
            failure.counterexample = std::move(chain);
            return failure;
        }
    }

    for (std::uint64_t i = 0; i < spec.count; ++i) {
        std::vector<GroupElement> chain = random_chain(claimed);
        ++checked;
        if (!is_identity(simple_commutator(chain))) {
            ClassCertificate cert{platform};
            cert.nilpotency_class = claimed;
            cert.exhaustive = false;
            cert.class_witness = std::move(chain);
            cert.checked = checked;
            cert.sampling = spec;
            return cert;
        }
    }

    CertificationFailure failure;
    failure.kind = CertificationFailure::Kind::witness_not_found;
    failure.detail = "no nontrivial commutator of weight " + std::to_string(claimed) +
                     " within the sampling budget";
    return failure;
}

} // namespace

ClassCertification certify_class(const PlatformDescriptor& platform,
                                 std::optional<SampleSpec> sampling) {
    return certify_class_claim(platform, platform.nilpotency_class(), sampling);
}

ClassCertification certify_class_claim(const PlatformDescriptor& platform,
                                       unsigned claimed_class,
                                       std::optional<SampleSpec> sampling) {
    if (sampling) {
        return sampled_class(platform, claimed_class, *sampling);
    }
    require_small_order(platform);
    return exhaustive_class(platform, claimed_class);
}

EngelCertificate certify_engel(const PlatformDescriptor& platform, unsigned k,
                               std::optional<SampleSpec> sampling) {
    if (k == 0) {
        throw std::invalid_argument("certify_engel: k must be >= 1");
    }
    EngelCertificate cert{platform};
    cert.k = k;
    cert.sampling = sampling;

    if (!sampling) {
        require_small_order(platform);
        cert.exhaustive = true;
        const std::vector<GroupElement> all = enumerate_group(platform, kExhaustiveOrderLimit);
        for (const GroupElement& x : all) {
            for (const GroupElement& g : all) {
                ++cert.checked;
                if (!is_identity(engel_commutator(x, g, k))) {
                    cert.is_k_engel = false;
                    cert.witness = std::make_pair(x, g);
                    return cert;
                }
            }
        }
        cert.is_k_engel = true;
        return cert;
    }

    Rng rng(sampling->seed);
    for (std::uint64_t i = 0; i < sampling->count; ++i) {
        GroupElement x = random_element(platform, rng);
        GroupElement g = random_element(platform, rng);
        ++cert.checked;
        if (!is_identity(engel_commutator(x, g, k))) {
            cert.is_k_engel = false;
            cert.witness = std::make_pair(std::move(x), std::move(g));
            return cert;
        }
    }
    cert.is_k_engel = true;
    return cert;
}

namespace {

nlohmann::json element_hex(const GroupElement& e) {
    return to_hex(serialize(e));
}

nlohmann::json chain_json(const std::vector<GroupElement>& chain) {
    nlohmann::json arr = nlohmann::json::array();
    for (const GroupElement& e : chain) {
        arr.push_back(element_hex(e));
    }
    return arr;
}

nlohmann::json sampling_json(const std::optional<SampleSpec>& sampling) {
    if (!sampling) {
        return nullptr;
    }
    return nlohmann::json{{"count", sampling->count}, {"seed", sampling->seed}};
}

} // namespace

nlohmann::json platform_json(const PlatformDescriptor& platform) {
    nlohmann::json j{
        {"family",
         platform.family() == PlatformFamily::unitriangular ? "unitriangular" : "wreath"},
        {"spec", platform.spec_string()},
        {"modulus", platform.modulus().value()},
        {"nilpotency_class", platform.nilpotency_class()},
    };
    if (platform.family() == PlatformFamily::unitriangular) {
        j["matrix_dim"] = platform.matrix_dim();
    } else {
        j["wreath_prime"] = platform.wreath_prime();
    }
    if (const auto k = platform.not_engel()) {
        j["not_engel"] = *k;
    } else {
        j["not_engel"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const ClassCertificate& cert) {
    return nlohmann::json{
        {"type", "class_certificate"},
        {"platform", platform_json(cert.platform)},
        {"nilpotency_class", cert.nilpotency_class},
        {"exhaustive", cert.exhaustive},
        {"class_witness", chain_json(cert.class_witness)},
        {"gamma_orders", cert.gamma_orders},
        {"checked", cert.checked},
        {"sampling", sampling_json(cert.sampling)},
    };
}

nlohmann::json to_json(const CertificationFailure& failure) {
    return nlohmann::json{
        {"type", "certification_failure"},
        {"kind", failure.kind == CertificationFailure::Kind::refuted ? "refuted"
                                                                     : "witness_not_found"},
        {"detail", failure.detail},
        {"counterexample", chain_json(failure.counterexample)},
    };
}

nlohmann::json to_json(const ClassCertification& certification) {
    return std::visit([](const auto& v) { return to_json(v); }, certification);
}

nlohmann::json to_json(const EngelCertificate& cert) {
    nlohmann::json j{
        {"type", "engel_certificate"},
        {"platform", platform_json(cert.platform)},
        {"k", cert.k},
        {"is_k_engel", cert.is_k_engel},
        {"exhaustive", cert.exhaustive},
        {"checked", cert.checked},
        {"sampling", sampling_json(cert.sampling)},
    };
    if (cert.witness) {
        j["witness"] = nlohmann::json{{"x", element_hex(cert.witness->first)},
                                      {"g", element_hex(cert.witness->second)}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

} // namespace nilkex
