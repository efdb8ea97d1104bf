#include "nilkex/attack.hpp"

#include <cstdio>
#include <stdexcept>
#include <utility>

#include "nilkex/commutator.hpp"
#include "nilkex/errors.hpp"
#include "nilkex/group.hpp"
#include "nilkex/numeric.hpp"

namespace nilkex {
namespace {

std::string fingerprint(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

AttackReport base_report(const Transcript& transcript) {
    AttackReport report;
    report.transcript_id = fingerprint(encode_transcript(transcript));
    report.protocol = transcript.protocol;
    report.platform = transcript.platform.spec_string();
    return report;
}

void require_ut(const Transcript& transcript) {
    if (transcript.platform.family() != PlatformFamily::unitriangular) {
        throw UnsupportedPlatformError(
            "first-band exponent extraction needs a unitriangular platform, got " +
            transcript.platform.spec_string());
    }
}

const std::vector<std::uint8_t>* find_payload(const BroadcastMessage& message,
                                              std::uint16_t base_index) {
    for (const auto& [index, bytes] : message.payload) {
        if (index == base_index) return &bytes;
    }
    return nullptr;
}

struct DecodedSession {
    std::vector<UTMatrix> bases;
    // observed[j][i] = what user j+1 broadcast for base i+1
    std::vector<std::vector<UTMatrix>> observed;
};

/// Decodes the bases and the per-user broadcast elements named by
/// `base_indices`. Throws DecodeError on any malformed element.
DecodedSession decode_session(const Transcript& transcript,
                              const std::vector<std::uint16_t>& base_indices) {
    DecodedSession session;
    for (const auto& bytes : transcript.bases) {
        session.bases.push_back(
            std::get<UTMatrix>(deserialize(bytes, transcript.platform)));
    }
    for (const auto& message : transcript.messages) {
        std::vector<UTMatrix> row;
        for (std::uint16_t index : base_indices) {
            const auto* bytes = find_payload(message, index);
            if (bytes == nullptr) {
                throw DecodeError("transcript message lacks an element for base " +
                                  std::to_string(index));
            }
            row.push_back(std::get<UTMatrix>(deserialize(*bytes, transcript.platform)));
        }
        session.observed.push_back(std::move(row));
    }
    return session;
}

/// Extracts one exponent per user from its observed powers of the listed
/// bases, verifies every observation against the recovered exponent, and
/// reconstructs power(key_base, product of exponents). Shared tail of both
/// protocol attacks; `chain_bases[i]` pairs with observation column i.
void recover_and_verify(AttackReport& report,
                        const Transcript& transcript,
                        const std::vector<UTMatrix>& chain_bases,
                        const std::vector<std::vector<UTMatrix>>& observed,
                        const UTMatrix& key_base) {
    const std::uint64_t q = transcript.platform.modulus().value();
    const std::size_t users = observed.size();

    std::vector<std::uint64_t> exponents;
    for (std::size_t j = 0; j < users; ++j) {
        bool have = false;
        std::uint64_t a = 0;
        for (std::size_t i = 0; i < chain_bases.size(); ++i) {
            const auto extraction = extract_exponent_ut(chain_bases[i], observed[j][i]);
            if (extraction.status == ExtractStatus::indeterminate) continue;
            if (extraction.status == ExtractStatus::not_a_power) {
                report.note = "user " + std::to_string(j + 1) +
                              " broadcast an element that is not a power of base " +
                              std::to_string(i + 1);
                return;
            }
            if (have && extraction.exponent != a) {
                report.note = "user " + std::to_string(j + 1) +
                              " broadcast inconsistent powers across bases";
                return;
            }
            have = true;
            a = extraction.exponent;
        }
        if (!have) {
            // Every base was the identity; the key commutator check upstream
            // already rules this out for honest sessions.
            report.note = "user " + std::to_string(j + 1) +
                          " revealed no information; all bases are trivial";
            return;
        }
        if (a == 0) {
            report.invalid_session = true;
            report.note = "user " + std::to_string(j + 1) +
                          " used an exponent divisible by the modulus";
            return;
        }
        exponents.push_back(a);
    }

    // Recovered exponents must reproduce every observed element exactly.
    for (std::size_t j = 0; j < users; ++j) {
        for (std::size_t i = 0; i < chain_bases.size(); ++i) {
            const GroupElement predicted =
                power_counted(GroupElement(chain_bases[i]),
                              static_cast<std::int64_t>(exponents[j]),
                              report.group_operations);
            if (!(std::get<UTMatrix>(predicted) == observed[j][i])) {
                report.note = "verification failed for user " + std::to_string(j + 1) +
                              ", base " + std::to_string(i + 1);
                return;
            }
        }
    }

    std::uint64_t product = 1;
    for (std::uint64_t a : exponents) product = mulmod(product, a, q);
    const GroupElement key =
        power_counted(GroupElement(key_base), static_cast<std::int64_t>(product),
                      report.group_operations);

    report.success = true;
    report.exponents = std::move(exponents);
    report.key_bytes = serialize(key);
}

} // namespace

ExponentExtraction extract_exponent_ut(const UTMatrix& g, const UTMatrix& h) {
    if (g.dim() != h.dim() || !(g.modulus() == h.modulus())) {
        throw PlatformMismatchError("exponent extraction needs elements of one group");
    }
    if (g.is_identity()) {
        return {h.is_identity() ? ExtractStatus::indeterminate
                                : ExtractStatus::not_a_power,
                0};
    }
    if (h.is_identity()) return {ExtractStatus::ok, 0};

    const unsigned d = g.first_band();
    const unsigned hd = h.first_band();
    if (hd < d) return {ExtractStatus::not_a_power, 0};
    // h may sit deeper than g only as g^a with a divisible by q; then the
    // band-d entries of h are all zero and the ratio comes out 0 everywhere.

    const std::uint64_t q = g.modulus().value();
    const auto gb = g.band(d);
    const auto hb = h.band(d);
    bool have = false;
    std::uint64_t a = 0;
    for (std::size_t i = 0; i < gb.size(); ++i) {
        const std::uint64_t gi = gb[i];
        const std::uint64_t hi = hb[i];
        if (gi == 0) {
            if (hi != 0) return {ExtractStatus::not_a_power, 0};
            continue;
        }
        const std::uint64_t candidate = mulmod(hi, invmod(gi, q), q);
        if (have && candidate != a) return {ExtractStatus::not_a_power, 0};
        have = true;
        a = candidate;
    }
    // g nontrivial on band d guarantees at least one nonzero entry.
    return {ExtractStatus::ok, a};
}

AttackReport break_protocol1_ut(const Transcript& transcript) {
    require_ut(transcript);
    if (transcript.protocol != ProtocolId::protocol1) {
        throw std::invalid_argument("transcript does not carry a broadcast-per-base session");
    }
    AttackReport report = base_report(transcript);

    std::vector<std::uint16_t> indices;
    for (std::size_t i = 0; i < transcript.bases.size(); ++i) {
        indices.push_back(static_cast<std::uint16_t>(i + 1));
    }

    DecodedSession session;
    try {
        session = decode_session(transcript, indices);
    } catch (const DecodeError& e) {
        report.error = AttackReport::ErrorKind::decode;
        report.note = e.what();
        return report;
    }

    std::vector<GroupElement> bases;
    for (const auto& b : session.bases) bases.emplace_back(b);
    const GroupElement c = simple_commutator(bases);
    if (is_identity(c)) {
        report.invalid_session = true;
        report.note = "the commutator of the public bases is trivial";
        return report;
    }
    // c nontrivial forces every base nontrivial, so extraction below is
    // never starved of information.
    recover_and_verify(report, transcript, session.bases, session.observed,
                       std::get<UTMatrix>(c));
    return report;
}

AttackReport break_protocol2_ut(const Transcript& transcript) {
    require_ut(transcript);
    if (transcript.protocol != ProtocolId::protocol2) {
        throw std::invalid_argument("transcript does not carry a single-broadcast session");
    }
    AttackReport report = base_report(transcript);

    DecodedSession session;
    try {
        session = decode_session(transcript, {2});
    } catch (const DecodeError& e) {
        report.error = AttackReport::ErrorKind::decode;
        report.note = e.what();
        return report;
    }

    const GroupElement x{session.bases[0]};
    const GroupElement g{session.bases[1]};
    const GroupElement c = engel_commutator(x, g, transcript.degree);
    if (is_identity(c)) {
        report.invalid_session = true;
        report.note = "the iterated commutator of the public pair is trivial";
        return report;
    }
    const std::vector<UTMatrix> chain_bases = {session.bases[1]};
    recover_and_verify(report, transcript, chain_bases, session.observed,
                       std::get<UTMatrix>(c));
    return report;
}

AttackReport run_attack(const Transcript& transcript) {
    switch (transcript.protocol) {
        case ProtocolId::protocol1: return break_protocol1_ut(transcript);
        case ProtocolId::protocol2: return break_protocol2_ut(transcript);
    }
    throw std::invalid_argument("unknown protocol in transcript");
}

nlohmann::json to_json(const AttackReport& report) {
    nlohmann::json j;
    j["transcript_id"] = report.transcript_id;
    j["protocol"] = static_cast<int>(report.protocol);
    j["platform"] = report.platform;
    j["success"] = report.success;
    j["invalid_session"] = report.invalid_session;
    j["error"] = report.error == AttackReport::ErrorKind::none ? "none" : "decode";
    j["note"] = report.note;
    j["exponents"] = report.exponents;
    j["key"] = to_hex(report.key_bytes);
    j["group_operations"] = report.group_operations;
    return j;
}

} // namespace nilkex
