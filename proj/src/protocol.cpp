#include "nilkex/protocol.hpp"

#include <algorithm>
#include <stdexcept>

#include "nilkex/certify.hpp"
#include "nilkex/commutator.hpp"
#include "nilkex/errors.hpp"
#include "nilkex/wire.hpp"

namespace nilkex {

namespace {

constexpr std::uint8_t kMagic[4] = {'N', 'K', 'E', 'X'};
constexpr std::uint8_t kVersion = 0x01;
constexpr unsigned kSetupSpotChecks = 16;
constexpr std::uint64_t kSetupSpotSeed = 0x7a31c95b02e6f4d8ULL;
constexpr unsigned kMaxDegree = 1024;

GroupElement key_commutator(const SessionParams& params) {
    if (params.protocol == ProtocolId::protocol1) {
        return simple_commutator(params.bases);
    }
    return engel_commutator(params.bases[0], params.bases[1], params.degree);
}

void validate_params(const SessionParams& params) {
    const PlatformDescriptor& platform = params.platform;
    if (params.degree > kMaxDegree) {
        throw SetupError("degree out of range");
    }
    if (params.protocol == ProtocolId::protocol1) {
        if (params.degree < 2) {
            throw SetupError("protocol1: degree must be at least 2");
        }
        if (platform.nilpotency_class() != params.degree) {
            throw SetupError("protocol1: platform class must equal the degree");
        }
        if (params.bases.size() != params.degree) {
            throw SetupError("protocol1: need exactly one base per slot");
        }
    } else if (params.protocol == ProtocolId::protocol2) {
        if (params.degree < 1) {
            throw SetupError("protocol2: degree must be at least 1");
        }
        if (platform.nilpotency_class() != params.degree + 1) {
            throw SetupError("protocol2: platform class must equal degree + 1");
        }
        if (platform.not_engel() != params.degree) {
            throw SetupError("protocol2: platform does not advertise the needed "
                             "non-Engel degree");
        }
        if (params.bases.size() != 2) {
            throw SetupError("protocol2: need exactly the pair (x, g)");
        }
    } else {
        throw SetupError("unknown protocol");
    }
    for (const GroupElement& b : params.bases) {
        if (!(platform_of(b) == platform)) {
            throw SetupError("base element is not on the session platform");
        }
    }
    if (is_identity(key_commutator(params))) {
        throw SetupError("degenerate public parameters: the key commutator is trivial");
    }

    // Seeded spot check that commutators one weight above the class vanish;
    // catches a descriptor whose class claim does not match the arithmetic.
    Rng spot(kSetupSpotSeed);
    const unsigned weight = platform.nilpotency_class() + 1;
    for (unsigned i = 0; i < kSetupSpotChecks; ++i) {
        std::vector<GroupElement> chain;
        chain.reserve(weight);
        for (unsigned j = 0; j < weight; ++j) {
            chain.push_back(random_element(platform, spot));
        }
        if (!is_identity(simple_commutator(chain))) {
            throw SetupError("platform class claim failed a spot check");
        }
    }
}

std::vector<UserState> make_states(const SessionParams& params,
                                   std::vector<std::uint64_t> exponents) {
    SessionParams stored = params;
    stored.rng_seed.reset();
    std::vector<UserState> states;
    states.reserve(exponents.size());
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        states.push_back(UserState{stored, static_cast<unsigned>(j + 1), exponents[j]});
    }
    return states;
}

SessionResult finish_run(const SessionParams& params, const std::vector<UserState>& states) {
    std::vector<BroadcastMessage> messages;
    messages.reserve(states.size());
    for (const UserState& s : states) {
        messages.push_back(round_broadcast(s));
    }
    Transcript transcript = build_transcript(params, messages);
    std::vector<SharedKey> keys;
    keys.reserve(states.size());
    for (const UserState& s : states) {
        keys.push_back(derive_key(s, transcript));
    }
    for (const SharedKey& k : keys) {
        if (k.bytes != keys.front().bytes) {
            throw Error("internal error: users derived different keys");
        }
    }
    return SessionResult{std::move(transcript), std::move(keys)};
}

} // namespace

std::vector<UserState> setup_session(const SessionParams& params) {
    validate_params(params);
    if (!params.rng_seed) {
        throw SetupError("session seed required to deal private exponents");
    }
    Rng rng(*params.rng_seed);
    const std::uint64_t q = params.platform.modulus().value();
    std::vector<std::uint64_t> exponents;
    exponents.reserve(params.users());
    for (unsigned j = 0; j < params.users(); ++j) {
        exponents.push_back(rng.nonzero_below(q));
    }
    return make_states(params, std::move(exponents));
}

std::vector<UserState> setup_session(const SessionParams& params,
                                     std::span<const std::uint64_t> exponents) {
    validate_params(params);
    if (exponents.size() != params.users()) {
        throw std::invalid_argument("setup_session: need one exponent per user");
    }
    const std::uint64_t q = params.platform.modulus().value();
    for (const std::uint64_t a : exponents) {
        if (a == 0 || a >= q) {
            throw std::invalid_argument("setup_session: exponents must lie in [1, q-1]");
        }
    }
    return make_states(params, {exponents.begin(), exponents.end()});
}

BroadcastMessage round_broadcast(const UserState& state) {
    const SessionParams& params = state.params;
    const auto a = static_cast<std::int64_t>(state.exponent);
    BroadcastMessage msg;
    msg.sender = static_cast<std::uint16_t>(state.index);
    if (params.protocol == ProtocolId::protocol1) {
        for (unsigned i = 0; i < params.degree; ++i) {
            msg.payload.emplace_back(static_cast<std::uint16_t>(i + 1),
                                     serialize(power(params.bases[i], a)));
        }
    } else {
        msg.payload.emplace_back(std::uint16_t{2}, serialize(power(params.bases[1], a)));
    }
    return msg;
}

Transcript build_transcript(const SessionParams& params,
                            std::span<const BroadcastMessage> messages) {
    if (messages.size() != params.users()) {
        throw std::invalid_argument("build_transcript: need one message per user");
    }
    for (std::size_t k = 0; k < messages.size(); ++k) {
        if (messages[k].sender != k + 1) {
            throw std::invalid_argument("build_transcript: messages must be ordered by sender");
        }
    }
    Transcript t{params.protocol, params.platform, params.degree, {}, {}};
    t.bases.reserve(params.bases.size());
    for (const GroupElement& b : params.bases) {
        t.bases.push_back(serialize(b));
    }
    t.messages.assign(messages.begin(), messages.end());
    return t;
}

SharedKey derive_key(const UserState& state, const Transcript& transcript) {
    const SessionParams& params = state.params;
    if (transcript.protocol != params.protocol || !(transcript.platform == params.platform) ||
        transcript.degree != params.degree) {
        throw SetupError("transcript does not match this session");
    }
    if (transcript.bases.size() != params.bases.size()) {
        throw SetupError("transcript does not match this session");
    }
    for (std::size_t i = 0; i < params.bases.size(); ++i) {
        if (transcript.bases[i] != serialize(params.bases[i])) {
            throw SetupError("transcript does not match this session");
        }
    }

    const auto find_entry = [&](unsigned sender,
                                std::uint16_t base_index) -> const std::vector<std::uint8_t>& {
        for (const BroadcastMessage& m : transcript.messages) {
            if (m.sender != sender) {
                continue;
            }
            for (const auto& [idx, bytes] : m.payload) {
                if (idx == base_index) {
                    return bytes;
                }
            }
            throw DecodeError("broadcast is missing a payload entry");
        }
        throw DecodeError("transcript is missing a broadcast");
    };

    const auto a = static_cast<std::int64_t>(state.exponent);
    std::vector<GroupElement> chain;
    chain.reserve(params.degree + 1);
    if (params.protocol == ProtocolId::protocol1) {
        std::uint16_t slot = 1;
        for (unsigned k = 1; k <= params.users(); ++k) {
            if (k == state.index) {
                continue;
            }
            chain.push_back(deserialize(find_entry(k, slot), params.platform));
            ++slot;
        }
        const GroupElement key = power(simple_commutator(chain), a);
        return SharedKey{key, serialize(key)};
    }
    chain.push_back(power(params.bases[0], a));
    for (unsigned k = 1; k <= params.users(); ++k) {
        if (k == state.index) {
            continue;
        }
        chain.push_back(deserialize(find_entry(k, 2), params.platform));
    }
    const GroupElement key = simple_commutator(chain);
    return SharedKey{key, serialize(key)};
}

SessionResult run_session(const SessionParams& params) {
    return finish_run(params, setup_session(params));
}

SessionResult run_session(const SessionParams& params,
                          std::span<const std::uint64_t> exponents) {
    return finish_run(params, setup_session(params, exponents));
}

std::vector<GroupElement> sample_protocol1_bases(const PlatformDescriptor& platform,
                                                 unsigned degree, Rng& rng,
                                                 std::uint64_t budget) {
    if (degree < 2 || platform.nilpotency_class() != degree) {
        throw SetupError("platform class must equal the requested degree");
    }
    for (std::uint64_t t = 0; t < budget; ++t) {
        std::vector<GroupElement> bases;
        bases.reserve(degree);
        for (unsigned i = 0; i < degree; ++i) {
            bases.push_back(random_element(platform, rng));
        }
        if (!is_identity(simple_commutator(bases))) {
            return bases;
        }
    }
    throw SetupError("could not sample nondegenerate bases within the budget");
}

std::pair<GroupElement, GroupElement> sample_protocol2_pair(
    const PlatformDescriptor& platform, Rng& rng, std::uint64_t budget) {
    const unsigned cls = platform.nilpotency_class();
    if (cls < 2 || platform.not_engel() != cls - 1) {
        throw SetupError("platform does not advertise a usable non-Engel degree");
    }
    auto witness = find_nondegenerate_witness(platform, cls, budget, rng.next());
    if (!witness) {
        throw SetupError("could not sample a nondegenerate pair within the budget");
    }
    return *witness;
}

std::vector<std::uint8_t> encode_transcript(const Transcript& transcript) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    wire::put_u8(out, kVersion);
    wire::put_u8(out, static_cast<std::uint8_t>(transcript.protocol));
    encode_platform(out, transcript.platform);
    wire::put_u16(out, static_cast<std::uint16_t>(transcript.degree));
    for (const auto& b : transcript.bases) {
        out.insert(out.end(), b.begin(), b.end());
    }
    for (const BroadcastMessage& m : transcript.messages) {
        wire::put_u16(out, m.sender);
        wire::put_u16(out, static_cast<std::uint16_t>(m.payload.size()));
        for (const auto& [idx, bytes] : m.payload) {
            wire::put_u16(out, idx);
            out.insert(out.end(), bytes.begin(), bytes.end());
        }
    }
    return out;
}

Transcript parse_transcript(std::span<const std::uint8_t> bytes) {
    std::size_t off = 0;
    const std::vector<std::uint8_t> magic = wire::get_bytes(bytes, off, 4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
        throw DecodeError("bad magic");
    }
    if (wire::get_u8(bytes, off) != kVersion) {
        throw DecodeError("unsupported version");
    }
    const std::uint8_t tag = wire::get_u8(bytes, off);
    if (tag != 1 && tag != 2) {
        throw DecodeError("unknown protocol tag");
    }
    const auto protocol = static_cast<ProtocolId>(tag);
    const PlatformDescriptor platform = decode_platform(bytes, off);
    const std::uint16_t degree = wire::get_u16(bytes, off);
    const unsigned min_degree = protocol == ProtocolId::protocol1 ? 2 : 1;
    if (degree < min_degree || degree > kMaxDegree) {
        throw DecodeError("degree out of range");
    }

    const std::size_t esize = element_byte_size(platform);
    const std::size_t base_count = protocol == ProtocolId::protocol1 ? degree : 2;
    Transcript t{protocol, platform, degree, {}, {}};
    t.bases.reserve(base_count);
    for (std::size_t i = 0; i < base_count; ++i) {
        t.bases.push_back(wire::get_bytes(bytes, off, esize));
    }

    const unsigned users = degree + 1U;
    const std::size_t entry_count = protocol == ProtocolId::protocol1 ? degree : 1;
    t.messages.reserve(users);
    for (unsigned j = 1; j <= users; ++j) {
        BroadcastMessage m;
        m.sender = wire::get_u16(bytes, off);
        if (m.sender != j) {
            throw DecodeError("broadcast senders out of order");
        }
        const std::uint16_t count = wire::get_u16(bytes, off);
        if (count != entry_count) {
            throw DecodeError("unexpected payload count");
        }
        m.payload.reserve(count);
        for (std::size_t e = 0; e < count; ++e) {
            const std::uint16_t idx = wire::get_u16(bytes, off);
            const auto expect =
                static_cast<std::uint16_t>(protocol == ProtocolId::protocol1 ? e + 1 : 2);
            if (idx != expect) {
                throw DecodeError("unexpected payload index");
            }
            m.payload.emplace_back(idx, wire::get_bytes(bytes, off, esize));
        }
        t.messages.push_back(std::move(m));
    }
    if (off != bytes.size()) {
        throw DecodeError("trailing bytes");
    }
    return t;
}

nlohmann::json session_json(const Transcript& transcript, std::span<const SharedKey> keys) {
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& b : transcript.bases) {
        bases.push_back(to_hex(b));
    }
    nlohmann::json messages = nlohmann::json::array();
    for (const BroadcastMessage& m : transcript.messages) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& [idx, elem] : m.payload) {
            entries.push_back(nlohmann::json{{"base", idx}, {"element", to_hex(elem)}});
        }
        messages.push_back(nlohmann::json{{"sender", m.sender}, {"entries", entries}});
    }
    nlohmann::json j{
        {"protocol", static_cast<int>(transcript.protocol)},
        {"platform", platform_json(transcript.platform)},
        {"degree", transcript.degree},
        {"users", transcript.users()},
        {"bases", bases},
        {"messages", messages},
    };
    if (!keys.empty()) {
        nlohmann::json key_arr = nlohmann::json::array();
        for (const SharedKey& k : keys) {
            key_arr.push_back(to_hex(k.bytes));
        }
        j["keys"] = key_arr;
    }
    return j;
}

} // namespace nilkex
