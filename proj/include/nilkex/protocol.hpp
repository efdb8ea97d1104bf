#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nilkex/group.hpp"

namespace nilkex {

enum class ProtocolId : std::uint8_t {
    /// n+1 users on a platform of class exactly n, public bases g_1..g_n.
    /// User j broadcasts g_i^{a_j} for every i; the shared key is
    /// [g_1,...,g_n]^{prod a_j}.
    protocol1 = 1,
    /// n+1 users on a platform of class n+1 that is not n-Engel, public pair
    /// (x, g) with [x, g, ..., g] != 1 (n copies). User j broadcasts g^{a_j};
    /// the shared key is [x, g, ..., g]^{prod a_j}.
    protocol2 = 2,
};

struct SessionParams {
    SessionParams(ProtocolId proto, PlatformDescriptor plat)
        : protocol(proto), platform(std::move(plat)) {}
    SessionParams(ProtocolId proto, PlatformDescriptor plat, unsigned deg,
                  std::vector<GroupElement> base_list, std::optional<std::uint64_t> seed)
        : protocol(proto), platform(std::move(plat)), degree(deg),
          bases(std::move(base_list)), rng_seed(seed) {}

    ProtocolId protocol;
    PlatformDescriptor platform;
    /// Arity n of the shared-key commutator; the session has n+1 users.
    unsigned degree = 0;
    /// protocol1: g_1..g_n.  protocol2: {x, g}.
    std::vector<GroupElement> bases;
    /// Seeds the private exponents; required unless they are injected.
    std::optional<std::uint64_t> rng_seed;

    unsigned users() const noexcept { return degree + 1; }

    friend bool operator==(const SessionParams&, const SessionParams&) = default;
};

/// One user's view after setup: public parameters plus the private exponent.
/// The master seed is not retained.
struct UserState {
    SessionParams params;
    unsigned index = 0; // 1-based
    std::uint64_t exponent = 0;
};

/// What one user sends: (base index, serialized element) pairs. protocol1
/// carries indices 1..n; protocol2 carries the single index 2 (the pair
/// element g; x is never raised in public).
struct BroadcastMessage {
    std::uint16_t sender = 0;
    std::vector<std::pair<std::uint16_t, std::vector<std::uint8_t>>> payload;

    friend bool operator==(const BroadcastMessage&, const BroadcastMessage&) = default;
};

/// Everything visible on the wire for one session: public parameters and all
/// broadcasts. Element payloads stay serialized; they are decoded (and
/// validated) only when a key is derived or an attack runs.
struct Transcript {
    ProtocolId protocol;
    PlatformDescriptor platform;
    unsigned degree = 0;
    std::vector<std::vector<std::uint8_t>> bases;
    std::vector<BroadcastMessage> messages;

    unsigned users() const noexcept { return degree + 1; }

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

struct SharedKey {
    GroupElement element;
    std::vector<std::uint8_t> bytes;

    friend bool operator==(const SharedKey&, const SharedKey&) = default;
};

struct SessionResult {
    Transcript transcript;
    std::vector<SharedKey> keys;
};

/// Validates the parameters and deals a private exponent in [1, q-1] to each
/// of the n+1 users from params.rng_seed. Throws SetupError when the platform
/// claims do not fit the protocol, a base lives on the wrong platform, the
/// key commutator is degenerate, or the seed is missing.
std::vector<UserState> setup_session(const SessionParams& params);

/// Same validation, with caller-chosen exponents (one per user, each in
/// [1, q-1]); used by tests and the attack verifier.
std::vector<UserState> setup_session(const SessionParams& params,
                                     std::span<const std::uint64_t> exponents);

BroadcastMessage round_broadcast(const UserState& state);

/// Assembles the public transcript; messages must come exactly from users
/// 1..n+1 in order.
Transcript build_transcript(const SessionParams& params,
                            std::span<const BroadcastMessage> messages);

/// Computes this user's copy of the shared key from the public transcript.
/// Throws SetupError when the transcript does not belong to the user's
/// session and DecodeError when a payload fails to decode.
SharedKey derive_key(const UserState& state, const Transcript& transcript);

/// Full honest run: setup, one broadcast round, key derivation by everyone.
/// All derived keys are verified byte-identical before returning.
SessionResult run_session(const SessionParams& params);
SessionResult run_session(const SessionParams& params,
                          std::span<const std::uint64_t> exponents);

/// Draws random protocol1 bases until the key commutator is nontrivial.
/// Throws SetupError when the budget is exhausted.
std::vector<GroupElement> sample_protocol1_bases(const PlatformDescriptor& platform,
                                                 unsigned degree, Rng& rng,
                                                 std::uint64_t budget = 1000);

/// Draws a protocol2 pair (x, g) with [x, g, ..., g] != 1 (class-1 copies of
/// g). Scans exhaustively on small platforms, otherwise randomized.
std::pair<GroupElement, GroupElement> sample_protocol2_pair(
    const PlatformDescriptor& platform, Rng& rng, std::uint64_t budget = 1000);

std::vector<std::uint8_t> encode_transcript(const Transcript& transcript);

/// Strict inverse of encode_transcript: bad magic, version, structure, or
/// trailing bytes raise DecodeError. Element payloads are kept as bytes and
/// validated lazily by consumers.
Transcript parse_transcript(std::span<const std::uint8_t> bytes);

/// Structured dump of a session: parameters, broadcasts, and (when supplied)
/// the derived keys.
nlohmann::json session_json(const Transcript& transcript,
                            std::span<const SharedKey> keys = {});

} // namespace nilkex
