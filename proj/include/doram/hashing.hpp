#pragma once

#include <unordered_set>

#include "doram/common.hpp"
#include "doram/crypto.hpp"
#include "doram/params.hpp"
#include "doram/rng.hpp"

namespace doram {

// Runtime key of a hashing scheme instance. Cuckoo and two-tier use both
// sub-keys, standard hashing only the first. Fixed serialized width.
struct HashKey {
    HashKind kind = HashKind::Standard;
    std::array<u8, 16> k0{}, k1{};

    static HashKey gen(Rng& rng, HashKind kind) {
        HashKey k;
        k.kind = kind;
        rng.fill(k.k0.data(), k.k0.size());
        rng.fill(k.k1.data(), k.k1.size());
        return k;
    }

    Bytes serialize() const {
        Bytes out{u8(kind)};
        append_bytes(out, k0.data(), k0.size());
        append_bytes(out, k1.data(), k1.size());
        return out;
    }
};

inline u64 hash_to_range(const std::array<u8, 16>& key, const u8* in, size_t len,
                         u64 range) {
    u8 out[8];
    crypto_generichash(out, sizeof out, in, len, key.data(), key.size());
    return load_be64(out) % range;
}

// Q <- H.Lookup(tau, k): the candidate slot set, |Q| = C_Lookup exactly.
inline std::vector<u32> lookup_positions(const SchemeParams& p, const HashKey& key,
                                         const Bytes& lk) {
    std::vector<u32> q;
    q.reserve(p.c_lookup);
    switch (p.kind) {
        case HashKind::Standard: {
            u64 b = hash_to_range(key.k0, lk.data(), lk.size(), p.buckets);
            for (u32 i = 0; i < p.bucket; i++) q.push_back(u32(b * p.bucket + i));
            break;
        }
        case HashKind::Cuckoo: {
            u64 half = p.slots / 2;
            q.push_back(u32(hash_to_range(key.k0, lk.data(), lk.size(), half)));
            q.push_back(u32(half + hash_to_range(key.k1, lk.data(), lk.size(), half)));
            break;
        }
        case HashKind::TwoTier: {
            u64 tier = p.buckets * p.bucket;
            u64 b0 = hash_to_range(key.k0, lk.data(), lk.size(), p.buckets);
            u64 b1 = hash_to_range(key.k1, lk.data(), lk.size(), p.buckets);
            for (u32 i = 0; i < p.bucket; i++) q.push_back(u32(b0 * p.bucket + i));
            for (u32 i = 0; i < p.bucket; i++) q.push_back(u32(tier + b1 * p.bucket + i));
            break;
        }
    }
    return q;
}

// Non-oblivious build: item -> slot (in [0, slots)) or stash seat encoded as
// slots + stash_index. Placement respects lookup_positions.
struct BuildPlacement {
    std::vector<u64> pos;
    u32 stash_used = 0;
};

inline BuildPlacement build_placement(const SchemeParams& p, const HashKey& key,
                                      const std::vector<Bytes>& keys) {
    if (keys.size() > p.n) throw BuildFailure("build over capacity");
    {
        std::unordered_set<std::string> seen;
        for (const auto& k : keys)
            if (!seen.emplace(reinterpret_cast<const char*>(k.data()), k.size()).second)
                throw DuplicateTag("duplicate lookup key in build input");
    }

    BuildPlacement out;
    out.pos.assign(keys.size(), ~u64(0));
    std::vector<i64> slot_of(p.slots, -1);
    u32 stash = 0;

    auto to_stash = [&](size_t item) {
        if (stash >= p.stash_cap) throw BuildFailure("stash overflow during build");
        out.pos[item] = p.slots + stash;
        stash++;
    };

    if (p.kind == HashKind::Cuckoo) {
        u64 half = p.slots / 2;
        for (size_t it = 0; it < keys.size(); it++) {
            u64 cur = it;
            u64 target = hash_to_range(key.k0, keys[cur].data(), keys[cur].size(), half);
            bool placed = false;
            for (u32 kick = 0; kick <= p.cuckoo_kick_cap; kick++) {
                if (slot_of[target] < 0) {
                    slot_of[target] = i64(cur);
                    out.pos[cur] = target;
                    placed = true;
                    break;
                }
                u64 evicted = u64(slot_of[target]);
                slot_of[target] = i64(cur);
                out.pos[cur] = target;
                cur = evicted;
                // the evicted item moves to its other nest
                u64 h0 = hash_to_range(key.k0, keys[cur].data(), keys[cur].size(), half);
                u64 h1 = half + hash_to_range(key.k1, keys[cur].data(), keys[cur].size(), half);
                target = (out.pos[cur] == h0) ? h1 : h0;
            }
            if (!placed) to_stash(cur);
        }
    } else {
        for (size_t it = 0; it < keys.size(); it++) {
            bool placed = false;
            for (u32 pos : lookup_positions(p, key, keys[it])) {
                if (slot_of[pos] < 0) {
                    slot_of[pos] = i64(it);
                    out.pos[it] = pos;
                    placed = true;
                    break;
                }
            }
            if (!placed) to_stash(it);
        }
    }
    out.stash_used = stash;
    return out;
}

// Retry cap for key regeneration after BuildFailure; the failure probability
// is negligible, a cap turns pathology into a crash with diagnostics.
constexpr u32 kBuildRetryCap = 32;

template <typename BuildFn>
inline auto build_with_retries(Rng& keyrng, HashKind kind, BuildFn&& attempt) {
    for (u32 r = 0; r < kBuildRetryCap; r++) {
        HashKey key = HashKey::gen(keyrng, kind);
        try {
            return attempt(key, r);
        } catch (const BuildFailure&) {
            continue;
        }
    }
    throw BuildFailure("build failed " + std::to_string(kBuildRetryCap) +
                       " times; parameters are off");
}

}  // namespace doram
