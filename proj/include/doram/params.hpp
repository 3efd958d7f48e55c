#pragma once

#include <cmath>

#include "doram/common.hpp"

namespace doram {

enum class HashKind : u8 { Standard = 0, Cuckoo = 1, TwoTier = 2 };

inline const char* hash_kind_name(HashKind k) {
    switch (k) {
        case HashKind::Standard: return "standard";
        case HashKind::Cuckoo: return "cuckoo";
        case HashKind::TwoTier: return "two_tier";
    }
    return "?";
}

// Static sizing of an (n, m, s)-hashing scheme instance.
struct SchemeParams {
    HashKind kind = HashKind::TwoTier;
    u64 n = 0;           // maximum number of stored records
    u32 bucket = 1;      // bucket capacity (standard / per-tier)
    u64 buckets = 0;     // buckets per table (standard) or per tier (two-tier)
    u64 slots = 0;       // total table size m
    u32 c_lookup = 0;    // |Q|, constant per instance
    u32 stash_cap = 0;   // s
    u32 cuckoo_kick_cap = 0;
};

inline u32 standard_bucket_size(u64 N) {
    double lg = std::log2(double(std::max<u64>(N, 4)));
    return u32(std::max(2.0, std::ceil(lg / std::log2(lg))));
}

inline u32 two_tier_bucket_size(u64 N) {
    double lg = std::log2(double(std::max<u64>(N, 4)));
    return u32(std::max(2.0, std::ceil(std::pow(lg, 0.6))));
}

inline SchemeParams make_scheme_params(HashKind kind, u64 n, u64 N, u32 s) {
    SchemeParams p;
    p.kind = kind;
    p.n = n;
    p.stash_cap = s;
    switch (kind) {
        case HashKind::Standard:
            p.bucket = standard_bucket_size(N);
            p.buckets = std::max<u64>(1, div_ceil(4 * n, p.bucket));
            p.slots = p.buckets * p.bucket;
            p.c_lookup = p.bucket;
            break;
        case HashKind::Cuckoo:
            p.slots = std::max<u64>(8, 4 * n);
            if (p.slots % 2) p.slots++;
            p.c_lookup = 2;
            p.cuckoo_kick_cap = 10 * std::max<u32>(1, log2_ceil(std::max<u64>(n, 2)));
            break;
        case HashKind::TwoTier:
            p.bucket = two_tier_bucket_size(N);
            p.buckets = std::max<u64>(1, div_ceil(2 * n, p.bucket));
            p.slots = 2 * p.buckets * p.bucket;
            p.c_lookup = 2 * p.bucket;
            break;
    }
    return p;
}

// Batcher odd-even mergesort comparator count for a power-of-two input.
inline u64 batcher_comparators(u64 P) {
    if (P <= 1) return 0;
    u64 w = log2_ceil(P);
    return P * w * (w - 1) / 4 + P - 1;
}

// Enumerates the comparators of the odd-even mergesort network for P = 2^w in
// a fixed order. The sequence depends only on P.
template <typename F>
inline void batcher_for_each(u64 P, F&& cmp) {
    for (u64 p = 1; p < P; p <<= 1) {
        for (u64 k = p; k >= 1; k >>= 1) {
            for (u64 j = k % p; j + k < P; j += 2 * k) {
                for (u64 i = 0; i < k; i++) {
                    if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) cmp(i + j, i + j + k);
                }
            }
            if (k == 1) break;
        }
    }
}

// Transfer plan of one sort-based oblivious build over n_in items. All sizes
// are functions of (scheme params, n_in) only; the metered run must match.
struct BuildShape {
    u64 n_in = 0;
    u32 tiers = 1;
    u64 fillers[2] = {0, 0};  // one filler per table slot of the tier
    u64 work[2] = {0, 0};     // padded working-array size per tier pass
    u64 placed[2] = {0, 0};   // table slots emitted per tier
    u64 carry_in[2] = {0, 0}; // records entering each tier pass
    u64 tail = 0;             // records entering the stash pass
    u64 tail_work = 0;        // padded stash-pass array size
    u64 stash_cap = 0;
    u64 comparators = 0;
    u64 item_down = 0;        // work-item downloads
    u64 item_up = 0;          // work-item uploads
    u64 emit = 0;             // final pass: emit records, one per output slot

    u64 table_slots() const { return placed[0] + placed[1]; }
    u64 total_items() const { return item_down + item_up + 2 * emit; }
};

inline BuildShape oblivious_build_shape(const SchemeParams& p, u64 n_in) {
    if (p.kind == HashKind::Cuckoo)
        throw BadParameter("no oblivious cuckoo build available");
    BuildShape sh;
    sh.n_in = n_in;
    sh.stash_cap = p.stash_cap;
    sh.tiers = p.kind == HashKind::TwoTier ? 2 : 1;
    u64 carry = n_in;
    for (u32 t = 0; t < sh.tiers; t++) {
        sh.carry_in[t] = carry;
        sh.fillers[t] = p.buckets * p.bucket;
        sh.placed[t] = p.buckets * p.bucket;
        sh.work[t] = next_pow2(carry + sh.fillers[t]);
        // assignment pass: carried items come down, the full padded array
        // (items + fillers + pad) goes up
        sh.item_down += carry;
        sh.item_up += sh.work[t];
        u64 c = batcher_comparators(sh.work[t]);
        sh.comparators += 2 * c;  // sort by bucket, then by destination slot
        sh.item_down += 2 * c * 2;
        sh.item_up += 2 * c * 2;
        sh.item_down += sh.work[t];  // rank pass
        sh.item_up += sh.work[t];
        carry = sh.work[t] - sh.placed[t];
    }
    sh.tail = carry;
    sh.tail_work = next_pow2(std::max<u64>(sh.tail, 1));
    sh.item_down += sh.tail;      // stash classification pass
    sh.item_up += sh.tail_work;   // re-uploaded into a padded array
    u64 c = batcher_comparators(sh.tail_work);
    sh.comparators += c;
    sh.item_down += 2 * c;
    sh.item_up += 2 * c;
    sh.emit = sh.table_slots() + p.stash_cap;
    return sh;
}

// C_Build in item transfers; the theorem formulas consume this.
inline u64 oblivious_build_cost(const SchemeParams& p, u64 n_in) {
    return oblivious_build_shape(p, n_in).total_items();
}

}  // namespace doram
