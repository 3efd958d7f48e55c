#pragma once

#include "doram/common.hpp"
#include "doram/config.hpp"

namespace doram {

// Reshuffle scheduling of the balanced hierarchy: counting in base d. In
// round t = t'*k, levels 0..i are reshuffled into hash table T^j_{i+1}, where
// i is the maximal integer with d^i | t' and j = (t' mod d^{i+1}) / d^i.
struct ReshuffleTarget {
    u32 dest_level;  // i + 1; dest_level > L addresses the bottom archive
    u32 dest_table;  // j in [1, d-1]
};

inline std::optional<ReshuffleTarget> reshuffle_target(u64 t, u32 k, u32 d) {
    if (t == 0 || t % k) return std::nullopt;
    u64 tp = t / k;
    u32 i = 0;
    while (tp % ipow(d, i + 1) == 0) ++i;
    u64 j = (tp % ipow(d, i + 1)) / ipow(d, i);
    return ReshuffleTarget{i + 1, u32(j)};
}

// r <- floor((t' mod d^i) / d^{i-1}): the number of full tables at level i,
// i.e. the i-th base-d digit of t'. Queries scan tables j = r down to 1.
inline u32 tables_to_scan(u64 t, u32 i, u32 k, u32 d) {
    u64 tp = t / k;
    return u32((tp % ipow(d, i)) / ipow(d, i - 1));
}

// The fullness oracle behind Claim 2: at every multiple of k, the first r^t_i
// tables of level i are full and the rest are empty; the top level is empty
// right after the reshuffle. The bottom archive (holding the initial data,
// rebuilt at every wrap of the base-d counter) is always full.
struct FullnessState {
    u64 top_records = 0;
    std::vector<u32> full_tables;  // per level 1..L
    bool archive_full = true;
};

inline FullnessState expected_fullness(u64 t, const Config& cfg) {
    FullnessState st;
    st.top_records = (t % cfg.k);
    if (t % cfg.k == 0 && t > 0) st.top_records = 0;  // empty right after reshuffle
    st.full_tables.resize(cfg.L + 1, 0);
    for (u32 i = 1; i <= cfg.L; i++) st.full_tables[i] = tables_to_scan(t, i, cfg.k, cfg.d);
    return st;
}

// Level replica assignment of the three-server scheme: the top level (and
// stash) live at all three servers, level i at the pair below, and the third
// server is the one that reshuffles into it.
struct LevelHolders {
    std::vector<u32> holders;
    u32 reshuffler = 0;  // meaningful only when holders.size() == 2
};

inline LevelHolders three_server_assignment(u32 level) {
    if (level == 0) return {{0, 1, 2}, 0};
    switch (level % 3) {
        case 0: return {{0, 1}, 2};
        case 1: return {{1, 2}, 0};
        default: return {{2, 0}, 1};
    }
}

}  // namespace doram
