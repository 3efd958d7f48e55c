#pragma once

#include <map>
#include <set>
#include <unordered_set>

#include "doram/common.hpp"
#include "doram/crypto.hpp"

namespace doram {

// Deliberately breakable safeguards for mutation testing (test builds only).
struct Mutations {
    bool no_dummy_sub = false;   // keep looking up the real address once found
    bool no_stash_pad = false;   // skip dummy-stash padding during reshuffles
    bool no_reencrypt = false;   // forward ciphertexts without re-encrypting

    bool any() const { return no_dummy_sub || no_stash_pad || no_reencrypt; }
};

inline std::optional<Mutations> mutation_from_name(const std::string& name) {
    Mutations m;
    if (name == "none") return m;
    if (name == "no_dummy_sub") m.no_dummy_sub = true;
    else if (name == "no_stash_pad") m.no_stash_pad = true;
    else if (name == "no_reencrypt") m.no_reencrypt = true;
    else return std::nullopt;
    return m;
}

struct AuditViolation {
    std::string check;
    std::string detail;
};

// Test-mode call logs and plaintext-state findings. Claims 1-3, 5, the tag
// corollaries and the de-amortized claims all report through here.
struct TestAudit {
    bool enabled = false;

    std::vector<AuditViolation> violations;
    u64 prf_calls = 0;
    u64 real_lookups = 0;

    void violation(const std::string& check, const std::string& detail) {
        if (violations.size() < 64) violations.push_back({check, detail});
        ++violation_count;
    }
    u64 violation_count = 0;

    // zero repeated PRF-tag inputs, per call-site context
    void log_prf(const char* ctx, u32 level, u32 table, u64 epoch, const Label& lb) {
        if (!enabled) return;
        prf_calls++;
        std::string k = std::string(ctx) + "|" + prf_key(level, table, epoch, lb);
        if (!prf_inputs.insert(std::move(k)).second)
            violation("prf_unique",
                      std::string(ctx) + " tag input repeated at level " +
                          std::to_string(level) + " table " + std::to_string(table));
    }

    // zero repeated real lookups per (level, table, epoch)
    void log_real_lookup(u32 level, u32 table, u64 epoch, const Label& lb) {
        if (!enabled) return;
        real_lookups++;
        if (!lookup_inputs.insert(prf_key(level, table, epoch, lb)).second)
            violation("lookup_unique", "address " + std::to_string(lb.value) +
                                           " looked up twice in table (" +
                                           std::to_string(level) + "," +
                                           std::to_string(table) + ") same epoch");
    }

    bool clean() const { return violation_count == 0; }

  private:
    static std::string prf_key(u32 level, u32 table, u64 epoch, const Label& lb) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%u|%u|%llu|%u|%llu", level, table,
                      (unsigned long long)epoch, unsigned(lb.kind),
                      (unsigned long long)lb.value);
        return buf;
    }

    std::unordered_set<std::string> prf_inputs;
    std::unordered_set<std::string> lookup_inputs;
};

// Hooks threaded through a run: audits, mutations, forced server permutations
// (for the matching-uniformity statistical test).
struct TestHooks {
    TestAudit audit;
    Mutations mutate;
    std::set<u32> identity_perm_servers;

    bool force_identity(u32 server) const { return identity_perm_servers.count(server); }
};

}  // namespace doram
