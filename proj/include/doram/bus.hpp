#pragma once

#include <unordered_set>

#include "doram/common.hpp"
#include "doram/crypto.hpp"

namespace doram {

// Message phase labels; one fixed enumeration shared by all schemes.
enum class Phase : u8 {
    Setup,
    TopDown,
    TopUp,
    StashHdrDown,
    StashHdrUp,
    PirQuery,
    PirAnswer,
    LookupHdrDown,
    LookupHdrUp,
    EpochFetch,
    EpochStore,
    // four-server
    ReadQuery,
    ReadAnswer,
    WriteQuery,
    // reshuffles (three-server chain, m-server matching, baseline)
    GatherDown,
    GatherUp,
    TagUp,
    SigmaKeyDown,
    TableDown,
    TableUp,
    HdrBackDown,
    HdrBackUp,
    BuildItemDown,
    BuildItemUp,
    BuildEmitUp,
    TagStreamDown,
    TagStreamUp,
    PoolUp,
    MatchDown,
    MatchUp,
    InstallDown,
    InstallUp,
    // de-amortization
    StateDown,
    StateUp,
    PatchDown,
    PatchUp,
};

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Setup: return "setup";
        case Phase::TopDown: return "top_down";
        case Phase::TopUp: return "top_up";
        case Phase::StashHdrDown: return "stash_hdr_down";
        case Phase::StashHdrUp: return "stash_hdr_up";
        case Phase::PirQuery: return "pir_query";
        case Phase::PirAnswer: return "pir_answer";
        case Phase::LookupHdrDown: return "lookup_hdr_down";
        case Phase::LookupHdrUp: return "lookup_hdr_up";
        case Phase::EpochFetch: return "epoch_fetch";
        case Phase::EpochStore: return "epoch_store";
        case Phase::ReadQuery: return "read_query";
        case Phase::ReadAnswer: return "read_answer";
        case Phase::WriteQuery: return "write_query";
        case Phase::GatherDown: return "gather_down";
        case Phase::GatherUp: return "gather_up";
        case Phase::TagUp: return "tag_up";
        case Phase::SigmaKeyDown: return "sigma_key_down";
        case Phase::TableDown: return "table_down";
        case Phase::TableUp: return "table_up";
        case Phase::HdrBackDown: return "hdr_back_down";
        case Phase::HdrBackUp: return "hdr_back_up";
        case Phase::BuildItemDown: return "build_item_down";
        case Phase::BuildItemUp: return "build_item_up";
        case Phase::BuildEmitUp: return "build_emit_up";
        case Phase::TagStreamDown: return "tag_stream_down";
        case Phase::TagStreamUp: return "tag_stream_up";
        case Phase::PoolUp: return "pool_up";
        case Phase::MatchDown: return "match_down";
        case Phase::MatchUp: return "match_up";
        case Phase::InstallDown: return "install_down";
        case Phase::InstallUp: return "install_up";
        case Phase::StateDown: return "state_down";
        case Phase::StateUp: return "state_up";
        case Phase::PatchDown: return "patch_down";
        case Phase::PatchUp: return "patch_up";
    }
    return "?";
}

enum class Dir : u8 { Up, Down };  // Up = client -> server

// One transcript line; consecutive identical messages are run-length merged.
struct TranscriptEntry {
    Dir dir;
    Phase phase;
    u64 bits;
    u32 count = 1;
    int level = -1;
    int table = -1;
    i64 epoch = -1;
    std::vector<u32> positions;  // revealed slot positions, lookups only

    bool mergeable_with(const TranscriptEntry& o) const {
        return dir == o.dir && phase == o.phase && bits == o.bits && level == o.level &&
               table == o.table && epoch == o.epoch && positions.empty() &&
               o.positions.empty();
    }
    bool same_shape(const TranscriptEntry& o) const {
        return dir == o.dir && phase == o.phase && bits == o.bits && count == o.count &&
               level == o.level && table == o.table && epoch == o.epoch;
    }
};

// The adversary's view of one server: time-ordered message log plus the
// stale-ciphertext incidents detected while logging.
struct Transcript {
    std::vector<TranscriptEntry> entries;
    u64 messages = 0;
    u64 reuse_incidents = 0;

    void add(TranscriptEntry e) {
        messages += e.count;
        if (!entries.empty() && entries.back().mergeable_with(e)) {
            entries.back().count += e.count;
        } else {
            entries.push_back(std::move(e));
        }
    }
};

struct BandwidthReport {
    u64 setup_bits = 0;
    std::vector<u64> up_bits, down_bits;      // per server, post-setup
    std::vector<u64> access_up, access_down;  // per access
    u32 B = 0;

    u64 total_bits() const {
        u64 t = 0;
        for (u64 v : up_bits) t += v;
        for (u64 v : down_bits) t += v;
        return t;
    }
    // overhead = blowup in information bits exchanged vs ell plain accesses
    double amortized_overhead() const {
        if (access_up.empty() || B == 0) return 0;
        return double(total_bits()) / (double(access_up.size()) * B);
    }
    u64 access_bits(size_t i) const { return access_up[i] + access_down[i]; }
    u64 max_access_bits() const {
        u64 mx = 0;
        for (size_t i = 0; i < access_up.size(); i++) mx = std::max(mx, access_bits(i));
        return mx;
    }
};

struct MsgCtx {
    int level = -1;
    int table = -1;
    i64 epoch = -1;
    std::vector<u32> positions;
};

// Deterministic in-process message bus with exact bit metering. Every byte a
// scheme moves between client and a server is logged here.
class Bus {
  public:
    Bus(u32 num_servers, u32 B)
        : transcripts_(num_servers), report_{} {
        report_.up_bits.assign(num_servers, 0);
        report_.down_bits.assign(num_servers, 0);
        report_.B = B;
        crypto_init();
        std::memset(hash_key_, 0, sizeof hash_key_);
    }

    void set_setup(bool on) { in_setup_ = on; }
    void begin_access() {
        report_.access_up.push_back(0);
        report_.access_down.push_back(0);
    }

    void up(u32 server, Phase ph, u64 bits, const Bytes& payload, MsgCtx ctx = {}) {
        log(server, Dir::Up, ph, bits, &payload, std::move(ctx));
    }
    void up(u32 server, Phase ph, u64 bits, MsgCtx ctx = {}) {
        log(server, Dir::Up, ph, bits, nullptr, std::move(ctx));
    }
    void down(u32 server, Phase ph, u64 bits, const Bytes& payload, MsgCtx ctx = {}) {
        log(server, Dir::Down, ph, bits, &payload, std::move(ctx));
    }
    void down(u32 server, Phase ph, u64 bits, MsgCtx ctx = {}) {
        log(server, Dir::Down, ph, bits, nullptr, std::move(ctx));
    }

    const std::vector<Transcript>& transcripts() const { return transcripts_; }
    std::vector<Transcript>& transcripts() { return transcripts_; }
    const BandwidthReport& report() const { return report_; }
    u32 num_servers() const { return u32(transcripts_.size()); }

  private:
    void log(u32 server, Dir dir, Phase ph, u64 bits, const Bytes* payload, MsgCtx ctx) {
        if (in_setup_) {
            report_.setup_bits += bits;
        } else {
            (dir == Dir::Up ? report_.up_bits : report_.down_bits)[server] += bits;
            if (!report_.access_up.empty())
                (dir == Dir::Up ? report_.access_up : report_.access_down).back() += bits;
        }
        // stale-ciphertext detector: a client->server payload byte-identical
        // to an earlier server->client one means re-encryption was skipped
        if (payload && payload->size() >= 24) {
            u64 fp = fingerprint(*payload);
            if (dir == Dir::Down) {
                seen_down_.insert(fp);
            } else if (seen_down_.count(fp)) {
                transcripts_[server].reuse_incidents++;
            }
        }
        TranscriptEntry e{dir, ph, bits, 1, ctx.level, ctx.table, ctx.epoch,
                          std::move(ctx.positions)};
        transcripts_[server].add(std::move(e));
    }

    u64 fingerprint(const Bytes& b) const {
        u8 out[crypto_shorthash_BYTES];
        crypto_shorthash(out, b.data(), b.size(), hash_key_);
        return load_be64(out);
    }

    std::vector<Transcript> transcripts_;
    BandwidthReport report_;
    std::unordered_set<u64> seen_down_;
    u8 hash_key_[crypto_shorthash_KEYBYTES];
    bool in_setup_ = false;
};

}  // namespace doram
