#pragma once

#include "doram/bus.hpp"
#include "doram/hashing.hpp"
#include "doram/header.hpp"
#include "doram/params.hpp"

namespace doram {

// Client view of one server-resident array; every touch is metered.
struct RemoteVec {
    std::vector<Bytes>* data;
    Bus* bus;
    u32 server;
    Phase down_ph = Phase::BuildItemDown;
    Phase up_ph = Phase::BuildItemUp;

    u64 size() const { return data->size(); }
    const Bytes& read(u64 i) const {
        const Bytes& ct = (*data)[i];
        bus->down(server, down_ph, 8 * ct.size(), ct);
        return ct;
    }
    void write(u64 i, Bytes ct) {
        bus->up(server, up_ph, 8 * ct.size(), ct);
        (*data)[i] = std::move(ct);
    }
};

// Batcher odd-even mergesort over a server-resident array of encrypted items.
// The comparator sequence is a fixed function of the array length; the server
// sees only position pairs and fresh ciphertexts.
template <typename Decode, typename Encode, typename Less>
inline void oblivious_sort(RemoteVec arr, Decode&& dec, Encode&& enc, Less&& less) {
    u64 P = arr.size();
    if (!is_pow2(P)) throw BadParameter("oblivious_sort needs the padded power of two");
    batcher_for_each(P, [&](u64 i, u64 j) {
        auto a = dec(arr.read(i));
        auto b = dec(arr.read(j));
        if (less(b, a)) std::swap(a, b);
        arr.write(i, enc(a));
        arr.write(j, enc(b));
    });
}

// Work item circulating through an oblivious build.
struct WorkItem {
    u32 dest = 0;
    u8 cls = 2;  // 0 = real, 1 = filler, 2 = discard
    Header hd;

    static constexpr u32 kReal = 0, kFiller = 1, kDiscard = 2;
    static constexpr u32 kOverflowKey = 0xfffffffe, kDiscardKey = 0xffffffff;

    Bytes encode() const {
        Bytes out(23);
        store_be32(out.data(), dest);
        out[4] = cls;
        out[5] = u8(hd.label.kind);
        store_be64(out.data() + 6, hd.label.value);
        out[14] = hd.up_to_date ? 1 : 0;
        store_be64(out.data() + 15, hd.stamp);
        return out;
    }
    static WorkItem decode(const Bytes& b) {
        if (b.size() != 23) throw IntegrityFailure("work item width");
        WorkItem w;
        w.dest = load_be32(b.data());
        w.cls = b[4];
        w.hd.label.kind = LabelKind(b[5]);
        w.hd.label.value = load_be64(b.data() + 6);
        w.hd.up_to_date = b[14] != 0;
        w.hd.stamp = load_be64(b.data() + 15);
        return w;
    }
};

struct ObliviousBuildResult {
    std::vector<Bytes> table_hdr;  // slots() header ciphertexts, server-side
    std::vector<Bytes> stash_hdr;  // stash_cap header ciphertexts
    u32 sigma = 0;                 // stash occupancy (client-side knowledge)
};

// Sort-based oblivious build over encrypted headers held at one server.
// Pad with one filler per table slot, attach destination buckets in a linear
// pass, sort, cap every bucket at its capacity in a streaming rank pass,
// overflow cascades to the next tier and finally to the stash region.
// The server-visible access pattern depends only on (params, input size).
//
// dedup: de-amortized mode keeps the newest copy (by header stamp) of a label
// and relabels older duplicates as numbered dummy-hash records in place.
// Without dedup a duplicate label is an invariant breach.
//
// Throws BuildFailure when more than stash_cap records overflow the last
// tier; the caller regenerates the key and reruns the whole fixed shape.
class ObliviousBuilder {
  public:
    ObliviousBuilder(Bus& bus, u32 server, const PrfKey& key, Rng& rng,
                     const HeaderCodec& hc, bool dedup, u64* dummy_hash_ctr)
        : bus_(bus), server_(server), key_(key), rng_(rng), hc_(hc), dedup_(dedup),
          dummy_hash_ctr_(dummy_hash_ctr) {}

    ObliviousBuildResult build(const SchemeParams& p, const HashKey& hkey,
                               std::vector<Bytes>& input_hdr_cts) {
        BuildShape sh = oblivious_build_shape(p, input_hdr_cts.size());
        std::vector<std::vector<Bytes>> W(sh.tiers + 1);

        for (u32 t = 0; t < sh.tiers; t++) {
            W[t].assign(sh.work[t], Bytes{});
            RemoteVec wv = work_vec(&W[t]);
            u64 idx = 0;
            // assignment: carried items down, full padded array up
            for (u64 i = 0; i < sh.carry_in[t]; i++) {
                WorkItem w;
                if (t == 0) {
                    Bytes hdr_ct = input_hdr_cts[i];
                    bus_.down(server_, Phase::BuildItemDown, 8 * hdr_ct.size(), hdr_ct);
                    w.hd = hc_.decode(decrypt(key_, hdr_ct));
                    w.cls = WorkItem::kReal;
                } else {
                    w = open(prev_spill_->read(sh.placed[t - 1] + i));
                }
                if (w.cls == WorkItem::kReal) {
                    auto lb = w.hd.label.encode();
                    const auto& hk = t == 0 ? hkey.k0 : hkey.k1;
                    w.dest = u32(hash_to_range(hk, lb.data(), lb.size(), p.buckets));
                } else {
                    w.cls = WorkItem::kDiscard;
                    w.dest = WorkItem::kDiscardKey;
                }
                wv.write(idx++, seal(w));
            }
            for (u64 b = 0; b < p.buckets; b++)
                for (u32 r = 0; r < p.bucket; r++)
                    wv.write(idx++, seal(WorkItem{u32(b), WorkItem::kFiller, Header{}}));
            while (idx < sh.work[t])
                wv.write(idx++, seal(WorkItem{WorkItem::kDiscardKey, WorkItem::kDiscard,
                                              Header{}}));

            sort_items(wv, [](const WorkItem& a, const WorkItem& b) {
                if (a.dest != b.dest) return a.dest < b.dest;
                if (a.cls != b.cls) return a.cls < b.cls;
                if (a.hd.label != b.hd.label) return a.hd.label < b.hd.label;
                return a.hd.stamp > b.hd.stamp;
            });
            rank_pass(wv, p.bucket, sh.placed[t]);
            sort_items(wv, [](const WorkItem& a, const WorkItem& b) { return a.dest < b.dest; });
            prev_spill_.emplace(work_vec(&W[t]));
        }

        // stash pass over the spill of the last tier
        u32 sigma = 0;
        W[sh.tiers].assign(sh.tail_work, Bytes{});
        RemoteVec sv = work_vec(&W[sh.tiers]);
        for (u64 i = 0; i < sh.tail; i++) {
            WorkItem w = open(prev_spill_->read(sh.placed[sh.tiers - 1] + i));
            if (w.cls == WorkItem::kReal) {
                w.dest = 0;
                sigma++;
            } else {
                w.cls = WorkItem::kDiscard;
                w.dest = 1;
            }
            sv.write(i, seal(w));
        }
        for (u64 i = sh.tail; i < sh.tail_work; i++)
            sv.write(i, seal(WorkItem{1, WorkItem::kDiscard, Header{}}));
        if (sigma > p.stash_cap) throw BuildFailure("oblivious build: stash overflow");
        sort_items(sv, [](const WorkItem& a, const WorkItem& b) { return a.dest < b.dest; });

        // emit: fixed linear pass converting work items into stored headers
        ObliviousBuildResult out;
        out.sigma = sigma;
        out.table_hdr.reserve(sh.table_slots());
        for (u32 t = 0; t < sh.tiers; t++) {
            RemoteVec wv = work_vec(&W[t]);
            for (u64 i = 0; i < sh.placed[t]; i++) out.table_hdr.push_back(emit(wv, i));
        }
        for (u64 i = 0; i < p.stash_cap; i++) out.stash_hdr.push_back(emit(sv, i));
        return out;
    }

  private:
    RemoteVec work_vec(std::vector<Bytes>* v) {
        return RemoteVec{v, &bus_, server_, Phase::BuildItemDown, Phase::BuildItemUp};
    }
    Bytes seal(const WorkItem& w) { return encrypt(key_, w.encode(), rng_); }
    WorkItem open(const Bytes& ct) { return WorkItem::decode(decrypt(key_, ct)); }

    template <typename Less>
    void sort_items(RemoteVec v, Less&& less) {
        oblivious_sort(
            v, [&](const Bytes& ct) { return open(ct); },
            [&](const WorkItem& w) { return seal(w); }, less);
    }

    // Cap each bucket at `cap`; first cap entries get their slot id, real
    // overflow sorts behind the slots, filler overflow is discarded.
    void rank_pass(RemoteVec v, u32 cap, u64 placed) {
        u32 cur = WorkItem::kDiscardKey;
        u32 cnt = 0;
        bool have_prev = false;
        Label prev{};
        for (u64 i = 0; i < v.size(); i++) {
            WorkItem w = open(v.read(i));
            if (w.cls == WorkItem::kDiscard) {
                w.dest = WorkItem::kDiscardKey;
            } else {
                if (w.dest != cur) {
                    cur = w.dest;
                    cnt = 0;
                    have_prev = false;
                }
                if (w.cls == WorkItem::kReal) {
                    if (have_prev && prev == w.hd.label) {
                        if (!dedup_)
                            throw DuplicateTag("duplicate label in oblivious build");
                        w.hd.label = Label::dummy_hash((*dummy_hash_ctr_)++);
                        w.hd.up_to_date = false;
                    } else {
                        prev = w.hd.label;
                        have_prev = true;
                    }
                }
                if (cnt < cap) {
                    w.dest = u32(u64(cur) * cap + cnt);
                    cnt++;
                } else {
                    w.dest = w.cls == WorkItem::kReal ? WorkItem::kOverflowKey
                                                      : WorkItem::kDiscardKey;
                    if (w.cls != WorkItem::kReal) w.cls = WorkItem::kDiscard;
                }
            }
            v.write(i, seal(w));
        }
        (void)placed;
    }

    Bytes emit(RemoteVec v, u64 i) {
        WorkItem w = open(v.read(i));
        Header hd = w.cls == WorkItem::kReal ? w.hd : Header{Label::empty(), false, 0};
        Bytes ct = encrypt(key_, hc_.encode(hd), rng_);
        bus_.up(server_, Phase::BuildEmitUp, 8 * ct.size(), ct);
        return ct;
    }

    Bus& bus_;
    u32 server_;
    const PrfKey& key_;
    Rng& rng_;
    HeaderCodec hc_;
    bool dedup_;
    u64* dummy_hash_ctr_;
    std::optional<RemoteVec> prev_spill_;
};

}  // namespace doram
