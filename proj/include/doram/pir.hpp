#pragma once

#include "doram/common.hpp"
#include "doram/dpf.hpp"
#include "doram/rng.hpp"

namespace doram {

// One party's additive share of a unit vector e_i, as a packed bit vector.
struct SelectionShare {
    u32 n = 0;
    Bytes bits;  // ceil(n/8) bytes, big-endian bit order

    bool get(u32 i) const { return (bits[i / 8] >> (7 - i % 8)) & 1; }
    void flip(u32 i) { bits[i / 8] ^= u8(0x80 >> (i % 8)); }
    size_t wire_bits() const { return n; }
};

inline std::pair<SelectionShare, SelectionShare> pir2_query(Rng& rng, u64 i, u32 n) {
    if (i >= n) throw IndexOutOfRange("pir2_query index");
    SelectionShare a{n, Bytes(div_ceil(n, 8), 0)}, b{n, Bytes(div_ceil(n, 8), 0)};
    rng.fill(a.bits.data(), a.bits.size());
    if (n % 8) a.bits.back() &= u8(0xff << (8 - n % 8));
    b.bits = a.bits;
    b.flip(u32(i));
    return {std::move(a), std::move(b)};
}

// Inner product over GF(2): XOR of the selected entries.
template <typename GetBlock>
inline Bytes pir_answer_fn(u32 n, size_t block_bytes, const SelectionShare& q,
                           GetBlock&& get) {
    if (q.n != n) throw LengthMismatch("pir share length != array length");
    Bytes acc(block_bytes, 0);
    for (u32 j = 0; j < n; j++)
        if (q.get(j)) {
            const Bytes& blk = get(j);
            if (blk.size() != block_bytes) throw LengthMismatch("pir block width");
            xor_into(acc, blk);
        }
    return acc;
}

inline Bytes pir2_answer(const std::vector<Bytes>& X, const SelectionShare& q) {
    size_t bb = X.empty() ? 0 : X[0].size();
    return pir_answer_fn(u32(X.size()), bb, q, [&](u32 j) -> const Bytes& { return X[j]; });
}

// m-server generalization: m shares XORing to e_i; any m-1 jointly uniform.
inline std::vector<SelectionShare> pirm_query(Rng& rng, u64 i, u32 n, u32 m) {
    if (m < 2) throw BadParameter("pirm needs m >= 2");
    if (i >= n) throw IndexOutOfRange("pirm_query index");
    std::vector<SelectionShare> shares(m);
    Bytes acc(div_ceil(n, 8), 0);
    for (u32 p = 0; p + 1 < m; p++) {
        shares[p] = {n, Bytes(div_ceil(n, 8), 0)};
        rng.fill(shares[p].bits.data(), shares[p].bits.size());
        if (n % 8) shares[p].bits.back() &= u8(0xff << (8 - n % 8));
        xor_into(acc, shares[p].bits);
    }
    shares[m - 1] = {n, std::move(acc)};
    shares[m - 1].flip(u32(i));
    return shares;
}

// PIR-write share: a DPF encoding of delta * e_i over an n-entry array.
struct WriteShare {
    DpfShare dpf;
    u32 n = 0;  // logical array length (dpf domain is the padded power of two)
};

inline std::pair<WriteShare, WriteShare> pirw_gen(Rng& rng, u64 i, const Bytes& delta,
                                                  u32 n, u32 lambda = 128) {
    if (i >= n) throw IndexOutOfRange("pirw_gen index");
    u32 nbits = log2_ceil(n);
    auto [d0, d1] = dpf_gen(rng, i, delta, nbits, u32(delta.size() * 8), lambda);
    return {WriteShare{std::move(d0), n}, WriteShare{std::move(d1), n}};
}

// Xshare[j] ^= full_eval(w)[j] for all j; deterministic in the share.
inline void pirw_apply(std::vector<Bytes>& Xshare, const WriteShare& w) {
    if (Xshare.size() != w.n) throw LengthMismatch("pirw_apply array length");
    dpf_full_eval_visit(w.dpf, [&](u64 j, Bytes v) {
        if (j < w.n) xor_into(Xshare[j], v);
    });
}

// DPF-based PIR read over a replicated array: per-server work is linear, the
// upload is one DpfShare of Lambda(log n, 1) bits.
inline Bytes dpf_pir_answer(const std::vector<Bytes>& X, const DpfShare& share) {
    size_t bb = X.empty() ? 0 : X[0].size();
    Bytes acc(bb, 0);
    dpf_full_eval_visit(share, [&](u64 j, Bytes v) {
        if (j < X.size() && (v[0] & 0x80)) xor_into(acc, X[j]);
    });
    return acc;
}

inline std::pair<DpfShare, DpfShare> dpf_pir_query(Rng& rng, u64 i, u32 n,
                                                   u32 lambda = 128) {
    if (i >= n) throw IndexOutOfRange("dpf_pir_query index");
    Bytes one{0x80};  // the single selected bit, big-endian bit order
    return dpf_gen(rng, i, one, log2_ceil(n), 1, lambda);
}

// Wire encoding of a PIR query: protocol id byte, n as 32-bit, then the share
// bits or the serialized DpfShare.
enum class PirProto : u8 { Xor = 1, Dpf = 2 };

inline Bytes pir_wire_encode(const SelectionShare& s) {
    Bytes out(5);
    out[0] = u8(PirProto::Xor);
    store_be32(out.data() + 1, s.n);
    append_bytes(out, s.bits);
    return out;
}

inline Bytes pir_wire_encode(const DpfShare& s, u32 n) {
    Bytes out(5);
    out[0] = u8(PirProto::Dpf);
    store_be32(out.data() + 1, n);
    append_bytes(out, s.serialize());
    return out;
}

}  // namespace doram
