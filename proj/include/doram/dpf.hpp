#pragma once

#include "doram/common.hpp"
#include "doram/crypto.hpp"
#include "doram/rng.hpp"

namespace doram {

// Two-party distributed point function for P_{a,b}: {0,1}^n -> {0,1}^m over
// XOR. The standard binary-tree construction: one lambda-bit seed per party,
// n correction words of (lambda + 2) bits, one m-bit output correction.
// Which half a share is is carried in the low bit of its root seed.
struct DpfShare {
    u16 n = 0;        // domain bit-length
    u16 m_bits = 0;   // output bit-length
    u32 lambda = 128; // seed length in bits

    Bytes root_seed;                  // lambda bits
    std::vector<Bytes> seed_corr;     // n entries, lambda bits each
    std::vector<u8> advice_left;      // n entries, 1 bit each
    std::vector<u8> advice_right;     // n entries, 1 bit each
    Bytes final_corr;                 // m bits

    size_t out_bytes() const { return div_ceil(m_bits, 8); }

    // Wire format: n, m as 16-bit big-endian, root seed, correction seeds in
    // level order, packed advice bit pairs, final correction.
    Bytes serialize() const {
        Bytes out(4);
        store_be16(out.data(), n);
        store_be16(out.data() + 2, m_bits);
        append_bytes(out, root_seed);
        for (const auto& c : seed_corr) append_bytes(out, c);
        Bytes advice(div_ceil(2 * size_t(n), 8), 0);
        for (u16 i = 0; i < n; i++) {
            if (advice_left[i]) advice[(2 * i) / 8] |= u8(0x80 >> ((2 * i) % 8));
            if (advice_right[i]) advice[(2 * i + 1) / 8] |= u8(0x80 >> ((2 * i + 1) % 8));
        }
        append_bytes(out, advice);
        append_bytes(out, final_corr);
        return out;
    }

    static DpfShare deserialize(const Bytes& in, u32 lambda = 128) {
        DpfShare s;
        s.lambda = lambda;
        size_t sb = lambda / 8;
        if (in.size() < 4) throw LengthMismatch("dpf share truncated");
        s.n = load_be16(in.data());
        s.m_bits = load_be16(in.data() + 2);
        size_t advice_len = div_ceil(2 * size_t(s.n), 8);
        size_t want = 4 + sb * (1 + s.n) + advice_len + div_ceil(s.m_bits, 8);
        if (in.size() != want) throw LengthMismatch("dpf share length");
        size_t off = 4;
        s.root_seed.assign(in.begin() + off, in.begin() + off + sb);
        off += sb;
        s.seed_corr.resize(s.n);
        for (u16 i = 0; i < s.n; i++) {
            s.seed_corr[i].assign(in.begin() + off, in.begin() + off + sb);
            off += sb;
        }
        s.advice_left.resize(s.n);
        s.advice_right.resize(s.n);
        for (u16 i = 0; i < s.n; i++) {
            s.advice_left[i] = (in[off + (2 * i) / 8] >> (7 - (2 * i) % 8)) & 1;
            s.advice_right[i] = (in[off + (2 * i + 1) / 8] >> (7 - (2 * i + 1) % 8)) & 1;
        }
        off += advice_len;
        s.final_corr.assign(in.begin() + off, in.end());
        return s;
    }
};

// Serialized share size in bits, a function of (n, m, lambda) only.
inline u64 dpf_share_bits(u32 n, u32 m_bits, u32 lambda = 128) {
    return 8 * (4 + (lambda / 8) * (1 + u64(n)) + div_ceil(2 * u64(n), 8) +
                div_ceil(m_bits, 8));
}

namespace detail {

struct DpfNode {
    Bytes seed;
    u8 t;
};

// G(seed) -> (seed_left, t_left, seed_right, t_right)
inline void dpf_expand(const Bytes& seed, DpfNode& left, DpfNode& right) {
    size_t sb = seed.size();
    Bytes buf(2 * sb + 1);
    prg_expand(seed.data(), sb, buf.data(), buf.size());
    left.seed.assign(buf.begin(), buf.begin() + sb);
    right.seed.assign(buf.begin() + sb, buf.begin() + 2 * sb);
    left.t = buf[2 * sb] & 1;
    right.t = (buf[2 * sb] >> 1) & 1;
}

// Truncate-or-expand a leaf seed to m bits.
inline Bytes dpf_convert(const Bytes& seed, u32 m_bits) {
    size_t mb = div_ceil(m_bits, 8);
    Bytes out(mb, 0);
    if (mb <= seed.size()) {
        std::memcpy(out.data(), seed.data(), mb);
    } else {
        prg_expand(seed.data(), seed.size(), out.data(), mb);
    }
    if (m_bits % 8) out[mb - 1] &= u8(0xff << (8 - m_bits % 8));
    return out;
}

inline void dpf_apply_corr(const DpfShare& sh, u16 level, u8 t, DpfNode& left,
                           DpfNode& right) {
    if (t) {
        xor_into(left.seed, sh.seed_corr[level]);
        xor_into(right.seed, sh.seed_corr[level]);
        left.t ^= sh.advice_left[level];
        right.t ^= sh.advice_right[level];
    }
}

}  // namespace detail

// Generate shares of P_{a,b}. b is given as an m-bit value (big-endian packed,
// spare low bits of the last byte must be zero).
inline std::pair<DpfShare, DpfShare> dpf_gen(Rng& rng, u64 a, const Bytes& b,
                                             u32 n, u32 m_bits, u32 lambda = 128) {
    using namespace detail;
    if (n > 63 || (n < 63 && a >> n)) throw IndexOutOfRange("dpf point outside domain");
    if (b.size() != div_ceil(m_bits, 8)) throw LengthMismatch("dpf value width");
    size_t sb = lambda / 8;

    DpfShare s0, s1;
    for (DpfShare* s : {&s0, &s1}) {
        s->n = u16(n);
        s->m_bits = u16(m_bits);
        s->lambda = lambda;
        s->seed_corr.resize(n);
        s->advice_left.resize(n);
        s->advice_right.resize(n);
    }
    s0.root_seed = rng.bytes(sb);
    s1.root_seed = rng.bytes(sb);
    s0.root_seed[sb - 1] &= 0xfe;  // party bit rides in the seed's low bit
    s1.root_seed[sb - 1] |= 0x01;

    Bytes seed0 = s0.root_seed, seed1 = s1.root_seed;
    u8 t0 = 0, t1 = 1;
    for (u16 lvl = 0; lvl < n; lvl++) {
        DpfNode l0, r0, l1, r1;
        dpf_expand(seed0, l0, r0);
        dpf_expand(seed1, l1, r1);
        u8 bit = (a >> (n - 1 - lvl)) & 1;
        const DpfNode& lose0 = bit ? l0 : r0;
        const DpfNode& lose1 = bit ? l1 : r1;

        Bytes scw = lose0.seed;
        xor_into(scw, lose1.seed);
        u8 tlcw = l0.t ^ l1.t ^ bit ^ 1;
        u8 trcw = r0.t ^ r1.t ^ bit;
        for (DpfShare* s : {&s0, &s1}) {
            s->seed_corr[lvl] = scw;
            s->advice_left[lvl] = tlcw;
            s->advice_right[lvl] = trcw;
        }

        const DpfNode& keep0 = bit ? r0 : l0;
        const DpfNode& keep1 = bit ? r1 : l1;
        u8 tkcw = bit ? trcw : tlcw;
        seed0 = keep0.seed;
        seed1 = keep1.seed;
        if (t0) xor_into(seed0, scw);
        if (t1) xor_into(seed1, scw);
        u8 nt0 = keep0.t ^ (t0 & tkcw);
        u8 nt1 = keep1.t ^ (t1 & tkcw);
        t0 = nt0;
        t1 = nt1;
    }

    Bytes fc = detail::dpf_convert(seed0, m_bits);
    xor_into(fc, detail::dpf_convert(seed1, m_bits));
    xor_into(fc, b);
    s0.final_corr = fc;
    s1.final_corr = fc;
    return {std::move(s0), std::move(s1)};
}

// Point evaluation: O(n) PRG expansions.
inline Bytes dpf_eval(const DpfShare& sh, u64 x) {
    using namespace detail;
    if (sh.n < 63 && (x >> sh.n)) throw IndexOutOfRange("dpf eval outside domain");
    Bytes seed = sh.root_seed;
    u8 t = seed.back() & 1;
    for (u16 lvl = 0; lvl < sh.n; lvl++) {
        DpfNode l, r;
        dpf_expand(seed, l, r);
        dpf_apply_corr(sh, lvl, t, l, r);
        const DpfNode& next = ((x >> (sh.n - 1 - lvl)) & 1) ? r : l;
        seed = next.seed;
        t = next.t;
    }
    Bytes out = dpf_convert(seed, sh.m_bits);
    if (t) xor_into(out, sh.final_corr);
    return out;
}

// Full-domain evaluation with subtree reuse: O(2^n) PRG expansions total.
// Visits leaves in index order.
template <typename F>
inline void dpf_full_eval_visit(const DpfShare& sh, F&& leaf_fn) {
    using namespace detail;
    struct Frame {
        Bytes seed;
        u8 t;
        u16 depth;
    };
    std::vector<Frame> stack;
    stack.push_back({sh.root_seed, u8(sh.root_seed.back() & 1), 0});
    u64 next_leaf = 0;
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.depth == sh.n) {
            Bytes out = dpf_convert(f.seed, sh.m_bits);
            if (f.t) xor_into(out, sh.final_corr);
            leaf_fn(next_leaf++, out);
            continue;
        }
        DpfNode l, r;
        dpf_expand(f.seed, l, r);
        dpf_apply_corr(sh, f.depth, f.t, l, r);
        stack.push_back({std::move(r.seed), r.t, u16(f.depth + 1)});
        stack.push_back({std::move(l.seed), l.t, u16(f.depth + 1)});
    }
}

inline std::vector<Bytes> dpf_full_eval(const DpfShare& sh) {
    std::vector<Bytes> out;
    out.reserve(size_t(1) << sh.n);
    dpf_full_eval_visit(sh, [&](u64, Bytes v) { out.push_back(std::move(v)); });
    return out;
}

}  // namespace doram
