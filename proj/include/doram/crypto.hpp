#pragma once

#include <sodium.h>

#include <array>

#include "doram/common.hpp"
#include "doram/rng.hpp"

namespace doram {

// Client-held symmetric secrets. Never serialized into server-bound messages.
struct PrfKey {
    std::array<u8, 32> bytes{};

    static PrfKey generate(Rng& rng) {
        PrfKey k;
        rng.fill(k.bytes.data(), k.bytes.size());
        return k;
    }
};

using Tag = Bytes;  // lambda-bit PRF output, compared for exact equality

// Lookup/tagging labels. Stored headers use kinds 0..3; DummyLookup is a
// query-only label and can never collide with a stored one.
enum class LabelKind : u8 {
    Real = 0,
    DummyHash = 1,
    DummyStash = 2,
    Empty = 3,
    DummyLookup = 4,
};

struct Label {
    LabelKind kind = LabelKind::Empty;
    u64 value = 0;

    static Label real(u64 v) { return {LabelKind::Real, v}; }
    static Label dummy_hash(u64 c) { return {LabelKind::DummyHash, c}; }
    static Label dummy_stash(u64 c) { return {LabelKind::DummyStash, c}; }
    static Label empty(u64 z = 0) { return {LabelKind::Empty, z}; }
    static Label dummy_lookup(u64 t) { return {LabelKind::DummyLookup, t}; }

    bool is_real() const { return kind == LabelKind::Real; }
    bool is_empty() const { return kind == LabelKind::Empty; }

    std::array<u8, 9> encode() const {
        std::array<u8, 9> out;
        out[0] = u8(kind);
        store_be64(out.data() + 1, value);
        return out;
    }

    bool operator==(const Label&) const = default;
    auto operator<=>(const Label&) const = default;
};

// tau <- F_s(i, j, e, label); deterministic, lambda-bit output.
inline Tag prf_tag(const PrfKey& key, u32 level, u32 table, u64 epoch,
                   const Label& label, u32 lambda_bits) {
    u32 out_len = lambda_bits / 8;
    if (out_len < crypto_generichash_BYTES_MIN || out_len > crypto_generichash_BYTES_MAX)
        throw BadParameter("prf_tag: unsupported lambda");
    u8 msg[4 + 4 + 8 + 9];
    store_be32(msg, level);
    store_be32(msg + 4, table);
    store_be64(msg + 8, epoch);
    auto lb = label.encode();
    std::memcpy(msg + 16, lb.data(), lb.size());
    Tag out(out_len);
    crypto_generichash(out.data(), out.size(), msg, sizeof msg, key.bytes.data(),
                       key.bytes.size());
    return out;
}

// Randomized authenticated encryption with a fixed ciphertext expansion.
constexpr size_t kEncOverhead =
    crypto_aead_xchacha20poly1305_ietf_NPUBBYTES + crypto_aead_xchacha20poly1305_ietf_ABYTES;

inline size_t enc_len(size_t plaintext_len) { return plaintext_len + kEncOverhead; }

inline Bytes encrypt(const PrfKey& key, const u8* pt, size_t pt_len, Rng& rng) {
    Bytes out(enc_len(pt_len));
    rng.fill(out.data(), crypto_aead_xchacha20poly1305_ietf_NPUBBYTES);
    unsigned long long clen = 0;
    crypto_aead_xchacha20poly1305_ietf_encrypt(
        out.data() + crypto_aead_xchacha20poly1305_ietf_NPUBBYTES, &clen, pt, pt_len,
        nullptr, 0, nullptr, out.data(), key.bytes.data());
    return out;
}

inline Bytes encrypt(const PrfKey& key, const Bytes& pt, Rng& rng) {
    return encrypt(key, pt.data(), pt.size(), rng);
}

inline Bytes decrypt(const PrfKey& key, const Bytes& ct) {
    if (ct.size() < kEncOverhead) throw AuthFailure("ciphertext too short");
    Bytes out(ct.size() - kEncOverhead);
    unsigned long long mlen = 0;
    int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
        out.data(), &mlen, nullptr, ct.data() + crypto_aead_xchacha20poly1305_ietf_NPUBBYTES,
        ct.size() - crypto_aead_xchacha20poly1305_ietf_NPUBBYTES, nullptr, 0, ct.data(),
        key.bytes.data());
    if (rc != 0) throw AuthFailure("ciphertext authentication failed");
    return out;
}

inline Bytes reencrypt(const PrfKey& key, const Bytes& ct, Rng& rng) {
    return encrypt(key, decrypt(key, ct), rng);
}

// PRG: expand a lambda-bit seed into out_len pseudorandom bytes.
inline void prg_expand(const u8* seed, size_t seed_len, u8* out, size_t out_len) {
    u8 k[crypto_stream_chacha20_KEYBYTES] = {0};
    if (seed_len > sizeof k) throw BadParameter("prg seed too long");
    std::memcpy(k, seed, seed_len);
    static const u8 nonce[crypto_stream_chacha20_NONCEBYTES] = {0};
    crypto_stream_chacha20(out, out_len, nonce, k);
}

}  // namespace doram
