#pragma once

#include <sodium.h>

#include <algorithm>
#include <array>

#include "doram/common.hpp"

namespace doram {

inline void crypto_init() {
    static const int rc = sodium_init();
    if (rc < 0) throw Error("libsodium init failed");
}

// Deterministic RNG: a ChaCha20 keystream addressed by (key, stream id).
// Everything random in a run flows from the config seed through forks of
// this, so a fixed seed reproduces transcripts bit for bit.
class Rng {
  public:
    Rng() : Rng(0) {}

    explicit Rng(u64 seed) {
        crypto_init();
        key_.fill(0);
        store_be64(key_.data(), seed);
        nonce_.fill(0);
    }

    // Independent child stream; children with distinct labels never overlap.
    Rng fork(u64 domain, u64 idx = 0) const {
        Rng child;
        u8 in[16];
        store_be64(in, domain);
        store_be64(in + 8, idx);
        crypto_generichash(child.key_.data(), child.key_.size(), in, sizeof in,
                           key_.data(), key_.size());
        return child;
    }

    void fill(u8* out, size_t n) {
        size_t done = 0;
        while (done < n) {
            if (pos_ == buf_.size()) refill();
            size_t take = std::min(n - done, buf_.size() - pos_);
            std::memcpy(out + done, buf_.data() + pos_, take);
            pos_ += take;
            done += take;
        }
    }

    Bytes bytes(size_t n) {
        Bytes out(n);
        fill(out.data(), n);
        return out;
    }

    u64 next_u64() {
        u8 b[8];
        fill(b, 8);
        return load_be64(b);
    }

    // Uniform in [0, n) by rejection sampling.
    u64 uniform(u64 n) {
        if (n == 0) throw BadParameter("uniform(0)");
        if (n == 1) return 0;
        u64 mask = ~u64(0) >> (64 - log2_ceil(n));
        while (true) {
            u64 v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    bool coin() { return next_u64() & 1; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; i--) std::swap(v[i - 1], v[uniform(i)]);
    }

    std::vector<u32> permutation(u32 n) {
        std::vector<u32> p(n);
        for (u32 i = 0; i < n; i++) p[i] = i;
        shuffle(p);
        return p;
    }

  private:
    void refill() {
        std::memset(buf_.data(), 0, buf_.size());
        crypto_stream_chacha20_xor_ic(buf_.data(), buf_.data(), buf_.size(),
                                      nonce_.data(), block_ * (buf_.size() / 64),
                                      key_.data());
        block_++;
        pos_ = 0;
    }

    std::array<u8, crypto_stream_chacha20_KEYBYTES> key_;
    std::array<u8, crypto_stream_chacha20_NONCEBYTES> nonce_;
    std::array<u8, 512> buf_;
    size_t pos_ = buf_.size();
    u64 block_ = 0;
};

}  // namespace doram
