#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace doram {

using u8 = uint8_t;
using u16 = uint16_t;
using u32 = uint32_t;
using u64 = uint64_t;
using i64 = int64_t;

using Bytes = std::vector<u8>;

// Error taxonomy; every protocol-visible failure is one of these.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct BadParameter : Error { using Error::Error; };
struct BlockTooSmall : Error { using Error::Error; };
struct CounterOverflow : Error { using Error::Error; };
struct AuthFailure : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct BuildFailure : Error { using Error::Error; };
struct DuplicateTag : Error { using Error::Error; };
struct TagMismatch : Error { using Error::Error; };
struct IntegrityFailure : Error { using Error::Error; };
struct ReplicaMismatch : Error { using Error::Error; };
struct InternalNotFound : Error { using Error::Error; };
struct OverlapViolation : Error { using Error::Error; };

inline u64 div_ceil(u64 a, u64 b) { return (a + b - 1) / b; }

inline u64 ipow(u64 base, u32 exp) {
    u64 r = 1;
    while (exp--) r *= base;
    return r;
}

// Smallest w with 2^w >= x (x >= 1).
inline u32 log2_ceil(u64 x) {
    u32 w = 0;
    while ((u64(1) << w) < x) ++w;
    return w;
}

inline u64 next_pow2(u64 x) { return u64(1) << log2_ceil(x < 1 ? 1 : x); }

inline bool is_pow2(u64 x) { return x != 0 && (x & (x - 1)) == 0; }

inline void store_be16(u8* p, u16 v) {
    p[0] = u8(v >> 8);
    p[1] = u8(v);
}
inline void store_be32(u8* p, u32 v) {
    for (int i = 0; i < 4; i++) p[i] = u8(v >> (24 - 8 * i));
}
inline void store_be64(u8* p, u64 v) {
    for (int i = 0; i < 8; i++) p[i] = u8(v >> (56 - 8 * i));
}
inline u16 load_be16(const u8* p) { return u16(p[0]) << 8 | p[1]; }
inline u32 load_be32(const u8* p) {
    u32 v = 0;
    for (int i = 0; i < 4; i++) v = v << 8 | p[i];
    return v;
}
inline u64 load_be64(const u8* p) {
    u64 v = 0;
    for (int i = 0; i < 8; i++) v = v << 8 | p[i];
    return v;
}

inline void append_bytes(Bytes& out, const u8* p, size_t n) { out.insert(out.end(), p, p + n); }
inline void append_bytes(Bytes& out, const Bytes& b) { out.insert(out.end(), b.begin(), b.end()); }

inline void xor_into(u8* dst, const u8* src, size_t n) {
    for (size_t i = 0; i < n; i++) dst[i] ^= src[i];
}
inline void xor_into(Bytes& dst, const Bytes& src) {
    if (dst.size() != src.size()) throw LengthMismatch("xor_into: size mismatch");
    xor_into(dst.data(), src.data(), src.size());
}

}  // namespace doram
