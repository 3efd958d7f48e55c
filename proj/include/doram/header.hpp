#pragma once

#include "doram/common.hpp"
#include "doram/crypto.hpp"

namespace doram {

// Plaintext block header: identity label plus the up-to-date flag used by the
// de-amortized scheme and a write-stamp that orders duplicate copies there.
struct Header {
    Label label;
    bool up_to_date = false;
    u64 stamp = 0;

    bool is_empty() const { return label.is_empty(); }
    bool is_real() const { return label.is_real(); }
};

// Bit-exact fixed-width header codec. Every encoded header is exactly
//   h = 2 + max(ceil(log2 N), counter_width) + 1
// bits regardless of kind, so header length leaks nothing. The stamp is an
// extra fixed-width field appended in stamped mode only.
class HeaderCodec {
  public:
    HeaderCodec() = default;
    HeaderCodec(u64 N, u32 counter_width = 64, bool stamped = false)
        : value_bits_(std::max(log2_ceil(N), counter_width)), stamped_(stamped) {}

    u32 header_bits() const { return 2 + value_bits_ + 1 + (stamped_ ? 64 : 0); }
    u32 header_bytes() const { return u32(div_ceil(header_bits(), 8)); }
    u32 value_bits() const { return value_bits_; }

    Bytes encode(const Header& hd) const {
        if (u8(hd.label.kind) > 3)
            throw BadParameter("stored headers cannot carry lookup-only labels");
        if (value_bits_ < 64 && hd.label.value >> value_bits_)
            throw CounterOverflow("header counter exceeds " + std::to_string(value_bits_) +
                                  " bits");
        Bytes out(header_bytes(), 0);
        BitWriter w(out);
        w.put(u8(hd.label.kind), 2);
        w.put(hd.up_to_date ? 1 : 0, 1);
        w.put(hd.label.value, value_bits_);
        if (stamped_) w.put(hd.stamp, 64);
        return out;
    }

    Header decode(const Bytes& bits) const {
        if (bits.size() != header_bytes()) throw LengthMismatch("bad header width");
        BitReader r(bits);
        Header hd;
        hd.label.kind = LabelKind(r.get(2));
        hd.up_to_date = r.get(1) != 0;
        hd.label.value = r.get(value_bits_);
        hd.stamp = stamped_ ? r.get(64) : 0;
        return hd;
    }

  private:
    struct BitWriter {
        Bytes& out;
        size_t bit = 0;
        explicit BitWriter(Bytes& o) : out(o) {}
        void put(u64 v, u32 n) {
            for (u32 i = 0; i < n; i++) {
                if ((v >> (n - 1 - i)) & 1) out[bit / 8] |= u8(0x80 >> (bit % 8));
                bit++;
            }
        }
    };
    struct BitReader {
        const Bytes& in;
        size_t bit = 0;
        explicit BitReader(const Bytes& i) : in(i) {}
        u64 get(u32 n) {
            u64 v = 0;
            for (u32 i = 0; i < n; i++) {
                v = v << 1 | ((in[bit / 8] >> (7 - bit % 8)) & 1);
                bit++;
            }
            return v;
        }
    };

    u32 value_bits_ = 64;
    bool stamped_ = false;
};

// A plaintext record is header || payload, always exactly h + B bits.
struct Record {
    Header header;
    Bytes payload;
};

// Server-side representation: header and payload encrypted separately so the
// protocols can move headers without touching payloads. Total width is a
// fixed function of (h, B).
struct EncRecord {
    Bytes hdr_ct;
    Bytes pay_ct;

    size_t bits() const { return 8 * (hdr_ct.size() + pay_ct.size()); }
};

class RecordCodec {
  public:
    RecordCodec() = default;
    RecordCodec(const HeaderCodec& hc, u32 payload_bits)
        : hc_(hc), payload_bytes_(u32(div_ceil(payload_bits, 8))) {}

    const HeaderCodec& header_codec() const { return hc_; }
    u32 payload_bytes() const { return payload_bytes_; }
    size_t hdr_ct_len() const { return enc_len(hc_.header_bytes()); }
    size_t pay_ct_len() const { return enc_len(payload_bytes_); }
    size_t record_bits() const { return 8 * (hdr_ct_len() + pay_ct_len()); }

    EncRecord seal(const PrfKey& key, const Record& rec, Rng& rng) const {
        if (rec.payload.size() != payload_bytes_)
            throw LengthMismatch("payload width mismatch");
        return {encrypt(key, hc_.encode(rec.header), rng), encrypt(key, rec.payload, rng)};
    }

    EncRecord seal(const PrfKey& key, const Header& hd, const Bytes& payload, Rng& rng) const {
        return seal(key, Record{hd, payload}, rng);
    }

    Record open(const PrfKey& key, const EncRecord& er) const {
        Record rec;
        rec.header = hc_.decode(decrypt(key, er.hdr_ct));
        rec.payload = decrypt(key, er.pay_ct);
        if (rec.payload.size() != payload_bytes_) throw IntegrityFailure("payload width");
        return rec;
    }

    Header open_header(const PrfKey& key, const Bytes& hdr_ct) const {
        return hc_.decode(decrypt(key, hdr_ct));
    }

    Bytes seal_header(const PrfKey& key, const Header& hd, Rng& rng) const {
        return encrypt(key, hc_.encode(hd), rng);
    }

  private:
    HeaderCodec hc_;
    u32 payload_bytes_ = 0;
};

}  // namespace doram
