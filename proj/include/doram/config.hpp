#pragma once

#include <optional>

#include <json.hpp>

#include "doram/common.hpp"
#include "doram/dpf.hpp"
#include "doram/params.hpp"

namespace doram {

enum class SchemeKind : u8 {
    SingleServerBaseline,
    FourServer,
    ThreeServer,
    MServer,
    DeamortizedTwoServer,
};

inline const char* scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::SingleServerBaseline: return "single_server_baseline";
        case SchemeKind::FourServer: return "four_server";
        case SchemeKind::ThreeServer: return "three_server";
        case SchemeKind::MServer: return "m_server";
        case SchemeKind::DeamortizedTwoServer: return "deamortized_two_server";
    }
    return "?";
}

inline std::optional<SchemeKind> scheme_from_name(const std::string& s) {
    for (SchemeKind k :
         {SchemeKind::SingleServerBaseline, SchemeKind::FourServer, SchemeKind::ThreeServer,
          SchemeKind::MServer, SchemeKind::DeamortizedTwoServer})
        if (s == scheme_name(k)) return k;
    return std::nullopt;
}

// Per-level hashing selection. instantiation2 = standard hashing at the first
// ceil(log_d log2 N) levels, cuckoo with stash below; two_tier everywhere is
// the oblivious-friendly default.
enum class HashingProfile : u8 { Instantiation2, TwoTier, Standard, Cuckoo };

inline const char* hashing_profile_name(HashingProfile p) {
    switch (p) {
        case HashingProfile::Instantiation2: return "instantiation2";
        case HashingProfile::TwoTier: return "two_tier";
        case HashingProfile::Standard: return "standard";
        case HashingProfile::Cuckoo: return "cuckoo";
    }
    return "?";
}

struct Config {
    u64 N = 0;        // block count
    u32 B = 0;        // block payload size in bits
    u32 d = 2;        // hierarchy branching factor
    u32 k = 0;        // top-level capacity (0 = default L)
    u32 s = 0;        // stash capacity (0 = default ceil(log2 N))
    u32 L = 0;        // level count (0 = derive)
    u32 lambda = 128; // security parameter in bits
    SchemeKind scheme = SchemeKind::SingleServerBaseline;
    u32 m = 0;        // server count for m_server
    u64 seed = 0;
    double c = 1.0;   // constant in the block-size floors
    HashingProfile hashing = HashingProfile::TwoTier;
    bool hashing_set = false;
    bool epochs_remote = false;
    bool fixed_reshuffler = false;

    u32 counter_width = 64;

    bool hierarchical() const {
        return scheme != SchemeKind::FourServer;
    }
    u32 num_servers() const {
        switch (scheme) {
            case SchemeKind::SingleServerBaseline: return 1;
            case SchemeKind::FourServer: return 4;
            case SchemeKind::ThreeServer: return 3;
            case SchemeKind::MServer: return m;
            case SchemeKind::DeamortizedTwoServer: return 2;
        }
        return 0;
    }
    u32 header_bits() const {
        u32 h = 2 + std::max(log2_ceil(N), counter_width) + 1;
        if (scheme == SchemeKind::DeamortizedTwoServer) h += 64;  // write stamp
        return h;
    }
    // Capacity of one level-i hash table, i in [1, L].
    u64 level_capacity(u32 i) const { return ipow(d, i - 1) * (u64(k) + s); }

    HashKind level_hash_kind(u32 i) const {
        switch (hashing) {
            case HashingProfile::TwoTier: return HashKind::TwoTier;
            case HashingProfile::Standard: return HashKind::Standard;
            case HashingProfile::Cuckoo: return HashKind::Cuckoo;
            case HashingProfile::Instantiation2: {
                u32 cutoff = std::max<u32>(1, u32(div_ceil(log2_ceil(log2_ceil(N) + 1),
                                                           std::max<u32>(1, log2_ceil(d)))));
                return i <= cutoff ? HashKind::Standard : HashKind::Cuckoo;
            }
        }
        return HashKind::TwoTier;
    }

    SchemeParams level_params(u32 i) const {
        return make_scheme_params(level_hash_kind(i), level_capacity(i), N, s);
    }

    // alpha = max_i C_Lookup(H_i)
    u32 alpha() const {
        u32 a = 0;
        for (u32 i = 1; i <= L; i++) a = std::max(a, level_params(i).c_lookup);
        return a;
    }
    // beta = max_i C_Build(H_i) / (d^{i-1} k), in header-item transfers
    double beta() const {
        double b = 0;
        for (u32 i = 1; i <= L; i++) {
            SchemeParams p = level_params(i);
            b = std::max(b, double(oblivious_build_cost(p, p.n)) /
                                (double(ipow(d, i - 1)) * k));
        }
        return b;
    }
};

// Checks invariants, populates derived fields, returns the completed config.
inline Config validate_config(Config cfg) {
    if (cfg.N < 2) throw BadParameter("N must be at least 2");
    if (cfg.d < 2) throw BadParameter("d must be at least 2");
    if (cfg.lambda < 128 || cfg.lambda > 512 || cfg.lambda % 8)
        throw BadParameter("lambda must be a multiple of 8 in [128, 512]");
    if (cfg.c <= 0) throw BadParameter("c must be positive");

    u32 L = 1;
    while (ipow(cfg.d, L) < cfg.N) ++L;
    if (cfg.L == 0) cfg.L = L;
    if (cfg.L != L) throw BadParameter("L must equal ceil(log_d N) = " + std::to_string(L));
    if (cfg.k == 0) cfg.k = cfg.L;
    if (cfg.s == 0) cfg.s = log2_ceil(cfg.N);
    if (cfg.k < 1 || cfg.s < 1) throw BadParameter("k and s must be at least 1");

    switch (cfg.scheme) {
        case SchemeKind::MServer:
            if (cfg.m < 2) throw BadParameter("m_server requires m >= 2");
            break;
        case SchemeKind::DeamortizedTwoServer:
            if (cfg.m && cfg.m != 2) throw BadParameter("deamortized_two_server fixes m = 2");
            cfg.m = 2;
            break;
        default:
            if (cfg.m) throw BadParameter("m is only meaningful for m_server");
            break;
    }
    if (!cfg.hashing_set) {
        cfg.hashing = cfg.scheme == SchemeKind::ThreeServer ? HashingProfile::Instantiation2
                                                            : HashingProfile::TwoTier;
        cfg.hashing_set = true;
    }

    if (cfg.hierarchical()) {
        // Oblivious builds exist for standard and two-tier hashing only.
        bool oblivious_builds = cfg.scheme != SchemeKind::ThreeServer;
        if (oblivious_builds)
            for (u32 i = 1; i <= cfg.L; i++)
                if (cfg.level_hash_kind(i) == HashKind::Cuckoo)
                    throw BadParameter("cuckoo hashing has no oblivious build; "
                                       "this scheme needs two_tier or standard");
        if (cfg.level_capacity(cfg.L) < cfg.N)
            throw BadParameter("bottom level too small: need k + s >= N / d^(L-1)");
    }

    double lgN = double(log2_ceil(cfg.N));
    double lgd = double(log2_ceil(cfg.d));
    auto require_B = [&](double floor_bits, const std::string& bound) {
        double want = cfg.c * floor_bits;
        if (double(cfg.B) < want)
            throw BlockTooSmall("B = " + std::to_string(cfg.B) + " bits is below the " +
                                bound + " floor of " + std::to_string(u64(want)) + " bits");
    };
    switch (cfg.scheme) {
        case SchemeKind::ThreeServer:
            require_B(double(cfg.alpha()) * cfg.d * lgN + double(cfg.s) * lgd,
                      "alpha*d*log2(N) + s*log2(d)");
            break;
        case SchemeKind::MServer:
        case SchemeKind::DeamortizedTwoServer:
            require_B(cfg.beta() * lgN + double(cfg.alpha()) * cfg.d * lgN,
                      "beta*log2(N) + alpha*d*log2(N)");
            break;
        case SchemeKind::FourServer:
            require_B(double(dpf_share_bits(log2_ceil(cfg.N), 1, cfg.lambda)),
                      "Lambda(log2(N), 1)");
            break;
        case SchemeKind::SingleServerBaseline:
            require_B(lgN, "log2(N)");
            break;
    }
    if (cfg.B % 8) throw BadParameter("B must be a multiple of 8 bits");
    return cfg;
}

// Config is loadable from a JSON document with exactly these field names;
// unknown fields are an error.
inline Config config_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "N", "B", "d", "k", "s", "L", "lambda", "scheme", "m", "seed",
        "c", "hashing", "epochs_remote", "fixed_reshuffler"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw BadParameter("unknown config field: " + it.key());

    Config cfg;
    auto need = [&](const char* f) {
        if (!j.contains(f)) throw BadParameter(std::string("missing config field: ") + f);
    };
    for (const char* f : {"N", "B", "d", "scheme"}) need(f);
    cfg.N = j.at("N").get<u64>();
    cfg.B = j.at("B").get<u32>();
    cfg.d = j.at("d").get<u32>();
    if (j.contains("k")) cfg.k = j.at("k").get<u32>();
    if (j.contains("s")) cfg.s = j.at("s").get<u32>();
    if (j.contains("L")) cfg.L = j.at("L").get<u32>();
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<u32>();
    auto sk = scheme_from_name(j.at("scheme").get<std::string>());
    if (!sk) throw BadParameter("unknown scheme: " + j.at("scheme").get<std::string>());
    cfg.scheme = *sk;
    if (j.contains("m")) cfg.m = j.at("m").get<u32>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<u64>();
    if (j.contains("c")) cfg.c = j.at("c").get<double>();
    if (j.contains("hashing")) {
        std::string h = j.at("hashing").get<std::string>();
        bool ok = false;
        for (HashingProfile p : {HashingProfile::Instantiation2, HashingProfile::TwoTier,
                                 HashingProfile::Standard, HashingProfile::Cuckoo})
            if (h == hashing_profile_name(p)) {
                cfg.hashing = p;
                cfg.hashing_set = ok = true;
            }
        if (!ok) throw BadParameter("unknown hashing profile: " + h);
    }
    if (j.contains("epochs_remote")) cfg.epochs_remote = j.at("epochs_remote").get<bool>();
    if (j.contains("fixed_reshuffler"))
        cfg.fixed_reshuffler = j.at("fixed_reshuffler").get<bool>();
    return validate_config(cfg);
}

inline nlohmann::json config_to_json(const Config& cfg) {
    nlohmann::json j;
    j["N"] = cfg.N;
    j["B"] = cfg.B;
    j["d"] = cfg.d;
    j["k"] = cfg.k;
    j["s"] = cfg.s;
    j["L"] = cfg.L;
    j["lambda"] = cfg.lambda;
    j["scheme"] = scheme_name(cfg.scheme);
    if (cfg.scheme == SchemeKind::MServer) j["m"] = cfg.m;
    j["seed"] = cfg.seed;
    j["c"] = cfg.c;
    j["hashing"] = hashing_profile_name(cfg.hashing);
    j["epochs_remote"] = cfg.epochs_remote;
    j["fixed_reshuffler"] = cfg.fixed_reshuffler;
    return j;
}

}  // namespace doram
