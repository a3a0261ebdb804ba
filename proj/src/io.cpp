#include "selfsim/io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "selfsim/error.hpp"

namespace selfsim {

std::vector<Similitude> parse_spec(const json& doc) {
    if (!doc.is_object() || !doc.contains("maps") || !doc["maps"].is_array())
        throw Error("spec", "spec must be an object with a \"maps\" array");
    std::vector<Similitude> maps;
    for (const auto& m : doc["maps"]) {
        if (!m.contains("ratio")) throw Error("spec", "map missing \"ratio\"");
        double ratio = m["ratio"].get<double>();
        bool has_rational = m.contains("angle") && !m["angle"].is_null();
        bool has_irrational = m.contains("irrational_angle") && !m["irrational_angle"].is_null();
        if (has_rational == has_irrational)
            throw Error("spec", "exactly one of \"angle\" / \"irrational_angle\" per map");
        IsometryType iso;
        if (has_rational) {
            const auto& a = m["angle"];
            std::int64_t num = a.at("num").get<std::int64_t>();
            std::int64_t den = a.at("den").get<std::int64_t>();
            if (den < 1 || den > 1'000'000)
                throw Error("spec", "angle denominator must lie in [1, 10^6]");
            iso.angle = Angle::rational_turns(num, den);
        } else {
            iso.angle = Angle::irrational_turns(m["irrational_angle"].get<double>());
        }
        iso.reflect = m.value("reflect", false);
        if (!m.contains("w") || !m["w"].is_array() || m["w"].size() != 2)
            throw Error("spec", "map missing translation \"w\": [x, y]");
        Vec2 w{m["w"][0].get<double>(), m["w"][1].get<double>()};
        maps.push_back(Similitude::create(ratio, iso, w));
    }
    if (maps.empty()) throw Error("spec", "spec has no maps");
    return maps;
}

std::vector<Similitude> load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("spec", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error("spec", "invalid JSON in " + path + ": " + e.what());
    }
    return parse_spec(doc);
}

json spec_to_json(const std::vector<Similitude>& maps) {
    json arr = json::array();
    for (const auto& m : maps) {
        json j;
        j["ratio"] = m.ratio;
        if (m.iso.angle.rational) {
            j["angle"] = {{"num", m.iso.angle.num}, {"den", m.iso.angle.den}};
            j["irrational_angle"] = nullptr;
        } else {
            j["angle"] = nullptr;
            j["irrational_angle"] = m.iso.angle.irrational_value;
        }
        j["reflect"] = m.iso.reflect;
        j["w"] = {m.w.x, m.w.y};
        arr.push_back(std::move(j));
    }
    return json{{"maps", std::move(arr)}};
}

json word_to_json(const Word& w) {
    json arr = json::array();
    for (auto i : w) arr.push_back(i);
    return arr;
}

Word word_from_json(const json& j) {
    Word w;
    for (const auto& v : j) w.push_back(v.get<std::uint32_t>());
    return w;
}

namespace {

void dump_rec(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate sorted
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_rec(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump_rec(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string canonical_dump(const json& doc) {
    std::string out;
    dump_rec(doc, out);
    return out;
}

// ---- SHA-256 ----------------------------------------------------------

namespace {

constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline std::uint32_t rotr(std::uint32_t v, int n) { return (v >> n) | (v << (32 - n)); }

}  // namespace

std::string sha256_hex(const std::string& data) {
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::string msg = data;
    std::uint64_t bitlen = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>((bitlen >> (8 * i)) & 0xff));

    for (std::size_t off = 0; off < msg.size(); off += 64) {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i) {
            w[i] = (static_cast<std::uint8_t>(msg[off + 4 * i]) << 24) |
                   (static_cast<std::uint8_t>(msg[off + 4 * i + 1]) << 16) |
                   (static_cast<std::uint8_t>(msg[off + 4 * i + 2]) << 8) |
                   static_cast<std::uint8_t>(msg[off + 4 * i + 3]);
        }
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto [a, b, c, d, e, f, g, hh] = h;
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = hh + s1 + ch + kSha256K[static_cast<std::size_t>(i)] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
    std::string hex;
    hex.reserve(64);
    for (std::uint32_t v : h) {
        char buf[9];
        std::snprintf(buf, sizeof buf, "%08x", v);
        hex += buf;
    }
    return hex;
}

}  // namespace selfsim
