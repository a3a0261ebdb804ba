#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "selfsim/system.hpp"

namespace selfsim {

using json = nlohmann::json;

// IFS spec file: { "maps": [ { "ratio": r, "angle": {"num": n, "den": d},
// "irrational_angle": null, "reflect": false, "w": [x, y] }, ... ] }
// Exactly one of "angle" / "irrational_angle" per map; rational denominators
// are capped at 10^6.
std::vector<Similitude> parse_spec(const json& doc);
std::vector<Similitude> load_spec_file(const std::string& path);
json spec_to_json(const std::vector<Similitude>& maps);

json word_to_json(const Word& w);
Word word_from_json(const json& j);

// Canonical serialization: sorted keys, floats printed with 17 significant
// digits, no insignificant whitespace. parse(dump(x)) == x.
std::string canonical_dump(const json& doc);

std::string sha256_hex(const std::string& data);

}  // namespace selfsim
