#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "geometry.hpp"

namespace packing3d {

using json = nlohmann::json;

struct Instance {
    BinSpec bin{};
    std::vector<Item> items;
};

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return parse_rational(j.dump());
    throw ParseError("expected a rational, got " + j.dump());
}

inline json rational_to_json(const Rational& r) { return to_string(r); }

inline const json& require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

inline BinSpec bin_from_json(const json& j) {
    BinSpec b{rational_from_json(require(j, "w")), rational_from_json(require(j, "d")),
              rational_from_json(require(j, "h"))};
    if (b.W <= 0 || b.D <= 0 || b.H <= 0) throw ParseError("bin extents must be positive");
    return b;
}

inline json bin_to_json(const BinSpec& b) {
    return json{{"w", rational_to_json(b.W)}, {"d", rational_to_json(b.D)}, {"h", rational_to_json(b.H)}};
}

inline Instance instance_from_json(const json& j) {
    Instance inst;
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    if (j.contains("bin")) inst.bin = bin_from_json(j.at("bin"));
    const json& arr = require(j, "items");
    if (!arr.is_array()) throw ParseError("'items' must be an array");
    std::size_t n = 0;
    for (const json& e : arr) {
        Item it;
        if (e.contains("id")) {
            const json& id = e.at("id");
            it.id = id.is_string() ? id.get<std::string>() : id.dump();
        } else {
            it.id = "i" + std::to_string(n);
        }
        it.w = rational_from_json(require(e, "w"));
        it.d = rational_from_json(require(e, "d"));
        it.h = rational_from_json(require(e, "h"));
        if (it.w <= 0 || it.d <= 0 || it.h <= 0)
            throw ParseError("item '" + it.id + "' has a non-positive extent");
        inst.items.push_back(std::move(it));
        ++n;
    }
    ItemTable check(inst.items);  // rejects duplicate ids
    return inst;
}

inline json instance_to_json(const Instance& inst) {
    json items = json::array();
    for (const auto& it : inst.items)
        items.push_back({{"id", it.id}, {"w", rational_to_json(it.w)}, {"d", rational_to_json(it.d)},
                         {"h", rational_to_json(it.h)}});
    return json{{"bin", bin_to_json(inst.bin)}, {"items", std::move(items)}};
}

inline json packing_to_json(const Packing& p) {
    json pl = json::array();
    for (const auto& q : p.placements)
        pl.push_back({{"id", q.item_id},
                      {"bin", q.bin},
                      {"x", rational_to_json(q.x)},
                      {"y", rational_to_json(q.y)},
                      {"z", rational_to_json(q.z)},
                      {"orient", q.orient.label()}});
    json out{{"kind", p.kind == PackingKind::bins ? "bins" : "strip"}, {"bin", bin_to_json(p.bin)}};
    if (p.kind == PackingKind::strip) out["strip_axis"] = std::string(1, axis_name(p.strip_axis));
    out["placements"] = std::move(pl);
    return out;
}

inline Packing packing_from_json(const json& j) {
    Packing p;
    if (!j.is_object()) throw ParseError("packing must be a JSON object");
    std::string kind = j.value("kind", std::string("bins"));
    if (kind == "bins") p.kind = PackingKind::bins;
    else if (kind == "strip") p.kind = PackingKind::strip;
    else throw ParseError("unknown packing kind '" + kind + "'");
    if (j.contains("bin")) p.bin = bin_from_json(j.at("bin"));
    if (j.contains("strip_axis")) p.strip_axis = parse_axis(j.at("strip_axis").get<std::string>());
    const json& arr = require(j, "placements");
    if (!arr.is_array()) throw ParseError("'placements' must be an array");
    for (const json& e : arr) {
        Placement q;
        const json& id = require(e, "id");
        q.item_id = id.is_string() ? id.get<std::string>() : id.dump();
        if (e.contains("bin")) {
            long b = e.at("bin").get<long>();
            if (b < 0) throw ParseError("negative bin index");
            q.bin = static_cast<std::size_t>(b);
        }
        q.x = rational_from_json(require(e, "x"));
        q.y = rational_from_json(require(e, "y"));
        q.z = rational_from_json(require(e, "z"));
        if (e.contains("orient")) q.orient = Orientation::parse(e.at("orient").get<std::string>());
        p.placements.push_back(std::move(q));
    }
    return p;
}

inline json verify_report_to_json(const VerifyReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) {
        json w = json::array();
        for (const auto& c : x.witness) w.push_back(rational_to_json(c));
        v.push_back({{"kind", violation_name(x.kind)}, {"items", x.item_ids}, {"witness", std::move(w)}});
    }
    json out{{"feasible", r.feasible},
             {"used_bins", r.used_bins},
             {"total_volume", rational_to_json(r.total_volume)},
             {"violations", std::move(v)}};
    if (r.strip_height) out["strip_height"] = rational_to_json(*r.strip_height);
    return out;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace packing3d
