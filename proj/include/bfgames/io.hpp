#pragma once

// Canonical file formats. A structure is one JSON object with fields
// `size`, `relations` (symbol -> {arity, tuples}), optional `point` and
// `signature_flags` ({identity, transition}). A forest structure extends it
// with `parent`, `flavor`, and optionally `bound`, `pebbles`, `pebbling`.
// Serialisation is canonical: sorted keys, sorted tuples, compact layout;
// parse/serialize round-trips bit-exactly.

#include <string>

#include <json.hpp>

#include "forest.hpp"
#include "structures.hpp"

namespace bfg {

namespace detail {

inline Structure structure_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw error("malformed structure text: expected an object");
    Structure m;
    if (!j.contains("size") || !j["size"].is_number_integer())
        throw error("malformed structure text: missing integer size");
    m.size = j["size"].get<int>();

    Signature sig;
    if (j.contains("relations")) {
        if (!j["relations"].is_object()) throw error("malformed structure text: relations must be an object");
        for (auto it = j["relations"].begin(); it != j["relations"].end(); ++it) {
            const auto& spec = it.value();
            if (!spec.contains("arity") || !spec["arity"].is_number_integer())
                throw error("malformed structure text: relation " + it.key() + " needs an arity");
            sig.relations.push_back({it.key(), spec["arity"].get<int>()});
        }
    }
    if (j.contains("signature_flags")) {
        const auto& flags = j["signature_flags"];
        if (flags.contains("identity")) sig.identity = flags["identity"].get<std::string>();
        if (flags.contains("transition")) {
            sig.transition = flags["transition"].get<std::string>();
            sig.modal = true;
        }
    }
    sig.normalize();
    m.sig = sig;
    m.tables.resize(sig.relations.size());
    if (j.contains("relations")) {
        for (auto it = j["relations"].begin(); it != j["relations"].end(); ++it) {
            int r = sig.index_of(it.key());
            const auto& spec = it.value();
            if (spec.contains("tuples")) {
                if (!spec["tuples"].is_array())
                    throw error("malformed structure text: tuples of " + it.key() + " must be an array");
                for (const auto& t : spec["tuples"]) {
                    Tuple tuple;
                    for (const auto& e : t) {
                        if (!e.is_number_integer()) throw error("malformed structure text: non-integer element");
                        tuple.push_back(e.get<int>());
                    }
                    if (static_cast<int>(tuple.size()) != sig.relations[static_cast<std::size_t>(r)].arity)
                        throw error("tuple arity mismatch in relation " + it.key());
                    for (int e : tuple)
                        if (e < 0 || e >= m.size) throw error("out-of-range element in relation " + it.key());
                    m.tables[static_cast<std::size_t>(r)].insert(tuple);
                }
            }
        }
    }
    if (j.contains("point")) {
        if (!j["point"].is_number_integer()) throw error("malformed structure text: point must be an integer");
        m.point = j["point"].get<int>();
    }
    m.validate();
    return m;
}

inline nlohmann::json structure_to_json(const Structure& m) {
    nlohmann::json j;
    j["size"] = m.size;
    j["relations"] = nlohmann::json::object();
    for (std::size_t r = 0; r < m.sig.relations.size(); ++r) {
        nlohmann::json rel;
        rel["arity"] = m.sig.relations[r].arity;
        rel["tuples"] = nlohmann::json::array();
        for (const Tuple& t : m.tables[r]) rel["tuples"].push_back(t);
        j["relations"][m.sig.relations[r].name] = rel;
    }
    if (m.point) j["point"] = *m.point;
    if (m.sig.identity || m.sig.transition) {
        nlohmann::json flags;
        if (m.sig.identity) flags["identity"] = *m.sig.identity;
        if (m.sig.transition) flags["transition"] = *m.sig.transition;
        j["signature_flags"] = flags;
    }
    return j;
}

}  // namespace detail

inline Structure parse_structure(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw error(std::string("malformed structure text: ") + e.what());
    }
    return detail::structure_from_json(j);
}

inline std::string serialize_structure(const Structure& m) {
    return detail::structure_to_json(m).dump();
}

inline ForestStructure parse_forest(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw error(std::string("malformed forest text: ") + e.what());
    }
    ForestStructure a;
    a.carrier = detail::structure_from_json(j);
    if (!j.contains("parent") || !j["parent"].is_array())
        throw error("malformed forest text: missing parent array");
    for (const auto& p : j["parent"]) {
        if (p.is_null()) a.parent.push_back(std::nullopt);
        else a.parent.push_back(p.get<int>());
    }
    if (static_cast<int>(a.parent.size()) != a.carrier.size)
        throw error("malformed forest text: parent array length mismatch");
    if (j.contains("bound")) a.bound = j["bound"].get<int>();
    a.flavor = flavor_from_name(j.value("flavor", std::string("plain")));
    if (j.contains("pebbles")) a.pebble_count = j["pebbles"].get<int>();
    if (j.contains("pebbling"))
        for (const auto& p : j["pebbling"]) a.pebbling.push_back(p.get<int>());
    if (!validate_wooded(a)) throw error("forest structure violates its flavor conditions");
    return a;
}

inline std::string serialize_forest(const ForestStructure& a) {
    nlohmann::json j = detail::structure_to_json(a.carrier);
    j["parent"] = nlohmann::json::array();
    for (const auto& p : a.parent) {
        if (p) j["parent"].push_back(*p);
        else j["parent"].push_back(nullptr);
    }
    if (a.bound) j["bound"] = *a.bound;
    j["flavor"] = flavor_name(a.flavor);
    if (a.flavor == Flavor::P) {
        j["pebbles"] = a.pebble_count;
        j["pebbling"] = a.pebbling;
    }
    return j.dump();
}

}  // namespace bfg
