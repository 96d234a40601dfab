#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "identifiers.hpp"
#include "io.hpp"

namespace dumpscrub {

// One quasi rule: the listed entities are sensitive only in each other's
// vicinity (all members co-occurring within the window).
struct QuasiGroup {
    std::vector<std::string> entities;
    uint32_t vicinity = 100;
};

struct CustomIdentifierRef {
    std::string entity_type;
    std::string path; // augment artifact: newline-separated dictionary
};

struct SensitivityMapping {
    std::vector<std::string> direct;
    std::vector<QuasiGroup> quasi;
    std::vector<CustomIdentifierRef> custom_identifiers;
};

inline SensitivityMapping mapping_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("sensitivity mapping must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "direct" && it.key() != "quasi" && it.key() != "custom_identifiers")
            throw ConfigError("sensitivity mapping: unknown key '" + it.key() + "'");
    SensitivityMapping m;
    try {
        if (j.contains("direct"))
            for (const auto& e : j.at("direct"))
                m.direct.push_back(e.get<std::string>());
        if (j.contains("quasi")) {
            for (const auto& q : j.at("quasi")) {
                QuasiGroup g;
                for (const auto& e : q.at("entities"))
                    g.entities.push_back(e.get<std::string>());
                g.vicinity = q.value("vicinity", 100u);
                if (g.entities.size() < 2)
                    throw ConfigError("quasi group needs at least two entities");
                if (g.vicinity == 0)
                    throw ConfigError("quasi vicinity must be positive");
                m.quasi.push_back(std::move(g));
            }
        }
        if (j.contains("custom_identifiers")) {
            for (const auto& c : j.at("custom_identifiers")) {
                CustomIdentifierRef r;
                r.entity_type = c.at("entity_type").get<std::string>();
                r.path = c.at("path").get<std::string>();
                m.custom_identifiers.push_back(std::move(r));
            }
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("sensitivity mapping: ") + ex.what());
    }
    return m;
}

inline SensitivityMapping load_mapping(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(path + ": " + ex.what());
    }
    return mapping_from_json(j);
}

// Accumulated report feedback. `suppress` holds (token, entity) pairs the user
// marked as wrong findings; `force_sensitive` holds token texts the user
// marked as missed. Both sides match case-insensitively, like dictionaries.
struct FeedbackStore {
    std::set<std::pair<std::string, std::string>> suppress;
    std::set<std::string> force_sensitive;

    bool empty() const { return suppress.empty() && force_sensitive.empty(); }

    void merge(const FeedbackStore& other) {
        suppress.insert(other.suppress.begin(), other.suppress.end());
        force_sensitive.insert(other.force_sensitive.begin(), other.force_sensitive.end());
    }
};

inline nlohmann::json feedback_to_json(const FeedbackStore& fb) {
    nlohmann::json j;
    j["suppress"] = nlohmann::json::array();
    for (const auto& [token, entity] : fb.suppress)
        j["suppress"].push_back({{"token", token}, {"entity_type", entity}});
    j["force_sensitive"] = nlohmann::json::array();
    for (const auto& t : fb.force_sensitive)
        j["force_sensitive"].push_back(t);
    return j;
}

inline FeedbackStore feedback_from_json(const nlohmann::json& j) {
    FeedbackStore fb;
    try {
        if (j.contains("suppress"))
            for (const auto& e : j.at("suppress"))
                fb.suppress.emplace(detail::fold_ascii_lower(e.at("token").get<std::string>()),
                                    e.at("entity_type").get<std::string>());
        if (j.contains("force_sensitive"))
            for (const auto& e : j.at("force_sensitive"))
                fb.force_sensitive.insert(detail::fold_ascii_lower(e.get<std::string>()));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("feedback store: ") + ex.what());
    }
    return fb;
}

inline FeedbackStore load_feedback_store(const std::string& path) {
    try {
        return feedback_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path + ": " + ex.what());
    }
}

inline void save_feedback_store(const std::string& path, const FeedbackStore& fb) {
    write_file_atomic(path, feedback_to_json(fb).dump(2) + "\n");
}

// === augment ===

// Normalizes a raw term source into a dictionary artifact: case-folded,
// trimmed, de-duplicated, sorted, newline-separated. Returns the term count.
inline size_t ingest_augment(const std::string& source_path, const std::string& entity_type,
                             const std::string& output_path) {
    for (const auto& b : builtin_entity_names())
        if (entity_type == b)
            throw ConfigError("augment entity_type " + entity_type + " collides with a built-in");
    std::string raw = read_text_file(source_path);
    std::set<std::string> terms;
    size_t start = 0;
    while (start <= raw.size()) {
        size_t end = raw.find('\n', start);
        if (end == std::string::npos)
            end = raw.size();
        std::string_view line(raw.data() + start, end - start);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t' || line.front() == '\r'))
            line.remove_prefix(1);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.remove_suffix(1);
        if (!line.empty())
            terms.insert(detail::fold_ascii_lower(line));
        if (end == raw.size())
            break;
        start = end + 1;
    }
    if (terms.empty())
        throw ParseError("augment source " + source_path + " contains no terms");
    std::string out;
    for (const auto& t : terms) {
        out += t;
        out.push_back('\n');
    }
    write_file_atomic(output_path, out);
    return terms.size();
}

inline Identifier load_augment_artifact(const std::string& path, const std::string& entity_type) {
    std::string raw = read_text_file(path);
    std::vector<std::string_view> terms;
    size_t start = 0;
    while (start < raw.size()) {
        size_t end = raw.find('\n', start);
        if (end == std::string::npos)
            end = raw.size();
        if (end > start)
            terms.emplace_back(raw.data() + start, end - start);
        start = end + 1;
    }
    if (terms.empty())
        throw ParseError("augment artifact " + path + " contains no terms");
    return detail::make_dictionary_identifier(entity_type, terms);
}

// === assembled knowledge base ===

inline constexpr std::string_view feedback_entity = "FEEDBACK";

struct KnowledgeBase {
    std::vector<Identifier> identifiers; // alphabetical by name, FEEDBACK excluded
    SensitivityMapping mapping;
    FeedbackStore feedback;

    const Identifier* find(std::string_view name) const {
        for (const auto& id : identifiers)
            if (id.name == name)
                return &id;
        return nullptr;
    }
};

// Builds the full knowledge base: built-ins plus custom identifiers loaded
// from the mapping, validated against each other and against the mapping's
// entity references.
inline KnowledgeBase build_knowledge_base(SensitivityMapping mapping, FeedbackStore feedback) {
    KnowledgeBase kb;
    kb.identifiers = builtin_identifiers();
    for (const auto& ref : mapping.custom_identifiers) {
        for (const auto& existing : kb.identifiers)
            if (existing.name == ref.entity_type)
                throw ConfigError("custom identifier " + ref.entity_type +
                                  " duplicates an existing identifier");
        kb.identifiers.push_back(load_augment_artifact(ref.path, ref.entity_type));
    }
    std::sort(kb.identifiers.begin(), kb.identifiers.end(),
              [](const Identifier& a, const Identifier& b) { return a.name < b.name; });

    auto known = [&kb](const std::string& name) {
        for (const auto& id : kb.identifiers)
            if (id.name == name)
                return true;
        return false;
    };
    for (const auto& d : mapping.direct)
        if (!known(d))
            throw ConfigError("mapping lists unknown direct entity " + d);
    for (const auto& q : mapping.quasi)
        for (const auto& e : q.entities)
            if (!known(e))
                throw ConfigError("mapping lists unknown quasi entity " + e);

    kb.mapping = std::move(mapping);
    kb.feedback = std::move(feedback);
    return kb;
}

// The minimal identifier set for a run: entities named by the mapping
// (direct, quasi members, and customs), closed over declared dependencies,
// plus the FEEDBACK pseudo-identifier when forced tokens exist. Alphabetical.
inline std::vector<Identifier> minimal_identifier_set(const KnowledgeBase& kb) {
    std::set<std::string> wanted;
    for (const auto& d : kb.mapping.direct)
        wanted.insert(d);
    for (const auto& q : kb.mapping.quasi)
        for (const auto& e : q.entities)
            wanted.insert(e);
    for (const auto& c : kb.mapping.custom_identifiers)
        wanted.insert(c.entity_type);

    // dependency closure
    for (;;) {
        std::set<std::string> next = wanted;
        for (const auto& id : kb.identifiers)
            if (wanted.count(id.name))
                for (const auto& dep : id.depends_on)
                    next.insert(dep);
        if (next.size() == wanted.size())
            break;
        wanted.swap(next);
    }

    std::vector<Identifier> out;
    for (const auto& id : kb.identifiers)
        if (wanted.count(id.name))
            out.push_back(id);
    if (!kb.feedback.force_sensitive.empty()) {
        std::vector<std::string_view> terms;
        for (const auto& t : kb.feedback.force_sensitive)
            terms.emplace_back(t);
        Identifier fb = detail::make_dictionary_identifier(std::string(feedback_entity), terms);
        auto at = std::lower_bound(out.begin(), out.end(), fb,
                                   [](const Identifier& a, const Identifier& b) { return a.name < b.name; });
        out.insert(at, std::move(fb));
    }
    return out;
}

} // namespace dumpscrub
