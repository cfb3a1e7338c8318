#include "lara/catalog.hpp"

#include <fstream>

#include "lara/error.hpp"
#include "lara/text.hpp"

namespace lara {

namespace {

void index_entries(const std::vector<CatalogEntry>& entries,
                   std::unordered_map<std::string, std::size_t>& by_id,
                   std::unordered_map<std::string, std::size_t>& by_label) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.intent_id.empty()) throw ParseError("catalog entry " + std::to_string(i) + " has empty intent_id");
        if (e.label.empty()) throw ParseError("catalog entry '" + e.intent_id + "' has empty label");
        if (!by_id.emplace(e.intent_id, i).second) {
            throw ParseError("duplicate intent_id '" + e.intent_id + "'");
        }
        if (!by_label.emplace(e.label, i).second) {
            throw ParseError("duplicate label '" + e.label + "'");
        }
    }
}

}  // namespace

IntentCatalog IntentCatalog::from_entries(std::vector<CatalogEntry> entries) {
    IntentCatalog c;
    c.entries_ = std::move(entries);
    index_entries(c.entries_, c.by_id_, c.by_label_);
    return c;
}

IntentCatalog IntentCatalog::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open catalog file: " + path.string());

    std::vector<CatalogEntry> entries;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim_view(line).empty()) continue;

        const auto fields = split(line, '\t');
        if (fields.size() < 2 || fields.size() > 3) {
            throw ParseError("expected <intent_id>\\t<label>\\t<representative or empty>", line_no);
        }
        CatalogEntry e;
        e.intent_id = trim(fields[0]);
        e.label = trim(fields[1]);
        if (fields.size() == 3) {
            const std::string rep = trim(fields[2]);
            if (!rep.empty()) e.representative_query = rep;
        }
        if (e.intent_id.empty()) throw ParseError("empty intent_id", line_no);
        if (e.label.empty()) throw ParseError("empty label", line_no);
        entries.push_back(std::move(e));
    }
    return from_entries(std::move(entries));
}

void IntentCatalog::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write catalog file: " + path.string());
    for (const auto& e : entries_) {
        out << e.intent_id << '\t' << e.label << '\t'
            << (e.representative_query ? *e.representative_query : "") << '\n';
    }
}

std::optional<std::size_t> IntentCatalog::index_of(std::string_view intent_id) const {
    const auto it = by_id_.find(std::string(intent_id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

const CatalogEntry& IntentCatalog::entry_for(std::string_view intent_id) const {
    const auto idx = index_of(intent_id);
    if (!idx) throw UnknownIntentError("unknown intent '" + std::string(intent_id) + "'");
    return entries_[*idx];
}

const std::string& IntentCatalog::label_of(std::string_view intent_id) const {
    return entry_for(intent_id).label;
}

std::optional<std::string> IntentCatalog::intent_by_label(std::string_view label) const {
    const auto it = by_label_.find(std::string(label));
    if (it == by_label_.end()) return std::nullopt;
    return entries_[it->second].intent_id;
}

}  // namespace lara
