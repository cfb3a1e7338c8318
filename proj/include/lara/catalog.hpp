#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lara {

struct CatalogEntry {
    std::string intent_id;
    // Human-readable hierarchical label, e.g. "logistics>how long will it
    // take to receive order?". Unique across the catalog.
    std::string label;
    std::optional<std::string> representative_query;
};

// Ordered intent inventory. Entry order is the file order and is the
// documented tie-break order everywhere an argmax can tie.
class IntentCatalog {
public:
    IntentCatalog() = default;
    static IntentCatalog from_entries(std::vector<CatalogEntry> entries);

    // One record per line: "<intent_id>\t<label>\t<representative or empty>".
    static IntentCatalog load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const CatalogEntry& entry(std::size_t i) const { return entries_.at(i); }
    const std::vector<CatalogEntry>& entries() const { return entries_; }

    std::optional<std::size_t> index_of(std::string_view intent_id) const;
    bool contains(std::string_view intent_id) const { return index_of(intent_id).has_value(); }

    // Throws UnknownIntentError.
    const CatalogEntry& entry_for(std::string_view intent_id) const;
    const std::string& label_of(std::string_view intent_id) const;

    std::optional<std::string> intent_by_label(std::string_view label) const;

private:
    std::vector<CatalogEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::size_t> by_label_;
};

}  // namespace lara
