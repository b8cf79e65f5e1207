#pragma once

#include <cstddef>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dualcascade/phash.hpp"

namespace dualcascade {

/// Fingerprint -> label table with optional LRU capacity. A lookup counts as
/// a use. All operations lock one mutex, so a lookup racing an insert sees
/// either the old state or the new one.
class MemoStore {
public:
    MemoStore() = default;
    explicit MemoStore(std::optional<std::size_t> capacity) : capacity_(capacity) {}

    MemoStore(const MemoStore&) = delete;
    MemoStore& operator=(const MemoStore&) = delete;

    std::optional<int> lookup(const Fingerprint& fp);
    void insert(const Fingerprint& fp, int label);

    bool contains(const Fingerprint& fp) const;
    std::size_t size() const;
    std::optional<std::size_t> capacity() const { return capacity_; }

    /// Entries from least to most recently used.
    std::vector<std::pair<Fingerprint, int>> entries() const;

private:
    using Entry = std::pair<Fingerprint, int>;

    mutable std::mutex mutex_;
    std::optional<std::size_t> capacity_;
    std::list<Entry> order_;  // front = most recently used
    std::unordered_map<Fingerprint, std::list<Entry>::iterator, FingerprintHash> index_;
};

/// `{"entries": [{"key": s, "label": i}, ...]}`. Keys are parsed back as the
/// fingerprint kind named by `dhash_keys`.
std::string store_to_json(const MemoStore& store);
void load_store_json(MemoStore& store, const std::string& text, bool dhash_keys);

} // namespace dualcascade
