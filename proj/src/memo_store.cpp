#include "dualcascade/memo_store.hpp"

#include <json.hpp>

#include "dualcascade/error.hpp"

namespace dualcascade {

std::optional<int> MemoStore::lookup(const Fingerprint& fp) {
    std::lock_guard lock(mutex_);
    const auto it = index_.find(fp);
    if (it == index_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
}

void MemoStore::insert(const Fingerprint& fp, int label) {
    std::lock_guard lock(mutex_);
    if (capacity_ && *capacity_ == 0) return;
    if (const auto it = index_.find(fp); it != index_.end()) {
        it->second->second = label;
        order_.splice(order_.begin(), order_, it->second);
        return;
    }
    if (capacity_ && order_.size() >= *capacity_) {
        index_.erase(order_.back().first);
        order_.pop_back();
    }
    order_.emplace_front(fp, label);
    index_.emplace(fp, order_.begin());
}

bool MemoStore::contains(const Fingerprint& fp) const {
    std::lock_guard lock(mutex_);
    return index_.contains(fp);
}

std::size_t MemoStore::size() const {
    std::lock_guard lock(mutex_);
    return order_.size();
}

std::vector<std::pair<Fingerprint, int>> MemoStore::entries() const {
    std::lock_guard lock(mutex_);
    return {order_.rbegin(), order_.rend()};
}

std::string store_to_json(const MemoStore& store) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [fp, label] : store.entries()) {
        entries.push_back({{"key", fingerprint_text(fp)}, {"label", label}});
    }
    return nlohmann::json{{"entries", entries}}.dump(1) + "\n";
}

void load_store_json(MemoStore& store, const std::string& text, bool dhash_keys) {
    try {
        const auto j = nlohmann::json::parse(text);
        for (const auto& e : j.at("entries")) {
            const auto key = e.at("key").get<std::string>();
            const int label = e.at("label").get<int>();
            if (dhash_keys) {
                if (key.size() != 16) throw DataError("bad dhash key '" + key + "'");
                std::size_t used = 0;
                const auto bits = std::stoull(key, &used, 16);
                if (used != key.size()) throw DataError("bad dhash key '" + key + "'");
                store.insert(DHashKey{bits}, label);
            } else {
                store.insert(MomentsKey{key}, label);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid store file: ") + e.what());
    } catch (const std::logic_error&) {
        throw DataError("invalid store file: bad key");
    }
}

} // namespace dualcascade
