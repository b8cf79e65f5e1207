#include "dualcascade/records.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "dualcascade/error.hpp"

namespace dualcascade {

namespace {

using nlohmann::json;

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
    throw DataError(what + " at line " + std::to_string(line));
}

PredictionRecord parse_line(const std::string& text, std::size_t line) {
    json obj;
    try {
        obj = json::parse(text);
    } catch (const json::parse_error&) {
        fail_line(line, "malformed line");
    } catch (const json::out_of_range&) {
        // The parser refuses literals such as 1e999 that overflow a double.
        fail_line(line, "non-finite logit");
    }
    if (!obj.is_object() || obj.size() != 3 || !obj.contains("id") || !obj.contains("label") ||
        !obj.contains("logits")) {
        fail_line(line, "malformed line (expected exactly keys id, label, logits)");
    }
    const auto& id = obj["id"];
    const auto& label = obj["label"];
    const auto& logits = obj["logits"];
    if (!id.is_string()) fail_line(line, "malformed line (id must be a string)");
    if (!label.is_number_integer()) fail_line(line, "malformed line (label must be an integer)");
    if (!logits.is_array()) fail_line(line, "malformed line (logits must be an array)");

    PredictionRecord rec;
    rec.id = id.get<std::string>();
    rec.logits.reserve(logits.size());
    for (const auto& v : logits) {
        if (!v.is_number()) fail_line(line, "malformed line (logits must be numbers)");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail_line(line, "non-finite logit");
        rec.logits.push_back(x);
    }
    if (rec.logits.size() < 2) fail_line(line, "logits length must be at least 2");

    const auto raw = label.get<std::int64_t>();
    if (raw < 0 || raw >= static_cast<std::int64_t>(rec.logits.size())) {
        fail_line(line, "label out of range");
    }
    rec.label = static_cast<int>(raw);
    return rec;
}

} // namespace

PairedDataset PairedDataset::swapped() const {
    PairedDataset out;
    out.name_a = name_b;
    out.name_b = name_a;
    out.num_classes = num_classes;
    out.samples.reserve(samples.size());
    for (const auto& s : samples) out.samples.push_back({s.id, s.label, s.logits_b, s.logits_a});
    return out;
}

std::vector<PredictionRecord> parse_prediction_records(std::istream& in) {
    std::vector<PredictionRecord> out;
    std::unordered_set<std::string> seen;
    std::string text;
    std::size_t line = 0;
    std::size_t k = 0;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) {
            // A trailing newline yields no further getline; an empty line is data.
            fail_line(line, "malformed line (empty)");
        }
        auto rec = parse_line(text, line);
        if (out.empty()) {
            k = rec.logits.size();
        } else if (rec.logits.size() != k) {
            fail_line(line, "inconsistent logits length");
        }
        if (!seen.insert(rec.id).second) fail_line(line, "duplicate id " + rec.id);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<PredictionRecord> parse_prediction_records(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_prediction_records(in);
}

std::vector<PredictionRecord> load_prediction_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    try {
        return parse_prediction_records(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_prediction_records(std::ostream& out, const std::vector<PredictionRecord>& records) {
    for (const auto& r : records) {
        json obj = json::object();
        obj["id"] = r.id;
        obj["label"] = r.label;
        obj["logits"] = r.logits;
        out << obj.dump() << '\n';
    }
}

PairedDataset align_records(const std::vector<PredictionRecord>& a, const std::vector<PredictionRecord>& b,
                            std::string name_a, std::string name_b) {
    if (a.empty() || b.empty()) throw DataError("cannot align empty record lists");
    const std::size_t k = a.front().logits.size();
    if (b.front().logits.size() != k) {
        throw DataError("logits length mismatch between files (" + std::to_string(k) + " vs " +
                        std::to_string(b.front().logits.size()) + ")");
    }

    std::map<std::string, const PredictionRecord*> by_id_b;
    for (const auto& r : b) by_id_b.emplace(r.id, &r);

    std::map<std::string, const PredictionRecord*> by_id_a;
    for (const auto& r : a) {
        by_id_a.emplace(r.id, &r);
        if (!by_id_b.contains(r.id)) throw DataError("unmatched id " + r.id);
    }
    for (const auto& r : b) {
        if (!by_id_a.contains(r.id)) throw DataError("unmatched id " + r.id);
    }

    PairedDataset out;
    out.name_a = std::move(name_a);
    out.name_b = std::move(name_b);
    out.num_classes = k;
    out.samples.reserve(by_id_a.size());
    // std::map orders std::string keys byte-lexicographically.
    for (const auto& [id, ra] : by_id_a) {
        const auto* rb = by_id_b.at(id);
        if (ra->label != rb->label) throw DataError("label disagreement for " + id);
        out.samples.push_back({id, ra->label, ra->logits, rb->logits});
    }
    return out;
}

} // namespace dualcascade
