#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dualcascade {

/// One sample as seen by one model.
struct PredictionRecord {
    std::string id;
    int label = 0;
    std::vector<double> logits;

    bool operator==(const PredictionRecord&) const = default;
};

struct PairedSample {
    std::string id;
    int label = 0;
    std::vector<double> logits_a;
    std::vector<double> logits_b;
};

/// Two models' records joined on sample id, ordered by ascending id.
struct PairedDataset {
    std::string name_a = "a";
    std::string name_b = "b";
    std::size_t num_classes = 0;
    std::vector<PairedSample> samples;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }

    /// Same samples with the model columns exchanged.
    PairedDataset swapped() const;
};

/// Parses JSON Lines prediction records. Errors carry the 1-based line number.
std::vector<PredictionRecord> parse_prediction_records(std::istream& in);
std::vector<PredictionRecord> parse_prediction_records(std::string_view text);
std::vector<PredictionRecord> load_prediction_records(const std::string& path);

void write_prediction_records(std::ostream& out, const std::vector<PredictionRecord>& records);

PairedDataset align_records(const std::vector<PredictionRecord>& a,
                            const std::vector<PredictionRecord>& b,
                            std::string name_a = "a", std::string name_b = "b");

} // namespace dualcascade
