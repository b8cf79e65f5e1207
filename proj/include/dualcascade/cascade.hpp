#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dualcascade/calibration.hpp"
#include "dualcascade/image.hpp"
#include "dualcascade/memo_store.hpp"
#include "dualcascade/records.hpp"

namespace dualcascade {

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual const std::string& name() const = 0;
    virtual std::vector<double> infer(const std::string& sample_id) = 0;
};

/// Serves precomputed logits by sample id.
class ReplayClassifier final : public Classifier {
public:
    ReplayClassifier(std::string name, const std::vector<PredictionRecord>& records);

    const std::string& name() const override { return name_; }
    std::vector<double> infer(const std::string& sample_id) override;

private:
    std::string name_;
    std::unordered_map<std::string, std::vector<double>> logits_;
};

struct SampleRef {
    std::string id;
    std::optional<ImageBuffer> image;
    std::optional<int> label;
};

enum class Path { MemoryHit, ModelAOnly, ModelAB };
enum class Chosen { Memory, A, B };
enum class Stage { MemoryLookup, MemoryInsert, ModelA, ModelB };

inline constexpr std::size_t kStageCount = 4;

std::string_view path_name(Path path);
std::string_view chosen_name(Chosen chosen);
std::string_view stage_name(Stage stage);
Stage parse_stage(std::string_view name);

struct StageTrace {
    std::string id;
    Path path = Path::ModelAOnly;
    Chosen chosen = Chosen::A;
    int predicted = 0;
    std::optional<int> label;
    std::optional<double> score_a;
    std::optional<double> score_b;
    std::vector<Stage> stages;
    /// Set when fingerprinting failed and the sample bypassed memory.
    std::optional<std::string> memory_error;
};

/// The runtime pipeline: memory lookup, model A, threshold, model B,
/// post-check, memory insert.
class Engine {
public:
    Engine(CascadeConfig config, std::shared_ptr<Classifier> first, std::shared_ptr<Classifier> second,
           std::optional<std::size_t> store_capacity = std::nullopt);

    const CascadeConfig& config() const { return config_; }
    MemoStore& store() { return store_; }
    const MemoStore& store() const { return store_; }

    StageTrace classify(const SampleRef& sample);

private:
    std::optional<Fingerprint> fingerprint(const ImageBuffer& image) const;

    CascadeConfig config_;
    std::shared_ptr<Classifier> first_;
    std::shared_ptr<Classifier> second_;
    MemoStore store_;
};

/// Macro-averaged over the classes that occur in the labels.
struct ClassificationMetrics {
    std::size_t labelled = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

std::optional<ClassificationMetrics> classification_metrics(const std::vector<StageTrace>& traces);

struct PathCounts {
    std::size_t memory_hit = 0;
    std::size_t model_a_only = 0;
    std::size_t model_ab = 0;
};

PathCounts count_paths(const std::vector<StageTrace>& traces);

struct BatchResult {
    std::vector<StageTrace> traces;
    PathCounts paths;
    std::optional<ClassificationMetrics> metrics;
};

/// Sequential, in input order. Classifier errors propagate immediately.
BatchResult run_batch(Engine& engine, const std::vector<SampleRef>& samples);

/// One JSON object per line.
std::string trace_to_json_line(const StageTrace& trace);

} // namespace dualcascade
