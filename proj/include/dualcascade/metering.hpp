#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dualcascade/cascade.hpp"

namespace dualcascade {

struct StageCost {
    double energy_wh = 0.0;
    double latency_ms = 0.0;
    std::optional<double> current_mah;
};

/// Per-invocation cost of each pipeline stage. `models` is an optional
/// catalogue of per-model costs that for_pair() can swap in.
struct CostProfile {
    std::array<StageCost, kStageCount> stages{};
    std::map<std::string, StageCost> models;

    const StageCost& operator[](Stage s) const { return stages[static_cast<std::size_t>(s)]; }
    StageCost& operator[](Stage s) { return stages[static_cast<std::size_t>(s)]; }

    /// Copy with model_a / model_b taken from the catalogue when listed there.
    CostProfile for_pair(const std::string& first, const std::string& second) const;
};

CostProfile cost_profile_from_json(const std::string& text);
CostProfile load_cost_profile(const std::string& path);

struct Cost {
    double energy_wh = 0.0;
    double latency_ms = 0.0;
};

Cost cost_of(const StageTrace& trace, const CostProfile& costs);

/// Nearest rank: element ceil(p/100 * n) (1-based) of the sorted values.
double percentile_nearest_rank(std::vector<double> values, double p);

struct RunReport {
    std::size_t samples = 0;
    PathCounts paths;
    std::array<std::size_t, kStageCount> stage_counts{};
    double total_energy_wh = 0.0;
    std::optional<double> total_current_mah;
    std::vector<double> latencies_ms;
    double mean_latency_ms = 0.0;
    double p95_latency_ms = 0.0;
    double p99_latency_ms = 0.0;
    std::optional<ClassificationMetrics> metrics;
    std::optional<CascadeConfig> config;

    std::size_t hits() const { return paths.memory_hit; }
};

RunReport aggregate(const std::vector<StageTrace>& traces, const CostProfile& costs,
                    std::optional<ClassificationMetrics> metrics = std::nullopt);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
std::string report_csv_header();
std::string report_to_csv_row(const RunReport& report);

/// Percentage reductions 100 * (base - cand) / base; negative means worse.
struct Reduction {
    double energy = 0.0;
    double mean_latency = 0.0;
    double p95_latency = 0.0;
    double p99_latency = 0.0;
};

Reduction compare(const RunReport& baseline, const RunReport& candidate);

enum class DuplicateTransform { Identity, Rot90, Rot180, MirrorH, MirrorV, RandomOfThese };

std::string_view transform_name(DuplicateTransform t);
DuplicateTransform parse_transform(std::string_view name);

/// N originals with floor(ratio * N) transformed duplicates, duplicate of i
/// placed right after original i. `seed` drives RandomOfThese only.
std::vector<SampleRef> duplicated_stream(const std::vector<SampleRef>& base, double ratio,
                                         DuplicateTransform transform, std::uint64_t seed = 0);

struct CurvePoint {
    double ratio = 0.0;
    std::string engine;
    double total_energy_wh = 0.0;
    std::size_t hits = 0;
};

using EngineFactory = std::function<std::unique_ptr<Engine>()>;

struct NamedEngine {
    std::string name;
    EngineFactory make;
    std::optional<CostProfile> costs;  // overrides the experiment-wide profile
};

/// One fresh engine per (configuration, ratio). Points grouped per engine,
/// ratios ascending.
std::vector<CurvePoint> duplication_experiment(const std::vector<SampleRef>& base, std::vector<double> ratios,
                                               DuplicateTransform transform,
                                               const std::vector<NamedEngine>& engines,
                                               const CostProfile& costs, std::uint64_t seed = 0);

std::string curve_to_csv(const std::vector<CurvePoint>& curve);

/// Energy increase of the memory run over the plain run, in percent.
double memory_overhead(const RunReport& plain, const RunReport& with_memory);

} // namespace dualcascade
