#include "dualcascade/cascade.hpp"

#include <json.hpp>
#include <set>

#include "dualcascade/complementarity.hpp"
#include "dualcascade/error.hpp"
#include "dualcascade/phash.hpp"

namespace dualcascade {

ReplayClassifier::ReplayClassifier(std::string name, const std::vector<PredictionRecord>& records)
    : name_(std::move(name)) {
    logits_.reserve(records.size());
    for (const auto& r : records) logits_.emplace(r.id, r.logits);
}

std::vector<double> ReplayClassifier::infer(const std::string& sample_id) {
    const auto it = logits_.find(sample_id);
    if (it == logits_.end()) throw DataError(name_ + ": no prediction for sample " + sample_id);
    return it->second;
}

std::string_view path_name(Path path) {
    switch (path) {
    case Path::MemoryHit: return "memory_hit";
    case Path::ModelAOnly: return "model_a_only";
    case Path::ModelAB: return "model_ab";
    }
    return "?";
}

std::string_view chosen_name(Chosen chosen) {
    switch (chosen) {
    case Chosen::Memory: return "memory";
    case Chosen::A: return "a";
    case Chosen::B: return "b";
    }
    return "?";
}

std::string_view stage_name(Stage stage) {
    switch (stage) {
    case Stage::MemoryLookup: return "memory_lookup";
    case Stage::MemoryInsert: return "memory_insert";
    case Stage::ModelA: return "model_a";
    case Stage::ModelB: return "model_b";
    }
    return "?";
}

Stage parse_stage(std::string_view name) {
    for (Stage s : {Stage::MemoryLookup, Stage::MemoryInsert, Stage::ModelA, Stage::ModelB}) {
        if (stage_name(s) == name) return s;
    }
    throw DataError("unknown stage '" + std::string(name) + "'");
}

Engine::Engine(CascadeConfig config, std::shared_ptr<Classifier> first, std::shared_ptr<Classifier> second,
               std::optional<std::size_t> store_capacity)
    : config_(std::move(config)), first_(std::move(first)), second_(std::move(second)), store_(store_capacity) {
    config_.validate();
    if (!first_ || !second_) throw DataError("engine needs two classifiers");
}

std::optional<Fingerprint> Engine::fingerprint(const ImageBuffer& image) const {
    const ImageBuffer gray = to_grayscale(image);
    switch (config_.memory) {
    case MemoryMethod::None: return std::nullopt;
    case MemoryMethod::DHash: return dhash(gray);
    case MemoryMethod::Moments: return moments_fingerprint(gray);
    }
    return std::nullopt;
}

StageTrace Engine::classify(const SampleRef& sample) {
    StageTrace trace;
    trace.id = sample.id;
    trace.label = sample.label;

    std::optional<Fingerprint> key;
    if (config_.memory != MemoryMethod::None) {
        if (!sample.image) throw DataError("sample " + sample.id + " has no image but memory is enabled");
        try {
            key = fingerprint(*sample.image);
        } catch (const DataError& e) {
            trace.memory_error = e.what();
        }
        if (key) {
            trace.stages.push_back(Stage::MemoryLookup);
            if (const auto hit = store_.lookup(*key)) {
                trace.path = Path::MemoryHit;
                trace.chosen = Chosen::Memory;
                trace.predicted = *hit;
                return trace;
            }
        }
    }

    const auto logits_a = first_->infer(sample.id);
    trace.stages.push_back(Stage::ModelA);
    const double sa = score_logits(logits_a, config_.score_fn);
    trace.score_a = sa;
    if (passes_threshold(sa, config_.lambda, config_.score_fn)) {
        trace.path = Path::ModelAOnly;
        trace.chosen = Chosen::A;
        trace.predicted = predicted_label(logits_a);
    } else {
        const auto logits_b = second_->infer(sample.id);
        if (logits_b.size() != logits_a.size()) throw DataError("logits length mismatch for sample " + sample.id);
        trace.stages.push_back(Stage::ModelB);
        const double sb = score_logits(logits_b, config_.score_fn);
        trace.score_b = sb;
        trace.path = Path::ModelAB;
        const bool take_a = config_.post_check && better_score(sa, sb, config_.score_fn) == Selection::A;
        trace.chosen = take_a ? Chosen::A : Chosen::B;
        trace.predicted = predicted_label(take_a ? logits_a : logits_b);
    }

    if (key) {
        store_.insert(*key, trace.predicted);
        trace.stages.push_back(Stage::MemoryInsert);
    }
    return trace;
}

std::optional<ClassificationMetrics> classification_metrics(const std::vector<StageTrace>& traces) {
    std::set<int> classes;
    for (const auto& t : traces) {
        if (t.label) classes.insert(*t.label);
    }
    if (classes.empty()) return std::nullopt;

    ClassificationMetrics m;
    std::size_t correct = 0;
    for (const auto& t : traces) {
        if (!t.label) continue;
        ++m.labelled;
        correct += t.predicted == *t.label ? 1 : 0;
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(m.labelled);

    for (int c : classes) {
        std::size_t tp = 0, predicted = 0, actual = 0;
        for (const auto& t : traces) {
            if (!t.label) continue;
            const bool is_pred = t.predicted == c;
            const bool is_true = *t.label == c;
            tp += (is_pred && is_true) ? 1 : 0;
            predicted += is_pred ? 1 : 0;
            actual += is_true ? 1 : 0;
        }
        const double precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        const double recall = static_cast<double>(tp) / static_cast<double>(actual);
        const double f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        m.precision += precision;
        m.recall += recall;
        m.f1 += f1;
    }
    const double k = static_cast<double>(classes.size());
    m.precision /= k;
    m.recall /= k;
    m.f1 /= k;
    return m;
}

PathCounts count_paths(const std::vector<StageTrace>& traces) {
    PathCounts c;
    for (const auto& t : traces) {
        switch (t.path) {
        case Path::MemoryHit: ++c.memory_hit; break;
        case Path::ModelAOnly: ++c.model_a_only; break;
        case Path::ModelAB: ++c.model_ab; break;
        }
    }
    return c;
}

BatchResult run_batch(Engine& engine, const std::vector<SampleRef>& samples) {
    if (samples.empty()) throw DataError("run_batch needs at least one sample");
    BatchResult result;
    result.traces.reserve(samples.size());
    for (const auto& s : samples) result.traces.push_back(engine.classify(s));
    result.paths = count_paths(result.traces);
    result.metrics = classification_metrics(result.traces);
    return result;
}

std::string trace_to_json_line(const StageTrace& trace) {
    nlohmann::json j = nlohmann::json::object();
    j["id"] = trace.id;
    j["path"] = std::string(path_name(trace.path));
    j["chosen"] = std::string(chosen_name(trace.chosen));
    j["predicted"] = trace.predicted;
    j["label"] = trace.label ? nlohmann::json(*trace.label) : nlohmann::json(nullptr);
    auto stages = nlohmann::json::array();
    for (Stage s : trace.stages) stages.push_back(std::string(stage_name(s)));
    j["stages"] = stages;
    if (trace.score_a) {
        j["scores"] = {{"a", *trace.score_a},
                       {"b", trace.score_b ? nlohmann::json(*trace.score_b) : nlohmann::json(nullptr)}};
    } else {
        j["scores"] = nullptr;
    }
    if (trace.memory_error) j["memory_error"] = *trace.memory_error;
    return j.dump();
}

} // namespace dualcascade
