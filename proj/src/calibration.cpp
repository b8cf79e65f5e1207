#include "dualcascade/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "dualcascade/complementarity.hpp"
#include "dualcascade/error.hpp"
#include "dualcascade/kernels.hpp"

namespace dualcascade {

using nlohmann::json;

std::string_view memory_method_name(MemoryMethod method) {
    switch (method) {
    case MemoryMethod::None: return "none";
    case MemoryMethod::DHash: return "dhash";
    case MemoryMethod::Moments: return "moments";
    }
    return "?";
}

MemoryMethod parse_memory_method(std::string_view name) {
    if (name == "none") return MemoryMethod::None;
    if (name == "dhash") return MemoryMethod::DHash;
    if (name == "moments") return MemoryMethod::Moments;
    throw DataError("unknown memory method '" + std::string(name) + "' (expected none, dhash or moments)");
}

void CascadeConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DataError("lambda must lie in [0,1]");
    if (first_model == second_model) throw DataError("first_model and second_model must differ");
}

CascadeConfig config_from_json(const std::string& text) {
    CascadeConfig c;
    try {
        const json j = json::parse(text);
        c.first_model = j.at("first_model").get<std::string>();
        c.second_model = j.at("second_model").get<std::string>();
        c.score_fn = parse_score_kind(j.at("score_fn").get<std::string>());
        c.lambda = j.at("lambda").get<double>();
        c.post_check = j.at("post_check").get<bool>();
        c.memory = parse_memory_method(j.at("memory").get<std::string>());
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string config_to_json(const CascadeConfig& config) {
    json j = json::object();
    j["first_model"] = config.first_model;
    j["second_model"] = config.second_model;
    j["score_fn"] = std::string(score_kind_name(config.score_fn));
    j["lambda"] = config.lambda;
    j["post_check"] = config.post_check;
    j["memory"] = std::string(memory_method_name(config.memory));
    return j.dump(2) + "\n";
}

CascadeConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return config_from_json(buf.str());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void save_config(const std::string& path, const CascadeConfig& config) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << config_to_json(config);
}

Decision cascade_decide_offline(std::span<const double> logits_a, std::span<const double> logits_b,
                                ScoreKind kind, double lambda, bool post_check) {
    if (logits_a.size() != logits_b.size()) throw DataError("logits length mismatch between models");
    const auto pa = softmax(logits_a);
    const double sa = score(pa, kind);
    if (passes_threshold(sa, lambda, kind)) return {predicted_label(logits_a), false, Selection::A};

    const auto pb = softmax(logits_b);
    const double sb = score(pb, kind);
    const Selection chosen = post_check ? better_score(sa, sb, kind) : Selection::B;
    return {predicted_label(chosen == Selection::A ? logits_a : logits_b), true, chosen};
}

AccuracyPoint accuracy_at(const PairedDataset& paired, ScoreKind kind, double lambda, bool post_check) {
    if (paired.empty()) throw DataError("accuracy of an empty dataset");
    std::size_t correct = 0;
    std::size_t escalated = 0;
    for (const auto& s : paired.samples) {
        const auto d = cascade_decide_offline(s.logits_a, s.logits_b, kind, lambda, post_check);
        correct += d.predicted == s.label ? 1 : 0;
        escalated += d.used_second ? 1 : 0;
    }
    const double n = static_cast<double>(paired.size());
    return {lambda, static_cast<double>(correct) / n, static_cast<double>(escalated) / n};
}

namespace {

std::vector<double> candidates_from_scores(std::vector<double> scores) {
    std::sort(scores.begin(), scores.end());
    scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    std::vector<double> out{0.0, 1.0};
    for (std::size_t i = 1; i < scores.size(); ++i) {
        const double mid = scores[i - 1] + (scores[i] - scores[i - 1]) / 2.0;
        if (mid >= 0.0 && mid <= 1.0) out.push_back(mid);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CalibrationResult search(const PairedDataset& paired, const std::vector<kernels::ScoreRow>& rows, ScoreKind kind,
                         bool post_check) {
    std::vector<double> scores;
    scores.reserve(rows.size());
    for (const auto& r : rows) scores.push_back(r.score_a);
    const auto lambdas = candidates_from_scores(std::move(scores));
    const auto counts = kernels::sweep(rows, lambdas, kind, post_check);

    const double n = static_cast<double>(rows.size());
    CalibrationResult result;
    result.curve.reserve(lambdas.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        result.curve.push_back({lambdas[i], static_cast<double>(counts[i].correct) / n,
                                static_cast<double>(counts[i].escalated) / n});
        const auto& c = counts[i];
        const auto& b = counts[best];
        // Strictly better accuracy, or equal accuracy with less escalation.
        // Remaining ties keep the smallest lambda (max/diff) or move to the
        // largest (entropy), both the usage-minimising end of the plateau.
        if (c.correct > b.correct || (c.correct == b.correct && c.escalated < b.escalated) ||
            (c.correct == b.correct && c.escalated == b.escalated && lower_is_better(kind))) {
            best = i;
        }
    }

    result.config.first_model = paired.name_a;
    result.config.second_model = paired.name_b;
    result.config.score_fn = kind;
    result.config.lambda = lambdas[best];
    result.config.post_check = post_check;
    result.accuracy = result.curve[best].accuracy;
    result.second_model_usage = result.curve[best].usage;
    return result;
}

} // namespace

std::vector<double> candidate_lambdas(const PairedDataset& paired, ScoreKind kind) {
    if (paired.empty()) throw DataError("calibration needs a nonempty dataset");
    std::vector<double> scores;
    scores.reserve(paired.size());
    for (const auto& s : paired.samples) scores.push_back(score_logits(s.logits_a, kind));
    return candidates_from_scores(std::move(scores));
}

CalibrationResult find_lambda_star(const PairedDataset& paired, ScoreKind kind, bool post_check) {
    if (paired.empty()) throw DataError("calibration needs a nonempty dataset");
    return search(paired, kernels::score_table(paired, kind), kind, post_check);
}

CalibrationResult auto_select(const PairedDataset& paired) {
    if (paired.empty()) throw DataError("calibration needs a nonempty dataset");
    const PairedDataset reversed = paired.swapped();
    std::optional<CalibrationResult> best;
    for (ScoreKind kind : {ScoreKind::Difference, ScoreKind::MaxProbability, ScoreKind::EntropyNormalized}) {
        for (const PairedDataset* ordering : {&paired, &reversed}) {
            auto r = find_lambda_star(*ordering, kind, true);
            if (!best || r.accuracy > best->accuracy ||
                (r.accuracy == best->accuracy && r.second_model_usage < best->second_model_usage)) {
                best = std::move(r);
            }
        }
    }
    return *best;
}

std::string curve_to_csv(const std::vector<AccuracyPoint>& curve) {
    std::ostringstream out;
    out << "lambda,accuracy,usage\n";
    char buf[128];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.lambda, p.accuracy, p.usage);
        out << buf;
    }
    return out.str();
}

} // namespace dualcascade
