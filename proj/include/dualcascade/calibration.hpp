#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dualcascade/confidence.hpp"
#include "dualcascade/records.hpp"

namespace dualcascade {

enum class MemoryMethod { None, DHash, Moments };

std::string_view memory_method_name(MemoryMethod method);
MemoryMethod parse_memory_method(std::string_view name);

struct CascadeConfig {
    std::string first_model = "a";
    std::string second_model = "b";
    ScoreKind score_fn = ScoreKind::Difference;
    double lambda = 0.0;
    bool post_check = true;
    MemoryMethod memory = MemoryMethod::None;

    /// Throws DataError when lambda is outside [0,1] or the models coincide.
    void validate() const;
};

CascadeConfig config_from_json(const std::string& text);
std::string config_to_json(const CascadeConfig& config);
CascadeConfig load_config(const std::string& path);
void save_config(const std::string& path, const CascadeConfig& config);

struct Decision {
    int predicted = 0;
    bool used_second = false;
    Selection chosen = Selection::A;
};

Decision cascade_decide_offline(std::span<const double> logits_a, std::span<const double> logits_b,
                                ScoreKind kind, double lambda, bool post_check);

struct AccuracyPoint {
    double lambda = 0.0;
    double accuracy = 0.0;
    double usage = 0.0;
};

AccuracyPoint accuracy_at(const PairedDataset& paired, ScoreKind kind, double lambda, bool post_check);

/// 0, 1 and the midpoints between consecutive distinct model-A scores that lie in [0,1].
std::vector<double> candidate_lambdas(const PairedDataset& paired, ScoreKind kind);

struct CalibrationResult {
    CascadeConfig config;
    double accuracy = 0.0;
    double second_model_usage = 0.0;
    std::vector<AccuracyPoint> curve;  // ascending lambda
};

CalibrationResult find_lambda_star(const PairedDataset& paired, ScoreKind kind, bool post_check);

/// Every score function x both orderings, post-check on.
CalibrationResult auto_select(const PairedDataset& paired);

/// `lambda,accuracy,usage` rows.
std::string curve_to_csv(const std::vector<AccuracyPoint>& curve);

} // namespace dualcascade
