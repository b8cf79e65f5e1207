#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dualcascade {

enum class ScoreKind { MaxProbability, Difference, EntropyNormalized };

enum class Selection { A, B };

/// Config/CLI spelling: "max", "diff", "entropy".
std::string_view score_kind_name(ScoreKind kind);
ScoreKind parse_score_kind(std::string_view name);

/// True when a lower score means a more confident prediction.
constexpr bool lower_is_better(ScoreKind kind) { return kind == ScoreKind::EntropyNormalized; }

/// Max-subtracted softmax. Throws DataError on non-finite input.
std::vector<double> softmax(std::span<const double> logits);

/// -sum_{i=1..K} (i/K) ln(i/K), the entropy normaliser.
double entropy_normalizer(std::size_t num_classes);

/// Confidence of a probability vector. K is probs.size().
double score(std::span<const double> probs, ScoreKind kind);

/// Convenience: softmax followed by score.
double score_logits(std::span<const double> logits, ScoreKind kind);

/// True when the first model's answer is accepted. Equality accepts.
bool passes_threshold(double s, double lambda, ScoreKind kind);

/// Post-check comparator; ties go to A.
Selection better_score(double score_a, double score_b, ScoreKind kind);

/// Index of the maximum entry, lowest index on ties.
std::size_t argmax(std::span<const double> values);

} // namespace dualcascade
