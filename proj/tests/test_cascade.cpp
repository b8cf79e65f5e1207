#include <doctest.h>

#include <cmath>

#include "dualcascade/calibration.hpp"
#include "dualcascade/cascade.hpp"
#include "dualcascade/complementarity.hpp"
#include "dualcascade/error.hpp"
#include "dualcascade/synthetic.hpp"
#include "helpers.hpp"

using namespace dualcascade;

namespace {

std::vector<PredictionRecord> recs(const std::vector<std::vector<double>>& logits, const std::vector<int>& labels) {
    std::vector<PredictionRecord> out;
    for (std::size_t i = 0; i < logits.size(); ++i) out.push_back({synthetic::sample_id(i), labels[i], logits[i]});
    return out;
}

CascadeConfig diff_config(double lambda, bool post_check = true, MemoryMethod memory = MemoryMethod::None) {
    CascadeConfig c;
    c.score_fn = ScoreKind::Difference;
    c.lambda = lambda;
    c.post_check = post_check;
    c.memory = memory;
    return c;
}

struct Fixture {
    std::vector<PredictionRecord> a, b;
    std::vector<SampleRef> samples;
    std::shared_ptr<Classifier> ca, cb;

    explicit Fixture(std::size_t n, int image_seed = 1) {
        synthetic::PairSpec spec;
        spec.samples = n;
        auto [ra, rb] = synthetic::make_pair(spec);
        a = std::move(ra);
        b = std::move(rb);
        synthetic::SplitMix64 rng(static_cast<std::uint64_t>(image_seed));
        for (const auto& r : a) {
            auto img = synthetic::random_image(rng, 16, 16, 1);
            img.pixels[0] = static_cast<std::uint8_t>(img.pixels[0] | 1u);
            samples.push_back({r.id, img, r.label});
        }
        ca = std::make_shared<ReplayClassifier>("a", a);
        cb = std::make_shared<ReplayClassifier>("b", b);
    }
};

std::vector<StageTrace> fake_traces(const std::vector<int>& labels, const std::vector<int>& preds) {
    std::vector<StageTrace> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        StageTrace t;
        t.label = labels[i];
        t.predicted = preds[i];
        out.push_back(t);
    }
    return out;
}

} // namespace

TEST_SUITE("cascade") {

TEST_CASE("replay classifier") {
    ReplayClassifier c("m", recs({{1, 2}}, {0}));
    CHECK(c.name() == "m");
    CHECK(c.infer("s0000") == std::vector<double>{1, 2});
    CHECK_THROWS_AS(c.infer("nope"), DataError);
}

TEST_CASE("threshold pass: model A only") {
    auto a = std::make_shared<ReplayClassifier>("a", recs({{5, 0}}, {0}));
    auto b = std::make_shared<ReplayClassifier>("b", recs({{0, 5}}, {0}));
    Engine e(diff_config(0.5), a, b);
    const auto t = e.classify({"s0000", std::nullopt, 0});
    CHECK(t.path == Path::ModelAOnly);
    CHECK(t.chosen == Chosen::A);
    CHECK(t.predicted == 0);
    CHECK(t.stages == std::vector<Stage>{Stage::ModelA});
    CHECK(t.score_a.has_value());
    CHECK_FALSE(t.score_b.has_value());
}

TEST_CASE("escalation: B wins the post-check") {
    auto a = std::make_shared<ReplayClassifier>("a", recs({{0.2, 0}}, {1}));
    auto b = std::make_shared<ReplayClassifier>("b", recs({{0, 4}}, {1}));
    Engine e(diff_config(0.5), a, b);
    const auto t = e.classify({"s0000", std::nullopt, 1});
    CHECK(t.path == Path::ModelAB);
    CHECK(t.chosen == Chosen::B);
    CHECK(t.predicted == 1);
    CHECK(t.stages == std::vector<Stage>{Stage::ModelA, Stage::ModelB});
}

TEST_CASE("escalation: A keeps the sample at post-check, or not without it") {
    auto a = std::make_shared<ReplayClassifier>("a", recs({{0.4, 0}}, {0}));
    auto b = std::make_shared<ReplayClassifier>("b", recs({{0, 0.1}}, {0}));
    Engine with(diff_config(0.5, true), a, b);
    Engine without(diff_config(0.5, false), a, b);
    CHECK(with.classify({"s0000", std::nullopt, 0}).chosen == Chosen::A);
    const auto t = without.classify({"s0000", std::nullopt, 0});
    CHECK(t.chosen == Chosen::B);
    CHECK(t.predicted == 1);
}

TEST_CASE("memory: second presentation hits and skips both models") {
    Fixture f(5);
    Engine e(diff_config(0.7, true, MemoryMethod::DHash), f.ca, f.cb);
    const auto first = e.classify(f.samples[2]);
    CHECK(first.path != Path::MemoryHit);
    CHECK(first.stages.front() == Stage::MemoryLookup);
    CHECK(first.stages.back() == Stage::MemoryInsert);
    const auto second = e.classify(f.samples[2]);
    CHECK(second.path == Path::MemoryHit);
    CHECK(second.chosen == Chosen::Memory);
    CHECK(second.stages == std::vector<Stage>{Stage::MemoryLookup});
    CHECK(second.predicted == first.predicted);
}

TEST_CASE("memory stores the predicted label, not the truth") {
    auto a = std::make_shared<ReplayClassifier>("a", recs({{5, 0}, {5, 0}}, {1, 1}));
    auto b = std::make_shared<ReplayClassifier>("b", recs({{0, 5}, {0, 5}}, {1, 1}));
    Engine e(diff_config(0.1, true, MemoryMethod::Moments), a, b);
    auto img = make_image(12, 12, 1);
    img.at(3, 3) = 40;
    img.at(8, 5) = 90;
    e.classify({"s0000", img, 1});
    const auto t = e.classify({"s0001", img, 1});
    CHECK(t.path == Path::MemoryHit);
    CHECK(t.predicted == 0);
}

TEST_CASE("hash failure degrades to the plain path") {
    auto a = std::make_shared<ReplayClassifier>("a", recs({{5, 0}}, {0}));
    auto b = std::make_shared<ReplayClassifier>("b", recs({{0, 5}}, {0}));
    Engine e(diff_config(0.5, true, MemoryMethod::Moments), a, b);
    const auto t = e.classify({"s0000", make_image(16, 16, 1), 0});
    CHECK(t.path == Path::ModelAOnly);
    CHECK(t.stages == std::vector<Stage>{Stage::ModelA});
    REQUIRE(t.memory_error.has_value());
    CHECK(*t.memory_error == "zero total intensity");
    CHECK(e.store().size() == 0);
}

TEST_CASE("missing image with memory enabled, unknown ids") {
    auto a = std::make_shared<ReplayClassifier>("a", recs({{5, 0}}, {0}));
    auto b = std::make_shared<ReplayClassifier>("b", recs({{0, 5}}, {0}));
    Engine e(diff_config(0.5, true, MemoryMethod::DHash), a, b);
    CHECK_THROWS_AS(e.classify({"s0000", std::nullopt, 0}), DataError);
    Engine plain(diff_config(0.5), a, b);
    CHECK_THROWS_AS(plain.classify({"missing", std::nullopt, 0}), DataError);
    CHECK_THROWS_AS(run_batch(plain, {}), DataError);
}

TEST_CASE("property: path exclusivity and stage sets") {
    Fixture f(200);
    for (auto memory : {MemoryMethod::None, MemoryMethod::DHash, MemoryMethod::Moments}) {
        Engine e(diff_config(0.6, true, memory), f.ca, f.cb);
        auto stream = f.samples;
        stream.insert(stream.end(), f.samples.begin(), f.samples.begin() + 50);
        const auto batch = run_batch(e, stream);
        for (const auto& t : batch.traces) {
            const bool has_a = std::count(t.stages.begin(), t.stages.end(), Stage::ModelA) == 1;
            const bool has_b = std::count(t.stages.begin(), t.stages.end(), Stage::ModelB) == 1;
            const bool has_insert = std::count(t.stages.begin(), t.stages.end(), Stage::MemoryInsert) == 1;
            switch (t.path) {
            case Path::MemoryHit:
                CHECK(t.stages == std::vector<Stage>{Stage::MemoryLookup});
                break;
            case Path::ModelAOnly:
                CHECK(has_a);
                CHECK_FALSE(has_b);
                break;
            case Path::ModelAB:
                CHECK(has_a);
                CHECK(has_b);
                break;
            }
            CHECK(has_insert == (memory != MemoryMethod::None && t.path != Path::MemoryHit));
        }
        const auto p = batch.paths;
        CHECK(p.memory_hit + p.model_a_only + p.model_ab == stream.size());
        if (memory == MemoryMethod::None) {
            CHECK(p.memory_hit == 0);
        } else {
            CHECK(p.memory_hit >= 50);
        }
    }
}

TEST_CASE("property: second pass over the same batch is all hits") {
    Fixture f(120, 9);
    Engine e(diff_config(0.75, true, MemoryMethod::DHash), f.ca, f.cb);
    const auto first = run_batch(e, f.samples);
    const auto second = run_batch(e, f.samples);
    CHECK(second.paths.memory_hit == f.samples.size());
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        CHECK(second.traces[i].predicted == first.traces[i].predicted);
    }
}

TEST_CASE("property: engine agrees with offline calibration") {
    Fixture f(300);
    const auto paired = align_records(f.a, f.b);
    for (auto kind : {ScoreKind::MaxProbability, ScoreKind::Difference, ScoreKind::EntropyNormalized}) {
        for (bool post : {true, false}) {
            auto cal = find_lambda_star(paired, kind, post);
            Engine e(cal.config, f.ca, f.cb);
            const auto batch = run_batch(e, f.samples);
            for (std::size_t i = 0; i < paired.samples.size(); ++i) {
                const auto& s = paired.samples[i];
                const auto d = cascade_decide_offline(s.logits_a, s.logits_b, kind, cal.config.lambda, post);
                CHECK(batch.traces[i].predicted == d.predicted);
                CHECK((batch.traces[i].path == Path::ModelAB) == d.used_second);
            }
            const double usage = static_cast<double>(batch.paths.model_ab) / static_cast<double>(paired.size());
            CHECK(usage == cal.second_model_usage);
            REQUIRE(batch.metrics.has_value());
            CHECK(batch.metrics->accuracy == cal.accuracy);
        }
    }
}

TEST_CASE("metrics: perfect predictions") {
    const auto m = classification_metrics(fake_traces({0, 1, 2, 1}, {0, 1, 2, 1}));
    REQUIRE(m.has_value());
    CHECK(m->accuracy == 1.0);
    CHECK(m->precision == 1.0);
    CHECK(m->recall == 1.0);
    CHECK(m->f1 == 1.0);
}

TEST_CASE("metrics: single observed class") {
    const auto m = classification_metrics(fake_traces({0, 0, 0, 0}, {0, 0, 1, 0}));
    REQUIRE(m.has_value());
    CHECK(m->accuracy == doctest::Approx(0.75));
    CHECK(m->precision == doctest::Approx(1.0));
    CHECK(m->recall == doctest::Approx(0.75));
    CHECK(m->f1 == doctest::Approx(6.0 / 7.0));
}

TEST_CASE("metrics: two classes, hand-computed confusion matrix") {
    // class 0: tp 1, predicted 1, actual 2; class 1: tp 2, predicted 3, actual 2.
    const auto m = classification_metrics(fake_traces({0, 0, 1, 1}, {0, 1, 1, 1}));
    REQUIRE(m.has_value());
    CHECK(m->accuracy == doctest::Approx(0.75));
    CHECK(m->precision == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));
    CHECK(m->recall == doctest::Approx(0.75));
    CHECK(m->f1 == doctest::Approx((2.0 / 3.0 + 0.8) / 2.0));
}

TEST_CASE("metrics: unlabelled samples are skipped") {
    auto traces = fake_traces({0, 1}, {0, 0});
    StageTrace unlabelled;
    unlabelled.predicted = 1;
    traces.push_back(unlabelled);
    const auto m = classification_metrics(traces);
    REQUIRE(m.has_value());
    CHECK(m->labelled == 2);
    CHECK(m->accuracy == 0.5);
    CHECK_FALSE(classification_metrics({unlabelled}).has_value());
}

TEST_CASE("trace json line") {
    StageTrace t;
    t.id = "s1";
    t.path = Path::ModelAB;
    t.chosen = Chosen::B;
    t.predicted = 2;
    t.score_a = 0.25;
    t.score_b = 0.5;
    t.stages = {Stage::ModelA, Stage::ModelB};
    CHECK(trace_to_json_line(t) ==
          R"({"chosen":"b","id":"s1","label":null,"path":"model_ab","predicted":2,"scores":{"a":0.25,"b":0.5},"stages":["model_a","model_b"]})");
    CHECK(parse_stage("memory_insert") == Stage::MemoryInsert);
    CHECK_THROWS_AS(parse_stage("gpu"), DataError);
}

} // TEST_SUITE
