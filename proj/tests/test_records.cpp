#include <doctest.h>

#include <sstream>

#include "dualcascade/error.hpp"
#include "dualcascade/records.hpp"
#include "dualcascade/synthetic.hpp"

using namespace dualcascade;

TEST_SUITE("records") {

TEST_CASE("single line maps fields directly") {
    const auto recs = parse_prediction_records(std::string_view{R"({"id":"s1","label":0,"logits":[2.0,1.0]})"});
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].id == "s1");
    CHECK(recs[0].label == 0);
    CHECK(recs[0].logits == std::vector<double>{2.0, 1.0});
}

TEST_CASE("empty stream yields no records") {
    CHECK(parse_prediction_records(std::string_view{}).empty());
}

TEST_CASE("trailing newline is optional") {
    const std::string line = R"({"id":"a","label":1,"logits":[0,1]})";
    CHECK(parse_prediction_records(std::string_view{line}).size() == 1);
    CHECK(parse_prediction_records(std::string_view{line + "\n"}).size() == 1);
}

TEST_CASE("inconsistent K reports the line") {
    const std::string text = "{\"id\":\"a\",\"label\":0,\"logits\":[1,2]}\n"
                             "{\"id\":\"b\",\"label\":0,\"logits\":[1,2,3]}\n";
    CHECK_THROWS_WITH_AS(parse_prediction_records(std::string_view{text}), "inconsistent logits length at line 2",
                         DataError);
}

TEST_CASE("parse errors") {
    auto fails = [](const std::string& text, const std::string& fragment) {
        try {
            parse_prediction_records(std::string_view{text});
        } catch (const DataError& e) {
            return std::string(e.what()).find(fragment) != std::string::npos;
        }
        return false;
    };
    CHECK(fails("{\"id\":\"a\",\"label\":0,\"logits\":[1,2]\n", "malformed line at line 1"));
    CHECK(fails("{\"id\":\"a\",\"label\":2,\"logits\":[1,2]}\n", "label out of range at line 1"));
    CHECK(fails("{\"id\":\"a\",\"label\":-1,\"logits\":[1,2]}\n", "label out of range"));
    CHECK(fails("{\"id\":\"a\",\"label\":0.5,\"logits\":[1,2]}\n", "malformed line"));
    CHECK(fails("{\"id\":\"a\",\"label\":0,\"logits\":[1e999,2]}\n", "non-finite logit"));
    CHECK(fails("{\"id\":\"a\",\"label\":0,\"logits\":[1,2],\"x\":1}\n", "exactly keys"));
    CHECK(fails("{\"id\":7,\"label\":0,\"logits\":[1,2]}\n", "id must be a string"));
    CHECK(fails("{\"id\":\"a\",\"label\":0,\"logits\":[1]}\n", "at least 2"));
    CHECK(fails("{\"id\":\"a\",\"label\":0,\"logits\":[1,2]}\n{\"id\":\"a\",\"label\":1,\"logits\":[1,2]}\n",
                "duplicate id a at line 2"));
    CHECK(fails("{\"id\":\"a\",\"label\":0,\"logits\":[1,2]}\n\n{\"id\":\"b\",\"label\":0,\"logits\":[1,2]}\n",
                "at line 2"));
}

TEST_CASE("serialise then parse is the identity") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        synthetic::PairSpec spec;
        spec.samples = 50;
        spec.classes = 2 + seed;
        spec.seed = seed;
        auto [a, b] = synthetic::make_pair(spec);
        // Unrounded values exercise shortest round-trip printing.
        synthetic::SplitMix64 rng(seed);
        for (auto& r : a) {
            for (auto& z : r.logits) z += rng.uniform() * 1e-7;
        }
        std::ostringstream out;
        write_prediction_records(out, a);
        CHECK(parse_prediction_records(std::string_view{out.str()}) == a);
    }
}

TEST_CASE("align joins and sorts by id") {
    std::vector<PredictionRecord> a{{"s2", 1, {0, 1}}, {"s1", 0, {1, 0}}};
    std::vector<PredictionRecord> b{{"s1", 0, {0.5, 0}}, {"s2", 1, {0, 0.5}}};
    const auto p = align_records(a, b);
    REQUIRE(p.size() == 2);
    CHECK(p.samples[0].id == "s1");
    CHECK(p.samples[1].id == "s2");
    CHECK(p.samples[0].logits_a == std::vector<double>{1, 0});
    CHECK(p.samples[0].logits_b == std::vector<double>{0.5, 0});
    CHECK(p.num_classes == 2);
}

TEST_CASE("align orders ids byte-lexicographically") {
    std::vector<PredictionRecord> a{{"b", 0, {1, 0}}, {"B", 0, {1, 0}}, {"a10", 0, {1, 0}}, {"a9", 0, {1, 0}}};
    const auto p = align_records(a, a);
    std::vector<std::string> ids;
    for (const auto& s : p.samples) ids.push_back(s.id);
    CHECK(ids == std::vector<std::string>{"B", "a10", "a9", "b"});
}

TEST_CASE("align errors") {
    std::vector<PredictionRecord> one{{"s1", 0, {1, 0}}};
    std::vector<PredictionRecord> two{{"s1", 0, {1, 0}}, {"s2", 0, {1, 0}}};
    CHECK_THROWS_WITH_AS(align_records(one, two), "unmatched id s2", DataError);
    CHECK_THROWS_WITH_AS(align_records(two, one), "unmatched id s2", DataError);

    std::vector<PredictionRecord> a{{"s1", 3, {0, 0, 0, 1, 0}}};
    std::vector<PredictionRecord> b{{"s1", 4, {0, 0, 0, 1, 0}}};
    CHECK_THROWS_WITH_AS(align_records(a, b), "label disagreement for s1", DataError);

    std::vector<PredictionRecord> k3{{"s1", 0, {1, 0, 0}}};
    CHECK_THROWS_AS(align_records(one, k3), DataError);
    CHECK_THROWS_AS(align_records({}, one), DataError);
}

TEST_CASE("swapping inputs swaps columns only") {
    synthetic::PairSpec spec;
    spec.samples = 40;
    auto [a, b] = synthetic::make_pair(spec);
    std::reverse(b.begin(), b.end());
    const auto ab = align_records(a, b);
    const auto ba = align_records(b, a);
    REQUIRE(ab.size() == ba.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
        CHECK(ab.samples[i].id == ba.samples[i].id);
        CHECK(ab.samples[i].logits_a == ba.samples[i].logits_b);
        CHECK(ab.samples[i].logits_b == ba.samples[i].logits_a);
    }
}

} // TEST_SUITE
