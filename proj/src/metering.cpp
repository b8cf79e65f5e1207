#include "dualcascade/metering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dualcascade/error.hpp"

namespace dualcascade {

using nlohmann::json;

namespace {

constexpr std::array<Stage, kStageCount> kStages{Stage::MemoryLookup, Stage::MemoryInsert, Stage::ModelA,
                                                 Stage::ModelB};

StageCost parse_stage_cost(const json& j, const std::string& where) {
    StageCost c;
    c.energy_wh = j.at("energy_wh").get<double>();
    c.latency_ms = j.at("latency_ms").get<double>();
    if (j.contains("current_mah")) c.current_mah = j.at("current_mah").get<double>();
    const bool ok = std::isfinite(c.energy_wh) && std::isfinite(c.latency_ms) && c.energy_wh >= 0.0 &&
                    c.latency_ms >= 0.0 && (!c.current_mah || (std::isfinite(*c.current_mah) && *c.current_mah >= 0.0));
    if (!ok) throw DataError("cost profile: " + where + " must have finite non-negative values");
    return c;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

CostProfile CostProfile::for_pair(const std::string& first, const std::string& second) const {
    CostProfile out = *this;
    if (const auto it = models.find(first); it != models.end()) out[Stage::ModelA] = it->second;
    if (const auto it = models.find(second); it != models.end()) out[Stage::ModelB] = it->second;
    return out;
}

CostProfile cost_profile_from_json(const std::string& text) {
    CostProfile p;
    try {
        const json j = json::parse(text);
        const json& stages = j.at("stages");
        for (Stage s : kStages) {
            const std::string name(stage_name(s));
            if (!stages.contains(name)) throw DataError("cost profile: missing stage " + name);
            p[s] = parse_stage_cost(stages.at(name), name);
        }
        for (const auto& [name, _] : stages.items()) parse_stage(name);
        if (j.contains("models")) {
            for (const auto& [name, value] : j.at("models").items()) p.models[name] = parse_stage_cost(value, name);
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid cost profile: ") + e.what());
    }
    return p;
}

CostProfile load_cost_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return cost_profile_from_json(buf.str());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

Cost cost_of(const StageTrace& trace, const CostProfile& costs) {
    Cost c;
    for (Stage s : trace.stages) {
        const auto idx = static_cast<std::size_t>(s);
        if (idx >= kStageCount) throw DataError("unknown stage in trace");
        c.energy_wh += costs[s].energy_wh;
        c.latency_ms += costs[s].latency_ms;
    }
    return c;
}

double percentile_nearest_rank(std::vector<double> values, double p) {
    if (values.empty()) throw DataError("percentile of an empty list");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

RunReport aggregate(const std::vector<StageTrace>& traces, const CostProfile& costs,
                    std::optional<ClassificationMetrics> metrics) {
    if (traces.empty()) throw DataError("aggregate needs at least one trace");
    RunReport r;
    r.samples = traces.size();
    r.paths = count_paths(traces);
    r.latencies_ms.reserve(traces.size());
    double latency_sum = 0.0;
    for (const auto& t : traces) {
        for (Stage s : t.stages) ++r.stage_counts[static_cast<std::size_t>(s)];
        const double latency = cost_of(t, costs).latency_ms;
        r.latencies_ms.push_back(latency);
        latency_sum += latency;
    }
    // Counts first, one multiply per stage.
    bool have_current = true;
    double current = 0.0;
    for (Stage s : kStages) {
        const auto n = static_cast<double>(r.stage_counts[static_cast<std::size_t>(s)]);
        r.total_energy_wh += n * costs[s].energy_wh;
        if (costs[s].current_mah) {
            current += n * *costs[s].current_mah;
        } else {
            have_current = false;
        }
    }
    if (have_current) r.total_current_mah = current;

    r.mean_latency_ms = latency_sum / static_cast<double>(r.samples);
    r.p95_latency_ms = percentile_nearest_rank(r.latencies_ms, 95.0);
    r.p99_latency_ms = percentile_nearest_rank(r.latencies_ms, 99.0);
    r.metrics = metrics;
    return r;
}

std::string report_to_json(const RunReport& r) {
    json j = json::object();
    j["samples"] = r.samples;
    j["paths"] = {{"memory_hit", r.paths.memory_hit},
                  {"model_a_only", r.paths.model_a_only},
                  {"model_ab", r.paths.model_ab}};
    json stages = json::object();
    for (Stage s : kStages) stages[std::string(stage_name(s))] = r.stage_counts[static_cast<std::size_t>(s)];
    j["stage_counts"] = stages;
    j["total_energy_wh"] = r.total_energy_wh;
    j["total_current_mah"] = r.total_current_mah ? json(*r.total_current_mah) : json(nullptr);
    j["mean_latency_ms"] = r.mean_latency_ms;
    j["p95_latency_ms"] = r.p95_latency_ms;
    j["p99_latency_ms"] = r.p99_latency_ms;
    if (r.metrics) {
        j["metrics"] = {{"labelled", r.metrics->labelled},
                        {"accuracy", r.metrics->accuracy},
                        {"precision", r.metrics->precision},
                        {"recall", r.metrics->recall},
                        {"f1", r.metrics->f1}};
    } else {
        j["metrics"] = nullptr;
    }
    j["config"] = r.config ? json::parse(config_to_json(*r.config)) : json(nullptr);
    j["latencies_ms"] = r.latencies_ms;
    return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
    RunReport r;
    try {
        const json j = json::parse(text);
        r.samples = j.at("samples").get<std::size_t>();
        const auto& paths = j.at("paths");
        r.paths.memory_hit = paths.at("memory_hit").get<std::size_t>();
        r.paths.model_a_only = paths.at("model_a_only").get<std::size_t>();
        r.paths.model_ab = paths.at("model_ab").get<std::size_t>();
        for (Stage s : kStages) {
            r.stage_counts[static_cast<std::size_t>(s)] =
                j.at("stage_counts").at(std::string(stage_name(s))).get<std::size_t>();
        }
        r.total_energy_wh = j.at("total_energy_wh").get<double>();
        if (!j.at("total_current_mah").is_null()) r.total_current_mah = j.at("total_current_mah").get<double>();
        r.mean_latency_ms = j.at("mean_latency_ms").get<double>();
        r.p95_latency_ms = j.at("p95_latency_ms").get<double>();
        r.p99_latency_ms = j.at("p99_latency_ms").get<double>();
        r.latencies_ms = j.at("latencies_ms").get<std::vector<double>>();
        if (const auto& m = j.at("metrics"); !m.is_null()) {
            ClassificationMetrics cm;
            cm.labelled = m.at("labelled").get<std::size_t>();
            cm.accuracy = m.at("accuracy").get<double>();
            cm.precision = m.at("precision").get<double>();
            cm.recall = m.at("recall").get<double>();
            cm.f1 = m.at("f1").get<double>();
            r.metrics = cm;
        }
        if (const auto& c = j.at("config"); !c.is_null()) r.config = config_from_json(c.dump());
    } catch (const json::exception& e) {
        throw DataError(std::string("invalid report: ") + e.what());
    }
    return r;
}

std::string report_csv_header() {
    return "samples,memory_hit,model_a_only,model_ab,total_energy_wh,mean_latency_ms,p95_latency_ms,"
           "p99_latency_ms,accuracy,precision,recall,f1\n";
}

std::string report_to_csv_row(const RunReport& r) {
    std::ostringstream out;
    out << r.samples << ',' << r.paths.memory_hit << ',' << r.paths.model_a_only << ',' << r.paths.model_ab << ','
        << fmt(r.total_energy_wh) << ',' << fmt(r.mean_latency_ms) << ',' << fmt(r.p95_latency_ms) << ','
        << fmt(r.p99_latency_ms);
    if (r.metrics) {
        out << ',' << fmt(r.metrics->accuracy) << ',' << fmt(r.metrics->precision) << ','
            << fmt(r.metrics->recall) << ',' << fmt(r.metrics->f1);
    } else {
        out << ",,,,";
    }
    out << '\n';
    return out.str();
}

Reduction compare(const RunReport& baseline, const RunReport& candidate) {
    if (baseline.samples != candidate.samples) throw DataError("reports cover different sample counts");
    auto pct = [](double base, double cand, const char* what) {
        if (base == 0.0) throw DataError(std::string("division by zero: baseline ") + what + " is 0");
        return 100.0 * (base - cand) / base;
    };
    return {pct(baseline.total_energy_wh, candidate.total_energy_wh, "energy"),
            pct(baseline.mean_latency_ms, candidate.mean_latency_ms, "mean latency"),
            pct(baseline.p95_latency_ms, candidate.p95_latency_ms, "p95 latency"),
            pct(baseline.p99_latency_ms, candidate.p99_latency_ms, "p99 latency")};
}

std::string_view transform_name(DuplicateTransform t) {
    switch (t) {
    case DuplicateTransform::Identity: return "identity";
    case DuplicateTransform::Rot90: return "rot90";
    case DuplicateTransform::Rot180: return "rot180";
    case DuplicateTransform::MirrorH: return "mirror_h";
    case DuplicateTransform::MirrorV: return "mirror_v";
    case DuplicateTransform::RandomOfThese: return "random_of_these";
    }
    return "?";
}

DuplicateTransform parse_transform(std::string_view name) {
    for (auto t : {DuplicateTransform::Identity, DuplicateTransform::Rot90, DuplicateTransform::Rot180,
                   DuplicateTransform::MirrorH, DuplicateTransform::MirrorV, DuplicateTransform::RandomOfThese}) {
        if (transform_name(t) == name) return t;
    }
    throw DataError("unknown transform '" + std::string(name) + "'");
}

namespace {

ImageBuffer apply_transform(const ImageBuffer& img, DuplicateTransform t) {
    switch (t) {
    case DuplicateTransform::Identity: return img;
    case DuplicateTransform::Rot90: return rotate90(img);
    case DuplicateTransform::Rot180: return rotate180(img);
    case DuplicateTransform::MirrorH: return mirror_horizontal(img);
    case DuplicateTransform::MirrorV: return mirror_vertical(img);
    case DuplicateTransform::RandomOfThese: break;
    }
    throw DataError("random transform must be resolved before applying");
}

} // namespace

std::vector<SampleRef> duplicated_stream(const std::vector<SampleRef>& base, double ratio,
                                         DuplicateTransform transform, std::uint64_t seed) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw DataError("duplication ratio must lie in [0,1]");
    const auto dups = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(base.size())));
    std::mt19937_64 rng(seed);
    std::vector<SampleRef> out;
    out.reserve(base.size() + dups);
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.push_back(base[i]);
        if (i >= dups) continue;
        SampleRef dup = base[i];
        auto t = transform;
        if (t == DuplicateTransform::RandomOfThese) t = static_cast<DuplicateTransform>(rng() % 5);
        if (dup.image) {
            dup.image = apply_transform(*dup.image, t);
        } else if (t != DuplicateTransform::Identity) {
            throw DataError("transform " + std::string(transform_name(t)) + " requested without images");
        }
        out.push_back(std::move(dup));
    }
    return out;
}

std::vector<CurvePoint> duplication_experiment(const std::vector<SampleRef>& base, std::vector<double> ratios,
                                               DuplicateTransform transform,
                                               const std::vector<NamedEngine>& engines, const CostProfile& costs,
                                               std::uint64_t seed) {
    std::sort(ratios.begin(), ratios.end());
    std::vector<std::vector<SampleRef>> streams;
    streams.reserve(ratios.size());
    for (double r : ratios) streams.push_back(duplicated_stream(base, r, transform, seed));

    std::vector<CurvePoint> curve;
    for (const auto& named : engines) {
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            auto engine = named.make();
            const auto batch = run_batch(*engine, streams[i]);
            const auto report = aggregate(batch.traces, named.costs ? *named.costs : costs);
            curve.push_back({ratios[i], named.name, report.total_energy_wh, report.hits()});
        }
    }
    return curve;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::ostringstream out;
    out << "ratio,engine,total_energy_wh,hits\n";
    for (const auto& p : curve) out << fmt(p.ratio) << ',' << p.engine << ',' << fmt(p.total_energy_wh) << ',' << p.hits << '\n';
    return out.str();
}

double memory_overhead(const RunReport& plain, const RunReport& with_memory) {
    return -compare(plain, with_memory).energy;
}

} // namespace dualcascade
