#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "phids/dataset.hpp"
#include "phids/errors.hpp"
#include "phids/fca.hpp"
#include "phids/ga.hpp"

namespace phids {

/// Per-column encoding rules frozen from a training split. Nominal columns
/// keep their category list so the mapping stays invertible.
struct EncodingDictionary {
    struct Column {
        bool nominal = false;
        double min = 0.0, max = 0.0;          // continuous
        std::vector<std::string> categories;  // nominal, sorted
    };
    std::vector<Column> columns;

    static EncodingDictionary build(const std::vector<FeatureRecord>& records) {
        if (records.empty()) throw empty_input("cannot build encoding from zero records");
        const std::size_t width = records.front().fields.size();
        for (const FeatureRecord& rec : records)
            if (rec.fields.size() != width)
                throw schema_mismatch("records disagree on field count");

        EncodingDictionary dict;
        dict.columns.resize(width);
        for (std::size_t j = 0; j < width; ++j) {
            Column& col = dict.columns[j];
            col.nominal = std::any_of(records.begin(), records.end(), [&](const FeatureRecord& r) {
                return !r.fields[j].number.has_value();
            });
            if (col.nominal) {
                for (const FeatureRecord& r : records) col.categories.push_back(r.fields[j].text);
                std::sort(col.categories.begin(), col.categories.end());
                col.categories.erase(std::unique(col.categories.begin(), col.categories.end()),
                                     col.categories.end());
            } else {
                col.min = col.max = *records.front().fields[j].number;
                for (const FeatureRecord& r : records) {
                    col.min = std::min(col.min, *r.fields[j].number);
                    col.max = std::max(col.max, *r.fields[j].number);
                }
            }
        }
        return dict;
    }
};

using EncodedVector = std::vector<double>;

/// Maps a raw record into [0, 1] per column: nominal categories to
/// index/(k-1), continuous values min-max normalized against the dictionary
/// ranges (clamped; constant columns map to 0).
inline EncodedVector encode(const FeatureRecord& record, const EncodingDictionary& dict) {
    if (record.fields.size() != dict.columns.size())
        throw schema_mismatch("record has " + std::to_string(record.fields.size()) +
                              " fields, dictionary expects " +
                              std::to_string(dict.columns.size()));
    EncodedVector out(dict.columns.size());
    for (std::size_t j = 0; j < dict.columns.size(); ++j) {
        const auto& col = dict.columns[j];
        const FieldValue& f = record.fields[j];
        if (col.nominal) {
            auto it = std::lower_bound(col.categories.begin(), col.categories.end(), f.text);
            if (it == col.categories.end() || *it != f.text) throw unknown_category(j, f.text);
            std::size_t index = static_cast<std::size_t>(it - col.categories.begin());
            out[j] = col.categories.size() == 1
                         ? 0.0
                         : static_cast<double>(index) / static_cast<double>(col.categories.size() - 1);
        } else {
            if (!f.number) throw schema_mismatch("column " + std::to_string(j) +
                                                 ": expected a numeric value, got \"" + f.text + "\"");
            if (col.max == col.min) {
                out[j] = 0.0;
            } else {
                out[j] = std::clamp((*f.number - col.min) / (col.max - col.min), 0.0, 1.0);
            }
        }
    }
    return out;
}

/// Binary lattice from an encoded vector: cell i is 1 iff v_i >= threshold_i.
/// Thresholds are per-feature or a single broadcast value.
inline Configuration quantize(const EncodedVector& v, const std::vector<double>& thresholds) {
    if (thresholds.size() != 1 && thresholds.size() != v.size())
        throw length_mismatch("need 1 or " + std::to_string(v.size()) + " thresholds, got " +
                              std::to_string(thresholds.size()));
    Configuration cfg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double thr = thresholds.size() == 1 ? thresholds.front() : thresholds[i];
        cfg[i] = v[i] >= thr ? 1.0 : 0.0;
    }
    return cfg;
}

// ---- evaluation ----------------------------------------------------------

struct Metrics {
    double accuracy = 0.0;
    double detection_rate = 0.0;       // detected intrusions / actual intrusions
    double false_positive_rate = 0.0;  // false alarms / actual normals
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

inline Metrics evaluate(const std::vector<Label>& predictions, const std::vector<Label>& labels) {
    if (predictions.empty() || labels.empty()) throw empty_input("nothing to evaluate");
    if (predictions.size() != labels.size())
        throw length_mismatch("got " + std::to_string(predictions.size()) + " predictions for " +
                              std::to_string(labels.size()) + " labels");
    Metrics m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        bool is_intrusion = labels[i] == Label::Intrusion;
        bool flagged = predictions[i] == Label::Intrusion;
        if (is_intrusion && flagged) ++m.tp;
        else if (is_intrusion) ++m.fn;
        else if (flagged) ++m.fp;
        else ++m.tn;
    }
    const long intrusions = m.tp + m.fn;
    const long normals = m.fp + m.tn;
    m.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(labels.size());
    m.detection_rate = intrusions == 0 ? 1.0 : static_cast<double>(m.tp) / intrusions;
    m.false_positive_rate = normals == 0 ? 0.0 : static_cast<double>(m.fp) / normals;
    return m;
}

// ---- FCA basin classifier -------------------------------------------------

/// One trained recognizer per class, each an FCA rule vector with the
/// malicious index of every basin its training data reached.
struct FcaClassifierModel {
    struct ClassCa {
        FcaRuleVector rules;
        std::map<EncodedState, double> rq;  // canonical attractor -> intrusion fraction
    };

    EncodingDictionary dictionary;
    std::vector<double> thresholds;  // one per feature
    ClassCa intrusion;
    ClassCa normal;
    double training_accuracy = 0.0;

    std::size_t feature_count() const { return dictionary.columns.size(); }
};

namespace detail {

inline double rq_lookup(const FcaClassifierModel::ClassCa& ca, EncodedState state) {
    CompiledRules compiled(ca.rules);
    auto it = ca.rq.find(attractor_key(state, compiled));
    return it == ca.rq.end() ? 0.0 : it->second;  // unseen basins lean normal
}

}  // namespace detail

/// Malicious index of a record under the trained model: mean of the two
/// per-class CA estimates, each read from the basin the record settles in.
inline double malicious_index(const FcaClassifierModel& model, const FeatureRecord& record) {
    EncodedState state = encode_binary(quantize(encode(record, model.dictionary), model.thresholds));
    return 0.5 * (detail::rq_lookup(model.intrusion, state) +
                  detail::rq_lookup(model.normal, state));
}

/// INTRUSION iff the malicious index reaches 0.5; boundary cases alert.
inline Label classify(const FcaClassifierModel& model, const FeatureRecord& record) {
    return malicious_index(model, record) >= 0.5 ? Label::Intrusion : Label::Normal;
}

struct FcaTrainParams {
    GaParams ga;
    int generations = 25;
    std::size_t population = 50;
    double quantize_threshold = 0.5;
    std::vector<double> per_feature_thresholds;  // overrides the global threshold when set
    double validation_fraction = 0.3;
    std::size_t min_basins = 2;
};

namespace detail {

struct QuantizedTraining {
    std::vector<std::pair<EncodedState, bool>> all;  // state, is_intrusion
    std::vector<std::pair<EncodedState, bool>> fit;
    std::vector<std::pair<EncodedState, bool>> validation;
};

inline std::map<EncodedState, double> rq_table(
    const std::vector<std::pair<EncodedState, bool>>& states, const CompiledRules& rules) {
    std::map<EncodedState, std::pair<std::size_t, std::size_t>> counts;  // total, intrusion
    for (const auto& [state, is_intrusion] : states) {
        auto& c = counts[attractor_key(state, rules)];
        ++c.first;
        if (is_intrusion) ++c.second;
    }
    std::map<EncodedState, double> rq;
    for (const auto& [key, c] : counts)
        rq[key] = static_cast<double>(c.second) / static_cast<double>(c.first);
    return rq;
}

inline double rule_accuracy(const std::vector<std::pair<EncodedState, bool>>& eval_states,
                            const std::map<EncodedState, double>& rq, const CompiledRules& rules) {
    std::size_t correct = 0;
    for (const auto& [state, is_intrusion] : eval_states) {
        auto it = rq.find(attractor_key(state, rules));
        double value = it == rq.end() ? 0.0 : it->second;
        bool flagged = value >= 0.5;
        if (flagged == is_intrusion) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(eval_states.size());
}

}  // namespace detail

/// Trains the two per-class CAs with a GA whose fitness is the accuracy of
/// the basin decision rule on a held-in validation split (fitness sharing
/// applies inside ga_evolve). The final rq tables are rebuilt over the full
/// training set with the winning rule vectors.
inline FcaClassifierModel train_fca(const std::vector<FeatureRecord>& training,
                                    const FcaTrainParams& params = {}) {
    if (training.empty()) throw empty_input("training set is empty");
    bool has_intrusion = false, has_normal = false;
    for (const FeatureRecord& r : training) {
        if (!r.label) throw schema_mismatch("training record without a label");
        (*r.label == Label::Intrusion ? has_intrusion : has_normal) = true;
    }
    if (!has_intrusion) throw single_class_training("intrusion");
    if (!has_normal) throw single_class_training("normal");

    FcaClassifierModel model;
    model.dictionary = EncodingDictionary::build(training);
    const std::size_t width = model.dictionary.columns.size();
    model.thresholds = params.per_feature_thresholds.empty()
                           ? std::vector<double>(width, params.quantize_threshold)
                           : params.per_feature_thresholds;
    if (model.thresholds.size() != width)
        throw length_mismatch("per-feature thresholds must match the feature count");

    detail::QuantizedTraining data;
    for (const FeatureRecord& r : training)
        data.all.emplace_back(encode_binary(quantize(encode(r, model.dictionary), model.thresholds)),
                              *r.label == Label::Intrusion);

    // stratified split so both halves keep both classes where possible
    std::mt19937_64 rng(params.ga.seed);
    for (bool intrusion_class : {false, true}) {
        std::vector<std::pair<EncodedState, bool>> members;
        for (const auto& entry : data.all)
            if (entry.second == intrusion_class) members.push_back(entry);
        std::shuffle(members.begin(), members.end(), rng);
        std::size_t val_count =
            members.size() < 2
                ? 0
                : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(
                                               members.size() * params.validation_fraction)));
        val_count = std::min(val_count, members.size() - 1);
        for (std::size_t i = 0; i < members.size(); ++i)
            (i < val_count ? data.validation : data.fit).push_back(members[i]);
    }
    if (data.validation.empty()) data.validation = data.fit;

    auto fitness = [&](const Chromosome& c) {
        CompiledRules compiled(c.rules);
        auto rq = detail::rq_table(data.fit, compiled);
        return detail::rule_accuracy(data.validation, rq, compiled);
    };

    auto run_ga = [&](std::uint64_t seed) {
        GaParams ga = params.ga;
        ga.seed = seed;
        std::mt19937_64 init_rng(seed ^ 0x9e3779b97f4a7c15ull);
        std::uniform_int_distribution<std::size_t> pick_rule(0, kFcaRules.size() - 1);
        std::vector<Chromosome> population;
        for (std::size_t i = 0; i < params.population; ++i) {
            std::vector<int> genes(width);
            for (int& g : genes) g = kFcaRules[pick_rule(init_rng)];
            population.push_back(Chromosome{FcaRuleVector(std::move(genes)), {}, 0.0});
        }
        return ga_evolve(std::move(population), fitness, params.generations, ga);
    };

    GaResult intrusion_ga = run_ga(params.ga.seed);
    GaResult normal_ga = run_ga(params.ga.seed + 1);

    auto finish = [&](const Chromosome& best) {
        FcaClassifierModel::ClassCa ca{best.rules, {}};
        CaTree tree = ca_tree_build(data.all, params.min_basins, best.rules);
        for (const auto& [key, stats] : tree.basins) ca.rq[key] = stats.rq;
        return ca;
    };
    model.intrusion = finish(intrusion_ga.best);
    model.normal = finish(normal_ga.best);

    std::size_t correct = 0;
    for (const FeatureRecord& r : training)
        if (classify(model, r) == *r.label) ++correct;
    model.training_accuracy = static_cast<double>(correct) / training.size();
    return model;
}

}  // namespace phids
