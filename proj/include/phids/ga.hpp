#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "phids/errors.hpp"
#include "phids/fca.hpp"

namespace phids {

/// A candidate rule assignment plus auxiliary condition genes (e.g. address
/// octet bounds), each kept within [0, 255].
struct Chromosome {
    FcaRuleVector rules;
    std::vector<int> octets;
    double fitness = 0.0;  // raw fitness from the latest evaluation
};

struct GaParams {
    double crossover_rate = 0.9;
    double mutation_rate = 0.05;  // per gene
    int sharing_radius = 1;       // Hamming distance on rule vectors
    int elitism = 1;
    std::uint64_t seed = 1;
};

using FitnessFn = std::function<double(const Chromosome&)>;

struct GaResult {
    std::vector<Chromosome> population;
    std::vector<double> best_history;  // best raw fitness, initial + per generation
    Chromosome best;                   // best raw-fitness individual seen
};

namespace detail {

inline int hamming(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return static_cast<int>(std::max(a.size(), b.size()));
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

inline void mutate(Chromosome& c, const GaParams& params, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_rule(0, kFcaRules.size() - 1);
    for (int& gene : c.rules.rules)
        if (coin(rng) < params.mutation_rate) gene = kFcaRules[pick_rule(rng)];
    std::uniform_int_distribution<int> delta(-32, 32);
    for (int& gene : c.octets)
        if (coin(rng) < params.mutation_rate)
            gene = std::clamp(gene + delta(rng), 0, 255);
}

inline void crossover(Chromosome& a, Chromosome& b, std::mt19937_64& rng) {
    std::size_t rule_len = std::min(a.rules.rules.size(), b.rules.rules.size());
    std::size_t octet_len = std::min(a.octets.size(), b.octets.size());
    std::size_t total = rule_len + octet_len;
    if (total < 2) return;
    std::uniform_int_distribution<std::size_t> pick_point(1, total - 1);
    std::size_t point = pick_point(rng);
    for (std::size_t i = point; i < rule_len; ++i) std::swap(a.rules.rules[i], b.rules.rules[i]);
    for (std::size_t i = point > rule_len ? point - rule_len : 0; i < octet_len; ++i)
        std::swap(a.octets[i], b.octets[i]);
}

}  // namespace detail

/// Generational GA over rule-vector chromosomes: tournament selection on
/// shared fitness (raw fitness divided by the niche count within the sharing
/// radius), single-point crossover, per-gene mutation constrained to legal
/// values, and elitism on raw fitness.
inline GaResult ga_evolve(std::vector<Chromosome> population, const FitnessFn& fitness_fn,
                          int generations, const GaParams& params) {
    if (population.empty()) throw empty_input("GA population is empty");
    if (params.elitism < 1) throw phids_error("elitism count must be >= 1");

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    for (Chromosome& c : population) c.fitness = fitness_fn(c);

    auto best_index = [](const std::vector<Chromosome>& pop) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (pop[i].fitness > pop[best].fitness) best = i;
        return best;
    };

    GaResult result;
    result.best = population[best_index(population)];
    result.best_history.push_back(result.best.fitness);

    const std::size_t pop_size = population.size();
    for (int gen = 0; gen < generations; ++gen) {
        // shared fitness for parent selection
        std::vector<double> shared(pop_size);
        for (std::size_t i = 0; i < pop_size; ++i) {
            int niche = 0;
            for (std::size_t j = 0; j < pop_size; ++j)
                if (detail::hamming(population[i].rules.rules, population[j].rules.rules) <=
                    params.sharing_radius)
                    ++niche;
            shared[i] = population[i].fitness / static_cast<double>(niche);
        }

        auto tournament = [&]() -> const Chromosome& {
            std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
            std::size_t best = pick(rng);
            for (int round = 1; round < 3; ++round) {
                std::size_t challenger = pick(rng);
                if (shared[challenger] > shared[best]) best = challenger;
            }
            return population[best];
        };

        std::vector<Chromosome> next;
        next.reserve(pop_size);

        // elites carry over unchanged, by raw fitness
        std::vector<std::size_t> order(pop_size);
        for (std::size_t i = 0; i < pop_size; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return population[a].fitness > population[b].fitness;
        });
        for (int e = 0; e < params.elitism && next.size() < pop_size; ++e)
            next.push_back(population[order[e]]);

        while (next.size() < pop_size) {
            Chromosome child_a = tournament();
            Chromosome child_b = tournament();
            if (coin(rng) < params.crossover_rate) detail::crossover(child_a, child_b, rng);
            detail::mutate(child_a, params, rng);
            detail::mutate(child_b, params, rng);
            child_a.fitness = fitness_fn(child_a);
            next.push_back(std::move(child_a));
            if (next.size() < pop_size) {
                child_b.fitness = fitness_fn(child_b);
                next.push_back(std::move(child_b));
            }
        }
        population = std::move(next);

        std::size_t best = best_index(population);
        if (population[best].fitness > result.best.fitness) result.best = population[best];
        result.best_history.push_back(population[best].fitness);
    }

    result.population = std::move(population);
    return result;
}

}  // namespace phids
