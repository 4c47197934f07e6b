#include "oncoclass/registry.hpp"

#include <algorithm>

#include "oncoclass/classifiers_ensemble.hpp"
#include "oncoclass/classifiers_optim.hpp"
#include "oncoclass/classifiers_prob.hpp"
#include "oncoclass/classifiers_tree.hpp"

namespace oncoclass {

std::span<const ClassifierInfo> classifier_catalog() {
    static const std::vector<ClassifierInfo> catalog{
        {"bayes-net", "Bayes Net", "BN", {"bins", "max_parents", "ess"}},
        {"naive-bayes", "Naive Bayes", "NB", {"variance_floor"}},
        {"logit-boost", "Logit Boost", "LB", {"stages", "shrinkage", "z_max"}},
        {"c45", "C4.5", "C4.5", {"min_leaf", "cf", "prune"}},
        {"lmt", "Logistic Model Tree", "LMT", {"max_boost_iters", "min_split", "min_leaf", "z_max"}},
        {"random-forest", "Random Forest", "RF", {"trees", "features", "min_leaf", "bootstrap"}},
        {"decision-table", "Decision Table", "DT", {"bins", "max_subset", "max_stale"}},
        {"smo-svm", "SMO-SVM", "SMO", {"c", "tol", "max_passes"}},
        {"mlp", "Neural Network", "NN", {"hidden", "lr", "momentum", "epochs", "init_scale"}},
        {"ga", "Genetic Algorithm", "GA",
         {"population", "generations", "crossover", "mutation", "init_scale", "mutation_scale"}},
    };
    return catalog;
}

bool is_classifier_name(std::string_view name) {
    return std::ranges::any_of(classifier_catalog(), [&](const auto& c) { return c.name == name; });
}

const ClassifierInfo& classifier_info(std::string_view name) {
    for (const auto& c : classifier_catalog()) {
        if (c.name == name) return c;
    }
    throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

void validate_params(std::string_view name, const Params& params) {
    const auto& info = classifier_info(name);
    for (const auto& [key, value] : params.values()) {
        if (std::ranges::find(info.params, key) == info.params.end()) {
            throw ConfigError("classifier '" + std::string(name) + "' has no parameter '" + key + "'");
        }
    }
}

std::shared_ptr<const Model> train_classifier(std::string_view name, const TrainingSet& train, const Params& p,
                                              const SeedSpec& seed, unsigned jobs) {
    validate_params(name, p);
    if (name == "naive-bayes") {
        return std::make_shared<NaiveBayesModel>(train_naive_bayes(train, p.get("variance_floor", 1e-9)));
    }
    if (name == "bayes-net") {
        BayesNetOptions o;
        o.bins = p.get_count("bins", o.bins);
        o.max_parents = static_cast<int>(p.get("max_parents", o.max_parents));
        o.ess = p.get("ess", o.ess);
        return std::make_shared<BayesNetModel>(train_bayes_net(train, o));
    }
    if (name == "logit-boost") {
        LogitBoostOptions o;
        o.stages = p.get_count("stages", o.stages);
        o.shrinkage = p.get("shrinkage", o.shrinkage);
        o.z_max = p.get("z_max", o.z_max);
        return std::make_shared<LogitBoostModel>(train_logitboost(train, o));
    }
    if (name == "c45") {
        C45Options o;
        o.min_leaf = p.get_count("min_leaf", o.min_leaf);
        o.cf = p.get("cf", o.cf);
        o.prune = p.get_flag("prune", o.prune);
        return std::make_shared<DecisionTree>(train_c45(train, o));
    }
    if (name == "lmt") {
        LmtOptions o;
        o.max_boost_iters = p.get_count("max_boost_iters", o.max_boost_iters);
        o.min_split = p.get_count("min_split", o.min_split);
        o.min_leaf = p.get_count("min_leaf", o.min_leaf);
        o.z_max = p.get("z_max", o.z_max);
        return std::make_shared<LogisticModelTree>(train_lmt(train, o));
    }
    if (name == "random-forest") {
        RandomForestOptions o;
        o.trees = p.get_count("trees", o.trees);
        o.features_per_split = p.get_count("features", o.features_per_split);
        o.min_leaf = p.get_count("min_leaf", o.min_leaf);
        o.bootstrap = p.get_flag("bootstrap", o.bootstrap);
        o.jobs = jobs;
        return std::make_shared<RandomForestModel>(train_random_forest(train, o, seed));
    }
    if (name == "decision-table") {
        DecisionTableOptions o;
        o.bins = p.get_count("bins", o.bins);
        o.max_subset = p.get_count("max_subset", o.max_subset);
        o.max_stale = p.get_count("max_stale", o.max_stale);
        return std::make_shared<DecisionTableModel>(train_decision_table(train, o));
    }
    if (name == "smo-svm") {
        SvmOptions o;
        o.c = p.get("c", o.c);
        o.tol = p.get("tol", o.tol);
        o.max_passes = p.get_count("max_passes", o.max_passes);
        return std::make_shared<SvmModel>(train_smo_svm(train, o));
    }
    if (name == "mlp") {
        MlpOptions o;
        o.hidden = p.get_count("hidden", o.hidden);
        o.learning_rate = p.get("lr", o.learning_rate);
        o.momentum = p.get("momentum", o.momentum);
        o.epochs = p.get_count("epochs", o.epochs);
        o.init_scale = p.get("init_scale", o.init_scale);
        return std::make_shared<MlpModel>(train_mlp(train, o, seed));
    }
    if (name == "ga") {
        GaOptions o;
        o.population = p.get_count("population", o.population);
        o.generations = p.get_count("generations", o.generations);
        o.crossover_rate = p.get("crossover", o.crossover_rate);
        o.mutation_rate = p.get("mutation", o.mutation_rate);
        o.init_scale = p.get("init_scale", o.init_scale);
        o.mutation_scale = p.get("mutation_scale", o.mutation_scale);
        return std::make_shared<GaModel>(train_ga(train, o, seed));
    }
    throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

}  // namespace oncoclass
