#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oncoclass/model.hpp"

namespace oncoclass {

struct ClassifierInfo {
    std::string_view name;          // canonical CLI name, e.g. "bayes-net"
    std::string_view display_name;  // table label, e.g. "Bayes Net"
    std::string_view short_name;    // column label, e.g. "BN"
    std::vector<std::string_view> params;
};

/// The ten classifiers in canonical report order.
std::span<const ClassifierInfo> classifier_catalog();

const ClassifierInfo& classifier_info(std::string_view name);
bool is_classifier_name(std::string_view name);

/// Throws ConfigError for an unknown classifier or parameter key.
void validate_params(std::string_view name, const Params& params);

/// Trains the named classifier. `jobs` bounds internal parallelism (forest trees).
std::shared_ptr<const Model> train_classifier(std::string_view name, const TrainingSet& train, const Params& params,
                                              const SeedSpec& seed, unsigned jobs = 1);

}  // namespace oncoclass
