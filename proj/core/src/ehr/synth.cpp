// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"
#include "mplite/ehr/csv_tables.hpp"
#include "mplite/ehr/dataset.hpp"
#include "mplite/nn/rng.hpp"

namespace mplite::ehr {
namespace {

using nlohmann::json;

constexpr std::int64_t kEpochBase = 1'300'000'000;
constexpr std::int64_t kDay = 86'400;
constexpr std::int64_t kHour = 3'600;

void require_probability(double p, const char* name) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw ValidationError(std::string("synth: ") + name + " must be a probability in [0, 1], got " +
                          std::to_string(p));
  }
}

std::string padded(char prefix, std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, value);
  return buf;
}

std::vector<std::string> make_diag_codes(const GenConfig& c) {
  std::vector<std::string> codes;
  codes.reserve(c.n_diag);
  for (std::size_t d = 0; d < c.n_heart_failure; ++d) codes.push_back("428." + std::to_string(d));
  for (std::size_t j = 0; codes.size() < c.n_diag; ++j) {
    std::size_t base = 100 + j % 899;
    if (base >= 428) ++base;
    codes.push_back(std::to_string(base) + "." + std::to_string(j / 899));
  }
  return codes;
}

// Index drawn from `weights` restricted to entries with allowed[i] != 0.
std::size_t draw_weighted(nn::Rng& rng, const std::vector<double>& weights, const std::vector<std::uint8_t>& allowed) {
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (allowed[i]) total += weights[i];
  }
  double u = rng.uniform() * total;
  std::size_t last = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!allowed[i]) continue;
    last = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last;
}

json config_to_json(const GenConfig& c) {
  return json{{"n_diag", c.n_diag},
              {"n_lab", c.n_lab},
              {"n_patients", c.n_patients},
              {"single_visit_fraction", c.single_visit_fraction},
              {"min_visits", c.min_visits},
              {"max_visits", c.max_visits},
              {"max_conditions", c.max_conditions},
              {"labs_per_disease", c.labs_per_disease},
              {"unique_labs", c.unique_labs},
              {"n_heart_failure", c.n_heart_failure},
              {"prevalence_exponent", c.prevalence_exponent},
              {"lab_flip_rate", c.lab_flip_rate},
              {"persistence", c.persistence},
              {"onset_rate", c.onset_rate},
              {"miss_rate", c.miss_rate}};
}

GenConfig config_from_json(const json& j) {
  GenConfig c;
  c.n_diag = j.at("n_diag").get<std::size_t>();
  c.n_lab = j.at("n_lab").get<std::size_t>();
  c.n_patients = j.at("n_patients").get<std::size_t>();
  c.single_visit_fraction = j.at("single_visit_fraction").get<double>();
  c.min_visits = j.at("min_visits").get<std::size_t>();
  c.max_visits = j.at("max_visits").get<std::size_t>();
  c.max_conditions = j.at("max_conditions").get<std::size_t>();
  c.labs_per_disease = j.at("labs_per_disease").get<std::size_t>();
  c.unique_labs = j.at("unique_labs").get<bool>();
  c.n_heart_failure = j.at("n_heart_failure").get<std::size_t>();
  c.prevalence_exponent = j.at("prevalence_exponent").get<double>();
  c.lab_flip_rate = j.at("lab_flip_rate").get<double>();
  c.persistence = j.at("persistence").get<double>();
  c.onset_rate = j.at("onset_rate").get<double>();
  c.miss_rate = j.at("miss_rate").get<double>();
  return c;
}

}  // namespace

void validate(const GenConfig& c) {
  require_probability(c.single_visit_fraction, "single_visit_fraction");
  require_probability(c.lab_flip_rate, "lab_flip_rate");
  require_probability(c.persistence, "persistence");
  require_probability(c.onset_rate, "onset_rate");
  require_probability(c.miss_rate, "miss_rate");
  if (c.n_diag == 0 || c.n_lab == 0) throw ValidationError("synth: n_diag and n_lab must be positive");
  if (c.n_patients == 0) throw ValidationError("synth: n_patients must be positive");
  if (c.min_visits < 2 || c.max_visits < c.min_visits) {
    throw ValidationError("synth: need 2 <= min_visits <= max_visits");
  }
  if (c.max_conditions == 0 || c.max_conditions > c.n_diag) {
    throw ValidationError("synth: max_conditions must be in [1, n_diag]");
  }
  if (c.labs_per_disease == 0 || c.labs_per_disease > c.n_lab) {
    throw ValidationError("synth: labs_per_disease must be in [1, n_lab]");
  }
  if (c.unique_labs && c.n_diag * c.labs_per_disease > c.n_lab) {
    throw ValidationError("synth: unique_labs needs n_lab >= n_diag * labs_per_disease");
  }
  if (c.n_heart_failure > c.n_diag || c.n_heart_failure > 10) {
    throw ValidationError("synth: n_heart_failure must be at most min(n_diag, 10)");
  }
  if (!std::isfinite(c.prevalence_exponent) || c.prevalence_exponent < 0.0) {
    throw ValidationError("synth: prevalence_exponent must be non-negative");
  }
}

SynthDataset synth_generate(const GenConfig& config, std::uint64_t seed) {
  validate(config);
  const nn::Rng root(seed);
  SynthDataset out;
  GroundTruth& truth = out.truth;
  truth.config = config;
  truth.seed = seed;
  truth.diag_codes = make_diag_codes(config);
  for (std::size_t l = 0; l < config.n_lab; ++l) truth.lab_codes.push_back(std::to_string(50800 + l));

  truth.prevalence.resize(config.n_diag);
  for (std::size_t d = 0; d < config.n_diag; ++d) {
    truth.prevalence[d] = std::pow(static_cast<double>(d + 1), -config.prevalence_exponent);
  }
  const double norm = std::accumulate(truth.prevalence.begin(), truth.prevalence.end(), 0.0);
  for (auto& p : truth.prevalence) p /= norm;

  {
    nn::Rng rng = root.split(0);
    truth.disease_labs.resize(config.n_diag);
    if (config.unique_labs) {
      std::vector<std::size_t> pool(config.n_lab);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      rng.shuffle(pool);
      for (std::size_t d = 0; d < config.n_diag; ++d) {
        auto first = pool.begin() + static_cast<std::ptrdiff_t>(d * config.labs_per_disease);
        truth.disease_labs[d].assign(first, first + static_cast<std::ptrdiff_t>(config.labs_per_disease));
      }
    } else {
      for (std::size_t d = 0; d < config.n_diag; ++d) {
        std::vector<std::size_t> pool(config.n_lab);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        rng.shuffle(pool);
        truth.disease_labs[d].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(config.labs_per_disease));
      }
    }
    for (auto& labs : truth.disease_labs) std::sort(labs.begin(), labs.end());
  }

  // Which patients have a single visit: exactly round(fraction * N).
  const auto n_single = static_cast<std::size_t>(
      std::llround(config.single_visit_fraction * static_cast<double>(config.n_patients)));
  std::vector<std::uint8_t> single(config.n_patients, 0);
  {
    nn::Rng rng = root.split(1);
    std::vector<std::size_t> order(config.n_patients);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    for (std::size_t i = 0; i < n_single; ++i) single[order[i]] = 1;
  }

  std::size_t visit_counter = 0;
  for (std::size_t p = 0; p < config.n_patients; ++p) {
    nn::Rng rng = root.split(1000 + p);
    const std::string pid = padded('P', p + 1, 6);
    const std::size_t n_visits =
        single[p] ? 1 : config.min_visits + rng.below(config.max_visits - config.min_visits + 1);

    // Initial condition set: K ~ U{1..max}, sequential weighted draws.
    std::vector<std::uint8_t> active(config.n_diag, 0);
    const std::size_t k = 1 + rng.below(config.max_conditions);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::uint8_t> allowed(config.n_diag);
      for (std::size_t d = 0; d < config.n_diag; ++d) allowed[d] = active[d] ? 0 : 1;
      active[draw_weighted(rng, truth.prevalence, allowed)] = 1;
    }

    std::int64_t admit = kEpochBase + static_cast<std::int64_t>(rng.below(365)) * kDay;
    std::vector<std::uint8_t> prev_obs(config.n_lab, 0);
    for (std::size_t t = 0; t < n_visits; ++t) {
      if (t > 0) {
        admit += (30 + static_cast<std::int64_t>(rng.below(336))) * kDay;
        for (std::size_t d = 0; d < config.n_diag; ++d) {
          if (active[d] && !rng.bernoulli(config.persistence)) active[d] = 0;
        }
        std::vector<std::uint8_t> allowed(config.n_diag);
        for (std::size_t d = 0; d < config.n_diag; ++d) allowed[d] = active[d] ? 0 : 1;
        const bool any_free = std::any_of(allowed.begin(), allowed.end(), [](auto a) { return a != 0; });
        if (any_free && rng.bernoulli(config.onset_rate)) active[draw_weighted(rng, truth.prevalence, allowed)] = 1;
        if (std::none_of(active.begin(), active.end(), [](auto a) { return a != 0; })) {
          std::vector<std::uint8_t> all(config.n_diag, 1);
          active[draw_weighted(rng, truth.prevalence, all)] = 1;
        }
      }
      const std::string vid = padded('V', ++visit_counter, 7);
      out.admissions.push_back({pid, vid, admit, 0});

      // Coded diagnoses; a visit never ends up uncoded.
      std::vector<std::size_t> coded;
      std::size_t first_active = config.n_diag;
      for (std::size_t d = 0; d < config.n_diag; ++d) {
        if (!active[d]) continue;
        if (first_active == config.n_diag) first_active = d;
        if (!rng.bernoulli(config.miss_rate)) coded.push_back(d);
      }
      if (coded.empty()) coded.push_back(first_active);
      for (auto d : coded) out.diagnoses.push_back({pid, vid, truth.diag_codes[d], 0});

      // Lab results drawn shortly before admission. Items observed abnormal
      // now, or abnormal at the previous visit, get a result row.
      std::vector<std::uint8_t> state(config.n_lab, 0);
      for (std::size_t d = 0; d < config.n_diag; ++d) {
        if (!active[d]) continue;
        for (auto l : truth.disease_labs[d]) state[l] = 1;
      }
      const std::int64_t taken = admit - (1 + static_cast<std::int64_t>(rng.below(47))) * kHour;
      for (std::size_t l = 0; l < config.n_lab; ++l) {
        const std::uint8_t obs = state[l] ^ static_cast<std::uint8_t>(rng.bernoulli(config.lab_flip_rate));
        if (obs || prev_obs[l]) out.labevents.push_back({pid, vid, truth.lab_codes[l], obs != 0, taken, 0});
        prev_obs[l] = obs;
      }
    }
  }
  return out;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  json j;
  j["format"] = "mplite-ground-truth-v1";
  j["seed"] = truth.seed;
  j["config"] = config_to_json(truth.config);
  j["diag_codes"] = truth.diag_codes;
  j["lab_codes"] = truth.lab_codes;
  j["prevalence"] = truth.prevalence;
  j["disease_labs"] = truth.disease_labs;
  return j.dump(2) + "\n";
}

GroundTruth ground_truth_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "mplite-ground-truth-v1") throw DataError("ground truth: unsupported format");
    GroundTruth t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.config = config_from_json(j.at("config"));
    t.diag_codes = j.at("diag_codes").get<std::vector<std::string>>();
    t.lab_codes = j.at("lab_codes").get<std::vector<std::string>>();
    t.prevalence = j.at("prevalence").get<std::vector<double>>();
    t.disease_labs = j.at("disease_labs").get<std::vector<std::vector<std::size_t>>>();
    return t;
  } catch (const json::exception& e) {
    throw DataError(std::string("ground truth: ") + e.what());
  }
}

void write_synth_dataset(const SynthDataset& data, const std::filesystem::path& dir) {
  write_file_atomic(dir / kAdmissionsFile, format_admissions(data.admissions));
  write_file_atomic(dir / kDiagnosesFile, format_diagnoses(data.diagnoses));
  write_file_atomic(dir / kLabeventsFile, format_labevents(data.labevents));
  write_file_atomic(dir / kGroundTruthFile, ground_truth_to_json(data.truth));
}

}  // namespace mplite::ehr
