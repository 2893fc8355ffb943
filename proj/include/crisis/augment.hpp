#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crisis/corpus.hpp"
#include "crisis/gnb.hpp"
#include "crisis/rng.hpp"
#include "crisis/taxonomy.hpp"

namespace crisis {

// Flat-file synonym source for EDA (word TAB synonyms, '#' comments).
// Lookups are case-insensitive; a word is never its own synonym.
class SynonymLexicon {
 public:
  static SynonymLexicon from_file(const std::string& path);
  explicit SynonymLexicon(
      std::map<std::string, std::vector<std::string>> entries = {});

  bool has(std::string_view word) const;
  // Sorted synonym list; empty when the word is unknown.
  const std::vector<std::string>& synonyms(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

enum class AugmentOrigin { Eda, Dga };

struct AugmentedExample {
  TweetRecord record;
  AugmentOrigin origin = AugmentOrigin::Eda;
  std::optional<std::string> source_tweet_id;  // EDA provenance
  std::optional<std::string> prompt;           // DGA provenance
  bool alive = true;
  int epoch_removed = -1;
};

struct EdaParams {
  double alpha = 0.1;
};

// One EDA perturbation (synonym replacement, random insertion, random swap,
// or random deletion, chosen per seed), touching round(alpha * tokens)
// tokens and never emptying the text. Labels are copied unchanged.
AugmentedExample eda_augment(const TweetRecord& record, std::uint64_t seed,
                             const EdaParams& params,
                             const SynonymLexicon& lexicon);

struct GeneratorControls {
  int max_tokens = 40;
  double temperature = 0.9;
  std::string stop = "Title:";
};

// Text-generation adapter for DGA. Continuations exclude the prompt and
// respect the configured stop string.
class GeneratorClient {
 public:
  virtual ~GeneratorClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

// Canned-response generator for tests and offline runs. Responses are keyed
// by the target type parsed from the prompt's final Title line ("*" is the
// fallback key) and cycled deterministically.
class StubGeneratorClient final : public GeneratorClient {
 public:
  explicit StubGeneratorClient(
      std::map<std::string, std::vector<std::string>> responses,
      GeneratorControls controls = {});
  // JSON object mapping type name (or "*") to an array of continuations.
  static StubGeneratorClient from_file(const std::string& path,
                                       GeneratorControls controls = {});

  std::string complete(const std::string& prompt) override;

 private:
  std::map<std::string, std::vector<std::string>> responses_;
  std::map<std::string, std::size_t> cursor_;
  GeneratorControls controls_;
};

// Few-shot prompt: task line, two non-target exemplars as Title/Content
// blocks, then the target Title with an empty Content for the generator to
// complete. Blank lines separate every block.
std::string build_dga_prompt(const std::string& target_it,
                             const TweetRecord& exemplar1,
                             const TweetRecord& exemplar2,
                             const Taxonomy& taxonomy);

// Generates `count` fresh single-label examples for target_it, sampling a new
// exemplar pair per example. Empty continuations are retried up to 5 times,
// then that example is skipped with a warning; client errors raise after the
// same retry budget. Generated tweets take the target type's mean training
// priority.
std::vector<AugmentedExample> generate_dga(const std::string& target_it,
                                           const std::vector<TweetRecord>& train,
                                           GeneratorClient& client,
                                           const PriorityTable& priorities,
                                           int count, Rng& rng,
                                           const Taxonomy& taxonomy);

enum class BalanceMethod { Eda, Dga };

struct BalanceDeps {
  const SynonymLexicon* lexicon = nullptr;   // EDA
  EdaParams eda;                             // EDA
  GeneratorClient* client = nullptr;         // DGA
  const PriorityTable* priorities = nullptr; // DGA
};

// Tops up every type below target_min to exactly target_min examples
// (counting originals plus additions); returns only the additions. Types
// with no seed examples are skipped with a warning under EDA.
std::vector<AugmentedExample> balance(const std::vector<TweetRecord>& train,
                                      int target_min, BalanceMethod method,
                                      const BalanceDeps& deps, Rng& rng,
                                      const Taxonomy& taxonomy);

// Epoch-indexed confidence threshold, annealed linearly from tau_start at
// epoch 1 to tau_end at the final epoch.
struct NLASchedule {
  double tau_start = 0.9;
  double tau_end = 0.7;
  int epochs = 0;  // 0 = take the training epoch count

  void validate() const;
};

double nla_threshold(int epoch, const NLASchedule& schedule);

// Kills augmented examples whose labels the model rejects with confidence
// above the epoch threshold: dead iff 1 - p(y) > tau_e, where p(y) is the
// minimum predicted probability over the example's gold types. Original
// records never pass through here; removals are monotone.
// Returns the number of examples newly removed this epoch.
int nla_filter(std::vector<AugmentedExample>& augmented,
               const std::vector<std::vector<double>>& probabilities,
               int epoch, const NLASchedule& schedule,
               const Taxonomy& taxonomy);

}  // namespace crisis
