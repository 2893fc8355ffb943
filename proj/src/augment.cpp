#include "crisis/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "crisis/error.hpp"
#include "crisis/log.hpp"
#include "crisis/text.hpp"

namespace crisis {

namespace {

const std::vector<std::string> kNoSynonyms;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

SynonymLexicon::SynonymLexicon(
    std::map<std::string, std::vector<std::string>> entries) {
  for (auto& [word, syns] : entries) {
    std::string key = to_lower(word);
    std::vector<std::string> cleaned;
    for (const auto& syn : syns) {
      std::string lowered = to_lower(syn);
      if (lowered.empty() || lowered == key) continue;
      cleaned.push_back(std::move(lowered));
    }
    std::sort(cleaned.begin(), cleaned.end());
    cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
    if (!cleaned.empty()) entries_[key] = std::move(cleaned);
  }
}

SynonymLexicon SynonymLexicon::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open synonym lexicon '" + path + "'");
  std::map<std::string, std::vector<std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto tab = stripped.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError("synonym lexicon '" + path + "' line " +
                            std::to_string(line_no) +
                            ": expected word<TAB>synonyms");
    }
    std::string word = trim(stripped.substr(0, tab));
    std::vector<std::string> syns;
    std::stringstream rest(stripped.substr(tab + 1));
    std::string syn;
    while (std::getline(rest, syn, ',')) {
      std::string t = trim(syn);
      if (!t.empty()) syns.push_back(std::move(t));
    }
    if (word.empty()) {
      throw ValidationError("synonym lexicon '" + path + "' line " +
                            std::to_string(line_no) + ": empty word");
    }
    auto& slot = entries[word];
    slot.insert(slot.end(), syns.begin(), syns.end());
  }
  return SynonymLexicon(std::move(entries));
}

bool SynonymLexicon::has(std::string_view word) const {
  return entries_.find(to_lower(word)) != entries_.end();
}

const std::vector<std::string>& SynonymLexicon::synonyms(
    std::string_view word) const {
  auto it = entries_.find(to_lower(word));
  return it == entries_.end() ? kNoSynonyms : it->second;
}

namespace {

void synonym_replace(std::vector<std::string>& tokens, int n,
                     const SynonymLexicon& lexicon, Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (lexicon.has(tokens[i])) eligible.push_back(i);
  }
  if (eligible.empty()) return;
  rng.shuffle(eligible);
  std::size_t take = std::min<std::size_t>(n, eligible.size());
  for (std::size_t k = 0; k < take; ++k) {
    const auto& syns = lexicon.synonyms(tokens[eligible[k]]);
    tokens[eligible[k]] = syns[rng.uniform(syns.size())];
  }
}

void random_insert(std::vector<std::string>& tokens, int n,
                   const SynonymLexicon& lexicon, Rng& rng) {
  for (int k = 0; k < n; ++k) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (lexicon.has(tokens[i])) eligible.push_back(i);
    }
    if (eligible.empty()) return;
    const auto& syns = lexicon.synonyms(tokens[eligible[rng.uniform(eligible.size())]]);
    std::string syn = syns[rng.uniform(syns.size())];
    std::size_t pos = rng.uniform(tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                  std::move(syn));
  }
}

void random_swap(std::vector<std::string>& tokens, int n, Rng& rng) {
  if (tokens.size() < 2) return;
  for (int k = 0; k < n; ++k) {
    std::size_t i = rng.uniform(tokens.size());
    std::size_t j = rng.uniform(tokens.size() - 1);
    if (j >= i) ++j;
    std::swap(tokens[i], tokens[j]);
  }
}

void random_delete(std::vector<std::string>& tokens, int n, Rng& rng) {
  if (tokens.size() < 2) return;
  std::size_t take =
      std::min<std::size_t>(n, tokens.size() - 1);  // always keep one token
  std::vector<std::size_t> order(tokens.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<std::size_t> doomed(order.begin(),
                                  order.begin() + static_cast<std::ptrdiff_t>(take));
  std::sort(doomed.rbegin(), doomed.rend());
  for (std::size_t pos : doomed) {
    tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(pos));
  }
}

}  // namespace

AugmentedExample eda_augment(const TweetRecord& record, std::uint64_t seed,
                             const EdaParams& params,
                             const SynonymLexicon& lexicon) {
  if (params.alpha <= 0.0 || params.alpha > 1.0) {
    throw ValidationError("EDA alpha must be in (0, 1]");
  }
  std::vector<std::string> tokens = split_whitespace(record.text);
  if (tokens.empty()) {
    throw ValidationError("EDA requires at least one token (tweet '" +
                          record.tweet_id + "')");
  }
  int n = std::max<int>(
      1, static_cast<int>(std::llround(params.alpha *
                                       static_cast<double>(tokens.size()))));

  Rng rng(seed);
  switch (std::size_t op = rng.uniform(4); op) {
    case 0:
      synonym_replace(tokens, n, lexicon, rng);
      break;
    case 1:
      random_insert(tokens, n, lexicon, rng);
      break;
    case 2:
      random_swap(tokens, n, rng);
      break;
    default:
      if (tokens.size() < 2) {
        synonym_replace(tokens, n, lexicon, rng);  // deletion would empty it
      } else {
        random_delete(tokens, n, rng);
      }
      break;
  }

  AugmentedExample out;
  out.record = record;
  out.record.tweet_id = record.tweet_id + "#eda" + std::to_string(seed);
  out.record.text = join_tokens(tokens);
  out.origin = AugmentOrigin::Eda;
  out.source_tweet_id = record.tweet_id;
  return out;
}

StubGeneratorClient::StubGeneratorClient(
    std::map<std::string, std::vector<std::string>> responses,
    GeneratorControls controls)
    : responses_(std::move(responses)), controls_(std::move(controls)) {}

StubGeneratorClient StubGeneratorClient::from_file(const std::string& path,
                                                   GeneratorControls controls) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open generator responses '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("generator responses '" + path +
                          "': " + std::string(e.what()));
  }
  if (!doc.is_object()) {
    throw ValidationError("generator responses '" + path +
                          "': expected a JSON object");
  }
  std::map<std::string, std::vector<std::string>> responses;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array()) {
      throw ValidationError("generator responses '" + path + "': key '" + key +
                            "' must map to an array of strings");
    }
    for (const auto& item : value) {
      if (!item.is_string()) {
        throw ValidationError("generator responses '" + path + "': key '" +
                              key + "' must map to an array of strings");
      }
      responses[key].push_back(item.get<std::string>());
    }
  }
  return StubGeneratorClient(std::move(responses), std::move(controls));
}

std::string StubGeneratorClient::complete(const std::string& prompt) {
  // The target type is the Title of the trailing, unfinished block.
  std::string target;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = prompt.find("Title: ", pos);
    if (hit == std::string::npos) break;
    std::size_t eol = prompt.find('\n', hit);
    target = prompt.substr(hit + 7, eol == std::string::npos
                                        ? std::string::npos
                                        : eol - (hit + 7));
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }

  auto it = responses_.find(target);
  if (it == responses_.end()) it = responses_.find("*");
  if (it == responses_.end() || it->second.empty()) return "";
  std::size_t& cursor = cursor_[it->first];
  std::string text = it->second[cursor % it->second.size()];
  ++cursor;

  if (auto stop = text.find(controls_.stop); stop != std::string::npos) {
    text.resize(stop);
  }
  std::vector<std::string> tokens = split_whitespace(text);
  if (static_cast<int>(tokens.size()) > controls_.max_tokens) {
    tokens.resize(static_cast<std::size_t>(controls_.max_tokens));
    text = join_tokens(tokens);
  }
  return text;
}

namespace {

// First gold type in taxonomy order, for stable prompt rendering.
std::string display_type(const TweetRecord& record, const Taxonomy& taxonomy) {
  for (const auto& name : taxonomy.types()) {
    if (record.gold_its->count(name) > 0) return name;
  }
  return *record.gold_its->begin();
}

void check_exemplar(const TweetRecord& exemplar, const std::string& target_it) {
  if (!exemplar.gold_its.has_value() || exemplar.gold_its->empty()) {
    throw ValidationError("exemplar tweet '" + exemplar.tweet_id +
                          "' has no gold information types");
  }
  if (exemplar.gold_its->count(target_it) > 0) {
    throw ValidationError("exemplar tweet '" + exemplar.tweet_id +
                          "' carries the target type '" + target_it + "'");
  }
  if (trim(exemplar.text).empty()) {
    throw ValidationError("exemplar tweet '" + exemplar.tweet_id +
                          "' has empty text");
  }
}

}  // namespace

std::string build_dga_prompt(const std::string& target_it,
                             const TweetRecord& exemplar1,
                             const TweetRecord& exemplar2,
                             const Taxonomy& taxonomy) {
  taxonomy.index_of(target_it);
  check_exemplar(exemplar1, target_it);
  check_exemplar(exemplar2, target_it);

  std::string prompt = "Tweet for help in disaster\n";
  for (const TweetRecord* ex : {&exemplar1, &exemplar2}) {
    prompt += "\nTitle: " + display_type(*ex, taxonomy) + "\n";
    prompt += "\nContent: " + ex->text + "\n";
  }
  prompt += "\nTitle: " + target_it + "\n";
  prompt += "\nContent:";
  return prompt;
}

namespace {

std::string truncate_continuation(std::string text, const std::string& stop) {
  if (auto hit = text.find(stop); hit != std::string::npos) text.resize(hit);
  if (auto blank = text.find("\n\n"); blank != std::string::npos) {
    text.resize(blank);
  }
  return trim(text);
}

}  // namespace

std::vector<AugmentedExample> generate_dga(const std::string& target_it,
                                           const std::vector<TweetRecord>& train,
                                           GeneratorClient& client,
                                           const PriorityTable& priorities,
                                           int count, Rng& rng,
                                           const Taxonomy& taxonomy) {
  taxonomy.index_of(target_it);
  if (count < 1) throw ValidationError("DGA count must be >= 1");
  auto pri = priorities.values.find(target_it);
  if (pri == priorities.values.end()) {
    throw ValidationError("priority table has no entry for type '" +
                          target_it + "'");
  }

  std::vector<const TweetRecord*> pool;
  for (const auto& record : train) {
    if (record.gold_its.has_value() && !record.gold_its->empty() &&
        record.gold_its->count(target_it) == 0 && !trim(record.text).empty()) {
      pool.push_back(&record);
    }
  }
  if (pool.size() < 2) {
    throw ValidationError("DGA for type '" + target_it +
                          "' needs at least 2 non-target exemplars, found " +
                          std::to_string(pool.size()));
  }

  constexpr int kAttempts = 5;
  std::vector<AugmentedExample> out;
  for (int k = 0; k < count; ++k) {
    std::string text;
    std::string prompt;
    for (int attempt = 1; attempt <= kAttempts; ++attempt) {
      std::size_t i = rng.uniform(pool.size());
      std::size_t j = rng.uniform(pool.size() - 1);
      if (j >= i) ++j;
      prompt = build_dga_prompt(target_it, *pool[i], *pool[j], taxonomy);
      try {
        text = truncate_continuation(client.complete(prompt), "Title:");
      } catch (const std::exception& e) {
        if (attempt == kAttempts) {
          throw RuntimeError("generation for type '" + target_it +
                             "' failed after " + std::to_string(kAttempts) +
                             " attempts: " + e.what());
        }
        continue;
      }
      if (!text.empty()) break;
    }
    if (text.empty()) {
      logging::warn("skipping one generated example for type '" + target_it +
                    "': empty continuations after " +
                    std::to_string(kAttempts) + " attempts");
      continue;
    }

    AugmentedExample ex;
    ex.record.tweet_id = "dga:" + target_it + ":" + std::to_string(k);
    ex.record.event_id = "synthetic";
    ex.record.text = text;
    ex.record.gold_its = std::set<std::string>{target_it};
    ex.record.gold_priority = pri->second;
    ex.origin = AugmentOrigin::Dga;
    ex.prompt = prompt;
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<AugmentedExample> balance(const std::vector<TweetRecord>& train,
                                      int target_min, BalanceMethod method,
                                      const BalanceDeps& deps, Rng& rng,
                                      const Taxonomy& taxonomy) {
  if (target_min < 1) throw ValidationError("balance target must be >= 1");
  if (method == BalanceMethod::Eda && deps.lexicon == nullptr) {
    throw ValidationError("EDA balancing needs a synonym lexicon");
  }
  if (method == BalanceMethod::Dga &&
      (deps.client == nullptr || deps.priorities == nullptr)) {
    throw ValidationError("DGA balancing needs a generator and priority table");
  }

  std::vector<int> counts(taxonomy.size(), 0);
  std::vector<std::vector<const TweetRecord*>> pools(taxonomy.size());
  for (const auto& record : train) {
    if (!record.gold_its.has_value()) continue;
    for (const auto& name : *record.gold_its) {
      std::size_t idx = taxonomy.index_of(name);
      ++counts[idx];
      pools[idx].push_back(&record);
    }
  }

  std::vector<AugmentedExample> additions;
  auto count_labels = [&](const AugmentedExample& ex) {
    for (const auto& name : *ex.record.gold_its) {
      ++counts[taxonomy.index_of(name)];
    }
  };

  std::size_t serial = 0;
  for (std::size_t k = 0; k < taxonomy.size(); ++k) {
    const std::string& type = taxonomy.types()[k];
    if (counts[k] >= target_min) continue;
    if (method == BalanceMethod::Eda) {
      if (pools[k].empty()) {
        logging::warn("cannot balance type '" + type +
                      "': no seed examples to perturb");
        continue;
      }
      while (counts[k] < target_min) {
        const TweetRecord& src = *pools[k][rng.uniform(pools[k].size())];
        AugmentedExample ex = eda_augment(src, rng.u64(), deps.eda, *deps.lexicon);
        ex.record.tweet_id = "aug-eda-" + std::to_string(serial++);
        count_labels(ex);
        additions.push_back(std::move(ex));
      }
    } else {
      int needed = target_min - counts[k];
      std::vector<AugmentedExample> generated = generate_dga(
          type, train, *deps.client, *deps.priorities, needed, rng, taxonomy);
      for (auto& ex : generated) {
        ex.record.tweet_id = "aug-dga-" + std::to_string(serial++);
        count_labels(ex);
        additions.push_back(std::move(ex));
      }
      if (counts[k] < target_min) {
        logging::warn("balance for type '" + type + "' fell short: " +
                      std::to_string(counts[k]) + " of " +
                      std::to_string(target_min));
      }
    }
  }
  return additions;
}

void NLASchedule::validate() const {
  if (!(tau_end > 0.5) || !(tau_end <= tau_start) || !(tau_start < 1.0)) {
    throw ValidationError("NLA thresholds must satisfy 0.5 < tau_end <= "
                          "tau_start < 1");
  }
  if (epochs < 0) throw ValidationError("NLA epochs must be >= 0");
}

double nla_threshold(int epoch, const NLASchedule& schedule) {
  schedule.validate();
  if (epoch < 1 || epoch > std::max(schedule.epochs, 1)) {
    throw ValidationError("NLA epoch " + std::to_string(epoch) +
                          " out of range [1, " +
                          std::to_string(std::max(schedule.epochs, 1)) + "]");
  }
  double span = schedule.tau_start - schedule.tau_end;
  return schedule.tau_start -
         span * static_cast<double>(epoch - 1) /
             static_cast<double>(std::max(1, schedule.epochs - 1));
}

int nla_filter(std::vector<AugmentedExample>& augmented,
               const std::vector<std::vector<double>>& probabilities,
               int epoch, const NLASchedule& schedule,
               const Taxonomy& taxonomy) {
  if (augmented.size() != probabilities.size()) {
    throw ValidationError("NLA probability rows (" +
                          std::to_string(probabilities.size()) +
                          ") do not match augmented examples (" +
                          std::to_string(augmented.size()) + ")");
  }
  double tau = nla_threshold(epoch, schedule);
  int removed = 0;
  for (std::size_t i = 0; i < augmented.size(); ++i) {
    auto& ex = augmented[i];
    if (!ex.alive) continue;
    if (probabilities[i].size() != taxonomy.size()) {
      throw ValidationError("NLA probability row " + std::to_string(i) +
                            " has " + std::to_string(probabilities[i].size()) +
                            " entries, expected " +
                            std::to_string(taxonomy.size()));
    }
    if (!ex.record.gold_its.has_value() || ex.record.gold_its->empty()) {
      throw ValidationError("augmented tweet '" + ex.record.tweet_id +
                            "' has no gold information types");
    }
    double p = 1.0;
    for (const auto& name : *ex.record.gold_its) {
      p = std::min(p, probabilities[i][taxonomy.index_of(name)]);
    }
    if (1.0 - p > tau) {
      ex.alive = false;
      ex.epoch_removed = epoch;
      ++removed;
    }
  }
  return removed;
}

}  // namespace crisis
