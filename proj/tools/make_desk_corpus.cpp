// Generates the desk-scale fixture corpus: four information types with
// distinctive marker vocabulary and type-determined priorities, sized so the
// full pipeline trains in seconds. Regenerating with the same seed
// reproduces the checked-in files byte for byte.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crisis/corpus.hpp"
#include "crisis/rng.hpp"

namespace {

struct TypeProfile {
  std::string name;
  std::vector<std::string> markers;
  double base_priority;
};

const std::vector<TypeProfile> kProfiles = {
    {"Request-SearchAndRescue",
     {"trapped", "rescue", "stranded", "roof", "sos", "helicopter"},
     0.9},
    {"Report-EmergingThreats",
     {"flood", "rising", "levee", "surge", "collapse", "spreading"},
     0.7},
    {"Report-ServiceAvailable",
     {"shelter", "open", "supplies", "charging", "volunteers", "cots"},
     0.35},
    {"Irrelevant",
     {"concert", "movie", "selfie", "playlist", "brunch", "meme"},
     0.1},
};

const std::vector<std::string> kFillers = {
    "the", "a", "near", "downtown", "tonight", "please",
    "now", "everyone", "just", "still", "here", "update"};

const std::vector<std::string> kEvents = {"2020-flood-alpha",
                                          "2021-quake-bravo",
                                          "2021-fire-charlie"};

std::string round3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

crisis::TweetRecord make_record(std::size_t serial, crisis::Rng& rng) {
  std::size_t primary = rng.uniform(kProfiles.size());
  std::set<std::string> its{kProfiles[primary].name};
  double priority = kProfiles[primary].base_priority;

  // Some substantive tweets carry a second type; Irrelevant stays singleton.
  if (kProfiles[primary].name != "Irrelevant" && rng.real01() < 0.15) {
    std::size_t secondary = rng.uniform(kProfiles.size() - 1);  // skip last
    if (secondary != primary) {
      its.insert(kProfiles[secondary].name);
      priority = std::max(priority, kProfiles[secondary].base_priority);
    }
  }

  std::vector<std::string> tokens;
  for (const auto& name : its) {
    for (const auto& profile : kProfiles) {
      if (profile.name != name) continue;
      std::size_t n_markers = 2 + rng.uniform(2);
      for (std::size_t i = 0; i < n_markers; ++i) {
        tokens.push_back(profile.markers[rng.uniform(profile.markers.size())]);
      }
    }
  }
  std::size_t n_fillers = 3 + rng.uniform(3);
  for (std::size_t i = 0; i < n_fillers; ++i) {
    tokens.push_back(kFillers[rng.uniform(kFillers.size())]);
  }
  rng.shuffle(tokens);

  std::string text;
  for (const auto& token : tokens) {
    text += (text.empty() ? "" : " ") + token;
  }

  priority += (rng.real01() - 0.5) * 0.1;
  priority = std::min(1.0, std::max(0.0, priority));

  crisis::TweetRecord record;
  char id[32];
  std::snprintf(id, sizeof id, "t%05zu", serial);
  record.tweet_id = id;
  record.event_id = kEvents[serial % kEvents.size()];
  record.text = text;
  record.gold_its = its;
  record.gold_priority = std::stod(round3(priority));
  return record;
}

// Canned generator continuations: mostly on-type marker text, plus a couple
// of off-type continuations per substantive type so annealing has something
// to remove.
void write_responses(const std::string& path, crisis::Rng& rng) {
  nlohmann::ordered_json doc;
  for (std::size_t p = 0; p < kProfiles.size(); ++p) {
    const TypeProfile& profile = kProfiles[p];
    std::vector<std::string> texts;
    for (int i = 0; i < 8; ++i) {
      std::string text;
      std::size_t n = 4 + rng.uniform(3);
      for (std::size_t t = 0; t < n; ++t) {
        const std::string& word =
            t % 2 == 0 ? profile.markers[rng.uniform(profile.markers.size())]
                       : kFillers[rng.uniform(kFillers.size())];
        text += (text.empty() ? "" : " ") + word;
      }
      texts.push_back(text);
    }
    if (profile.name != "Irrelevant") {
      // Off-type noise: text drawn from another type's vocabulary.
      const TypeProfile& other = kProfiles[(p + 1) % kProfiles.size()];
      for (int i = 0; i < 2; ++i) {
        std::string text;
        for (std::size_t t = 0; t < 5; ++t) {
          text += (text.empty() ? "" : " ") +
                  other.markers[rng.uniform(other.markers.size())];
        }
        texts.push_back(text);
      }
    }
    doc[profile.name] = texts;
  }
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the desk-scale fixture corpus"};
  std::string out_dir = "data/desk";
  std::size_t n_train = 200;
  std::size_t n_test = 60;
  std::uint64_t seed = 2021;
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--train", n_train, "Training tweets");
  app.add_option("--test", n_test, "Test tweets");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  crisis::Rng rng(seed);

  crisis::Rng train_rng = rng.substream("train");
  std::vector<crisis::TweetRecord> train;
  for (std::size_t i = 0; i < n_train; ++i) {
    train.push_back(make_record(i, train_rng));
  }
  crisis::save_corpus(out_dir + "/train.jsonl", train);

  crisis::Rng test_rng = rng.substream("test");
  std::vector<crisis::TweetRecord> test;
  for (std::size_t i = 0; i < n_test; ++i) {
    test.push_back(make_record(n_train + i, test_rng));
  }
  crisis::save_corpus(out_dir + "/test.jsonl", test);

  crisis::Rng resp_rng = rng.substream("responses");
  write_responses(out_dir + "/dga_responses.json", resp_rng);

  std::cout << "wrote " << train.size() << " train / " << test.size()
            << " test tweets under " << out_dir << "\n";
  return 0;
}
