#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "crisis/corpus.hpp"
#include "crisis/taxonomy.hpp"

namespace testsup {

inline std::string source_path(const std::string& rel) {
  return std::string(CRISIS_SOURCE_DIR) + "/" + rel;
}

// Self-deleting scratch directory, unique per instantiation.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    auto base = std::filesystem::temp_directory_path();
    path_ = base / ("crisis-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline crisis::Taxonomy tiny_taxonomy() {
  return crisis::Taxonomy({"Alpha", "Beta", "Gamma", "Irrelevant"},
                          {"Alpha", "Beta"}, "Irrelevant");
}

inline crisis::TweetRecord record(std::string id, std::string event,
                                  std::string text,
                                  std::set<std::string> its = {},
                                  double priority = -1.0) {
  crisis::TweetRecord r;
  r.tweet_id = std::move(id);
  r.event_id = std::move(event);
  r.text = std::move(text);
  if (!its.empty()) r.gold_its = std::move(its);
  if (priority >= 0.0) r.gold_priority = priority;
  return r;
}

}  // namespace testsup
